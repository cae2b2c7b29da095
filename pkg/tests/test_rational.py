import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from garsia.rational import (
    DomainError,
    RationalInterval,
    ceil_dyadic,
    floor_dyadic,
    format_rational,
    iroot,
    kth_root_bounds,
    log_enclosure,
    parse_rational,
)

# 50-digit reference values (mpmath, 60 digits working precision)
LN2 = "0.69314718055994530941723212145817656807550013436026"
LN_1526 = "0.42264993286226526284592695305746532596962928155902"


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def test_log_of_one_is_tight():
    e = log_enclosure(RationalInterval(1), 32)
    assert e.lo <= 0 <= e.hi
    assert e.width <= Fraction(1, 1 << 32)


def test_log_of_two_against_reference():
    e = log_enclosure(RationalInterval(2), 32)
    ref = Fraction(LN2)
    assert e.lo <= ref <= e.hi
    assert e.width <= Fraction(1, 1 << 32)


def test_log_of_1526_against_reference():
    e = log_enclosure(RationalInterval(Fraction("1.526")), 64)
    ref = Fraction(LN_1526)
    assert e.lo <= ref <= e.hi
    # log 2 / (2 log 1.526) > 0.82 follows from the enclosures alone
    l2 = log_enclosure(RationalInterval(2), 64)
    assert l2.lo / (2 * e.hi) > Fraction(82, 100)


def test_log_enclosure_contains_truth_at_1000_rationals():
    mpmath.mp.dps = 60
    rng = random.Random(20240611)
    for _ in range(1000):
        q = rng.randint(1, 10**6)
        x = Fraction(rng.randint(q + 1, 4 * q - 1), q)
        e = log_enclosure(RationalInterval(x), 64)
        truth = mpmath.log(_mp(x))
        assert _mp(e.lo) <= truth <= _mp(e.hi)
        assert e.width <= Fraction(1, 1 << 64)


def test_log_enclosure_of_interval_covers_range():
    e = log_enclosure(RationalInterval(Fraction(3, 2), Fraction(5, 2)), 40)
    mpmath.mp.dps = 40
    assert _mp(e.lo) <= mpmath.log(1.5) and mpmath.log(2.5) <= _mp(e.hi)


@pytest.mark.parametrize("bad", [0, Fraction(-1, 3)])
def test_log_domain_error(bad):
    with pytest.raises(DomainError):
        log_enclosure(RationalInterval(bad, 1), 32)


def test_log_precision_floor():
    with pytest.raises(DomainError):
        log_enclosure(RationalInterval(2), 4)


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000))
def test_log_enclosure_property(x):
    mpmath.mp.dps = 50
    e = log_enclosure(RationalInterval(x), 48)
    assert _mp(e.lo) <= mpmath.log(_mp(x)) <= _mp(e.hi)


def test_parse_and_format():
    assert parse_rational("19/10") == Fraction(19, 10)
    assert parse_rational("1.526") == Fraction(763, 500)
    assert parse_rational(" -3 ") == -3
    with pytest.raises(ValueError):
        parse_rational("1.5", allow_decimal=False)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("abc")
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(4)) == "4"


def test_interval_arithmetic():
    a = RationalInterval(1, 2)
    b = RationalInterval(-1, 3)
    assert a + b == RationalInterval(0, 5)
    assert a - b == RationalInterval(-2, 3)
    assert a * b == RationalInterval(-2, 6)
    assert a / RationalInterval(2, 4) == RationalInterval(Fraction(1, 4), 1)
    with pytest.raises(ZeroDivisionError):
        a / b
    with pytest.raises(ValueError):
        RationalInterval(2, 1)


@given(st.integers(min_value=0, max_value=10**40), st.integers(min_value=1, max_value=7))
def test_iroot(n, k):
    r = iroot(n, k)
    assert r**k <= n < (r + 1) ** k


@given(st.fractions(min_value=0, max_value=100), st.integers(min_value=1, max_value=5))
def test_kth_root_bounds(x, k):
    lo, hi = kth_root_bounds(x, k, 40)
    assert lo**k <= x <= hi**k
    assert hi - lo <= Fraction(1, 1 << 40)


@given(st.fractions(min_value=-10, max_value=10), st.integers(min_value=0, max_value=30))
def test_dyadic_rounding(x, bits):
    f, c = floor_dyadic(x, bits), ceil_dyadic(x, bits)
    assert f <= x <= c
    assert c - f <= Fraction(1, 1 << bits)
    assert (f * (1 << bits)).denominator == 1
