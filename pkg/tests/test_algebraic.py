from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from garsia.algebraic import AlgebraicReal, Extent, compare, sign_at, sturm_isolate
from garsia.poly import IntPolynomial, count_roots_closed, count_roots_open, sturm_sequence
from garsia.rational import RationalInterval

from conftest import root_in

X = IntPolynomial.x()


def grid_sign_changes(p: IntPolynomial, lo, hi, step):
    xs = []
    x = Fraction(lo)
    while x <= hi:
        xs.append(x)
        x += step
    roots = []
    for a, b in zip(xs, xs[1:]):
        if p.sign_at(a) * p.sign_at(b) < 0:
            roots.append((a, b))
    return roots


def test_golden_isolated():
    p = IntPolynomial.from_high([1, -1, -1])
    (r,) = sturm_isolate(p, RationalInterval(1, 2))
    lo, hi = r.refine(Fraction(1, 100))
    assert p.sign_at(Fraction(16, 10)) < 0 < p.sign_at(Fraction(17, 10))
    assert Fraction(16, 10) <= lo <= hi <= Fraction(17, 10)


def test_no_root_in_window():
    assert sturm_isolate(IntPolynomial.from_high([1, -3]), RationalInterval(Fraction(763, 500), 2)) == []


def test_product_roots_ascending_against_grid():
    p = IntPolynomial.from_high([1, -1, -1]) * IntPolynomial.from_high([1, 0, -2])
    roots = sturm_isolate(p, RationalInterval(1, 2))
    grid = grid_sign_changes(p, 1, 2, Fraction(1, 10_000))
    assert len(roots) == len(grid) == 2
    for r, (a, b) in zip(roots, grid):
        lo, hi = r.refine(Fraction(1, 10**6))
        assert a <= lo and hi <= b
    assert compare(roots[0], roots[1]) < 0


def test_sign_at_examples(golden, sqrt2):
    assert sign_at(IntPolynomial.from_high([1, -1, -1]), golden) == 0
    assert sign_at(IntPolynomial.from_high([1, -1]), golden) == 1
    assert sign_at(IntPolynomial.from_high([2, 0, -5]), sqrt2) == -1


def test_compare_examples(golden, sqrt2):
    assert compare(sqrt2, golden) < 0
    other = root_in([1, -1, -1], Fraction(3, 2), 2)
    assert compare(golden, other) == 0
    assert compare(AlgebraicReal.from_rational(Fraction(3, 2)), sqrt2) > 0


def test_compare_different_polys_same_number(golden):
    # x^4 - 3x^2 + 1 = (x^2 - x - 1)(x^2 + x - 1) shares the golden ratio
    q = root_in([1, 0, -3, 0, 1], Fraction(3, 2), 2)
    assert compare(golden, q) == 0


def test_kth_root_and_power(golden, sqrt2):
    two = AlgebraicReal.from_rational(2)
    assert compare(two.kth_root(2), sqrt2) == 0
    assert compare(sqrt2.power(2), two) == 0
    g2 = golden.power(2)
    assert sign_at(IntPolynomial.from_high([1, -3, 1]), g2) == 0
    assert compare(g2.kth_root(2), golden) == 0


def test_json_round_trip(golden):
    back = AlgebraicReal.from_json(golden.to_json())
    assert compare(back, golden) == 0
    e = Extent(AlgebraicReal.from_rational(Fraction(3, 2)), golden, False, True)
    e2 = Extent.from_json(e.to_json())
    assert e2.hi_closed and not e2.lo_closed and compare(e2.hi, golden) == 0


def test_create_rejects_bad_isolation():
    with pytest.raises(ValueError):
        AlgebraicReal.create(IntPolynomial.from_high([1, 0, -2]), -2, 2)


def test_dyadic_bounds_are_canonical():
    a = root_in([1, -1, -1])
    b = root_in([1, -1, -1], Fraction(8, 5), Fraction(13, 8))
    b.refine(Fraction(1, 1 << 30))
    for bits in (4, 17, 40):
        assert a.upper_dyadic(bits) == b.upper_dyadic(bits)
        assert a.lower_dyadic(bits) == b.lower_dyadic(bits)
        assert a.lower_dyadic(bits) < a.upper_dyadic(bits)


def test_extent_membership(golden, sqrt2):
    e = Extent(sqrt2, golden, False, True)
    assert e.contains_point(golden)
    assert not e.contains_point(sqrt2)
    assert e.contains_point(AlgebraicReal.from_rational(Fraction(3, 2)))
    assert not e.strictly_inside(golden)


small_coeffs = st.lists(st.integers(-4, 4), min_size=2, max_size=6).filter(lambda c: c[0] != 0)


@settings(max_examples=100, deadline=None)
@given(small_coeffs)
def test_sturm_count_matches_isolation(coeffs):
    p = IntPolynomial.from_high(coeffs)
    sq = p.squarefree()
    if sq.degree < 1:
        return
    roots = sturm_isolate(p, RationalInterval(-3, 3))
    assert len(roots) == count_roots_open(sq, -3, 3)
    for r in roots:
        assert sign_at(p, r) == 0
    for a, b in zip(roots, roots[1:]):
        assert compare(a, b) < 0


@settings(max_examples=100, deadline=None)
@given(small_coeffs, st.fractions(min_value=-3, max_value=3))
def test_sign_at_rational_agrees(coeffs, q):
    p = IntPolynomial.from_high(coeffs)
    assert sign_at(p, AlgebraicReal.from_rational(q)) == p.sign_at(q)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.integers(2, 4))
def test_compare_roots_of_integers(a, k):
    # a**(1/k) versus the rational bracket from integer arithmetic
    r = AlgebraicReal.from_rational(a).kth_root(k)
    assert sign_at(X ** k - a, r) == 0
    assert compare(r, AlgebraicReal.from_rational(1)) > 0
