from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from garsia.expansions import (
    PrefixWord,
    enumerate_prefixes,
    prefix_bounds_at,
    prefix_bounds_over_window,
    tail,
)
from garsia.rational import DomainError, RationalInterval

W = RationalInterval(Fraction("1.8391"), Fraction("1.8395"))
HEAD_ONES = PrefixWord.parse("11111000000000")
HEAD_ZEROS_REST_ONES = PrefixWord.parse("00000111111111")

betas = st.fractions(min_value=Fraction(101, 100), max_value=Fraction(199, 100))


def test_zero_word():
    for n in (1, 5, 12):
        lo, hi = prefix_bounds_at(PrefixWord(n, 0), Fraction(3, 2))
        assert lo == 0 and hi == tail(n, Fraction(3, 2))


def test_geometric_series_example():
    lo, hi = prefix_bounds_at(PrefixWord.parse("10"), Fraction(3, 2))
    assert lo == Fraction(2, 3)
    # U = L + sum_{i>=3} (2/3)**i
    assert hi == Fraction(2, 3) + Fraction(8, 27) * 3
    assert hi == Fraction(14, 9)


def test_domain_error():
    with pytest.raises(DomainError):
        prefix_bounds_at(PrefixWord.parse("1"), 1)
    with pytest.raises(DomainError):
        prefix_bounds_over_window(PrefixWord.parse("1"), RationalInterval(1, 2))


def test_pruning_constants_at_window_ends():
    # 1.135108333: the all-zero completion of 11111, at the left end of the window
    low_left, _ = prefix_bounds_at(HEAD_ONES, W.lo)
    assert abs(low_left - Fraction("1.135108333")) < Fraction(1, 10**9)
    # 0.05655621525: the all-one completion of 00000, upper end, at the right end
    _, up_right = prefix_bounds_at(HEAD_ZEROS_REST_ONES, W.hi)
    assert abs(up_right - Fraction("0.05655621525")) < Fraction(1, 10**11)


def test_pruning_separation_over_whole_window():
    low, _ = prefix_bounds_over_window(HEAD_ONES, W)
    _, up = prefix_bounds_over_window(HEAD_ZEROS_REST_ONES, W)
    # rigorous window-wide enclosures: each constant holds at its own window end,
    # and the two families stay far apart everywhere on the window
    assert low.lo > Fraction("1.1346")
    assert up.hi < Fraction("0.05665")
    assert low.lo > up.hi
    for v in range(1 << 9):
        w = PrefixWord(14, (0b11111 << 9) | v)
        assert prefix_bounds_over_window(w, W)[0].lo >= low.lo
        z = PrefixWord(14, v)
        assert prefix_bounds_over_window(z, W)[1].hi <= up.hi


def test_zero_word_range_over_window():
    low, _ = prefix_bounds_over_window(PrefixWord(7, 0), RationalInterval(Fraction(3, 2), Fraction(7, 4)))
    assert low.lo == low.hi == 0


def test_enumerate_all_lexicographic():
    words = list(enumerate_prefixes(3, RationalInterval(Fraction(3, 2), Fraction(7, 4))))
    assert [str(w) for w in words] == [format(v, "03b") for v in range(8)]


def test_enumerate_filter_excludes_head_ones():
    # 1.1351 is only a bound at the left window end; over the whole window the
    # least value of a word starting 11111 is about 1.13463
    flt = RationalInterval(0, Fraction("1.1346"))
    words = list(enumerate_prefixes(14, W, flt))
    assert words
    assert not any(w.value >> 9 == 0b11111 for w in words)


def test_enumerate_filter_keeps_word_meeting_threshold_inside_window():
    flt = RationalInterval(0, Fraction("1.1351"))
    kept = {w.value for w in enumerate_prefixes(14, W, flt)}
    assert HEAD_ONES.value in kept
    assert prefix_bounds_at(HEAD_ONES, W.hi)[0] < Fraction("1.1351")


def test_enumerate_vacuous_filter():
    w = RationalInterval(Fraction(3, 2), Fraction(7, 4))
    full = RationalInterval(0, 1 / (w.lo - 1))
    assert len(list(enumerate_prefixes(6, w, full))) == 64


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10), st.data(), betas)
def test_intervals_union_is_full_range(n, data, beta):
    # the 2**n intervals cover [0, 1/(beta-1)]: each gap between sorted starts is at most the width
    ivs = sorted(prefix_bounds_at(PrefixWord(n, v), beta) for v in range(1 << n))
    assert ivs[0][0] == 0
    assert max(hi for _, hi in ivs) == 1 / (beta - 1)
    reach = ivs[0][1]
    for lo, hi in ivs[1:]:
        assert lo <= reach
        reach = max(reach, hi)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12), st.data(), betas, betas)
def test_bounds_decrease_in_beta(n, data, b1, b2):
    v = data.draw(st.integers(0, (1 << n) - 1))
    w = PrefixWord(n, v)
    if b1 > b2:
        b1, b2 = b2, b1
    l1, u1 = prefix_bounds_at(w, b1)
    l2, u2 = prefix_bounds_at(w, b2)
    assert l2 <= l1 and u2 <= u1


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10), st.data(), betas)
def test_children_nest_in_parent(n, data, beta):
    v = data.draw(st.integers(0, (1 << n) - 1))
    lo, hi = prefix_bounds_at(PrefixWord(n, v), beta)
    for child in (PrefixWord(n + 1, 2 * v), PrefixWord(n + 1, 2 * v + 1)):
        cl, ch = prefix_bounds_at(child, beta)
        assert lo <= cl and ch <= hi


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), betas, betas)
def test_enumeration_filter_is_sound(n, b1, b2):
    lo, hi = sorted((b1, b2))
    if lo == hi:
        return
    window = RationalInterval(lo, hi)
    flt = RationalInterval(Fraction(1, 3), Fraction(1, 2))
    kept = {w.value for w in enumerate_prefixes(n, window, flt)}
    for v in range(1 << n):
        if v in kept:
            continue
        # a skipped word must miss the filter at both window ends and in between
        for beta in (lo, (lo + hi) / 2, hi):
            a, b = prefix_bounds_at(PrefixWord(n, v), beta)
            assert b < flt.lo or a > flt.hi
