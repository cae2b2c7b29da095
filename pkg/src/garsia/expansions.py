"""0-1 prefix words and the value intervals [(a)_L, (a)_U] they cut out."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .poly import IntPolynomial
from .rational import DomainError, RationalInterval

MAX_WORD_LENGTH = 64


@dataclass(frozen=True, order=True)
class PrefixWord:
    """Digits a_1 ... a_n packed into an integer, a_1 being the top bit.

    Integer order of ``value`` is lexicographic order of the digits.
    """

    n: int
    value: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_WORD_LENGTH:
            raise ValueError(f"word length {self.n} outside 1..{MAX_WORD_LENGTH}")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def from_bits(cls, bits) -> PrefixWord:
        bits = [int(b) for b in bits]
        if any(b not in (0, 1) for b in bits):
            raise ValueError("digits must be 0 or 1")
        v = 0
        for b in bits:
            v = (v << 1) | b
        return cls(len(bits), v)

    @classmethod
    def parse(cls, text: str) -> PrefixWord:
        return cls.from_bits(c for c in text.strip() if c in "01")

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.n - 1 - i)) & 1 for i in range(self.n))

    def digit(self, i: int) -> int:
        """a_i for 1 <= i <= n."""
        return (self.value >> (self.n - i)) & 1

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def lower_poly(self) -> IntPolynomial:
        """sum a_i y**i, the lower bound as a polynomial in y = 1/beta."""
        return IntPolynomial((0,) + self.bits)

    def beta_poly(self) -> IntPolynomial:
        """sum a_i beta**(n-i) = beta**n * (a)_L, an integer polynomial in beta."""
        return IntPolynomial(reversed(self.bits))


def tail(n: int, beta: Fraction) -> Fraction:
    """(a)_U - (a)_L = beta**-n / (beta - 1), the same for every word of length n."""
    return 1 / (beta ** n * (beta - 1))


def _check_beta(beta: Fraction) -> Fraction:
    beta = Fraction(beta)
    if beta <= 1:
        raise DomainError(f"beta must exceed 1, got {beta}")
    return beta


def prefix_bounds_at(word: PrefixWord, beta) -> tuple[Fraction, Fraction]:
    beta = _check_beta(beta)
    y = 1 / beta
    low = Fraction(0)
    yk = Fraction(1)
    for a in word.bits:
        yk *= y
        if a:
            low += yk
    return low, low + tail(word.n, beta)


def prefix_bounds_over_window(word: PrefixWord, window: RationalInterval) -> tuple[RationalInterval, RationalInterval]:
    """Ranges of (a)_L and (a)_U over beta in ``window``.

    Both are strictly decreasing in beta, so the ranges come from the ends.
    """
    if window.lo <= 1:
        raise DomainError(f"window must lie above 1, got {window}")
    l_hi, u_hi = prefix_bounds_at(word, window.lo)
    l_lo, u_lo = prefix_bounds_at(word, window.hi)
    return RationalInterval(l_lo, l_hi), RationalInterval(u_lo, u_hi)


def enumerate_prefixes(
    n: int,
    window: RationalInterval,
    value_filter: Optional[RationalInterval] = None,
) -> Iterator[PrefixWord]:
    """Words of length n whose interval can meet ``value_filter`` for some beta in window.

    A subtree with prefix a_1..a_j spans at most
    ``[(a_1..a_j 0..0)_L(hi), (a_1..a_j)_U(lo)]``; subtrees whose span misses
    the filter are skipped. Output is lexicographic.
    """
    if not 1 <= n <= MAX_WORD_LENGTH:
        raise ValueError(f"n must be in 1..{MAX_WORD_LENGTH}")
    if value_filter is None:
        for v in range(1 << n):
            yield PrefixWord(n, v)
        return
    if window.lo <= 1:
        raise DomainError(f"window must lie above 1, got {window}")
    lo_b, hi_b = window.lo, window.hi
    # powers of 1/beta at the two window ends
    y_small = [Fraction(1)]  # (1/hi)^i, gives the least values
    y_large = [Fraction(1)]  # (1/lo)^i, gives the greatest values
    for _ in range(n):
        y_small.append(y_small[-1] / hi_b)
        y_large.append(y_large[-1] / lo_b)
    # sum_{i>j} beta^-i at the low end = beta^-j / (beta - 1)
    rest_large = [y_large[j] / (lo_b - 1) for j in range(n + 1)]
    f_lo, f_hi = value_filter.lo, value_filter.hi

    def walk(j: int, value: int, low: Fraction, high_base: Fraction):
        # low: partial L at beta = hi; high_base: partial L at beta = lo
        if low > f_hi or high_base + rest_large[j] < f_lo:
            return
        if j == n:
            yield PrefixWord(n, value)
            return
        yield from walk(j + 1, value << 1, low, high_base)
        yield from walk(j + 1, (value << 1) | 1, low + y_small[j + 1], high_base + y_large[j + 1])

    yield from walk(0, 0, Fraction(0), Fraction(0))


def word_keys(n: int, num: int, den: int) -> list[int]:
    """``p**n * (a)_L`` for every word at beta = p/q, as integers, indexed by word value.

    With ``beta = num/den`` each term a_i beta**-i contributes
    ``a_i den**i num**(n-i)``.
    """
    keys = [0]
    for i in range(1, n + 1):
        c = den ** i * num ** (n - i)
        keys = [k + b for k in keys for b in (0, c)]
    return keys


def beta_poly_values(n: int, x_num: int, x_den: int) -> list[int]:
    """``x_den**(n-1) * P_a(x)`` with ``P_a(x) = sum a_i x**(n-i)``, per word value."""
    keys = [0]
    for i in range(1, n + 1):
        c = x_num ** (n - i) * x_den ** (i - 1)
        keys = [k + b for k in keys for b in (0, c)]
    return keys
