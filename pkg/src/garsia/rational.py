"""Exact rational intervals and certified logarithm enclosures."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

Rational = Fraction


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains(self, other: RationalInterval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: RationalInterval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        other = _as_interval(other)
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other):
        other = _as_interval(other)
        return RationalInterval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __mul__(self, other):
        other = _as_interval(other)
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RationalInterval(min(p), max(p))

    def __truediv__(self, other):
        other = _as_interval(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        return self * RationalInterval(1 / other.hi, 1 / other.lo)

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def _as_interval(v) -> RationalInterval:
    return v if isinstance(v, RationalInterval) else RationalInterval(v)


_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_FRACTION = re.compile(r"^[+-]?\d+\s*/\s*\d+$")


def parse_rational(text: str, allow_decimal: bool = True) -> Fraction:
    """Parse ``p/q``, an integer, or (optionally) an exact decimal string."""
    s = text.strip()
    if _FRACTION.match(s):
        num, den = s.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    if re.match(r"^[+-]?\d+$", s):
        return Fraction(int(s))
    if _DECIMAL.match(s):
        if not allow_decimal:
            raise ValueError(f"decimal input {text!r} not accepted here; use p/q")
        return Fraction(s)
    raise ValueError(f"cannot parse {text!r} as a rational number")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def floor_dyadic(x: Fraction, bits: int) -> Fraction:
    x = Fraction(x)
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    x = Fraction(x)
    return Fraction(-((-x.numerator << bits) // x.denominator), 1 << bits)


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if n < 0:
        raise DomainError("negative radicand")
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def kth_root_bounds(x: Fraction, k: int, bits: int) -> tuple[Fraction, Fraction]:
    """Dyadic ``lo <= x**(1/k) <= hi`` with ``hi - lo <= 2**-bits``."""
    x = Fraction(x)
    if x < 0:
        raise DomainError("negative argument to kth_root_bounds")
    scaled = (x.numerator << (k * bits)) // x.denominator
    r = iroot(scaled, k)
    lo = Fraction(r, 1 << bits)
    if lo ** k == x:
        return lo, lo
    return lo, Fraction(r + 1, 1 << bits)


# logarithms -----------------------------------------------------------


def _atanh_series(num: int, den: int, prec: int) -> tuple[int, int]:
    """Bounds ``(lo, hi)`` on ``2**prec * atanh(num/den)`` for |num/den| <= 1/3.

    Every term is floored individually (error < 1 ulp each) and the
    truncated tail is bounded by a geometric series.
    """
    total = 0
    terms = 0
    j = 0
    a = abs(num)
    zz = Fraction(num * num, den * den)
    while True:
        p = 2 * j + 1
        t_num = num ** p << prec
        t_den = den ** p * p
        total += t_num // t_den
        terms += 1
        j += 1
        # next term magnitude bound; tail <= next / (1 - z^2)
        nxt = Fraction(a ** (2 * j + 1) << prec, den ** (2 * j + 1) * (2 * j + 1))
        tail = nxt / (1 - zz)
        if tail < 1:
            break
    tail_ulps = 1  # tail < 1 ulp
    return total - tail_ulps, total + terms + tail_ulps


@lru_cache(maxsize=64)
def _ln2_scaled(prec: int) -> tuple[int, int]:
    lo, hi = _atanh_series(1, 3, prec)
    return 2 * lo, 2 * hi


def _ln_point(x: Fraction, prec: int) -> tuple[int, int]:
    """Bounds on ``2**prec * ln(x)`` for rational x > 0."""
    if x == 1:
        return 0, 0
    k = x.numerator.bit_length() - x.denominator.bit_length()
    r = x / Fraction(2) ** k
    # bring r into [3/4, 3/2)
    while r >= Fraction(3, 2):
        r /= 2
        k += 1
    while r < Fraction(3, 4):
        r *= 2
        k -= 1
    z = (r - 1) / (r + 1)
    if z == 0:
        s_lo = s_hi = 0
    else:
        s_lo, s_hi = _atanh_series(z.numerator, z.denominator, prec)
    l2_lo, l2_hi = _ln2_scaled(prec)
    if k >= 0:
        return k * l2_lo + 2 * s_lo, k * l2_hi + 2 * s_hi
    return k * l2_hi + 2 * s_lo, k * l2_lo + 2 * s_hi


@lru_cache(maxsize=4096)
def _ln_rational(x: Fraction, precision_bits: int) -> tuple[Fraction, Fraction]:
    guard = 10 + precision_bits.bit_length() + max(x.numerator.bit_length(), x.denominator.bit_length()).bit_length()
    prec = precision_bits + guard
    lo, hi = _ln_point(x, prec)
    scale = 1 << prec
    return Fraction(lo, scale), Fraction(hi, scale)


def log_enclosure(x, precision_bits: int = 64) -> RationalInterval:
    """Outward-rounded rational enclosure of ``{ln t : t in x}``.

    For a point interval the width is at most ``2**-precision_bits``.
    """
    x = _as_interval(x) if not isinstance(x, RationalInterval) else x
    if precision_bits < 8:
        raise DomainError("precision_bits must be at least 8")
    if x.lo <= 0:
        raise DomainError(f"logarithm of non-positive value {x.lo}")
    lo, _ = _ln_rational(x.lo, precision_bits)
    _, hi = _ln_rational(x.hi, precision_bits)
    return RationalInterval(lo, hi)
