"""Real algebraic numbers as (squarefree polynomial, isolating interval)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering

from .poly import IntPolynomial, count_roots_closed, count_roots_open, isolating_intervals
from .rational import RationalInterval, ceil_dyadic, floor_dyadic, format_rational, kth_root_bounds


@total_ordering
@dataclass(frozen=True, eq=False)
class AlgebraicReal:
    """The unique root of ``poly`` in the closed interval ``[lo, hi]``.

    ``poly`` is squarefree and primitive. When ``lo < hi`` neither endpoint
    is a root, so the sign of ``poly`` differs at the two ends. When
    ``lo == hi`` the number is that rational.
    """

    poly: IntPolynomial
    lo: Fraction
    hi: Fraction
    _box: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        if not self._box:
            self._box.append((self.lo, self.hi))

    @classmethod
    def from_rational(cls, q) -> AlgebraicReal:
        q = Fraction(q)
        return cls(IntPolynomial((-q.numerator, q.denominator)), q, q)

    @classmethod
    def create(cls, poly: IntPolynomial, lo, hi) -> AlgebraicReal:
        """Validated constructor: ``poly`` must have exactly one root in [lo, hi]."""
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("isolating interval has lo > hi")
        sq = poly.squarefree()
        if sq.degree < 1:
            raise ValueError("defining polynomial must be nonconstant")
        if count_roots_closed(sq, lo, hi) != 1:
            raise ValueError(f"{poly} does not have exactly one root in [{lo}, {hi}]")
        if sq.degree == 1:
            return cls.from_rational(Fraction(-sq.coeffs[0], sq.coeffs[1]))
        if lo == hi:
            return cls.from_rational(lo)
        if sq.sign_at(lo) == 0:
            return cls.from_rational(lo)
        if sq.sign_at(hi) == 0:
            return cls.from_rational(hi)
        return cls(sq, lo, hi)

    @classmethod
    def roots_in(cls, poly: IntPolynomial, window: RationalInterval) -> list[AlgebraicReal]:
        return sturm_isolate(poly, window)

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    def interval(self) -> tuple[Fraction, Fraction]:
        return self._box[-1]

    def refine(self, width) -> tuple[Fraction, Fraction]:
        """Bisect the cached isolating interval until its width is <= ``width``."""
        lo, hi = self._box[-1]
        if hi - lo <= width:
            return lo, hi
        p = self.poly
        s_lo = p.sign_at(lo)
        while hi - lo > width:
            m = (lo + hi) / 2
            s = p.sign_at(m)
            if s == 0:
                lo = hi = m
                break
            if s == s_lo:
                lo = m
            else:
                hi = m
        self._box.append((lo, hi))
        if len(self._box) > 4:
            del self._box[1:-1]
        return lo, hi

    def refine_once(self) -> tuple[Fraction, Fraction]:
        lo, hi = self._box[-1]
        return self.refine((hi - lo) / 2)

    def enclosure(self, bits: int) -> RationalInterval:
        return RationalInterval(*self.refine(Fraction(1, 1 << bits)))

    def upper_dyadic(self, bits: int) -> Fraction:
        """Smallest multiple of ``2**-bits`` that is >= this number.

        Canonical: independent of the isolating interval it started from.
        """
        lo, hi = self.interval()
        while True:
            c = ceil_dyadic(lo, bits)
            if c == ceil_dyadic(hi, bits):
                return c
            if c < hi and self.poly.sign_at(c) == 0:
                return c
            lo, hi = self.refine_once()

    def lower_dyadic(self, bits: int) -> Fraction:
        """Largest multiple of ``2**-bits`` that is <= this number."""
        lo, hi = self.interval()
        while True:
            f = floor_dyadic(hi, bits)
            if f == floor_dyadic(lo, bits):
                return f
            if f > lo and self.poly.sign_at(f) == 0:
                return f
            lo, hi = self.refine_once()

    def approx(self, digits: int = 17) -> float:
        lo, hi = self.refine(Fraction(1, 10 ** digits))
        return float((lo + hi) / 2)

    def __float__(self) -> float:
        return self.approx()

    def __repr__(self) -> str:
        if self.is_rational:
            return f"AlgebraicReal({format_rational(self.lo)})"
        return f"AlgebraicReal({self.poly}, [{format_rational(self.lo)}, {format_rational(self.hi)}] ~ {self.approx(12):.12g})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, (AlgebraicReal, int, Fraction)):
            return NotImplemented
        return compare(self, _lift(other)) == 0

    def __lt__(self, other) -> bool:
        if not isinstance(other, (AlgebraicReal, int, Fraction)):
            return NotImplemented
        return compare(self, _lift(other)) < 0

    __hash__ = None

    def sign(self) -> int:
        return compare(self, AlgebraicReal.from_rational(0))

    def kth_root(self, k: int) -> AlgebraicReal:
        """The positive real k-th root of this (positive) number."""
        if k == 1:
            return self
        if self.sign() <= 0:
            raise ValueError("kth_root needs a positive number")
        q = self.poly.compose_power(k)
        bits = 32
        while True:
            lo, hi = self.interval()
            a, _ = kth_root_bounds(lo, k, bits)
            _, b = kth_root_bounds(hi, k, bits)
            if count_roots_closed(q, a, b) == 1:
                return AlgebraicReal.create(q, a, b)
            self.refine_once()
            bits += 16

    def power(self, k: int) -> AlgebraicReal:
        """``self**k`` for positive numbers, with an exact defining polynomial."""
        if k == 1:
            return self
        if self.is_rational:
            return AlgebraicReal.from_rational(self.lo ** k)
        if self.sign() <= 0:
            raise ValueError("power is implemented for positive numbers")
        from .fields import power_charpoly

        q = power_charpoly(self.poly, k).squarefree()
        while True:
            lo, hi = self.interval()
            if lo > 0 and count_roots_closed(q, lo ** k, hi ** k) == 1:
                return AlgebraicReal.create(q, lo ** k, hi ** k)
            self.refine_once()

    def to_json(self) -> dict:
        return {
            "poly": [str(c) for c in self.poly.coeffs],
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
        }

    @classmethod
    def from_json(cls, d: dict) -> AlgebraicReal:
        from .rational import parse_rational

        return cls.create(
            IntPolynomial(int(c) for c in d["poly"]),
            parse_rational(d["lo"]),
            parse_rational(d["hi"]),
        )


def _lift(x) -> AlgebraicReal:
    return x if isinstance(x, AlgebraicReal) else AlgebraicReal.from_rational(x)


# certified operations --------------------------------------------------


def sturm_isolate(p: IntPolynomial, window: RationalInterval) -> list[AlgebraicReal]:
    """All distinct real roots of ``p`` strictly inside ``window``, ascending."""
    if not p:
        raise ValueError("sturm_isolate needs a nonzero polynomial")
    sq = p.squarefree()
    out = []
    for a, b in isolating_intervals(sq, window.lo, window.hi):
        if a == b or sq.degree == 1:
            if a != b:
                a = Fraction(-sq.coeffs[0], sq.coeffs[1])
            out.append(AlgebraicReal.from_rational(a))
        else:
            out.append(AlgebraicReal(sq, a, b))
    return out


def _poly_range(p: IntPolynomial, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of p over [lo, hi] by Taylor expansion at the midpoint."""
    m = (lo + hi) / 2
    r = (hi - lo) / 2
    c = p.taylor_shift(m)
    if not c:
        return Fraction(0), Fraction(0)
    spread = Fraction(0)
    rk = Fraction(1)
    for ck in c[1:]:
        rk *= r
        spread += abs(ck) * rk
    return c[0] - spread, c[0] + spread


def sign_at(p: IntPolynomial, x: AlgebraicReal) -> int:
    """Exact sign of ``p`` at the algebraic number ``x``."""
    if not p:
        return 0
    if x.is_rational:
        return p.sign_at(x.lo)
    lo, hi = x.interval()
    if p.degree == 0:
        return (p.lc > 0) - (p.lc < 0)
    tried_gcd = False
    for attempt in range(100_000):
        a, b = _poly_range(p, lo, hi)
        if a > 0:
            return 1
        if b < 0:
            return -1
        if not tried_gcd and attempt >= 2:
            # enclosure still straddles 0: test for a common root once,
            # after which refinement is guaranteed to separate p from 0
            tried_gcd = True
            g = p.gcd(x.poly)
            if g.degree >= 1 and g.sign_at(lo) * g.sign_at(hi) < 0:
                return 0
        lo, hi = x.refine((hi - lo) / 4)
        if lo == hi:
            return p.sign_at(lo)
    raise RuntimeError("sign_at failed to converge")  # pragma: no cover


def compare(x: AlgebraicReal, y: AlgebraicReal) -> int:
    """Exact three-way comparison: -1, 0 or +1."""
    if x is y:
        return 0
    if x.is_rational and y.is_rational:
        return (x.lo > y.lo) - (x.lo < y.lo)
    if x.is_rational:
        return -compare(y, x)
    if y.is_rational:
        q = y.lo
        s = x.poly.sign_at(q)
        lo, hi = x.interval()
        if s == 0 and lo <= q <= hi:
            return 0
        while lo <= q <= hi:
            lo, hi = x.refine_once()
        return 1 if lo > q else -1
    checked = False
    while True:
        xl, xh = x.interval()
        yl, yh = y.interval()
        if xh < yl:
            return -1
        if yh < xl:
            return 1
        if not checked:
            checked = True
            if x.poly == y.poly:
                # one polynomial, overlapping isolating intervals -> same root
                return 0
            g = x.poly.gcd(y.poly)
            if g.degree >= 1:
                a, b = max(xl, yl), min(xh, yh)
                if count_roots_closed(g, a, b) >= 1:
                    return 0
        if xh - xl >= yh - yl:
            x.refine_once()
        else:
            y.refine_once()


def sign_of_difference(x: AlgebraicReal, y: AlgebraicReal) -> int:
    return compare(x, y)


@dataclass(frozen=True)
class Extent:
    """A connected subset of the real line with algebraic endpoints.

    A point is represented with ``lo is hi`` (or equal) and both ends closed.
    """

    lo: AlgebraicReal
    hi: AlgebraicReal
    lo_closed: bool = False
    hi_closed: bool = False

    @classmethod
    def point(cls, x: AlgebraicReal) -> Extent:
        return cls(x, x, True, True)

    @classmethod
    def open(cls, lo, hi) -> Extent:
        return cls(_lift(lo), _lift(hi), False, False)

    @classmethod
    def from_interval(cls, w: RationalInterval, lo_closed=False, hi_closed=False) -> Extent:
        return cls(_lift(w.lo), _lift(w.hi), lo_closed, hi_closed)

    @property
    def is_point(self) -> bool:
        return self.lo_closed and self.hi_closed and (self.lo is self.hi or compare(self.lo, self.hi) == 0)

    def hull(self) -> RationalInterval:
        """Rational interval containing the closure."""
        return RationalInterval(self.lo.interval()[0], self.hi.interval()[1])

    def contains_point(self, x: AlgebraicReal) -> bool:
        c_lo = compare(x, self.lo)
        c_hi = compare(x, self.hi)
        left = c_lo > 0 or (c_lo == 0 and self.lo_closed)
        right = c_hi < 0 or (c_hi == 0 and self.hi_closed)
        return left and right

    def strictly_inside(self, x: AlgebraicReal) -> bool:
        return compare(x, self.lo) > 0 and compare(x, self.hi) < 0

    def to_json(self) -> dict:
        if self.is_point:
            return {"kind": "point", "at": self.lo.to_json()}
        return {
            "kind": "interval",
            "lo": self.lo.to_json(),
            "hi": self.hi.to_json(),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_json(cls, d: dict) -> Extent:
        if d["kind"] == "point":
            return cls.point(AlgebraicReal.from_json(d["at"]))
        return cls(
            AlgebraicReal.from_json(d["lo"]),
            AlgebraicReal.from_json(d["hi"]),
            bool(d["lo_closed"]),
            bool(d["hi_closed"]),
        )

    def __repr__(self) -> str:
        if self.is_point:
            return f"{{{self.lo.approx(12):.12g}}}"
        lb = "[" if self.lo_closed else "("
        rb = "]" if self.hi_closed else ")"
        return f"{lb}{self.lo.approx(12):.12g}, {self.hi.approx(12):.12g}{rb}"
