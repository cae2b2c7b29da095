"""Dense integer polynomials, Sturm sequences and real-root isolation.

Coefficients are stored low degree first: ``coeffs[i]`` multiplies ``x**i``.
All arithmetic stays in Python integers; rational points are handled by
evaluating the homogenised form ``den**d * p(num/den)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def x(cls) -> IntPolynomial:
        return cls((0, 1))

    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls((c,))

    @classmethod
    def from_high(cls, coeffs: Sequence[int]) -> IntPolynomial:
        """Build from coefficients listed highest degree first."""
        return cls(reversed(list(coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "IntPolynomial(0)"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c:+d}")
            else:
                coef = "+" if c == 1 else "-" if c == -1 else f"{c:+d}*"
                terms.append(f"{coef}x" + (f"^{i}" if i > 1 else ""))
        s = " ".join(terms)
        return f"IntPolynomial({s.lstrip('+')})"

    # arithmetic -------------------------------------------------------

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-c for c in self.coeffs)

    def __add__(self, other) -> IntPolynomial:
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    __radd__ = __add__

    def __sub__(self, other) -> IntPolynomial:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> IntPolynomial:
        return _coerce(other) - self

    def __mul__(self, other) -> IntPolynomial:
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPolynomial:
        result = IntPolynomial((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: int) -> IntPolynomial:
        return IntPolynomial(c * v for v in self.coeffs)

    def shift_up(self, k: int) -> IntPolynomial:
        """Multiply by ``x**k``."""
        if not self.coeffs:
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def compose_power(self, k: int) -> IntPolynomial:
        """Return ``p(x**k)``."""
        out = [0] * (self.degree * k + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return IntPolynomial(out)

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> IntPolynomial:
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        if g == 1:
            return self
        return IntPolynomial(c // g for c in self.coeffs)

    def strip_x(self) -> IntPolynomial:
        """Remove factors of ``x``."""
        c = self.coeffs
        i = 0
        while i < len(c) and c[i] == 0:
            i += 1
        return IntPolynomial(c[i:]) if i else self

    def canonical(self) -> IntPolynomial:
        """Primitive, positive leading coefficient, no factor ``x``."""
        return self.strip_x().primitive()

    # evaluation -------------------------------------------------------

    def __call__(self, x):
        if isinstance(x, int):
            acc = 0
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = Fraction(x)
        return Fraction(self.eval_scaled(x.numerator, x.denominator), x.denominator ** max(self.degree, 0))

    def eval_scaled(self, num: int, den: int) -> int:
        """Return ``den**deg * p(num/den)`` as an integer."""
        acc = 0
        dpow = 1
        # Horner on the homogenised polynomial.
        for c in reversed(self.coeffs):
            acc = acc * num + c * dpow
            dpow *= den
        # the loop multiplied the constant by den**deg and the leading term by 1
        return acc

    def sign_at(self, x) -> int:
        x = Fraction(x)
        v = self.eval_scaled(x.numerator, x.denominator)
        return (v > 0) - (v < 0)

    def taylor_shift(self, a) -> list[Fraction]:
        """Coefficients of ``p(x + a)`` as Fractions."""
        a = Fraction(a)
        c = [Fraction(v) for v in self.coeffs]
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return c

    # division ---------------------------------------------------------

    def pseudo_rem(self, other: IntPolynomial) -> IntPolynomial:
        """``lc(other)**(deg self - deg other + 1) * self mod other``."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        b = other.coeffs
        lb = b[-1]
        if len(r) - 1 < db:
            return self
        delta = len(r) - 1 - db + 1
        while r and len(r) - 1 >= db:
            lr = r[-1]
            shift = len(r) - 1 - db
            r = [lb * v for v in r]
            for i, cb in enumerate(b):
                r[i + shift] -= lr * cb
            r.pop()
            while r and r[-1] == 0:
                r.pop()
            delta -= 1
        if delta > 0:
            f = lb ** delta
            r = [f * v for v in r]
        return IntPolynomial(r)

    def divmod_rational(self, other: IntPolynomial) -> tuple[list[Fraction], list[Fraction]]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = [Fraction(v) for v in self.coeffs]
        db = other.degree
        lb = other.lc
        q = [Fraction(0)] * max(len(r) - db, 1)
        while r and len(r) - 1 >= db:
            f = r[-1] / lb
            shift = len(r) - 1 - db
            q[shift] = f
            for i, cb in enumerate(other.coeffs):
                r[i + shift] -= f * cb
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        return q, r

    def exact_div(self, other: IntPolynomial) -> IntPolynomial:
        """Quotient up to a rational scalar, returned primitive."""
        q, r = self.divmod_rational(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return from_fractions(q).primitive()

    def gcd(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.primitive(), other.primitive()
        if not a:
            return b
        if not b:
            return a
        if a.degree < b.degree:
            a, b = b, a
        while b:
            r = a.pseudo_rem(b)
            a, b = b, r.primitive()
        return a.primitive()

    def squarefree(self) -> IntPolynomial:
        """Squarefree part, primitive with positive leading coefficient."""
        return _squarefree(self)


def _coerce(v) -> IntPolynomial:
    if isinstance(v, IntPolynomial):
        return v
    return IntPolynomial((int(v),))


def from_fractions(coeffs: Sequence[Fraction]) -> IntPolynomial:
    """Clear denominators of a rational coefficient list."""
    den = 1
    for c in coeffs:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    return IntPolynomial(int(Fraction(c) * den) for c in coeffs)


@lru_cache(maxsize=65536)
def _squarefree(p: IntPolynomial) -> IntPolynomial:
    p = p.primitive()
    if p.degree < 1:
        return p
    g = p.gcd(p.derivative())
    if g.degree == 0:
        return p
    return p.exact_div(g)


# Sturm sequences ------------------------------------------------------


@lru_cache(maxsize=65536)
def sturm_sequence(p: IntPolynomial) -> tuple[IntPolynomial, ...]:
    """Sturm sequence of the squarefree part of ``p`` (integer PRS form).

    Each remainder is rescaled by a positive factor, which leaves every
    sign pattern, and hence every variation count, unchanged.
    """
    p = p.squarefree()
    if p.degree < 1:
        return (p,)
    seq = [p, p.derivative().primitive()]
    while True:
        a, b = seq[-2], seq[-1]
        if b.degree < 1:
            break
        r = a.pseudo_rem(b)
        if not r:
            break
        # pseudo_rem multiplied by lc(b)**k; undo a negative factor
        k = a.degree - b.degree + 1
        neg = b.lc < 0 and k % 2 == 1
        r = r if neg else -r
        g = r.content()
        seq.append(IntPolynomial(c // g for c in r.coeffs))
    return tuple(seq)


def _variations(signs: Iterable[int]) -> int:
    v = 0
    last = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


def sign_variations(seq: Sequence[IntPolynomial], x: Fraction) -> int:
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    signs = []
    for q in seq:
        v = q.eval_scaled(num, den)
        signs.append((v > 0) - (v < 0))
    return _variations(signs)


def count_roots_open(p: IntPolynomial, a, b) -> int:
    """Number of distinct real roots of ``p`` in the open interval (a, b)."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        return 0
    seq = sturm_sequence(p)
    if seq[0].degree < 1:
        return 0
    n = sign_variations(seq, a) - sign_variations(seq, b)
    if seq[0].sign_at(b) == 0:
        n -= 1
    return n


def count_roots_closed(p: IntPolynomial, a, b) -> int:
    a, b = Fraction(a), Fraction(b)
    sq = p.squarefree()
    if sq.degree < 1:
        return 0
    if a == b:
        return int(sq.sign_at(a) == 0)
    n = count_roots_open(sq, a, b)
    return n + (sq.sign_at(a) == 0) + (sq.sign_at(b) == 0)


def isolating_intervals(p: IntPolynomial, lo, hi) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals for the distinct roots of ``p`` in (lo, hi).

    Each returned ``(a, b)`` either has ``a == b`` (a rational root) or
    ``a < b`` with ``p(a), p(b)`` nonzero and exactly one root inside.
    Output is sorted ascending.
    """
    if not p:
        raise ValueError("zero polynomial has no isolated roots")
    lo, hi = Fraction(lo), Fraction(hi)
    sq = p.squarefree()
    if sq.degree < 1 or lo >= hi:
        return []
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, count_roots_open(sq, lo, hi))]
    while stack:
        a, b, c = stack.pop()
        if c == 0:
            continue
        if c == 1 and sq.sign_at(a) != 0 and sq.sign_at(b) != 0:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if sq.sign_at(m) == 0:
            out.append((m, m))
            left = count_roots_open(sq, a, m)
            stack.append((m, b, c - 1 - left))
            stack.append((a, m, left))
        else:
            left = count_roots_open(sq, a, m)
            stack.append((m, b, c - left))
            stack.append((a, m, left))
    out.sort()
    return out
