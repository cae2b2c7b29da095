"""Maximal overlap m_n(beta) of the 2**n closed prefix intervals.

The sweep sorts interval starts and ends on one axis, processes starts
before ends at equal coordinates (closed intervals), and tracks the
running number of open intervals.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Optional

from .algebraic import AlgebraicReal, sign_at
from .expansions import beta_poly_values, prefix_bounds_at, PrefixWord, word_keys
from .poly import IntPolynomial
from .rational import DomainError

START, END = 0, 1
BRUTE_FORCE_MAX_N = 12


def _check(n: int, beta: Fraction) -> Fraction:
    if n < 1:
        raise ValueError("n must be >= 1")
    beta = Fraction(beta)
    if not 1 < beta < 2:
        raise DomainError(f"beta must lie in (1, 2), got {beta}")
    return beta


def max_overlap(n: int, beta) -> tuple[int, Fraction]:
    """``(m_n(beta), x)`` for rational beta, x being a point of maximal overlap."""
    beta = _check(n, beta)
    p, q = beta.numerator, beta.denominator
    keys = word_keys(n, p, q)
    # coordinates scaled by p**n * (p - q); every interval has width q**(n+1)
    d = p - q
    width = q ** (n + 1)
    events = []
    for k in keys:
        s = k * d
        events.append((s, START))
        events.append((s + width, END))
    events.sort()
    best, at, cur = 0, 0, 0
    for coord, kind in events:
        if kind == START:
            cur += 1
            if cur > best:
                best, at = cur, coord
        else:
            cur -= 1
    return best, Fraction(at, p ** n * d)


def brute_force_overlap(n: int, beta) -> int:
    """m_n(beta) by counting containments at every endpoint; an independent check."""
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force refused for n > {BRUTE_FORCE_MAX_N}")
    beta = _check(n, beta)
    intervals = [prefix_bounds_at(PrefixWord(n, v), beta) for v in range(1 << n)]
    best = 0
    for lo, hi in intervals:
        for x in (lo, hi):
            c = sum(1 for a, b in intervals if a <= x <= b)
            best = max(best, c)
    return best


# algebraic beta ------------------------------------------------------------


class _AlgebraicSweep:
    """Event ordering at an algebraic beta.

    Event coordinates are multiplied by ``beta**n * (beta - 1) > 0``:
    the start of word a sits at ``C_a(beta) = (beta - 1) P_a(beta)`` and its
    end at ``C_a(beta) + 1``, where ``P_a(x) = sum a_i x**(n-i)``. Dyadic
    enclosures order almost every pair of events. Events whose enclosures
    overlap are split into classes of exactly equal coordinates, detected
    by remainders modulo the defining polynomial plus a gcd test, and the
    classes are then ordered by exact sign computations.
    """

    def __init__(self, n: int, beta: AlgebraicReal, bits: int):
        self.n = n
        self.beta = beta
        self.f = beta.poly
        lo = beta.lower_dyadic(bits)
        hi = beta.upper_dyadic(bits)
        if lo <= 1:
            raise DomainError("beta must exceed 1")
        scale = 1 << bits
        a, b = int(lo * scale), int(hi * scale)
        p_lo = beta_poly_values(n, a, scale)
        p_hi = beta_poly_values(n, b, scale)
        self.c_lo = [(a - scale) * v for v in p_lo]
        self.c_hi = [(b - scale) * v for v in p_hi]
        self.one = scale ** n
        self._rem: dict[tuple[int, int], tuple] = {}

    def bounds(self, ev):
        w, kind = ev
        if kind == START:
            return self.c_lo[w], self.c_hi[w]
        return self.c_lo[w] + self.one, self.c_hi[w] + self.one

    def coord_poly(self, ev) -> IntPolynomial:
        w, kind = ev
        c = PrefixWord(self.n, w).beta_poly() * IntPolynomial((-1, 1))
        return c + 1 if kind == END else c

    def remainder(self, ev) -> tuple:
        r = self._rem.get(ev)
        if r is None:
            _, rem = self.coord_poly(ev).divmod_rational(self.f)
            r = tuple(rem)
            self._rem[ev] = r
        return r

    def order(self) -> list[tuple[int, int]]:
        events = [(w, kind) for w in range(1 << self.n) for kind in (START, END)]
        keyed = sorted(events, key=lambda e: self.bounds(e)[0])
        out = []
        cluster = []
        cluster_hi = None
        for ev in keyed:
            lo, hi = self.bounds(ev)
            if cluster and lo > cluster_hi:
                out.extend(self._resolve(cluster))
                cluster = []
            cluster_hi = hi if not cluster else max(cluster_hi, hi)
            cluster.append(ev)
        out.extend(self._resolve(cluster))
        return out

    def _equal_classes(self, cluster):
        while True:
            classes: list[tuple[tuple, list]] = []
            by_rem: dict[tuple, list] = {}
            shrunk = False
            for ev in cluster:
                r = self.remainder(ev)
                members = by_rem.get(r)
                if members is not None:
                    members.append(ev)
                    continue
                for rep, members in classes:
                    d = _fraction_poly_diff(r, rep)
                    g = self.f.gcd(d)
                    lo, hi = self.beta.interval()
                    if g.degree >= 1 and g.sign_at(lo) * g.sign_at(hi) < 0:
                        # equal values: keep only the factor that carries beta
                        self.f = g.squarefree()
                        self._rem.clear()
                        shrunk = True
                        break
                if shrunk:
                    break
                members = [ev]
                classes.append((r, members))
                by_rem[r] = members
            if not shrunk:
                return classes

    def _resolve(self, cluster):
        if len(cluster) < 2:
            return cluster
        classes = self._equal_classes(cluster)

        def cmp(c1, c2):
            d = _fraction_poly_diff(c1[0], c2[0])
            return sign_at(d, self.beta)

        ordered = sorted(classes, key=cmp_to_key(cmp)) if len(classes) > 1 else classes
        out = []
        for _, members in ordered:
            # closed intervals: starts before ends at a shared coordinate
            out.extend(sorted(members, key=lambda e: e[1]))
        return out


def _fraction_poly_diff(a: tuple, b: tuple) -> IntPolynomial:
    from .poly import from_fractions

    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return from_fractions([x - y for x, y in zip(a, b)])


def max_overlap_at_algebraic(n: int, beta: AlgebraicReal, bits: Optional[int] = None) -> int:
    """Exact m_n at an algebraic beta in (1, 2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if beta.is_rational:
        return max_overlap(n, beta.lo)[0]
    lo, hi = beta.interval()
    if not (lo >= 1 and hi <= 2):
        lo, hi = beta.refine(Fraction(1, 1 << 20))
        if lo < 1 or hi > 2:
            raise DomainError("beta must lie in (1, 2)")
    if bits is None:
        bits = 64 + 2 * n
    sweep = _AlgebraicSweep(n, beta, bits)
    best = cur = 0
    for _, kind in sweep.order():
        if kind == START:
            cur += 1
            best = max(best, cur)
        else:
            cur -= 1
    return best


def overlap_at(n: int, beta) -> int:
    """m_n at a rational or algebraic beta."""
    if isinstance(beta, AlgebraicReal):
        return max_overlap_at_algebraic(n, beta)
    return max_overlap(n, beta)[0]
