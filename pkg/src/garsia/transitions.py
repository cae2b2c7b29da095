"""Candidate transition points of m_n and the partition they induce.

Two prefix intervals of the same length n can only change their relative
position where an endpoint of one meets an endpoint of the other. After
multiplying by ``beta**n * (beta - 1)`` every such coincidence is the root
of an integer polynomial that depends only on the digit difference
``d = a - b`` in {-1, 0, 1}**n, with ``D(x) = sum d_i x**(n-i)``:

* ``L_a = L_b`` (equivalently ``U_a = U_b``):  ``D(x) = 0``
* ``L_a = U_b``:                               ``(x - 1) D(x) - 1 = 0``

``U_a = L_b`` is the second family for ``-d``. Enumerating the 3**n
difference vectors instead of the 4**n word pairs loses nothing, and
lets the window test prune whole subtrees of d.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterator, Optional, Union

from .algebraic import AlgebraicReal, Extent, compare, sign_at, sturm_isolate
from .expansions import PrefixWord
from .poly import IntPolynomial, count_roots_open
from .rational import DomainError, RationalInterval, format_rational

LL = "L=L"
LU = "L=U"

Window = Union[RationalInterval, Extent]


@dataclass(frozen=True)
class Generator:
    """The equation that produced a candidate point: (a)_L = (b)_L or (a)_L = (b)_U."""

    family: str
    a: PrefixWord
    b: PrefixWord
    poly: IntPolynomial

    def to_json(self) -> dict:
        return {"family": self.family, "a": str(self.a), "b": str(self.b), "poly": [str(c) for c in self.poly.coeffs]}


def _as_extent(window: Window) -> Extent:
    if isinstance(window, Extent):
        return window
    return Extent.from_interval(window)


def _difference_poly(d: tuple[int, ...]) -> IntPolynomial:
    return IntPolynomial(reversed(d))


def _words(d: tuple[int, ...]) -> tuple[PrefixWord, PrefixWord]:
    a = PrefixWord.from_bits(1 if v == 1 else 0 for v in d)
    b = PrefixWord.from_bits(1 if v == -1 else 0 for v in d)
    return a, b


def difference_generators(n: int, window: RationalInterval, prune: bool = True) -> Iterator[Generator]:
    """Every endpoint equation whose root may fall in ``window``, one per difference vector.

    In ``y = 1/beta`` the equation ``L_a = U_b`` reads ``S(y) = T(y)`` with
    ``S = sum d_i y**i`` and ``T = y**(n+1) / (1 - y)``. Once the first j
    digits are fixed, the rest of S lies in ``[-R_j, R_j]`` with
    ``R_j = sum_{i>j} y**i``. All pieces increase with y, so over
    ``y in [1/hi, 1/lo]`` the sign of ``S - T`` is pinned if
    ``S+(y_hi) + R_j(y_hi) - S-(y_lo) - T(y_lo) < 0`` or
    ``S+(y_lo) - S-(y_hi) - R_j(y_hi) - T(y_hi) > 0``,
    where S+ and S- collect the +1 and -1 digits. The family ``L_a = L_b``
    is the same test with T = 0, taken up to the sign of d.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if window.lo <= 1:
        raise DomainError(f"window must lie above 1, got {window}")
    y_lo, y_hi = 1 / window.hi, 1 / window.lo
    pw_lo = [y_lo ** i for i in range(n + 2)]
    pw_hi = [y_hi ** i for i in range(n + 2)]
    t_lo = pw_lo[n + 1] / (1 - y_lo)
    t_hi = pw_hi[n + 1] / (1 - y_hi)
    # R_j at the low end of beta, its largest value
    r_hi = [sum(pw_hi[j + 1 : n + 1], Fraction(0)) for j in range(n + 1)]
    x_minus_1 = IntPolynomial((-1, 1))

    def feasible(j, sp_lo, sp_hi, sm_lo, sm_hi, t_l, t_h):
        if not prune:
            return True
        if sp_hi + r_hi[j] - sm_lo - t_l < 0:
            return False
        if sp_lo - sm_hi - r_hi[j] - t_h > 0:
            return False
        return True

    # L = U family, all nonzero d
    def walk_lu(j, d, sp_lo, sp_hi, sm_lo, sm_hi):
        if not feasible(j, sp_lo, sp_hi, sm_lo, sm_hi, t_lo, t_hi):
            return
        if j == n:
            if any(d):
                a, b = _words(d)
                yield Generator(LU, a, b, x_minus_1 * _difference_poly(d) - 1)
            return
        k = j + 1
        yield from walk_lu(k, d + (0,), sp_lo, sp_hi, sm_lo, sm_hi)
        yield from walk_lu(k, d + (1,), sp_lo + pw_lo[k], sp_hi + pw_hi[k], sm_lo, sm_hi)
        yield from walk_lu(k, d + (-1,), sp_lo, sp_hi, sm_lo + pw_lo[k], sm_hi + pw_hi[k])

    # L = L family, d up to sign: the first nonzero digit is +1
    def walk_ll(j, d, started, sp_lo, sp_hi, sm_lo, sm_hi):
        if started and not feasible(j, sp_lo, sp_hi, sm_lo, sm_hi, 0, 0):
            return
        if j == n:
            if started:
                a, b = _words(d)
                yield Generator(LL, a, b, _difference_poly(d))
            return
        k = j + 1
        yield from walk_ll(k, d + (0,), started, sp_lo, sp_hi, sm_lo, sm_hi)
        yield from walk_ll(k, d + (1,), True, sp_lo + pw_lo[k], sp_hi + pw_hi[k], sm_lo, sm_hi)
        if started:
            yield from walk_ll(k, d + (-1,), True, sp_lo, sp_hi, sm_lo + pw_lo[k], sm_hi + pw_hi[k])

    zero = Fraction(0)
    yield from walk_lu(0, (), zero, zero, zero, zero)
    yield from walk_ll(0, (), False, zero, zero, zero, zero)


def pair_difference_polys(n: int, window: RationalInterval, prune: bool = True) -> Iterator[IntPolynomial]:
    """Distinct canonical coincidence polynomials for length-n words on ``window``."""
    seen = set()
    for g in difference_generators(n, window, prune):
        c = g.poly.canonical()
        if c.degree >= 1 and c not in seen:
            seen.add(c)
            yield c


@dataclass
class TransitionSet:
    n: int
    window: Extent
    points: list[AlgebraicReal]
    generators: list[Generator] = field(default_factory=list)
    multiplicity: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "window": self.window.to_json(),
            "points": [
                {"value": p.to_json(), "approx": f"{p.approx(15):.15g}", "generator": g.to_json(), "generators": k}
                for p, g, k in zip(self.points, self.generators, self.multiplicity)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def isolate_transitions(n: int, window: Window, prune: bool = True) -> TransitionSet:
    """All candidate transition points strictly inside ``window``, merged and sorted."""
    ext = _as_extent(window)
    hull = ext.hull()
    if hull.lo <= 1 or hull.hi > 2:
        raise DomainError(f"window must lie in (1, 2), got {hull}")
    first_gen: dict[IntPolynomial, Generator] = {}
    count: dict[IntPolynomial, int] = {}
    for g in difference_generators(n, hull, prune):
        c = g.poly.canonical()
        if c.degree < 1:
            continue
        if c not in first_gen:
            first_gen[c] = g
            count[c] = 0
        count[c] += 1
    # each squarefree factor is isolated once; identical squarefree parts share roots
    by_sq: dict[IntPolynomial, list[IntPolynomial]] = {}
    for c in first_gen:
        sq = c.squarefree()
        if count_roots_open(sq, hull.lo, hull.hi) == 0:
            continue
        by_sq.setdefault(sq, []).append(c)
    found: list[tuple[AlgebraicReal, Generator, int]] = []
    for sq, polys in by_sq.items():
        g = first_gen[polys[0]]
        k = sum(count[c] for c in polys)
        for r in sturm_isolate(sq, hull):
            if ext.strictly_inside(r):
                found.append((r, g, k))
    found.sort(key=cmp_to_key(lambda u, v: compare(u[0], v[0])))
    points, gens, mult = [], [], []
    for r, g, k in found:
        if points and compare(points[-1], r) == 0:
            mult[-1] += k
            if _gen_key(g) < _gen_key(gens[-1]):
                gens[-1] = g
            continue
        points.append(r)
        gens.append(g)
        mult.append(k)
    return TransitionSet(n, ext, points, gens, mult)


def _gen_key(g: Generator):
    return (g.poly.degree, g.family, g.a.value, g.b.value)


# partition ---------------------------------------------------------------


@dataclass
class PartitionCell:
    extent: Extent
    sample: Optional[Fraction] = None  # rational interior point of an open cell

    @property
    def is_point(self) -> bool:
        return self.sample is None


@dataclass
class Partition:
    window: Extent
    cells: list[PartitionCell]

    def __len__(self) -> int:
        return len(self.cells)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The dyadic with the fewest bits strictly between lo and hi."""
    if not lo < hi:
        raise ValueError("empty interval")
    bits = 0
    while True:
        scale = 1 << bits
        c = Fraction((lo.numerator * scale) // lo.denominator + 1, scale)
        if c < hi:
            return c
        bits += 1


def sample_between(a: AlgebraicReal, b: AlgebraicReal) -> Fraction:
    """A deterministic rational strictly between a < b."""
    while True:
        al, ah = a.interval()
        bl, bh = b.interval()
        if ah < bl:
            break
        if ah - al >= bh - bl:
            a.refine_once()
        else:
            b.refine_once()
    return simplest_between(ah, bl)


def build_partition(t: TransitionSet) -> Partition:
    """Open cells between consecutive points, plus a point cell at each point."""
    w = t.window
    cells: list[PartitionCell] = []
    if w.lo_closed:
        cells.append(PartitionCell(Extent.point(w.lo)))
    edges = [w.lo] + list(t.points) + [w.hi]
    for i in range(len(edges) - 1):
        a, b = edges[i], edges[i + 1]
        cells.append(PartitionCell(Extent(a, b, False, False), sample_between(a, b)))
        if i + 1 < len(edges) - 1:
            cells.append(PartitionCell(Extent.point(b)))
    if w.hi_closed:
        cells.append(PartitionCell(Extent.point(w.hi)))
    return Partition(w, cells)


def verify_generator(point: AlgebraicReal, g: Generator) -> bool:
    return sign_at(g.poly, point) == 0


def format_point(p: AlgebraicReal) -> str:
    lo, hi = p.interval()
    return f"{p.approx(15):.15g}  poly={p.poly}  iso=[{format_rational(lo)}, {format_rational(hi)}]"
