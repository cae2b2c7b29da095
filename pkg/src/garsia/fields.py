"""Field-degree and Pisot criteria that certify dim = 1 for algebraic parameters.

The key quantity is the relative degree [Q(b) : Q(b**k)], read off the
characteristic polynomial of ``b**k``: that polynomial is an exact power of
the minimal polynomial of ``b**k``, so its squarefree part is the minimal
polynomial itself and no factorisation is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .poly import IntPolynomial, from_fractions

DEFAULT_K_MAX = 16


class BoundaryRootError(ArithmeticError):
    """A polynomial has roots on the unit circle, so a disk count is degenerate."""


def _power_sums_full(coeffs: list[Fraction], count: int) -> list[Fraction]:
    d = len(coeffs) - 1
    a = [c / coeffs[-1] for c in coeffs]
    s = [Fraction(d)] + [Fraction(0)] * count
    for m in range(1, count + 1):
        acc = Fraction(0)
        for i in range(1, min(m - 1, d) + 1):
            acc += a[d - i] * s[m - i]
        if m <= d:
            acc += m * a[d - m]
        s[m] = -acc
    return s


def power_charpoly(minpoly: IntPolynomial, k: int) -> IntPolynomial:
    """``lc**k * prod (x - r**k)`` over the roots r of ``minpoly`` (integer coefficients)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    d = minpoly.degree
    if d < 1:
        raise ValueError("minpoly must be nonconstant")
    if k == 1:
        return minpoly
    coeffs = [Fraction(c) for c in minpoly.coeffs]
    s = _power_sums_full(coeffs, d * k)
    t = [s[j * k] for j in range(d + 1)]
    # elementary symmetric functions of r**k from their power sums
    e = [Fraction(1)] + [Fraction(0)] * d
    for j in range(1, d + 1):
        acc = Fraction(0)
        for i in range(1, j + 1):
            acc += (-1) ** (i - 1) * e[j - i] * t[i]
        e[j] = acc / j
    high_first = [(-1) ** j * e[j] for j in range(d + 1)]
    scale = Fraction(minpoly.lc) ** k
    result = [c * scale for c in reversed(high_first)]
    if any(c.denominator != 1 for c in result):
        return from_fractions(result)
    return IntPolynomial(int(c) for c in result)


def relative_degree(minpoly: IntPolynomial, k: int) -> int:
    """[Q(b) : Q(b**k)] for a root b of the irreducible ``minpoly``."""
    if k == 1:
        return 1
    d = minpoly.degree
    m = power_charpoly(minpoly, k).squarefree().degree
    if d % m:
        raise ArithmeticError(
            f"deg {d} not divisible by {m}: input {minpoly} is not irreducible"
        )
    return d // m


def power_minpoly(minpoly: IntPolynomial, k: int) -> IntPolynomial:
    return power_charpoly(minpoly, k).squarefree()


# Schur-Cohn disk counting -----------------------------------------------


def _schur_count(coeffs: list[Fraction]) -> Optional[int]:
    """Zeros strictly inside the unit disk, or None in the singular case.

    Schur-Cohn reduction with ``p*(z) = z**d p(1/z)`` (real coefficients):
    if ``|lc| > |p(0)|`` then ``lc p - p(0) p* = z r(z)`` and p has one more
    zero inside than r; if ``|p(0)| > |lc|`` then ``p(0) p - lc p*`` has
    degree < d and the same zeros inside as p. Both follow from Rouche on
    the unit circle, where ``|p| = |p*|``. Equal moduli is the singular case.
    """
    cur = list(coeffs)
    inside = 0
    while True:
        while cur and cur[-1] == 0:
            cur.pop()
        if not cur:
            return None
        d = len(cur) - 1
        if d == 0:
            return inside
        a0, an = cur[0], cur[-1]
        if a0 == 0:
            # zero at the origin
            inside += 1
            cur = cur[1:]
            continue
        rev = cur[::-1]
        if abs(an) > abs(a0):
            q = [an * c - a0 * r for c, r in zip(cur, rev)]
            inside += 1
            cur = q[1:]
        elif abs(a0) > abs(an):
            q = [a0 * c - an * r for c, r in zip(cur, rev)]
            cur = q[:-1]
        else:
            return None


def count_in_disk(p: IntPolynomial, radius: Fraction = Fraction(1)) -> int:
    """Number of zeros (with multiplicity) of ``p`` in ``|z| < radius``.

    Raises ``BoundaryRootError`` if ``p`` has a zero on the circle.
    """
    radius = Fraction(radius)
    if not p:
        raise ValueError("zero polynomial")
    scaled = [Fraction(c) * radius ** i for i, c in enumerate(p.coeffs)]
    sc = from_fractions(scaled)
    rev = IntPolynomial(reversed(sc.coeffs))
    g = sc.gcd(rev)
    if g.degree >= 1:
        # zeros symmetric in the circle; test whether some lie on it
        if _has_unit_circle_root(g):
            raise BoundaryRootError(f"{p} has a zero on |z| = {radius}")
    count = _schur_count([Fraction(c) for c in sc.coeffs])
    if count is not None:
        return count
    # singular Schur-Cohn case without circle zeros: squeeze the radius
    j = 8
    while j < 4096:
        eps = Fraction(1, 1 << j)
        inner = _schur_count([Fraction(c) * (1 - eps) ** i for i, c in enumerate(sc.coeffs)])
        outer = _schur_count([Fraction(c) * (1 + eps) ** i for i, c in enumerate(sc.coeffs)])
        if inner is not None and inner == outer:
            return inner
        j *= 2
    raise ArithmeticError("disk count did not stabilise")  # pragma: no cover


def _has_unit_circle_root(g: IntPolynomial) -> bool:
    """True iff the (self-reciprocal up to sign) factor g has a zero with |z| = 1."""
    # z on the unit circle, z = e^{it}: a self-reciprocal g(z) = z^{d/2} h(z + 1/z)
    # has unit-circle zeros iff h has real roots in [-2, 2]. Work with the
    # squarefree part and fall back to a direct sign-change count.
    from .poly import count_roots_closed

    g = g.squarefree()
    if g.sign_at(1) == 0 or g.sign_at(-1) == 0:
        return True
    d = g.degree
    rev = IntPolynomial(reversed(g.coeffs))
    if rev.primitive() == g.primitive() or rev.primitive() == (-g).primitive():
        if d % 2:
            # odd self-reciprocal polynomials vanish at 1 or -1, handled above
            return True
        h = _trace_polynomial(g)
        return count_roots_closed(h, -2, 2) > 0
    # not self-reciprocal: remove a self-reciprocal core if present
    core = g.gcd(rev)
    if core.degree >= 1 and core.degree < g.degree:
        return _has_unit_circle_root(core)
    return False


def _trace_polynomial(g: IntPolynomial) -> IntPolynomial:
    """h with ``g(z) = z**(d/2) * h(z + 1/z)`` for even self-reciprocal g."""
    d = g.degree
    half = d // 2
    c = [Fraction(v) for v in g.coeffs]
    # express sum_{i} c_i z^{i-half} = c_half + sum_{j>=1} c_{half+j} (z^j + z^-j)
    # using z^j + z^-j = T_j(w) with w = z + 1/z (Dickson-type recursion)
    t = [IntPolynomial((2,)), IntPolynomial((0, 1))]
    for j in range(2, half + 1):
        t.append(IntPolynomial((0, 1)) * t[-1] - t[-2])
    h = IntPolynomial((int(c[half]),))
    for j in range(1, half + 1):
        h = h + t[j].scale(int(c[half + j]))
    return h


# Pisot detection ---------------------------------------------------------


@dataclass
class PisotResult:
    is_pisot: bool
    boundary: bool = False
    inside: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.is_pisot


def pisot_test(minpoly: IntPolynomial, root=None) -> PisotResult:
    p = minpoly.primitive()
    if p.degree < 1:
        return PisotResult(False, reason="constant polynomial")
    if abs(p.lc) != 1:
        return PisotResult(False, reason="not an algebraic integer")
    if p.degree == 1:
        return PisotResult(True, inside=0, reason="rational integer")
    try:
        inside = count_in_disk(p)
    except BoundaryRootError:
        return PisotResult(False, boundary=True, reason="conjugate on the unit circle")
    ok = inside == p.degree - 1
    return PisotResult(ok, inside=inside, reason=f"{inside} of {p.degree - 1} conjugates inside the unit disk")


def is_pisot(minpoly: IntPolynomial, root=None) -> bool:
    """True iff the root > 1 of the monic irreducible ``minpoly`` is a Pisot number."""
    return pisot_test(minpoly, root).is_pisot


# classification ------------------------------------------------------------


@dataclass
class Verdict:
    kind: str  # pisot | dim-one-by-degree | dim-one-by-pisot-root | inconclusive
    k: Optional[int] = None
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "k": None if self.k is None else str(self.k), "evidence": self.evidence}


@dataclass
class ClassificationReport:
    minpoly: IntPolynomial
    root: object
    verdicts: list[Verdict]

    @property
    def dim_one(self) -> bool:
        return any(v.kind.startswith("dim-one") for v in self.verdicts)

    def kinds(self) -> set[str]:
        return {v.kind for v in self.verdicts}

    @property
    def entropy_exact(self) -> Optional[int]:
        """H_beta when a power of beta equals 2."""
        for v in self.verdicts:
            if "entropy_exact" in v.evidence:
                return int(v.evidence["entropy_exact"])
        return None

    def to_json(self) -> dict:
        d = {
            "subject": {"minpoly": [str(c) for c in self.minpoly.coeffs], "root": self.root.to_json()},
            "verdicts": [v.to_json() for v in self.verdicts],
            "dim_one": self.dim_one,
        }
        if self.entropy_exact is not None:
            d["entropy_exact"] = str(self.entropy_exact)
        return d


def classify(field_, k_max: int = DEFAULT_K_MAX) -> ClassificationReport:
    """Classify a root in (1, 2) of an irreducible integer polynomial."""
    from .algebraic import compare, AlgebraicReal

    minpoly, root = field_.minpoly, field_.root
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    verdicts: list[Verdict] = []
    pis = pisot_test(minpoly, root)
    if pis.is_pisot:
        verdicts.append(Verdict("pisot", evidence={"inside_unit_disk": str(pis.inside), "degree": str(minpoly.degree)}))
    two = AlgebraicReal.from_rational(2)
    for k in range(2, k_max + 1):
        rd = relative_degree(minpoly, k)
        if rd != k:
            continue
        mk = power_minpoly(minpoly, k)
        ev = {
            "relative_degree": str(rd),
            "power_minpoly": [str(c) for c in mk.coeffs],
            "entropy_lower": "1",
        }
        if mk.primitive() == IntPolynomial((-2, 1)):
            # b**k = 2 exactly, so H_b = k * H_2 = k
            ev["entropy_exact"] = str(k)
        verdicts.append(Verdict("dim-one-by-degree", k=k, evidence=ev))
    if not pis.is_pisot:
        for k in range(2, k_max + 1):
            bk = root.power(k)
            if compare(bk, two) >= 0:
                break
            mk = power_minpoly(minpoly, k)
            if is_pisot(mk, bk):
                verdicts.append(
                    Verdict(
                        "dim-one-by-pisot-root",
                        k=k,
                        evidence={"power_minpoly": [str(c) for c in mk.coeffs], "entropy_lower": "1"},
                    )
                )
                break
    if not verdicts:
        verdicts.append(Verdict("inconclusive", evidence={"k_max": k_max}))
    return ClassificationReport(minpoly, root, verdicts)
