"""Exact multiplicities p_n(x) and the upper bounds H_n(beta) / (n log beta).

With ``z_n = beta**n * sum_{k<=n} a_k beta**-k = beta * z_{n-1} + a_n`` two
words collide exactly when their ``z_n`` agree. Each ``z_n`` is stored as
its coordinate vector in the power basis ``1, beta, ..., beta**(r-1)``
modulo the (irreducible) minimal polynomial, so equality of field elements
is equality of vectors. The frontier keeps one entry per distinct value
with its multiplicity.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional

import numpy as np

from .algebraic import AlgebraicReal, sturm_isolate
from .fields import BoundaryRootError, count_in_disk
from .poly import IntPolynomial
from .rational import RationalInterval, floor_dyadic, log_enclosure

DEFAULT_MAX_KEYS = 50_000_000
_INT64_SAFE = 1 << 62


class ResourceLimitError(RuntimeError):
    """The frontier outgrew the configured memory budget."""


@dataclass
class AlgebraicField:
    minpoly: IntPolynomial
    root: AlgebraicReal

    def __post_init__(self):
        p = self.minpoly.primitive()
        if p.degree < 1:
            raise ValueError("minimal polynomial must be nonconstant")
        self.minpoly = p

    @classmethod
    def from_minpoly(cls, minpoly: IntPolynomial, window: RationalInterval = RationalInterval(1, 2)) -> AlgebraicField:
        """The field generated by the unique root of ``minpoly`` strictly inside ``window``."""
        roots = sturm_isolate(minpoly, window)
        if len(roots) != 1:
            raise ValueError(f"{minpoly} has {len(roots)} roots in {window}, expected exactly one")
        return cls(minpoly, roots[0])

    @property
    def degree(self) -> int:
        return self.minpoly.degree


@dataclass
class EntropyTable:
    n: int
    distinct: int
    histogram: dict[int, int]  # multiplicity -> number of distinct values with it
    h_nats: RationalInterval  # enclosure of H_n(beta) in nats
    keys: Optional[list] = field(default=None, repr=False)
    counts: Optional[list] = field(default=None, repr=False)
    ratio_enclosure: Optional[RationalInterval] = None

    @property
    def max_multiplicity(self) -> int:
        return max(self.histogram)

    @property
    def total(self) -> int:
        return sum(c * k for c, k in self.histogram.items())

    @property
    def multiplicities(self) -> dict[tuple, int]:
        if self.keys is None:
            raise ValueError("table was built without keeping its keys")
        return dict(zip(self.keys, self.counts))


# frontier steps -----------------------------------------------------------------


class _Frontier:
    """Distinct values of z_n with counts; numpy when the polynomial is monic."""

    def __init__(self, f: IntPolynomial, max_keys: int):
        self.f = f
        self.r = f.degree
        self.max_keys = max_keys
        self.n = 0
        self.fast = abs(f.lc) == 1
        if self.fast:
            # beta**r = -lc * sum_{j<r} f_j beta**j for lc = +-1
            self.red = np.array([-f.lc * c for c in f.coeffs[: self.r]], dtype=np.int64)
            self.keys = np.zeros((1, self.r), dtype=np.int64)
            self.counts = np.ones(1, dtype=np.int64)
        else:
            self.red = [Fraction(-c, f.lc) for c in f.coeffs[: self.r]]
            self.table: dict[tuple, int] = {tuple(Fraction(0) for _ in range(self.r)): 1}

    def step(self) -> None:
        self.n += 1
        if self.fast and self.n < 62 and self._fits():
            self._step_numpy()
        else:
            self._to_python()
            self._step_python()
        if self.size > self.max_keys:
            raise ResourceLimitError(f"frontier has {self.size} values at n = {self.n}, budget {self.max_keys}")

    @property
    def size(self) -> int:
        return len(self.counts) if self.fast else len(self.table)

    def _fits(self) -> bool:
        if not len(self.keys):
            return True
        m = int(np.abs(self.keys).max())
        return (m + 1) * (int(np.abs(self.red).sum()) + 2) < _INT64_SAFE

    def _step_numpy(self) -> None:
        k = self.keys
        top = k[:, -1:]
        shifted = np.zeros_like(k)
        shifted[:, 1:] = k[:, :-1]
        z = shifted + top * self.red
        one = z.copy()
        one[:, 0] += 1
        keys = np.concatenate([z, one])
        counts = np.concatenate([self.counts, self.counts])
        self.keys, self.counts = _merge_rows(keys, counts)

    def _to_python(self) -> None:
        if not self.fast:
            return
        red = [int(c) for c in self.red]
        self.red = [Fraction(c) for c in red]
        self.table = {tuple(int(v) for v in row): int(c) for row, c in zip(self.keys, self.counts)}
        self.fast = False
        self.keys = self.counts = None

    def _step_python(self) -> None:
        out: dict[tuple, int] = {}
        red = self.red
        for key, c in self.table.items():
            t = key[-1]
            z = [t * red[0]] + [key[j - 1] + t * red[j] for j in range(1, self.r)]
            for a in (0, 1):
                zz = list(z)
                zz[0] += a
                kk = tuple(zz)
                out[kk] = out.get(kk, 0) + c
        self.table = out

    def histogram(self) -> dict[int, int]:
        if self.fast:
            vals, num = np.unique(self.counts, return_counts=True)
            return {int(v): int(k) for v, k in zip(vals, num)}
        hist: dict[int, int] = {}
        for c in self.table.values():
            hist[c] = hist.get(c, 0) + 1
        return hist

    def items(self) -> tuple[list, list]:
        if self.fast:
            return [tuple(int(v) for v in row) for row in self.keys], [int(c) for c in self.counts]
        keys = sorted(self.table)
        return keys, [self.table[k] for k in keys]


def _merge_rows(keys: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum counts over identical rows; output sorted by row."""
    lo = keys.min(axis=0)
    span = keys.max(axis=0) - lo + 1
    total = 1
    for s in span:
        total *= int(s)
    if total < _INT64_SAFE:
        strides = np.ones(len(span), dtype=np.int64)
        for j in range(len(span) - 2, -1, -1):
            strides[j] = strides[j + 1] * span[j + 1]
        flat = (keys - lo) @ strides
        uniq, inv = np.unique(flat, return_inverse=True)
        first = np.zeros(len(uniq), dtype=np.int64)
        first[inv] = np.arange(len(flat))
        out_keys = keys[first]
    else:
        out_keys, inv = np.unique(keys, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
    out_counts = np.zeros(len(out_keys), dtype=np.int64)
    np.add.at(out_counts, inv, counts)
    return out_keys, out_counts


def _entropy_nats(n: int, hist: dict[int, int], precision_bits: int) -> RationalInterval:
    """Enclosure of ``n log 2 - 2**-n * sum p log p``."""
    p = precision_bits + 16
    ln2 = log_enclosure(RationalInterval(2), p)
    s_lo = s_hi = Fraction(0)
    for c, k in hist.items():
        if c == 1:
            continue
        e = log_enclosure(RationalInterval(c), p)
        s_lo += k * c * e.lo
        s_hi += k * c * e.hi
    scale = Fraction(1, 1 << n)
    return RationalInterval(n * ln2.lo - s_hi * scale, n * ln2.hi - s_lo * scale)


def multiplicity_tables(
    field_: AlgebraicField,
    n_values: Iterable[int],
    precision_bits: int = 64,
    keep_keys: bool = False,
    max_keys: int = DEFAULT_MAX_KEYS,
) -> Iterator[EntropyTable]:
    """Tables at each requested n, sharing one incremental frontier."""
    wanted = sorted(set(n_values))
    if not wanted or wanted[0] < 1:
        raise ValueError("n must be >= 1")
    fr = _Frontier(field_.minpoly, max_keys)
    for n in range(1, wanted[-1] + 1):
        fr.step()
        if n in wanted:
            hist = fr.histogram()
            keys = counts = None
            if keep_keys:
                keys, counts = fr.items()
            yield EntropyTable(n, fr.size, hist, _entropy_nats(n, hist, precision_bits), keys, counts)


def multiplicity_table(
    field_: AlgebraicField, n: int, precision_bits: int = 64, keep_keys: bool = True, max_keys: int = DEFAULT_MAX_KEYS
) -> EntropyTable:
    """Exact multiset of p_n(x) over the distinct partial sums of length n."""
    return next(multiplicity_tables(field_, [n], precision_bits, keep_keys, max_keys))


def entropy_ratio(table: EntropyTable, field_: AlgebraicField, precision_bits: int = 64) -> RationalInterval:
    """Enclosure of ``H_n(beta) / (n log beta)``, an upper bound for H_beta."""
    root = field_.root
    bits = precision_bits + 16
    if root.is_rational:
        b_lo = b_hi = root.lo
    else:
        b_lo, b_hi = root.lower_dyadic(bits), root.upper_dyadic(bits)
    ln_lo = log_enclosure(RationalInterval(b_lo), bits).lo
    ln_hi = log_enclosure(RationalInterval(b_hi), bits).hi
    if ln_lo <= 0:
        raise ValueError("beta must exceed 1")
    h = table.h_nats
    n = table.n
    lo = floor_dyadic(h.lo / (n * ln_hi), precision_bits)
    hi = -floor_dyadic(-h.hi / (n * ln_lo), precision_bits)
    table.ratio_enclosure = RationalInterval(lo, hi)
    return table.ratio_enclosure


# non-height-one shortcut -----------------------------------------------------------


@dataclass
class ShortcutReport:
    bound: Optional[Fraction]
    reason: str


def height_one_screen(minpoly: IntPolynomial) -> Optional[str]:
    """A reason why no {-1, 0, 1} polynomial can vanish at the roots of ``minpoly``, if one is found.

    A root of such a polynomial is a root of a factor with leading and
    constant coefficients +-1, so it is an algebraic unit, and Cauchy's
    bound puts every conjugate in ``1/2 < |z| < 2``.
    """
    p = minpoly.primitive()
    if p.degree < 1:
        return "constant polynomial"
    if abs(p.lc) != 1:
        return "not an algebraic integer"
    if abs(p.coeffs[0]) != 1:
        return "not an algebraic unit"
    try:
        if count_in_disk(p, Fraction(2)) < p.degree:
            return "a conjugate has modulus >= 2"
    except BoundaryRootError:
        return "a conjugate has modulus 2"
    try:
        if count_in_disk(p, Fraction(1, 2)) > 0:
            return "a conjugate has modulus < 1/2"
    except BoundaryRootError:
        return "a conjugate has modulus 1/2"
    return None


def collision_depth(field_: AlgebraicField, depth: int) -> Optional[int]:
    """Least n <= depth with two length-n words summing to the same value, if any."""
    fr = _Frontier(field_.minpoly, DEFAULT_MAX_KEYS)
    for n in range(1, depth + 1):
        fr.step()
        if fr.size < 1 << n:
            return n
    return None


def non_height_one_report(field_: AlgebraicField, precision_bits: int = 64, depth: int = 12) -> ShortcutReport:
    reason = height_one_screen(field_.minpoly)
    if reason is None:
        hit = collision_depth(field_, depth)
        if hit is not None:
            return ShortcutReport(None, f"partial sums collide at n = {hit}")
        return ShortcutReport(None, f"inconclusive: no screen applies, no collision up to n = {depth}")
    root = field_.root
    bits = precision_bits + 16
    b = root.lo if root.is_rational else root.upper_dyadic(bits)
    ln2 = log_enclosure(RationalInterval(2), bits).lo
    bound = floor_dyadic(ln2 / log_enclosure(RationalInterval(b), bits).hi, precision_bits)
    return ShortcutReport(bound, reason)


def non_height_one_shortcut(field_: AlgebraicField, precision_bits: int = 64) -> Optional[Fraction]:
    """Certified lower bound on ``log 2 / log beta`` when beta provably has no height-one relation."""
    return non_height_one_report(field_, precision_bits).bound


# output ---------------------------------------------------------------------------------


def entropy_csv(tables: Iterable[EntropyTable]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "distinct", "max_multiplicity", "ratio_lo", "ratio_hi", "ratio_lo_approx", "ratio_hi_approx"])
    for t in tables:
        r = t.ratio_enclosure
        w.writerow([
            t.n,
            t.distinct,
            t.max_multiplicity,
            "" if r is None else f"{r.lo.numerator}/{r.lo.denominator}",
            "" if r is None else f"{r.hi.numerator}/{r.hi.denominator}",
            "" if r is None else f"{float(r.lo):.10f}",
            "" if r is None else f"{float(r.hi):.10f}",
        ])
    return buf.getvalue()
