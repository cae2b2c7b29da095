"""One test per acceptance criterion; each prints a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also collected into the terminal summary.
"""

import random
import time
from fractions import Fraction

import pytest

from garsia.algebraic import AlgebraicReal, Extent, compare, sign_at
from garsia.certify import Certificate, global_certify, verify_certificate, window_certificate, DIRECT
from garsia.cli import EXIT_OK, main
from garsia.entropy import AlgebraicField, entropy_ratio, multiplicity_tables
from garsia.fields import classify
from garsia.overlap import brute_force_overlap, max_overlap
from garsia.poly import IntPolynomial
from garsia.rational import RationalInterval
from garsia.transitions import isolate_transitions

from conftest import ACCEPTANCE_LINES

T82 = Fraction(82, 100)


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def timed(fn):
    start = time.monotonic()
    value = fn()
    return value, time.monotonic() - start


def test_criterion_01_half_certificate(capsys, tmp_path):
    path = tmp_path / "half.json"
    code, secs = timed(lambda: main(["certify", "--target", "1/2", "--n-max", "1", "-q", "-o", str(path)]))
    cert = Certificate.loads(path.read_text())
    verdict = verify_certificate(cert)
    ok = code == EXIT_OK and cert.complete and verdict.accepted and secs < 5
    record(1, ok, f"certify --target 1/2 --n-max 1: exit {code}, {verdict.summary()}, {secs:.2f}s (limit 5s)")


def test_criterion_02_sqrt2_band():
    cert = global_certify(Fraction(1, 2), 1)
    sqrt2 = AlgebraicReal.from_rational(2).kth_root(2)
    anchor = AlgebraicReal.from_rational(Fraction(763, 500))
    band = [
        c
        for c in cert.cells
        if not c.extent.is_point and compare(c.extent.lo, sqrt2) >= 0 and compare(c.extent.hi, anchor) <= 0
    ]
    ok = bool(band) and all(c.bound >= T82 and Fraction(8199, 10000) < c.bound < Fraction(8201, 10000) for c in band)
    vals = ", ".join(f"{float(c.bound):.6f}" for c in band)
    record(2, ok, f"(sqrt2, 1.526] bounds [{vals}] >= 0.82 and in (0.8199, 0.8201)")


@pytest.mark.xfail(
    strict=True,
    reason="m_4 = 3 on (1.86, 1.86676...), so n <= 4 gives at most about 0.74 there; n = 9 proves the window",
)
def test_criterion_03_window_186_188_n4():
    cert, secs = timed(
        lambda: window_certificate(RationalInterval(Fraction(186, 100), Fraction(188, 100)), T82, 4)
    )
    worst = min(c.bound for c in cert.cells)
    ok = cert.complete and verify_certificate(cert).valid and secs < 10
    record(3, ok, f"window-certify n=4 (1.86, 1.88): {len(cert.pending())} pending, min bound {float(worst):.4f}, {secs:.2f}s")


@pytest.mark.xfail(
    strict=True,
    reason="the golden ratio lies in (1.526, 1.7) with m_9 = 18 (bound 0.773); it first clears 0.82 at n = 13",
)
def test_criterion_04_window_1526_17_n9():
    cert, secs = timed(
        lambda: window_certificate(RationalInterval(Fraction(1526, 1000), Fraction(17, 10)), T82, 9)
    )
    pend = [cert.cells[i] for i in cert.pending()]
    desc = ", ".join(f"{c.extent!r} bound {float(c.bound):.4f}" for c in pend)
    ok = cert.complete and secs < 1800
    record(4, ok, f"window-certify n=9 (1.526, 1.7): {len(pend)} pending [{desc}], {secs:.1f}s (limit 1800s)")


def test_criterion_05_sweep_equals_brute_force():
    rng = random.Random(5)
    betas = [Fraction(rng.randint(1001, 1999), 1000) for _ in range(200)]
    bad = [(n, b) for b in betas for n in range(1, 7) if max_overlap(n, b)[0] != brute_force_overlap(n, b)]
    record(5, not bad, f"max_overlap == brute force for n <= 6 at 200 betas; mismatches {len(bad)}")


def test_criterion_06_n1_no_transitions():
    t = isolate_transitions(1, RationalInterval(Fraction(101, 100), Fraction(199, 100)))
    samples = [Fraction(101 + j, 100) for j in range(99)]
    ms = {max_overlap(1, b)[0] for b in samples}
    ok = len(t) == 0 and ms == {2}
    record(6, ok, f"isolate_transitions(1, (1.01, 1.99)) has {len(t)} points; m_1 values {sorted(ms)}")


def test_criterion_07_golden_transition():
    t = isolate_transitions(2, RationalInterval(Fraction(3, 2), Fraction(17, 10)))
    golden = IntPolynomial.from_high([1, -1, -1])
    ok = len(t) == 1 and sign_at(golden, t.points[0]) == 0
    approx = [f"{p.approx(12):.12f}" for p in t.points]
    record(7, ok, f"isolate_transitions(2, (1.5, 1.7)) = {approx}, root of x^2-x-1: {ok}")


def test_criterion_08_golden_entropy():
    f = AlgebraicField.from_minpoly(IntPolynomial.from_high([1, -1, -1]))

    def run():
        out = []
        for t in multiplicity_tables(f, [8, 16, 32]):
            out.append(entropy_ratio(t, f))
        return out

    encl, secs = timed(run)
    lows = [e.lo for e in encl]
    ok = all(v >= Fraction("0.9957") for v in lows) and lows[0] >= lows[1] >= lows[2] and secs < 60
    vals = ", ".join(f"{float(v):.6f}" for v in lows)
    record(8, ok, f"golden ratio ratio lower ends n=8,16,32: [{vals}] >= 0.9957, non-increasing, {secs:.1f}s (limit 60s)")


def test_criterion_09_classification():
    def rep(coeffs):
        return classify(AlgebraicField.from_minpoly(IntPolynomial.from_high(coeffs)))

    a = rep([1, 0, -1, 0, -1])
    b = rep([1, -1, -1])
    c = rep([1, 0, -2])
    ok_a = {"dim-one-by-degree", "dim-one-by-pisot-root"} <= a.kinds()
    ok_b = "pisot" in b.kinds() and not b.dim_one
    ok_c = c.dim_one and c.entropy_exact == 2
    record(
        9,
        ok_a and ok_b and ok_c,
        f"x^4-x^2-1 {sorted(a.kinds())}; x^2-x-1 {sorted(b.kinds())}; x^2-2 dim_one={c.dim_one} H={c.entropy_exact}",
    )


def _tampers(cert: Certificate):
    i = next(j for j, c in enumerate(cert.cells) if c.derivation.kind == DIRECT and c.m_value > 2)

    lowered = Certificate.loads(cert.dumps())
    lowered.cells[i].bound -= Fraction(1, 1 << 30)

    gap = Certificate.loads(cert.dumps())
    del gap.cells[i]

    wrong_m = Certificate.loads(cert.dumps())
    wrong_m.cells[i].m_value += 1
    return i, [
        ("lowered bound", lowered, "differs from re-derived"),
        ("deleted cell", gap, f"gap between cells {i - 1} and {i}"),
        ("wrong m_value", wrong_m, "m_value"),
    ]


def test_criterion_10_round_trip_and_tampers():
    certs = {
        "global 1/2 n<=1": global_certify(Fraction(1, 2), 1),
        "global 0.82 n<=4": global_certify(T82, 4),
        "window (1.86, 1.88) n<=9": window_certificate(RationalInterval(Fraction(186, 100), Fraction(188, 100)), T82, 9),
    }
    round_trip = []
    for name, c in certs.items():
        text = c.dumps()
        back = Certificate.loads(text)
        v = verify_certificate(back)
        round_trip.append(back.dumps() == text and v.valid and v.pending == c.pending())
    i, tampers = _tampers(certs["global 0.82 n<=4"])
    caught = []
    for name, t, needle in tampers:
        v = verify_certificate(t)
        caught.append(not v.valid and any(s.cell == i and needle in s.message for s in v.issues))
    ok = all(round_trip) and all(caught)
    record(10, ok, f"round trips {sum(round_trip)}/{len(round_trip)} verified; tampers rejected at cell {i}: {sum(caught)}/3")


def _n13_region_check(cert: Certificate):
    """Pending cells on (1.7, 2) lie in the two residual windows; pending cells below are their power preimages."""
    windows = [(Fraction("1.8391"), Fraction("1.8395")), (Fraction("1.9274"), Fraction("1.9277"))]
    seventeen = AlgebraicReal.from_rational(Fraction(17, 10))

    def inside(e: Extent, lo, hi):
        return compare(e.lo, AlgebraicReal.from_rational(lo)) >= 0 and compare(e.hi, AlgebraicReal.from_rational(hi)) <= 0

    pending = cert.pending()
    upper = [i for i in pending if compare(cert.cells[i].extent.lo, seventeen) >= 0]
    lower = [i for i in pending if i not in set(upper)]
    upper_ok = all(any(inside(cert.cells[i].extent, lo, hi) for lo, hi in windows) for i in upper)
    pend_set = set(pending)
    lower_ok = all(
        cert.cells[i].derivation.sources and set(cert.cells[i].derivation.sources) & pend_set and
        all(compare(cert.cells[j].extent.lo, seventeen) >= 0 for j in cert.cells[i].derivation.sources if j in pend_set)
        for i in lower
    )
    return upper_ok and lower_ok, len(upper), len(lower)


@pytest.mark.slow
def test_criterion_11_n13_pending_region():
    cert, secs = timed(lambda: global_certify(T82, 13))
    ok, n_up, n_low = _n13_region_check(cert)
    record(
        11,
        ok,
        f"n_max = 13: {n_up} pending cells in (1.7, 2), all within [1.8391, 1.8395] or [1.9274, 1.9277]; "
        f"{n_low} pending cells below are their power preimages; {secs:.0f}s",
    )
