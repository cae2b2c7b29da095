import json
from fractions import Fraction

import pytest

from garsia.cli import EXIT_OK, EXIT_PENDING, EXIT_USAGE, EXIT_VERIFY, EXIT_RESOURCE, main, parse_beta, parse_coeffs


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_certify_half(capsys, tmp_path):
    f = tmp_path / "c.json"
    code, _, err = run(capsys, "certify", "--target", "1/2", "--n-max", "1", "-q", "-o", str(f))
    assert code == EXIT_OK
    assert json.loads(f.read_text())["status"] == "complete"
    code, out, _ = run(capsys, "verify", str(f), "-q")
    assert code == EXIT_OK and out.strip() == "ACCEPTED"


def test_certify_is_byte_identical(capsys, tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        f = tmp_path / name
        assert run(capsys, "certify", "--target", "0.82", "--n-max", "3", "-q", "-o", str(f))[0] == EXIT_PENDING
        outs.append(f.read_bytes())
    assert outs[0] == outs[1]


def test_csv_format(capsys):
    code, out, _ = run(capsys, "certify", "--target", "1/2", "--n-max", "1", "-q", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("index,kind")


def test_verify_tampered(capsys, tmp_path):
    f = tmp_path / "c.json"
    run(capsys, "window-certify", "--n", "6", "--window", "1.86", "1.88", "--target", "0.82", "-q", "-o", str(f))
    d = json.loads(f.read_text())
    d["cells"][1]["bound"] = "1"
    f.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", str(f), "-q")
    assert code == EXIT_VERIFY
    assert "REJECTED" in out and "cell 1:" in out


def test_verify_unreadable(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    assert run(capsys, "verify", str(f), "-q")[0] == EXIT_VERIFY


def test_window_certify_pending_exit(capsys):
    code, out, _ = run(capsys, "window-certify", "--n", "4", "--fixed", "--window", "1.86", "1.88", "--target", "0.82", "-q")
    assert code == EXIT_PENDING
    assert json.loads(out)["status"] == "pending"


def test_window_certify_escalation_proves(capsys):
    code, _, _ = run(capsys, "window-certify", "--n", "9", "--window", "1.86", "1.88", "--target", "0.82", "-q")
    assert code == EXIT_OK


def test_mn(capsys):
    code, out, _ = run(capsys, "mn", "--beta", "19/10", "--n", "2")
    assert code == EXIT_OK and "m = 2" in out
    code, out, _ = run(capsys, "mn", "--beta", "minpoly:1,-1,-1", "--n", "2")
    assert code == EXIT_OK and out.strip() == "m = 3"


@pytest.mark.parametrize(
    "argv",
    [
        ["mn", "--beta", "1.9", "--n", "2"],
        ["mn", "--beta", "5/2", "--n", "2"],
        ["mn", "--beta", "minpoly:1,x", "--n", "2"],
        ["mn", "--beta", "minpoly:1,0,-3,0,1", "--n", "2", "--isolation", "0", "2"],
        ["certify", "--target", "2", "--n-max", "1"],
        ["certify", "--target", "1/2", "--n-max", "0"],
        ["window-certify", "--n", "2", "--window", "1.9", "1.8", "--target", "0.8"],
        ["transitions", "--n", "2", "--window", "0.5", "1.5"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err.startswith("error:")


def test_transitions(capsys):
    code, out, _ = run(capsys, "transitions", "--n", "2", "--window", "1.5", "1.7")
    assert code == EXIT_OK and out.startswith("1 transition points")
    code, out, _ = run(capsys, "transitions", "--n", "2", "--window", "1.5", "1.7", "--json")
    assert len(json.loads(out)["points"]) == 1


def test_entropy(capsys):
    code, out, _ = run(capsys, "entropy", "--beta", "minpoly:1,-1,-1", "--n", "3", "8", "-q")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[1].split(",")[:3] == ["3", "7", "2"]


def test_entropy_resource_limit(capsys):
    code, _, err = run(capsys, "entropy", "--beta", "minpoly:1,0,-3", "--n", "20", "--max-keys", "100", "-q")
    assert code == EXIT_RESOURCE and "resource limit" in err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--minpoly", "1,0,-2")
    d = json.loads(out)
    assert code == EXIT_OK and d["dim_one"] and d["entropy_exact"] == "2"


def test_parsers():
    assert parse_coeffs("1, -1, -1").coeffs == (-1, -1, 1)
    assert parse_beta("3/2") == (None, Fraction(3, 2))
    poly, root = parse_beta("minpoly:1,-1,-1")
    assert poly.degree == 2 and 1 < root.approx() < 2
