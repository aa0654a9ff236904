import json

import pytest

from hyperslice.cli import main
from hyperslice.qmat import QMatN, qmatn_identity
from hyperslice.quat import Quaternion, ZERO


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_left_regular_example(capsys):
    code, out, _ = run(
        capsys, "check", "--expr", "inv(q1)*q2", "--n", "2", "--samples", "100", "--seed", "7"
    )
    assert code == 0
    assert "LeftRegular" in out


def test_check_json_schema_and_byte_stability(capsys):
    args = ["check", "--expr", "inv(q1)*q2", "--n", "2", "--samples", "50", "--seed", "7", "--json"]
    code, first, _ = run(capsys, *args)
    assert code == 0
    code, second, _ = run(capsys, *args)
    assert first == second
    data = json.loads(first)
    assert data["schema"] == "hyperslice/report-v1"
    assert data["command"] == "check"
    assert data["seed"] == 7
    assert data["results"]["classification"] == "LeftRegular"
    assert data["wall_time"] is None


def test_check_failing_side_exits_one(capsys):
    code, out, _ = run(
        capsys, "check", "--expr", "q2*q1", "--side", "left", "--samples", "40", "--seed", "1"
    )
    assert code == 1
    code, out, _ = run(
        capsys, "check", "--expr", "q2*q1", "--side", "right", "--samples", "40", "--seed", "1"
    )
    assert code == 0


def test_check_neither_exits_one(capsys):
    code, out, _ = run(capsys, "check", "--expr", "conj(q1)", "--samples", "30", "--seed", "2")
    assert code == 1
    assert "Neither" in out


def test_check_bad_expression_exits_two(capsys):
    code, _, err = run(capsys, "check", "--expr", "q1 ++ q2")
    assert code == 2
    assert "offset" in err


def test_env_seed_fallback(capsys, monkeypatch):
    argv = ["check", "--expr", "q1^2", "--samples", "20", "--json"]
    monkeypatch.setenv("HYPERSLICE_SEED", "7")
    _, with_env, _ = run(capsys, *argv)
    monkeypatch.delenv("HYPERSLICE_SEED")
    _, with_default, _ = run(capsys, *argv)
    assert json.loads(with_env)["seed"] == 7
    assert json.loads(with_default)["seed"] == 0


def test_atlas_grassmann_counterexample(capsys):
    code, out, _ = run(capsys, "atlas", "--model", "grassmann24", "--samples", "25", "--json")
    assert code == 0  # expected-failure model: exhibiting Neither is success
    data = json.loads(out)
    assert data["results"]["has_neither"] is True
    labels = [v["classification"] for v in data["results"]["verdicts"]]
    assert "Neither" in labels


def test_atlas_hp(capsys):
    code, out, _ = run(
        capsys,
        "atlas", "--model", "hp", "--dim", "2",
        "--samples", "30", "--classify-samples", "8", "--json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["results"]["passed"] is True


def test_det_identity(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(qmatn_identity(2).to_json()))
    code, out, _ = run(capsys, "det", "--file", str(path))
    assert code == 0
    assert float(out.strip()) == pytest.approx(1.0, abs=1e-12)


def test_det_malformed_file_exits_two(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "det", "--file", str(path))
    assert code == 2
    assert err


def test_inv_roundtrip(capsys, tmp_path):
    m = QMatN(
        2,
        (
            (Quaternion(0.0, 2.0, 0.0, 0.0), ZERO),
            (ZERO, Quaternion(1.0, 0.0, 1.0, 0.0)),
        ),
    )
    path = tmp_path / "m.json"
    path.write_text(json.dumps(m.to_json()))
    code, out, _ = run(capsys, "inv", "--file", str(path), "--json")
    assert code == 0
    inv = QMatN.from_json(json.loads(out)["results"]["inverse"])
    prod = inv.rows[0][0] * m.rows[0][0]
    assert prod.isclose(Quaternion(1.0), tol=1e-10)


def test_inv_singular_exits_one(capsys, tmp_path):
    one = Quaternion(1.0)
    m = QMatN(2, ((one, one), (one, one)))
    path = tmp_path / "m.json"
    path.write_text(json.dumps(m.to_json()))
    code, _, err = run(capsys, "inv", "--file", str(path))
    assert code == 1


def test_console_script_installed():
    import shutil

    assert shutil.which("hyperslice") is not None
