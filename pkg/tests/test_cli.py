import io
import json

import numpy as np
import pytest

from kendallwalk import SymmetricPareto, SymmetricUniform
from kendallwalk.cli import main


def run(argv, capsys=None):
    out = io.StringIO()
    code = main(argv, stdout=out)
    return code, out.getvalue()


def table(text):
    lines = text.strip().splitlines()
    return lines[0].split(","), np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])


def test_transform_two_point():
    code, out = run(["transform", "--dist", "two-point:x=1.0", "--alpha", "1", "--t-grid", "0:2:5"])
    assert code == 0
    header, data = table(out)
    assert header == ["t", "transform", "G"]
    np.testing.assert_allclose(data[:, 1], np.clip(1 - data[:, 0], 0, None))
    np.testing.assert_allclose(data[1:, 2], np.clip(1 - 1 / data[1:, 0], 0, None))


@pytest.mark.parametrize("spec, dist, alpha", [("uniform", SymmetricUniform(), 1.0), ("pareto:p=3", SymmetricPareto(3.0), 1.5)])
def test_transform_invert_round_trip(tmp_path, spec, dist, alpha):
    code, out = run(["transform", "--dist", spec, "--alpha", str(alpha), "--t-grid", "0:5:20001"])
    assert code == 0
    path = tmp_path / "g.csv"
    path.write_text(out)
    code, out = run(["invert", "--transform", str(path), "--alpha", str(alpha)])
    assert code == 0
    header, data = table(out)
    assert header == ["t", "F"]
    assert np.max(np.abs(data[:, 1] - dist.cdf(data[:, 0]))) <= 1e-4


def test_invert_refuses_a_jump(tmp_path, capsys):
    _, out = run(["transform", "--dist", "two-point", "--alpha", "1", "--t-grid", "0:3:3001"])
    path = tmp_path / "g.csv"
    path.write_text(out)
    assert run(["invert", "--transform", str(path), "--alpha", "1"])[0] == 2
    assert "disagree" in capsys.readouterr().err


def test_outputs_are_lossless():
    _, out = run(["limit-cdf", "--alpha", "1", "--t-grid", "0.5:1:2"])
    _, data = table(out)
    assert data[1, 1] == 0.86787944117144233


def test_power_cdf_and_convolve():
    code, out = run(["power-cdf", "--dist", "two-point", "--n", "2", "--alpha", "1", "--t-grid=-2:2:5"])
    assert code == 0
    _, data = table(out)
    np.testing.assert_allclose(data[:, 1], [0.125, 0.5, 0.5, 0.5, 0.875], atol=1e-15)
    code, out = run(["convolve", "--x", "1", "--y", "2", "--alpha", "1", "--t-grid", "2:3:2"])
    assert table(out)[1][:, 1] == pytest.approx([0, 7 / 18])


def test_table_distribution(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("t,F\n" + "\n".join(f"{t},{0.5 + t / 2}" for t in np.linspace(0.01, 1, 100)))
    code, out = run(["power-cdf", "--dist", f"table:{p}", "--n", "2", "--alpha", "1", "--t-grid", "0.2:2:4"])
    assert code == 0
    _, data = table(out)
    _, ref = table(run(["power-cdf", "--dist", "uniform", "--n", "2", "--alpha", "1", "--t-grid", "0.2:2:4"])[1])
    np.testing.assert_allclose(data[:, 1], ref[:, 1], atol=1e-4)


def test_simulate_outputs(tmp_path, monkeypatch):
    paths = tmp_path / "p.csv"
    code, out = run(["simulate", "--dist", "uniform", "--alpha", "0.5", "--steps", "4", "--paths", "3", "--seed", "9", "--out", str(paths)])
    assert code == 0
    header, rec = table(out)
    assert header == ["path_id", "tau", "overshoot"] and rec.shape == (3, 3)
    header, vals = table(paths.read_text())
    assert header == ["path_id", "step", "value"] and vals.shape == (12, 3)
    for pid, tau, over in rec:
        if tau > 0:
            row = vals[(vals[:, 0] == pid) & (vals[:, 1] == tau)]
            assert row[0, 2] == over
    monkeypatch.setenv("KENDALL_SEED", "9")
    assert run(["simulate", "--dist", "uniform", "--alpha", "0.5", "--steps", "4", "--paths", "3"])[1] == out
    assert run(["simulate", "--dist", "uniform", "--alpha", "0.5", "--steps", "4", "--paths", "3", "--seed", "8"])[1] != out


def test_simulate_marginals(tmp_path):
    paths = tmp_path / "m.csv"
    code, _ = run(["simulate", "--dist", "two-point", "--alpha", "1", "--steps", "10", "--paths", "50", "--marginals", "2,5,10", "--out", str(paths), "--mode", "recursion"])
    assert code == 0
    _, vals = table(paths.read_text())
    assert sorted(set(vals[:, 1])) == [2, 5, 10] and vals.shape == (150, 3)


def test_hitting():
    code, out = run(["hitting", "--dist", "two-point", "--alpha", "1", "--t-grid", "0:4:5"])
    assert code == 0
    header, data = table(out)
    assert header == ["t", "overshoot_cdf", "phi_partial"]
    assert data[2, 1] == pytest.approx(7 / 9)
    np.testing.assert_allclose(data[:, 1], data[:, 2], atol=1e-15)


def test_wienerhopf():
    code, out = run(["wienerhopf", "--dist", "two-point", "--alpha", "1", "--s-grid", "0.5:1:2", "--u-grid", "0.25:0.5:2", "--paths", "50000", "--seed", "4"])
    assert code == 0
    header, data = table(out)
    assert header == ["s", "u", "H_closed", "H_mc", "stderr"]
    assert data[-1, 2] == pytest.approx(1 / 3)
    assert np.all(np.abs(data[:, 2] - data[:, 3]) <= 3 * data[:, 4])


def test_verify(tmp_path):
    report = tmp_path / "r.json"
    code, out = run(["verify", "--suite", "exact-identities", "--seed", "7", "--out", str(report)])
    assert code == 0
    assert out.strip().endswith("checks passed")
    data = json.loads(report.read_text())
    assert all(r["verdict"] == "pass" for r in data)
    assert list(data[0]) == ["check_id", "analytic", "estimate", "error_metric", "error", "tolerance", "verdict", "runtime", "seed", "sample_size", "criterion", "covers"]


def test_verify_failure_exit_code(monkeypatch):
    from kendallwalk import verify as vf

    bad = vf.VerificationReport("x", 0, 1, "abs", 1, 0, "fail", 0, 0, 0)
    monkeypatch.setattr(vf, "run_suite", lambda *a, **k: [bad])
    assert run(["verify", "--suite", "exact-identities"])[0] == 1


@pytest.mark.parametrize(
    "argv, token",
    [
        (["simulate", "--dist", "uniform", "--alpha", "0.5", "--steps", "0", "--paths", "5"], "'0'"),
        (["transform", "--dist", "bogus:x=1", "--alpha", "1", "--t-grid", "0:1:3"], "bogus:x=1"),
        (["transform", "--dist", "pareto", "--alpha", "1", "--t-grid", "0:1:3"], "pareto"),
        (["transform", "--dist", "pareto:p=abc", "--alpha", "1", "--t-grid", "0:1:3"], "pareto:p=abc"),
        (["transform", "--dist", "mixture:p=2", "--alpha", "1", "--t-grid", "0:1:3"], "mixture:p=2"),
        (["transform", "--dist", "uniform", "--alpha", "-1", "--t-grid", "0:1:3"], "-1"),
        (["transform", "--dist", "uniform", "--alpha", "1", "--t-grid", "0:1:1"], "0:1:1"),
        (["transform", "--dist", "uniform", "--alpha", "1", "--t-grid", "1:0:3"], "1:0:3"),
        (["transform", "--dist", "uniform", "--alpha", "1", "--t-grid", "0:1"], "0:1"),
        (["transform", "--dist", "table:/no/such.csv", "--alpha", "1", "--t-grid", "0:1:3"], "table:/no/such.csv"),
        (["hitting", "--dist", "two-point:x=0", "--alpha", "1", "--t-grid", "1:2:3"], "atom"),
        (["frobnicate"], "frobnicate"),
    ],
)
def test_usage_errors(argv, token, capsys):
    assert run(argv)[0] == 2
    err = capsys.readouterr().err.strip()
    assert len(err.splitlines()) == 1 and token in err


def test_bad_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("KENDALL_SEED", "abc")
    assert run(["simulate", "--dist", "uniform", "--alpha", "1", "--steps", "1", "--paths", "1"])[0] == 2
