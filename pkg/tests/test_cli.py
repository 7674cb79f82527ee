from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from gauss_uniform import compute_rule
from gauss_uniform.cli import RunConfig, main, run


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_rule_csv_round_trips_exactly(capsys):
    code, out, _ = _run(capsys, "rule", "--n", "7")
    assert code == 0
    rows = _csv(out)
    rule = compute_rule(7)
    assert [float(r["x"]) for r in rows] == list(rule.nodes)
    assert [float(r["w"]) for r in rows] == list(rule.weights)
    assert [int(r["i"]) for r in rows] == list(range(1, 8))


def test_rule_json_round_trips_exactly(capsys):
    code, out, _ = _run(capsys, "rule", "--n", "12", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "rule"
    assert [r["w"] for r in doc["rows"]] == list(compute_rule(12).weights)


def test_output_file(tmp_path, capsys):
    target = tmp_path / "r.csv"
    code, out, _ = _run(capsys, "rule", "--n", "3", "--output", str(target))
    assert code == 0 and out == ""
    assert len(_csv(target.read_text())) == 3


def test_determinism(capsys):
    _, a, _ = _run(capsys, "nodesets", "--n", "9", "--format", "json")
    _, b, _ = _run(capsys, "nodesets", "--n", "9", "--format", "json")
    assert a == b


def test_nodesets_columns(capsys):
    code, out, _ = _run(capsys, "nodesets", "--n", "4")
    rows = _csv(out)
    assert len(rows) == 5
    assert rows[0]["x"] == "" and float(rows[0]["zbar"]) == -1.0
    assert float(rows[-1]["zbar"]) == 1.0 and float(rows[-1]["m"]) == 0.0


def test_check_summary(capsys):
    code, out, err = _run(capsys, "check", "--relation", "uniform_circle", "--n", "1,2,3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    s = doc["summary"]
    assert s["all_within"] is True and s["bound_holds_from_n"] == 1
    assert doc["rows"][0]["raw"] == pytest.approx(1 - 9 / math.pi**2)


def test_check_failing_bound_reported(capsys):
    code, out, _ = _run(capsys, "check", "--relation", "secondary_ratio", "--n", "10,20", "--format", "json")
    assert code == 0
    s = json.loads(out)["summary"]
    assert s["all_within"] is False and s["bound_holds_from_n"] is None


def test_check_half_moment(capsys):
    code, out, _ = _run(capsys, "check", "--relation", "partial_moment", "--n", "100", "--format", "json")
    hm = json.loads(out)["summary"]["half_moment"]
    assert hm["100"]["index"] == 50


def test_check_band(capsys):
    code, out, _ = _run(capsys, "check", "--relation", "trapezoid2", "--n", "200", "--band=-0.5,0.5",
                        "--format", "json")
    rows = json.loads(out)["rows"]
    assert all(r["pass"] for r in rows)


def test_sequences_and_zeros(capsys):
    code, out, err = _run(capsys, "sequences", "--name", "C", "--count", "5")
    assert code == 0
    rows = _csv(out)
    assert float(rows[0]["value"]) == pytest.approx(0.8187877, abs=5e-7)
    assert "# monotone_ok: True" in err
    code, out, _ = _run(capsys, "bessel-zeros", "--count", "3")
    assert float(_csv(out)[0]["j_k"]) == pytest.approx(2.404825557695773, abs=1e-15)


def test_sonin(capsys):
    code, out, _ = _run(capsys, "sonin", "--nu", "0.5", "--count", "5")
    assert code == 0 and len(_csv(out)) == 5


def test_asym(capsys):
    code, out, err = _run(capsys, "asym", "--kind", "elem_weight", "--n", "50,100,200", "--format", "json")
    assert code == 0
    assert json.loads(out)["summary"]["slope"] == pytest.approx(-5, abs=0.3)


def test_fp(capsys):
    code, out, _ = _run(capsys, "fp", "--variant", "morel", "--test", "exp", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["summary"]["slope"] == pytest.approx(-2, abs=0.3)
    assert all(abs(r["M1_residual"]) < 1e-12 * math.e for r in doc["rows"])


def test_fp_exact_linear_has_no_slope(capsys):
    code, out, _ = _run(capsys, "fp", "--variant", "morel", "--test", "x", "--format", "json")
    assert code == 0
    assert json.loads(out)["summary"]["slope"] is None


@pytest.mark.parametrize("frac,target", [(0.0, -2.0), (0.5, -1.0)])
def test_ivp_uniform(capsys, frac, target):
    code, out, _ = _run(capsys, "ivp", "--mesh", "uniform", "--offset-fraction", str(frac), "--format", "json")
    assert code == 0
    assert json.loads(out)["summary"]["slope"] == pytest.approx(target, abs=0.15)


def test_ivp_gauss(capsys):
    code, out, _ = _run(capsys, "ivp", "--mesh", "gauss", "--format", "json")
    assert json.loads(out)["summary"]["slope"] == pytest.approx(-2.0, abs=0.15)


@pytest.mark.parametrize(
    "argv",
    [
        ["rule"],
        ["rule", "--n", "0"],
        ["rule", "--n", "abc"],
        ["check", "--relation", "nope", "--n", "5"],
        ["check", "--relation", "circle1", "--n", "20,10"],
        ["check", "--relation", "circle1", "--n", "10", "--band", "0.5,0.1"],
        ["sonin", "--nu", "2"],
        ["verify-all", "--criteria", "12"],
        ["verify-all", "--quick", "--full"],
        ["rule", "--n", "3", "--format", "xml"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_domain_error_exit_2(capsys):
    code, _, err = _run(capsys, "rule", "--n", str(10**6 + 1))
    assert code == 2 and "error:" in err
    code, _, err = _run(capsys, "sequences", "--name", "a", "--count", "1")
    assert code == 2


def test_computation_error_exit_1(monkeypatch, capsys):
    from gauss_uniform import cli
    from gauss_uniform.errors import ComputationError

    def boom(n):
        raise ComputationError("forced", index=4, module="legendre_rules")

    monkeypatch.setattr(cli, "compute_rule", boom)
    code, _, err = _run(capsys, "rule", "--n", "5")
    assert code == 1
    assert "legendre_rules" in err and "index 4" in err


def test_run_config_direct(capsys):
    code = run(RunConfig("bessel-zeros", "json", None, {"count": 2}))
    assert code == 0
    assert len(json.loads(capsys.readouterr().out)["rows"]) == 2


def test_threads_env_gives_same_output(monkeypatch, capsys):
    _, a, _ = _run(capsys, "check", "--relation", "trapezoid3", "--n", "5,9,13", "--format", "json")
    monkeypatch.setenv("GAUSS_UNIFORM_THREADS", "3")
    _, b, _ = _run(capsys, "check", "--relation", "trapezoid3", "--n", "5,9,13", "--format", "json")
    assert a == b


def test_verify_all_subset(capsys):
    code, out, err = _run(capsys, "verify-all", "--criteria", "2,8", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert {r["criterion"] for r in doc["rows"]} == {2, 8}
    assert doc["summary"]["tier"] == "quick"
    assert doc["summary"]["failed"] == 0


def test_verify_all_reports_failure(capsys):
    # the printed a0 and a1 disagree with their defining formula
    code, out, err = _run(capsys, "verify-all", "--criteria", "1")
    assert code == 1
    assert "FAIL  [ 1] a0" in err
    assert "PASS  [ 1] C0" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gauss_uniform", "rule", "--n", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "i,theta,x,w"


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
