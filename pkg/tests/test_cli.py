import json
import math
import re

import numpy as np
import pytest

from pinchlab import isotropic_solution, FlowParams
from pinchlab.cli import CSV_HEADER, main, write_report


def run(args):
    return main([str(a) for a in args])


# ----------------------------------------------------------------- simulate


def test_simulate_csv(tmp_path):
    out = tmp_path / "iso.csv"
    code = run(
        ["simulate", "--state", "1,1,1", "--rho", "-1", "--t-end", "0.01", "--out", out]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    data = [ln for ln in lines if not ln.startswith("#")]
    assert data[0] == CSV_HEADER
    assert len(data) == 1 + 201  # header + default points
    assert any("params.rho = -1" in ln for ln in meta)
    # values follow the closed form c/(1 - 16 c t) at rho = -1
    p = FlowParams(rho=-1.0)
    row = data[5].split(",")
    t, lam = float(row[0]), float(row[1])
    assert lam == pytest.approx(isotropic_solution(1.0, p, t), rel=1e-8)
    # R column is twice the trace
    assert float(row[4]) == pytest.approx(2 * 3 * lam, rel=1e-12)


def test_simulate_zero_span_writes_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    assert run(["simulate", "--state", "1,0,-1", "--rho", "0", "--t-end", "0",
                "--out", out]) == 0
    data = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert data == [CSV_HEADER]


def test_simulate_backward_span_is_usage_error(tmp_path, capsys):
    code = run(["simulate", "--state", "1,0,-1", "--rho", "0", "--t0", "1.0",
                "--t-end", "0.5", "--out", tmp_path / "x.csv"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_simulate_rejects_unordered_state(tmp_path, capsys):
    code = run(["simulate", "--state", "0,1,2", "--rho", "0", "--t-end", "0.1",
                "--out", tmp_path / "x.csv"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_simulate_nan_cone_columns_for_inadmissible_sets(tmp_path):
    # at rho = 0.1 the static/trace-positive margins are undefined: NaN cols
    out = tmp_path / "k.csv"
    run(["simulate", "--state", "1,1,1", "--rho", "0.1", "--t-end", "0.01", "--out", out])
    data = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")][1]
    cols = data.split(",")
    assert cols[6] == "nan" and cols[7] == "nan"  # margin_X, margin_W
    assert cols[8] != "nan"  # margin_K live at these params


# --------------------------------------------------------------------- scan


def test_scan_json_round_trip(tmp_path):
    out = tmp_path / "scan.json"
    code = run(["scan", "--kind", "j-neg-trace", "--rho", "-1",
                "--resolution", "50", "--out", out])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["violations"] == 0
    assert doc["report"]["kind"] == "j-neg-trace"
    assert doc["meta"]["command"] == "scan"
    # json text is sorted -> "meta" appears before "report"
    raw = out.read_text()
    assert raw.index('"meta"') < raw.index('"report"')


def test_scan_unknown_kind_is_usage_error(capsys):
    assert run(["scan", "--kind", "bogus", "--rho", "-1"]) == 2
    assert "error:" in capsys.readouterr().err


def test_scan_wrong_window_is_usage_error(capsys):
    assert run(["scan", "--kind", "i-poly", "--rho", "-0.5"]) == 2
    capsys.readouterr()


def test_xi_prime_theta_defaults_to_half_inverse_rho(tmp_path):
    out = tmp_path / "xi.json"
    code = run(["scan", "--kind", "xi-prime", "--rho", "-0.5", "--eta", "1",
                "--resolution", "40", "--out", out])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["params"]["theta"] == 1.0


def test_trace_bound_random_cli(tmp_path):
    out = tmp_path / "tb.json"
    code = run(["scan", "--kind", "trace-bound", "--rho", "0.2",
                "--samples", "5000", "--seed", "1", "--out", out])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["mode"] == "random"
    assert doc["report"]["injected_max_abs_margin"] <= 1e-12


# -------------------------------------------------------------- verify-set


def test_verify_set_text_report(tmp_path, capsys):
    out = tmp_path / "x.txt"
    code = run(["verify-set", "--set", "X", "--rho", "-1", "--samples", "20",
                "--horizon", "0.02", "--seed", "42", "--out", out])
    assert code == 0
    text = out.read_text()
    m = re.search(r"^report\.worst_drift = (\S+)$", text, re.M)
    assert m, text
    assert float(m.group(1)) >= -1e-8
    assert re.search(r"^report\.claimed = True$", text, re.M)


def test_verify_set_recheck_is_observation(tmp_path):
    out = tmp_path / "yk.json"
    code = run(["verify-set", "--set", "Y", "--rho", "-0.5", "--eta", "1",
                "--samples", "6", "--horizon", "0.02", "--seed", "3",
                "--recheck-set", "K", "--out", out])
    assert code == 0  # observations never fail the run
    doc = json.loads(out.read_text())
    assert doc["report"]["claimed"] is False
    assert doc["report"]["recheck_kind"] == "K"


# --------------------------------------------------- verify-estimate / deriv


def test_verify_estimate_cli(tmp_path):
    out = tmp_path / "est.json"
    code = run(["verify-estimate", "--variant", "neg-rho-scalar", "--rho", "-1",
                "--count", "6", "--seed", "2", "--out", out])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["worst_slack"] >= -1e-8
    assert doc["report"]["blowups"] == 6
    assert doc["report"]["min_coverage"] >= 0.9


def test_deriv_check_cli_and_failure_exit(tmp_path):
    out = tmp_path / "d.json"
    ok = run(["deriv-check", "--quantity", "lambda-pinch", "--rho", "-1",
              "--trajectories", "3", "--out", out])
    assert ok == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["decay_ratio"] > 2.5
    # an absurdly tight tolerance must flip the exit code, not crash
    bad = run(["deriv-check", "--quantity", "lambda-pinch", "--rho", "-1",
               "--trajectories", "3", "--tol", "1e-15", "--out", tmp_path / "d2.json"])
    assert bad == 1


# ------------------------------------------------------------ config files


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "params": {"rho": -1.0},
        "command": {"kind": "j-neg-trace", "resolution": 30},
        "output": {"out": str(tmp_path / "a.json"), "format": "json"},
    }))
    assert run(["scan", "--config", cfg]) == 0
    assert json.loads((tmp_path / "a.json").read_text())["report"]["resolution"] == 30
    # a flag beats the file
    assert run(["scan", "--config", cfg, "--resolution", "40",
                "--out", tmp_path / "b.json"]) == 0
    assert json.loads((tmp_path / "b.json").read_text())["report"]["resolution"] == 40


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"params": {"rho": -1.0, "sigma": 2.0}}))
    assert run(["scan", "--config", cfg, "--kind", "j-neg-trace"]) == 2
    assert "sigma" in capsys.readouterr().err
    cfg.write_text(json.dumps({"settings": {}}))
    assert run(["scan", "--config", cfg, "--kind", "j-neg-trace"]) == 2
    assert "settings" in capsys.readouterr().err


# -------------------------------------------------------- output mechanics


def test_outputs_are_byte_identical(tmp_path):
    args = ["scan", "--kind", "i-poly", "--rho", "0.1", "--resolution", "40"]
    run(args + ["--out", tmp_path / "1.json"])
    run(args + ["--out", tmp_path / "2.json"])
    assert (tmp_path / "1.json").read_bytes() == (tmp_path / "2.json").read_bytes()


def test_stamp_adds_timestamp_once(tmp_path):
    out = tmp_path / "s.json"
    run(["scan", "--kind", "i-poly", "--rho", "0.1", "--resolution", "30",
         "--stamp", "--out", out])
    doc = json.loads(out.read_text())
    assert "generated_at" in doc["meta"]


def test_write_report_renders_nonfinite_as_strings(tmp_path, capsys):
    write_report({"a": math.inf, "b": -math.inf, "c": math.nan}, None, "json")
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"a": "inf", "b": "-inf", "c": "nan"}


def test_plot_svg(tmp_path):
    csv_path = tmp_path / "t.csv"
    run(["simulate", "--state", "1,1,1", "--rho", "0", "--t-end", "0.1",
         "--out", csv_path])
    svg_path = tmp_path / "t.svg"
    assert run(["plot", "--in", csv_path, "--columns", "R,lambda",
                "--out", svg_path]) == 0
    svg = svg_path.read_text()
    assert svg.startswith("<svg")
    assert "polyline" in svg


def test_version_flag(capsys):
    assert main(["--version"]) == 0
    assert "0.1.0" in capsys.readouterr().out
