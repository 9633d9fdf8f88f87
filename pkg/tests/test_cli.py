import csv
import io
import json
import math

import numpy as np
import pytest

from rbsqueeze.cli import CURVE_COLUMNS, curve_to_csv, main, run_curve, run_optimize
from rbsqueeze.config import EtaGrid, OptimizerConfig, ScenarioConfig
from rbsqueeze.noise import xi2_rb87
from rbsqueeze.optimize import NotUnimodal, golden_section, grid_minima, minimise_on


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --- optimizer -------------------------------------------------------------

def test_golden_section_quadratic():
    r = golden_section(lambda x: (x - 0.3) ** 2, 0, 1, tol=1e-10)
    assert r.converged and r.x == pytest.approx(0.3, abs=1e-9)
    with pytest.raises(ValueError):
        golden_section(abs, 1, 0)


def test_golden_section_reports_non_convergence():
    assert not golden_section(lambda x: x * x, -1, 1, tol=1e-12, max_iters=5).converged


def test_grid_minima():
    assert grid_minima([3, 1, 2]) == [1]
    assert grid_minima([1, 2, 3]) == [0]
    assert grid_minima([2, 1, 2, 0, 2]) == [1, 3]
    assert grid_minima([1, 1, 1]) == [0, 1, 2]


def test_minimise_rejects_bimodal():
    with pytest.raises(NotUnimodal) as exc:
        minimise_on(lambda x: math.cos(12 * x), 0, 1, 100)
    assert len(exc.value.candidates) == 2


# --- curves ------------------------------------------------------------------

def test_curve_csv_columns_and_roundtrip():
    cfg = ScenarioConfig(rho0=100, eta_grid=EtaGrid(0, 0.3, 31))
    rows = list(csv.DictReader(io.StringIO(curve_to_csv(run_curve(cfg), cfg))))
    assert tuple(rows[0]) == CURVE_COLUMNS
    for row in rows:
        eta = float(row["eta"])
        assert float(row["xi2_prime"]) == pytest.approx(xi2_rb87(100, eta).xi2_prime, abs=1e-9)
    at = {round(float(r["eta"]), 6): float(r["xi2_prime"]) for r in rows}
    assert at[0.06] == pytest.approx(0.2435, abs=1e-4)


def test_curve_points_keep_budget_identity():
    for p in run_curve(ScenarioConfig(eta_grid=EtaGrid(0, 0.9, 91))):
        assert abs(p.beta + p.gamma - p.eta) <= 1e-15


def test_coherent_and_ideal_curves():
    pts = run_curve(ScenarioConfig(system="coherent", eta_grid=EtaGrid(0, 0.5, 21)))
    assert all(p.xi2_prime == pytest.approx(1.0, abs=1e-15) for p in pts)
    pts = run_curve(ScenarioConfig(system="ideal-spin-half", eta_grid=EtaGrid(0, 0.5, 21)))
    assert pts[0].xi2_prime == 1.0


# --- optimisation ------------------------------------------------------------

@pytest.mark.parametrize("rho0", [25.0, 100.0])
def test_optimum_stable_under_grid_refinement(rho0):
    a = run_optimize(ScenarioConfig(rho0=rho0))
    b = run_optimize(ScenarioConfig(rho0=rho0, optimizer=OptimizerConfig(grid_points=2000)))
    assert a.converged and b.converged
    assert abs(a.eta_star - b.eta_star) <= 2e-7
    assert a.xi2_prime_min == pytest.approx(b.xi2_prime_min, abs=1e-12)


def test_fine_grid_oracle_rho100():
    eta = np.linspace(0, 0.5, 100_001)[1:]
    b, g = 0.375 * eta, 0.625 * eta
    v = (1 - b) / (1 + 100 * eta) + eta * (1 - b) / (1 - eta) + g * (1 - b) / (1 - eta) ** 2
    i = v.argmin()
    assert 0.055 <= eta[i] <= 0.07 and 0.240 <= v[i] <= 0.250
    opt = run_optimize(ScenarioConfig(rho0=100))
    assert opt.eta_star == pytest.approx(eta[i], abs=1e-5)
    assert opt.xi2_prime_min == pytest.approx(v[i], abs=1e-8)


# --- command line --------------------------------------------------------------

def test_cli_optimize_json(capsys):
    code, out, _ = run(capsys, "optimize", "--system", "rb87", "--rho0", "100", "--format", "json")
    assert code == 0
    row = json.loads(out)
    assert 74 <= row["squeezing_percent"] <= 77


def test_cli_optimize_coherent_is_numerical_failure(capsys):
    code, out, err = run(capsys, "optimize", "--system", "coherent")
    assert code == 3 and "grid minima" in err


def test_cli_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "curve", "--rho0", "abc")[0] == 1
    assert run(capsys, "curve", "--eta-max", "1.5")[0] == 1
    assert run(capsys, "scan", "--det-steps", "1")[0] == 1
    assert run(capsys, "curve", "--config", "/nonexistent.json")[0] == 1


def test_cli_flags_override_config(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"system": "rb87", "rho0": 25.0,
                                "eta_grid": {"min": 0.0, "max": 0.2, "steps": 5}}))
    code, out, _ = run(capsys, "curve", "--config", str(path), "--rho0", "100")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    assert {r["rho0"] for r in rows} == {"100"}


def test_cli_curve_to_file(tmp_path, capsys):
    out = tmp_path / "c.csv"
    assert run(capsys, "curve", "--steps", "3", "--out", str(out))[0] == 0
    assert out.read_text().splitlines()[0] == ",".join(CURVE_COLUMNS)


def test_cli_scan_equal_detunings(capsys):
    code, out, _ = run(capsys, "scan", "--det-min", "-50", "--det-max", "50", "--det-steps",
                       "41", "--equal-detunings")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert all(float(r["c2_raman"]) == 0.0 for r in rows if r["flag"] != "resonant")


def test_cli_scan_log_grid(capsys):
    code, out, _ = run(capsys, "scan", "--log", "--det-min", "10", "--det-max", "1000",
                       "--det-steps", "50")
    ratios = [float(r["ratio"]) for r in csv.DictReader(io.StringIO(out))]
    assert code == 0 and all(b < a for a, b in zip(ratios, ratios[1:]))


def test_cli_validate_deterministic(capsys):
    argv = ("validate", "--n-atoms", "1000", "--n-trials", "2000", "--seed", "11")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == 0 and out1 == out2
    rep = json.loads(out1)
    assert rep["rng"] == {"algorithm": "PCG64", "seed": 11}
    assert len(rep["cases"]) == 20


def test_config_files_load():
    for name, rho0 in (("mot", 25.0), ("fort", 100.0)):
        cfg = ScenarioConfig.load(f"configs/{name}.json")
        assert cfg.rho0 == rho0 and cfg.mc is not None
        assert ScenarioConfig.from_dict(cfg.to_dict()) == cfg
