"""Acceptance criteria, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import json
import math
import subprocess
import sys
import time
from dataclasses import replace

import numpy as np
import pytest

from rbsqueeze.angular import rank_coefficient, rank_coefficients, rb87_d2
from rbsqueeze.cli import main
from rbsqueeze.gaussian import JZ, SZ, GaussianState, condition_on_Sy, propagate, qnd_map, wineland_xi2
from rbsqueeze.hamiltonian import decompose, tail_exponent
from rbsqueeze.noise import xi2_after_decoherence, xi2_after_loss, xi2_ideal_spin_half, xi2_rb87
from rbsqueeze.oracle import McConfig, battery_report, run_battery
from rbsqueeze.pseudospin import build_alignment_operators, commutator


def _optimize(capsys, rho0):
    t0 = time.perf_counter()
    code = main(["optimize", "--system", "rb87", "--rho0", str(rho0), "--format", "json"])
    elapsed = time.perf_counter() - t0
    row = json.loads(capsys.readouterr().out)
    return code, row, elapsed


@pytest.mark.criterion(1, "FORT optimum (rho0=100): eta* in [0.055, 0.070], squeezing in [74, 77]%, < 1 s")
def test_ac1_fort_optimum(capsys):
    code, row, elapsed = _optimize(capsys, 100)
    assert code == 0
    assert 0.055 <= row["eta_star"] <= 0.070
    assert 74 <= row["squeezing_percent"] <= 77
    assert elapsed < 1.0


@pytest.mark.criterion(2, "MOT optimum (rho0=25): eta* in [0.090, 0.110], squeezing in [53, 56]%, < 1 s")
def test_ac2_mot_optimum(capsys):
    code, row, elapsed = _optimize(capsys, 25)
    assert code == 0
    assert 0.090 <= row["eta_star"] <= 0.110
    assert 53 <= row["squeezing_percent"] <= 56
    assert elapsed < 1.0


def test_ac1_ac2_cli_process():
    # same answer from a fresh interpreter
    out = subprocess.run([sys.executable, "-m", "rbsqueeze.cli", "optimize", "--rho0", "100",
                          "--format", "json"], capture_output=True, text=True, check=True)
    assert 0.055 <= json.loads(out.stdout)["eta_star"] <= 0.070


@pytest.mark.criterion(3, "rb87 strictly below ideal spin-1/2 on 500 eta points, rho0 in {25, 100}")
def test_ac3_dominance():
    eta = np.linspace(0, 0.5, 502)[1:-1]
    assert eta.size == 500
    for rho0 in (25, 100):
        for e in eta:
            assert xi2_rb87(rho0, e).xi2_prime < xi2_ideal_spin_half(rho0, e).xi2_prime


@pytest.mark.criterion(4, "rank-2 and rank-1 sum rules to 1e-12 with alpha1(F'=0) != 0")
def test_ac4_sum_rules():
    line = rb87_d2()
    a = rank_coefficients(line)
    assert abs(math.fsum(a.alpha2)) <= 1e-12
    assert abs(rank_coefficient(1, 1, 1, line) + rank_coefficient(1, 1, 2, line)) <= 1e-12
    assert rank_coefficient(1, 1, 0, line) != 0


@pytest.mark.criterion(5, "pseudo-spin cyclic commutators elementwise to 1e-15")
def test_ac5_commutators():
    Jx, Jy, Jz = build_alignment_operators().pseudospin()
    for A, B, C in ((Jx, Jy, Jz), (Jy, Jz, Jx), (Jz, Jx, Jy)):
        assert np.abs(commutator(A, B) - 1j * C).max() <= 1e-15


@pytest.mark.criterion(6, "Gaussian QND: xi2 = 1/(1+kappa^2) to 1e-12 on [1e-3, 1e3]; Jz, Sz rows invariant")
def test_ac6_gaussian_identity():
    N, n = 1e6, 1e8
    s0 = GaussianState.coherent(N, n)
    for k2 in np.geomspace(1e-3, 1e3, 61):
        s = condition_on_Sy(propagate(s0, k2))
        assert abs(wineland_xi2(s, N) - 1 / (1 + k2)) <= 1e-12
        M = qnd_map(s0, k2)
        assert np.array_equal(M[JZ], np.eye(4)[JZ]) and np.array_equal(M[SZ], np.eye(4)[SZ])


@pytest.mark.criterion(7, "Monte Carlo battery (1e4 atoms x 1e4 trials): <= 1 of 20 outside 3 SE, < 60 s")
def test_ac7_monte_carlo():
    base = McConfig(n_atoms=10_000, n_trials=10_000)
    t0 = time.perf_counter()
    results = run_battery(base)
    elapsed = time.perf_counter() - t0
    summary = battery_report(results, base)["summary"]
    assert summary["n_cases"] == 20
    assert summary["n_outside_3sigma"] <= 1
    assert {r.kind for r in results} == {"loss", "decoherence", "end_to_end"}
    assert elapsed < 60


@pytest.mark.criterion(8, "decoherence law strictly above loss law on a 100x100 grid")
def test_ac8_loss_vs_decoherence():
    for xi2 in np.linspace(0, 1, 100):
        for x in np.linspace(0, 0.9, 102)[1:-1]:
            assert xi2_after_decoherence(xi2, x) > xi2_after_loss(xi2, x)


@pytest.mark.criterion(9, "tail exponents: c2_raman -2 +- 0.1, c1 -1 +- 0.1 over [1e2, 1e4] hfs")
def test_ac9_raman_tail():
    line = rb87_d2()
    d = np.geomspace(1e2, 1e4, 41) * line.hfs_spread
    hs = [decompose(line, x) for x in d]
    assert abs(tail_exponent(d, [h.c2_raman for h in hs]) + 2) <= 0.1
    assert abs(tail_exponent(d, [h.c1 for h in hs]) + 1) <= 0.1
