"""Rank-decomposed interaction coefficients and the large-detuning reduction.

All coefficients are in units where alpha_0 * g = 1, and detunings are in
MHz. ``probe_detuning`` is always measured from the F=1 -> F'=0 line, so
Delta_{1,F'} = probe_detuning - (offset(F') - offset(0)).

Stokes sign convention: with a_+ and a_- the sigma+/sigma- mode operators,
Sx = (a_-^+ a_+ + a_+^+ a_-)/2, Sy = i(a_-^+ a_+ - a_+^+ a_-)/2 and
Sz = (a_+^+ a_+ - a_-^+ a_-)/2, so x-polarised light of n photons has
<Sx> = n/2.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .angular import HyperfineLine, _rank_coefficient_exact

#: below this multiple of the excited hfs spread the spin-1/2 reduction is flagged
LARGE_DETUNING_FACTOR = 20.0
RESONANCE_GUARD = 1e-6  # in units of Gamma

SCAN_COLUMNS = ("detuning_over_hfs", "c0", "c1", "c2_raman", "ratio", "flag")


class ResonanceError(ValueError):
    """Probe detuning sits on top of an optical transition."""


@dataclass(frozen=True)
class DecomposedHamiltonian:
    c0: float
    c1: float
    c2_raman: float
    c2_scalar: float
    detuning: float
    large_detuning: bool = True

    @property
    def polarimeter_invisible(self) -> tuple[str, ...]:
        # both n*N terms are a global phase; the polarimeter does not see them
        return ("c0", "c2_scalar")


def transition_detunings(line: HyperfineLine, probe_detuning: float,
                         equal: bool = False) -> dict[int, float]:
    ref = line.offset(0) if 0 in line.fprimes else min(off for _, off in line.excited_levels)
    if equal:
        return {fp: float(probe_detuning) for fp in line.fprimes}
    return {fp: probe_detuning - (off - ref) for fp, off in line.excited_levels}


def _check_resonance(line, dets):
    guard = RESONANCE_GUARD * line.gamma
    for fp, d in dets.items():
        if abs(d) <= guard:
            raise ResonanceError(f"probe is resonant with F'={fp} (Delta={d} MHz)")


def _weighted_sum(K, line, dets) -> float:
    coeffs = [_rank_coefficient_exact(K, line.ground_F, fp, line) for fp in line.fprimes]
    values = [dets[fp] for fp in line.fprimes]
    if len(set(values)) == 1 and all(isinstance(c, Fraction) for c in coeffs):
        # common detuning: sum the coefficients exactly before dividing
        return float(sum(coeffs)) / values[0]
    return math.fsum(float(c) / d for c, d in zip(coeffs, values))


def decompose(line: HyperfineLine, probe_detuning: float,
              equal_detunings: bool = False) -> DecomposedHamiltonian:
    """Coefficients sum_{F'} alpha^(K)_{1,F'} / Delta_{1,F'} of the three terms.

    ``equal_detunings`` replaces every Delta_{1,F'} by ``probe_detuning``;
    this is the diagnostic in which the rank-2 sum rule is exact.
    """
    dets = transition_detunings(line, probe_detuning, equal_detunings)
    _check_resonance(line, dets)
    c0 = _weighted_sum(0, line, dets)
    c1 = _weighted_sum(1, line, dets)
    c2 = _weighted_sum(2, line, dets)
    closest = min(abs(d) for d in dets.values())
    return DecomposedHamiltonian(
        c0=c0,
        c1=c1,
        c2_raman=c2,
        c2_scalar=c2,  # multiplies 2 n N / sqrt(6)
        detuning=float(probe_detuning),
        large_detuning=closest >= LARGE_DETUNING_FACTOR * line.hfs_spread,
    )


def effective_coupling(line: HyperfineLine, probe_detuning: float) -> float:
    """alpha^(1)_{1,0} / Delta_{1,0}: the QND coupling left at large detuning."""
    dets = transition_detunings(line, probe_detuning)
    _check_resonance(line, dets)
    return float(_rank_coefficient_exact(1, line.ground_F, 0, line)) / dets[0]


def raman_suppression_ratio(line: HyperfineLine, probe_detuning: float) -> float:
    h = decompose(line, probe_detuning)
    if h.c1 == 0:
        raise ZeroDivisionError("vector coupling vanishes at this detuning")
    return abs(h.c2_raman / h.c1)


def tail_exponent(detunings: Iterable[float], values: Iterable[float]) -> float:
    """Least-squares slope of log|value| against log|detuning|."""
    x = np.log(np.abs(np.asarray(list(detunings), dtype=float)))
    y = np.log(np.abs(np.asarray(list(values), dtype=float)))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def detuning_scan(line: HyperfineLine, detunings_over_hfs: Iterable[float],
                  equal_detunings: bool = False) -> list[dict]:
    """One row per detuning; resonant points are flagged instead of raising."""
    rows = []
    for x in detunings_over_hfs:
        x = float(x)
        row = {"detuning_over_hfs": x}
        try:
            h = decompose(line, x * line.hfs_spread, equal_detunings)
        except ResonanceError:
            row.update(c0=math.nan, c1=math.nan, c2_raman=math.nan, ratio=math.nan,
                       flag="resonant")
        else:
            ratio = abs(h.c2_raman / h.c1) if h.c1 != 0 else math.inf
            row.update(c0=h.c0, c1=h.c1, c2_raman=h.c2_raman, ratio=ratio,
                       flag="" if h.large_detuning else "near")
        rows.append(row)
    return rows


def scan_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_COLUMNS)
    for r in rows:
        w.writerow([f"{r[c]:.9g}" if c != "flag" else r[c] for c in SCAN_COLUMNS])
    return buf.getvalue()
