#!/usr/bin/env python3
"""Squeezing against scattering for the MOT (rho0=25) and FORT (rho0=100) cases.

Writes one CSV per (scenario, system) and prints the optima. Pass --plot to
also save a PNG (needs matplotlib, which is not a package dependency).
"""

import argparse
from dataclasses import replace
from pathlib import Path

from rbsqueeze.cli import curve_to_csv, run_curve, run_optimize
from rbsqueeze.config import EtaGrid, ScenarioConfig

SCENARIOS = {"mot": 25.0, "fort": 100.0}
SYSTEMS = ("rb87", "ideal-spin-half", "coherent")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/curves")
    ap.add_argument("--steps", type=int, default=501)
    ap.add_argument("--plot", action="store_true")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    curves = {}
    for scen, rho0 in SCENARIOS.items():
        for system in SYSTEMS:
            cfg = ScenarioConfig(system=system, rho0=rho0, eta_grid=EtaGrid(0.0, 0.5, args.steps))
            pts = run_curve(cfg)
            curves[scen, system] = pts
            (out / f"{scen}_{system}.csv").write_text(curve_to_csv(pts, cfg))
            if system != "coherent":
                opt = run_optimize(cfg)
                print(f"{scen:4s} rho0={rho0:5.0f} {system:16s} eta*={opt.eta_star:.5f} "
                      f"xi'^2={opt.xi2_prime_min:.6f} squeezing={opt.squeezing_percent:.2f}%")

    if args.plot:
        import matplotlib.pyplot as plt

        fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharey=True)
        for ax, scen in zip(axes, SCENARIOS):
            for system in SYSTEMS:
                pts = curves[scen, system]
                ax.plot([p.eta for p in pts], [p.xi2_prime for p in pts], label=system)
            ax.set_title(f"{scen.upper()}, rho0={SCENARIOS[scen]:.0f}")
            ax.set_xlabel("eta")
            ax.set_ylim(0, 1.5)
        axes[0].set_ylabel("xi'^2")
        axes[0].legend()
        fig.tight_layout()
        fig.savefig(out / "squeezing_curves.png", dpi=150)


if __name__ == "__main__":
    main()
