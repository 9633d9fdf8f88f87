#!/usr/bin/env python3
"""Run the Monte Carlo validation battery and write its JSON report."""

import argparse
import json
import time
from pathlib import Path

from rbsqueeze.oracle import McConfig, battery_report, run_battery


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-atoms", type=int, default=10_000)
    ap.add_argument("--n-trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=20060101)
    ap.add_argument("--out", default="results/mc_battery.json")
    args = ap.parse_args()

    base = McConfig(args.n_atoms, args.n_trials, args.seed)
    t0 = time.perf_counter()
    report = battery_report(run_battery(base), base)
    elapsed = time.perf_counter() - t0
    for case in report["cases"]:
        print(f"{case['kind']:12s} analytic={case['analytic']:.6g} "
              f"empirical={case['empirical']:.6g} z={case['z_score']:+.2f}")
    s = report["summary"]
    print(f"max|z|={s['max_abs_z']:.2f} outside 3 sigma: {s['n_outside_3sigma']}/{s['n_cases']} "
          f"({elapsed:.2f} s)")
    path = Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
