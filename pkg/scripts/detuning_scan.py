#!/usr/bin/env python3
"""Vector and Raman (rank-2) coupling strengths across the D2 line.

Writes a linear scan and a logarithmic tail scan, and prints the fitted
large-detuning exponents.
"""

import argparse
from pathlib import Path

import numpy as np

from rbsqueeze.angular import rb87_d2
from rbsqueeze.hamiltonian import decompose, detuning_scan, scan_to_csv, tail_exponent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/scan")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    line = rb87_d2()

    (out / "linear.csv").write_text(scan_to_csv(detuning_scan(line, np.linspace(-100, 100, 801))))
    tail = np.geomspace(1e2, 1e4, 41)
    (out / "tail.csv").write_text(scan_to_csv(detuning_scan(line, tail)))

    d = tail * line.hfs_spread
    hs = [decompose(line, x) for x in d]
    print(f"c1 tail exponent       {tail_exponent(d, [h.c1 for h in hs]):+.4f}")
    print(f"c2_raman tail exponent {tail_exponent(d, [h.c2_raman for h in hs]):+.4f}")


if __name__ == "__main__":
    main()
