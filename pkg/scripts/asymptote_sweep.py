#!/usr/bin/env python3
"""Sweep exact success probabilities against their large-N tails and emit
long-format CSV (protocol, d, N, exact, asymptote, ratio) for plotting."""

import argparse
import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qclust.classical import success_asymptotic_unknown, success_exact_unknown
from qclust.povm import success_probability_asymptotic, success_probability_exact


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-o", "--output", default="out/asymptote_sweep.csv")
    parser.add_argument("--quantum-n", type=int, nargs="+",
                        default=[10, 20, 40, 80, 160, 320, 400])
    parser.add_argument("--classical-n", type=int, nargs="+",
                        default=[10, 20, 40, 80, 160, 200])
    parser.add_argument("-d", type=int, nargs="+", default=[2, 3])
    args = parser.parse_args()

    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["protocol", "d", "N", "exact", "asymptote", "ratio"])
        for d in args.d:
            for N in args.quantum_n:
                exact = success_probability_exact(N, d)
                asym = success_probability_asymptotic(N, d, "combined")
                writer.writerow(
                    ["quantum", d, N, f"{exact.numerator}/{exact.denominator}",
                     repr(asym), repr(float(exact) / asym)]
                )
            for N in args.classical_n:
                exact = success_exact_unknown(N, d)
                asym = success_asymptotic_unknown(N, d)
                writer.writerow(
                    ["classical", d, N, f"{exact.numerator}/{exact.denominator}",
                     repr(asym), repr(float(exact) / asym)]
                )
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
