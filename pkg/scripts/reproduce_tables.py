#!/usr/bin/env python3
"""Regenerate the headline desk-scale artifacts: the per-cost guess table,
the classical known/unknown success table, and the N=8 Hamming heat map."""

import argparse
import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qclust.classical import average_known_classical_exact, success_exact_unknown
from qclust.costs import COST_KINDS, guess_rule_general, hamming_heatmap
from qclust.partitions import enumerate_two_row_irreps


def write_guess_table(path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["cost", "N", "lambda1", "lambda2", "guesses"])
        for kind in COST_KINDS:
            for N in range(4, 9):
                table = guess_rule_general(kind, N, 2)
                for lam in enumerate_two_row_irreps(N):
                    writer.writerow(
                        [kind, N, lam[0], lam[1], ",".join(map(str, table.guess(lam)))]
                    )


def write_classical_table(path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["protocol", "N", "exact", "decimal"])
        for N in range(2, 7):
            unknown = success_exact_unknown(N, 3)
            writer.writerow(
                ["unknown", N, f"{unknown.numerator}/{unknown.denominator}", repr(float(unknown))]
            )
        for N in range(2, 7):
            known = average_known_classical_exact(N, 3)
            writer.writerow(
                ["known", N, f"{known.numerator}/{known.denominator}", repr(float(known))]
            )


def write_heatmap(path: Path, N: int) -> None:
    labels, mat = hamming_heatmap(N)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["string"] + labels)
        for label, row in zip(labels, mat):
            writer.writerow([label] + row.tolist())


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-o", "--outdir", default="out")
    parser.add_argument("--heatmap-n", type=int, default=8)
    args = parser.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_guess_table(outdir / "guess_table.csv")
    write_classical_table(outdir / "classical_table.csv")
    write_heatmap(outdir / f"heatmap_N{args.heatmap_n}.csv", args.heatmap_n)
    print(f"wrote guess_table.csv, classical_table.csv, heatmap_N{args.heatmap_n}.csv in {outdir}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
