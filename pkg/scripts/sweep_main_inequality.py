#!/usr/bin/env python3
"""Radius sweep of the main inequality in hyperplane mode.

Runs the nine-line three-pencil arrangement against the degree-2 rational
curve (1 : z : z^2) with truncation level n = 2 over a geometric radius
grid, and writes the slack table as TSV.
"""

import argparse
from fractions import Fraction
from pathlib import Path

from nochka.fixtures import parabola_curve, pencil_lines_arrangement
from nochka.nevanlinna import smt_report


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--epsilon", type=Fraction, default=Fraction(1, 2))
    parser.add_argument("--rmin", type=float, default=10.0)
    parser.add_argument("--rmax", type=float, default=1e4)
    parser.add_argument("--steps", type=int, default=7)
    parser.add_argument("--out", type=Path, default=Path("out/hyperplane_sweep.tsv"))
    args = parser.parse_args()

    ratio = (args.rmax / args.rmin) ** (1 / max(args.steps - 1, 1))
    radii = [args.rmin * ratio ** k for k in range(args.steps)]
    report = smt_report(parabola_curve(), pencil_lines_arrangement(),
                        args.epsilon, radii, truncations=2)

    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(report.as_tsv())
    print(report.as_tsv().rstrip())
    worst = min(row.slack for row in report.rows)
    print(f"minimal slack over sweep: {worst:.6f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
