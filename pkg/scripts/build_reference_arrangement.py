#!/usr/bin/env python3
"""Generate the 12-curve reference arrangement and its companion reports.

Emits the arrangement file, its manifest, the induced rank-oracle dump,
the weight assignment, and the explicit truncation bounds for its
parameters (the inequality coefficient for this configuration is 7).
"""

import argparse
import json
from fractions import Fraction
from pathlib import Path

from nochka.bounds import ParamSet, truncation_levels
from nochka.fixtures import generate_intro_fixture
from nochka.geometry import codim_oracle, format_arrangement
from nochka.rank_core import format_oracle, nochka_weights


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out", type=Path, default=Path("out/reference"))
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    fixture = generate_intro_fixture(args.seed)
    arr = fixture.arrangement

    (args.out / "arrangement.txt").write_text(format_arrangement(arr))
    (args.out / "manifest.json").write_text(json.dumps(fixture.manifest, indent=2) + "\n")

    oracle = codim_oracle(arr)
    (args.out / "oracle.txt").write_text(format_oracle(oracle))
    weights = nochka_weights(oracle)
    (args.out / "weights.json").write_text(json.dumps(weights.as_dict(), indent=2) + "\n")

    params = ParamSet(arr.n, arr.deg_v, arr.N, arr.q, arr.degrees, Fraction(1))
    result = truncation_levels(params)
    (args.out / "bounds.json").write_text(json.dumps(result.as_dict(), indent=2) + "\n")

    print(f"seed {args.seed}: accepted on attempt {fixture.attempts}")
    print(f"coefficient q-2N+n-1 = {fixture.manifest['coefficient']}")
    print(f"theta = {weights.theta}, omega = {[str(w) for w in weights.omega]}")
    print(f"m0 = {result.m0}, log10 q_m0 = {result.qm0_log10:.2f}")
    print(f"wrote {args.out}/")


if __name__ == "__main__":
    main()
