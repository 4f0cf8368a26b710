#!/usr/bin/env python3
"""Sample the profile-equation phase portrait to CSV.

Defaults reproduce the bundled configuration (unit constants, hyperbolic
3-fiber, trajectories started from a spread of (phi, phi') values); pass
--samples/--seed for extra random starts.

Usage: python scripts/make_portrait.py --out portrait.csv [--samples 20]
"""

import argparse
import sys

import numpy as np

from yamabe import phase_portrait
from yamabe.catalog import portrait_defaults
from yamabe.specio import write_portrait_csv


def main() -> int:
    defaults = portrait_defaults()
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="-")
    parser.add_argument("--samples", type=int, default=0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--lambda-f", type=float,
                        default=defaults["lambda_f"], dest="lambda_f")
    parser.add_argument("--xi-range", nargs=2, type=float,
                        default=defaults["xi_span"])
    args = parser.parse_args()

    initials = list(defaults["initials"])
    if args.samples:
        rng = np.random.default_rng(args.seed)
        initials += [(float(rng.uniform(0.2, 2.5)),
                      float(rng.uniform(-1.0, 1.0)))
                     for _ in range(args.samples)]
    trajectories = phase_portrait(initials, tuple(args.xi_range),
                                  k1=defaults["k1"], k2=defaults["k2"],
                                  lambda_f=args.lambda_f)
    if args.out == "-":
        write_portrait_csv(trajectories, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_portrait_csv(trajectories, fh)
    return 0


if __name__ == "__main__":
    sys.exit(main())
