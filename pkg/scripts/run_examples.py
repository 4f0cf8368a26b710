#!/usr/bin/env python3
"""Certify every catalog example and optionally dump profile samples.

Usage: python scripts/run_examples.py [--out-dir DIR] [--grid N]
"""

import argparse
import sys

from yamabe.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=None)
    parser.add_argument("--grid", type=int, default=200)
    args = parser.parse_args()
    argv = ["examples", "--grid", str(args.grid)]
    if args.out_dir:
        argv += ["--out-dir", args.out_dir]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
