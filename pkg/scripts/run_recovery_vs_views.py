#!/usr/bin/env python
"""Run the view-count sweep: greedy joint decoding vs the independent
baseline on recovery rate and MSE.

Defaults to the full-scale preset; pass --desk for the quick version.
"""

import argparse
import sys

from jointrec.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--desk", action="store_true",
                        help="run the desk-scale preset instead")
    parser.add_argument("--out", default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--trials", type=int, default=None)
    args = parser.parse_args()

    preset = "recovery-vs-views-desk" if args.desk else "recovery-vs-views"
    argv = ["run", preset, "--emit-plots"]
    if args.out is not None:
        argv += ["--out", args.out]
    if args.seed is not None:
        argv += ["--seed", str(args.seed)]
    if args.trials is not None:
        argv += ["--trials", str(args.trials)]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
