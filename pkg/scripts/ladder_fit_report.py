"""Print the printed-vs-fitted comparison report for a preset or config file.

    python3 scripts/ladder_fit_report.py --preset fig1 --seed 0
"""

import argparse
import sys

from superint import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", default="fig1")
    ap.add_argument("--config")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    argv = ["report", "--preset", args.preset, "--seed", str(args.seed)]
    if args.config:
        argv += ["--config", args.config]
    sys.exit(cli.main(argv))


if __name__ == "__main__":
    main()
