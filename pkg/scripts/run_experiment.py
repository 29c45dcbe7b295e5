#!/usr/bin/env python3
"""Run one named experiment from the registry.

Usage: python scripts/run_experiment.py NAME [--out DIR] [--fast] [--seed S]
"""

import argparse
import sys
from pathlib import Path

from acfilter.experiments import EXPERIMENTS, experiment


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("name", choices=sorted(EXPERIMENTS))
    parser.add_argument("--out", type=Path, default=Path("artifacts"))
    parser.add_argument("--fast", action="store_true")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    return experiment(args.name, out_root=args.out, fast=args.fast, seed=args.seed)


if __name__ == "__main__":
    sys.exit(main())
