#!/usr/bin/env python3
"""
Console entry points for pcombine.
"""

import sys

from pcombine.cli import main


def run_cli():
    """Run the pcombine command line."""
    sys.exit(main(sys.argv[1:]))


def reproduce_tables():
    """Print the price-for-validity tables at epsilon 0.01, 0.05 and 0.0001, then the log-ratio table."""
    print("Reproducing price-for-validity tables")
    print("-" * 40)

    for epsilon in ("0.01", "0.05", "0.0001"):
        print(f"\nepsilon = {epsilon}")
        code = main(["table", "--epsilon", epsilon, "--wide", "--log-level", "WARNING"])
        if code:
            sys.exit(code)

    print("\n(1/log K) b/a")
    sys.exit(main(["table", "--log-ratio", "--wide", "--log-level", "WARNING"]))
