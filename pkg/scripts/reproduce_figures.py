#!/usr/bin/env python3
"""
Reproduce the Figure Curves

Writes the CSV data behind the four reference figures (DOR and IOR of ORA
and OPRA) into an output directory.

Usage:
    python scripts/reproduce_figures.py [OUTPUT_DIR] [--method all]
"""

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from fading_limits.cli import main as cli_main
from fading_limits.commands.models import PRESETS

DEFAULT_OUTPUT_DIR = "figures"


def reproduce_figures(output_dir: Path, method: str = "analytic") -> int:
    """Run every preset; returns the first nonzero exit code, else 0."""
    print("=" * 60)
    print("Reproducing figure curves")
    print("=" * 60)

    output_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    for preset, values in PRESETS.items():
        target = output_dir / f"{preset.value}.csv"
        argv = [
            values["command"].value,
            "--preset", preset.value,
            "--method", method,
            "--out", str(target),
        ]
        code = cli_main(argv)
        if code == 0:
            print(f"\n✅ {preset.value}: {target}")
        else:
            print(f"\n❌ {preset.value}: exit code {code}")
            status = status or code

    print("\n" + "=" * 60)
    print("Done" if status == 0 else "Finished with errors")
    print("=" * 60)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Write the CSV data of figures 1-4.")
    parser.add_argument("output_dir", nargs="?", default=DEFAULT_OUTPUT_DIR, type=Path)
    parser.add_argument(
        "--method", default="analytic", choices=["analytic", "convolution", "montecarlo", "all"],
    )
    args = parser.parse_args(argv)
    return reproduce_figures(args.output_dir, args.method)


if __name__ == "__main__":
    sys.exit(main())
