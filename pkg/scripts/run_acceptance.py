#!/usr/bin/env python3
"""Run the acceptance suite with one printed line per criterion."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(subprocess.call(
        [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"),
         "-s", "-q", *sys.argv[1:]],
        cwd=ROOT,
    ))
