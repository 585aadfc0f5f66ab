"""Replay every stored counterexample profile and print the claim checks."""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from avrunoff.witnesses import regression_suite  # noqa: E402

if __name__ == "__main__":
    report = regression_suite()
    print(report.summary())
    sys.exit(0 if report.all_passed else 1)
