"""Property sweep of the rule/axiom grid on random profiles.

For every cell expected to hold, checks seeded random profiles with
exhaustive transformation search; for every other cell, replays the stored
counterexample. Prints the grid and exits nonzero on any surprise.
"""

import argparse
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from avrunoff import axioms, witnesses  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--profiles", type=int, default=500,
                        help="random profiles per checked cell (default 500)")
    parser.add_argument("--seed", type=int, default=20250)
    args = parser.parse_args()

    failures = 0
    cell_marks: dict[tuple[str, str], str] = {}
    for col, axiom in enumerate(axioms.GRID_AXIOMS):
        for row, (name, spec) in enumerate(axioms.GRID_RULES):
            t0 = time.time()
            if (name, axiom) in axioms.GRID_EXPECTED:
                report = axioms.run_grid_cell(
                    name, spec, axiom, args.profiles,
                    seed=args.seed + 100 * col + row,
                )
                ok = report.clean
                mark = "yes" if ok else "BROKEN"
                extra = f"{report.profiles_checked} profiles"
            else:
                violation = witnesses.stored_grid_counterexample(name, axiom)
                ok = violation is not None and violation.verify()
                mark = "no" if ok else "MISSING"
                extra = "stored witness"
            cell_marks[(name, axiom)] = mark
            if not ok:
                failures += 1
            print(f"{name:>7} / {axiom:<22} {mark:<8} ({extra}, {time.time() - t0:.1f}s)")

    width = max(len(n) for n, _ in axioms.GRID_RULES)
    print("\n" + " ".join(["rule".ljust(width)] + [a[:12].ljust(12) for a in axioms.GRID_AXIOMS]))
    for name, _ in axioms.GRID_RULES:
        cells = [cell_marks[(name, a)].ljust(12) for a in axioms.GRID_AXIOMS]
        print(" ".join([name.ljust(width)] + cells))
    if failures:
        print(f"\n{failures} unexpected cells")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
