"""Run the spatial second-finalist sweeps and write CSV files.

Produces one file per distribution with the analytic column filled for the
triangular density. Plot alpha on the x axis and the empirical (or
analytic) distance on the y axis to reproduce the position curves.
"""

import sys
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from avrunoff import spatial  # noqa: E402

ALPHAS = [Fraction(i, 100) for i in range(1, 101)]
DS = [0.1, 0.25, 0.33, 0.5]


def main() -> None:
    out_dir = ROOT / "out"
    out_dir.mkdir(exist_ok=True)
    for dist in (spatial.TRIANGULAR, spatial.GAUSSIAN):
        config = spatial.SpatialConfig(distribution=dist, seed=7)
        rows = spatial.sweep(config, ALPHAS, DS)
        path = out_dir / f"second_finalist_{dist}.csv"
        path.write_text(spatial.sweep_csv(rows))
        print(f"wrote {path} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
