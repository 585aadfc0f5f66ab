"""Regenerate the bundled synthetic survey dataset.

Voters sit on a line (triangular density), candidates at fixed positions;
each voter ranks by distance, approves within a radius, and reports a
plurality vote for their top choice. Grouped ballots, integer weights,
and a deliberately skewed reported-vote distribution so the debiasing
step has work to do.
"""

import sys
from collections import Counter
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

SEED = 424241
N_VOTERS = 300
RADIUS = 0.45
POSITIONS = [-1.0, -0.6, -0.2, 0.2, 0.6, 1.0]
LABELS = ["a", "b", "c", "d", "e", "f"]


def main() -> None:
    rng = np.random.default_rng(SEED)
    # oversample the left half so the reported votes are biased
    raw = rng.triangular(-1.0, -0.15, 1.0, N_VOTERS)
    groups = Counter()
    for v in raw:
        dist = [abs(p - v) for p in POSITIONS]
        order = tuple(sorted(range(len(POSITIONS)), key=lambda i: (dist[i], POSITIONS[i])))
        t = sum(1 for x in dist if x < RADIUS)
        reported = order[0]
        groups[(order, t, reported)] += 1
    lines = ["# synthetic 1-D survey with reported plurality votes",
             "candidates: " + " ".join(LABELS)]
    for (order, t, reported), count in sorted(groups.items()):
        approved = " ".join(LABELS[c] for c in order[:t])
        rest = " ".join(LABELS[c] for c in order[t:])
        lines.append(f"{count} * {approved} | {rest} @ {LABELS[reported]}".replace("  ", " "))
    out = ROOT / "data" / "synthetic_survey.avr"
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} ({len(groups)} groups, {N_VOTERS} voters)")


if __name__ == "__main__":
    main()
