"""One-dimensional Euclidean voter model.

Voters sit on a line, rank candidates by distance, and approve everyone
within radius d. For the triangular voter density on [-1, 1] the optimal
position of the second finalist under the sequential discounted rules has
a closed form; for the Gaussian density it is estimated by Monte Carlo.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from avrunoff.profiles import InputError, RankedBallot, RankedProfile

GENERATOR_NAME = "numpy-pcg64"

TRIANGULAR = "triangular"
GAUSSIAN = "gaussian"
_DIST_CODE = {TRIANGULAR: 0, GAUSSIAN: 1}
GRID_INTERVAL = {TRIANGULAR: (-1.0, 1.0), GAUSSIAN: (-2.0, 2.0)}
GAUSSIAN_SIGMA = 0.5


@dataclass(frozen=True)
class SpatialConfig:
    distribution: str = TRIANGULAR
    d: float = 0.25
    n_voters: int = 20000
    n_candidates: int = 1000
    candidate_placement: str = "grid"  # or "sampled"
    seed: int = 7

    def __post_init__(self):
        if self.distribution not in _DIST_CODE:
            raise InputError(f"unknown distribution {self.distribution!r}")
        if self.d <= 0:
            raise InputError("approval radius d must be positive")
        if self.n_voters < 1 or self.n_candidates < 2:
            raise InputError("need at least one voter and two candidates")
        if self.candidate_placement not in ("grid", "sampled"):
            raise InputError(f"unknown candidate placement {self.candidate_placement!r}")


def triangular_pdf(x: float) -> float:
    """Triangular voter density (1 - |x|) / 2 on [-1, 1], zero outside.

    As written the apex is 0.5 and the total mass 1/2; every optimum below
    is invariant under scaling, and the voter sampler draws from the
    normalized shape 1 - |x|.
    """
    ax = abs(x)
    return (1.0 - ax) / 2.0 if ax <= 1.0 else 0.0


def optimal_x2_triangular(alpha: float, d: float) -> float:
    """Closed-form |position| of the optimal second finalist under the
    triangular density, with the first finalist at the center.

    Piecewise in alpha: alpha(1-d)/(2-alpha) while the optimum stays within
    d of the center, then 1+d-2d/alpha while the approval windows still
    overlap, saturating at 2d once they separate.
    """
    if not 0 <= alpha <= 1:
        raise InputError("alpha must lie in [0, 1]")
    if not 0 < d < 1:
        raise InputError("d must lie in (0, 1)")
    if alpha <= 2 * d:
        return alpha * (1 - d) / (2 - alpha)
    if alpha <= 2 * d / (1 - d):
        return 1 + d - 2 * d / alpha
    return 2 * d


def _rng(config: SpatialConfig) -> np.random.Generator:
    return np.random.default_rng([config.seed, _DIST_CODE[config.distribution]])


def _triangular_ppf(u: np.ndarray) -> np.ndarray:
    return np.where(u <= 0.5, np.sqrt(2.0 * u) - 1.0, 1.0 - np.sqrt(2.0 * (1.0 - u)))


def _normal_ppf(u: np.ndarray) -> np.ndarray:
    from statistics import NormalDist

    inv = NormalDist().inv_cdf
    return np.array([inv(x) for x in u])


def sample_voters(config: SpatialConfig) -> np.ndarray:
    """Voter positions, in ascending order; depend on seed and distribution only.

    Drawn by randomized stratified inversion: voter i sits at quantile
    (i + U_i) / n. This is a seeded Monte-Carlo sample whose interval counts
    have O(1) noise, keeping empirical argmax positions within grid
    resolution of the population optimum at the default sample sizes.
    """
    rng = _rng(config)
    n = config.n_voters
    u = (np.arange(n) + rng.random(n)) / n
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    if config.distribution == TRIANGULAR:
        return _triangular_ppf(u)
    return _normal_ppf(u) * GAUSSIAN_SIGMA


def candidate_positions(config: SpatialConfig) -> np.ndarray:
    lo, hi = GRID_INTERVAL[config.distribution]
    if config.candidate_placement == "grid":
        return np.linspace(lo, hi, config.n_candidates)
    rng = np.random.default_rng(
        [config.seed, _DIST_CODE[config.distribution], 1])
    if config.distribution == TRIANGULAR:
        pos = rng.triangular(-1.0, 0.0, 1.0, config.n_candidates)
    else:
        pos = rng.normal(0.0, GAUSSIAN_SIGMA, config.n_candidates)
    return np.sort(pos)


def sample_profile(config: SpatialConfig) -> RankedProfile:
    """Full ranked profile for the sampled electorate.

    Each voter ranks candidates by increasing distance (ties broken toward
    the lower coordinate) and approves those strictly within distance d.
    Intended for modest sizes; the sweep uses the equivalent interval
    arithmetic below instead of materializing ballots.
    """
    voters = sample_voters(config)
    grid = candidate_positions(config)
    m = len(grid)
    ballots = []
    for v in voters:
        dist = np.abs(grid - v)
        order = np.lexsort((grid, dist))
        threshold = int(np.count_nonzero(dist < config.d))
        ballots.append(RankedBallot.from_threshold([int(c) for c in order], threshold))
    labels = tuple(f"c{i}" for i in range(m))
    return RankedProfile(m, ballots, labels)


def _open_interval_counts(sorted_voters: np.ndarray, lo, hi) -> np.ndarray:
    """Voters strictly inside (lo, hi), vectorized over interval arrays."""
    left = np.searchsorted(sorted_voters, np.asarray(hi), side="left")
    right = np.searchsorted(sorted_voters, np.asarray(lo), side="right")
    return np.maximum(left - right, 0)


def approval_counts(sorted_voters: np.ndarray, grid: np.ndarray, d: float) -> np.ndarray:
    return _open_interval_counts(sorted_voters, grid - d, grid + d)


def joint_counts(sorted_voters: np.ndarray, grid: np.ndarray, d: float, x1: float) -> np.ndarray:
    lo = np.maximum(grid - d, x1 - d)
    hi = np.minimum(grid + d, x1 + d)
    return _open_interval_counts(sorted_voters, lo, np.maximum(hi, lo))


@dataclass(frozen=True)
class PositionReport:
    alpha: Fraction
    d: float
    first_position: float
    second_position: float
    candidate_positions: tuple[float, ...]
    second_stage_scores: tuple[Optional[Fraction], ...]

    @property
    def second_distance(self) -> float:
        return abs(self.second_position)


def _central_argbest(grid: np.ndarray, values: np.ndarray) -> int:
    """Index of the maximal value, ties resolved toward the center then
    toward the lower coordinate."""
    best = values.max()
    tied = np.flatnonzero(values == best)
    keys = sorted((abs(grid[i]), grid[i], i) for i in tied)
    return int(keys[0][2])


def empirical_second_finalist(config: SpatialConfig, alpha) -> PositionReport:
    """Finalist positions under the sequential discounted rule on a sampled
    profile, computed by exact interval counting.

    Equivalent to running the sequential rule on `sample_profile(config)`
    (same integer scores), without materializing the ballots.
    """
    alpha = Fraction(str(alpha)) if isinstance(alpha, float) else Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise InputError("alpha must lie in [0, 1]")
    voters = np.sort(sample_voters(config))
    grid = candidate_positions(config)
    scores = approval_counts(voters, grid, config.d)
    i1 = _central_argbest(grid, scores)
    joint = joint_counts(voters, grid, config.d, float(grid[i1]))
    # exact argmax of S(y) - alpha * J(y) via integer scaling
    scaled = scores.astype(np.int64) * alpha.denominator - alpha.numerator * joint.astype(np.int64)
    scaled[i1] = np.iinfo(np.int64).min
    i2 = _central_argbest(grid, scaled)
    curve = tuple(
        None if i == i1 else Fraction(int(scores[i])) - alpha * int(joint[i])
        for i in range(len(grid))
    )
    return PositionReport(
        alpha=alpha,
        d=config.d,
        first_position=float(grid[i1]),
        second_position=float(grid[i2]),
        candidate_positions=tuple(float(x) for x in grid),
        second_stage_scores=curve,
    )


@dataclass(frozen=True)
class SweepRow:
    distribution: str
    d: float
    alpha: Fraction
    analytic: Optional[float]
    empirical: float
    seed: int
    generator: str = GENERATOR_NAME


def sweep(config: SpatialConfig, alphas: Sequence, ds: Sequence[float]) -> list[SweepRow]:
    """Second-finalist distance for every (d, alpha) cell; analytic column
    filled for the triangular density."""
    rows = []
    for d in ds:
        cell = replace(config, d=float(d))
        for alpha in alphas:
            report = empirical_second_finalist(cell, alpha)
            analytic = (
                optimal_x2_triangular(float(report.alpha), float(d))
                if config.distribution == TRIANGULAR
                else None
            )
            rows.append(
                SweepRow(
                    distribution=config.distribution,
                    d=float(d),
                    alpha=report.alpha,
                    analytic=analytic,
                    empirical=report.second_distance,
                    seed=config.seed,
                )
            )
    return rows


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    lines = ["distribution,d,alpha,analytic,empirical,seed,generator"]
    for r in rows:
        analytic = "" if r.analytic is None else repr(r.analytic)
        lines.append(
            f"{r.distribution},{r.d!r},{r.alpha},{analytic},{r.empirical!r},{r.seed},{r.generator}"
        )
    return "\n".join(lines) + "\n"
