"""Core data model: candidates, weighted ballots, profiles, majority comparisons.

All weights and scores are exact rationals (`fractions.Fraction`), so ties
are genuine ties and never float artifacts. Ballots are stored grouped with
a multiplicity weight; fractional weights appear after debiasing.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence


class InputError(ValueError):
    """Raised for malformed inputs (unknown candidate, bad weight, ...)."""


class Candidate(NamedTuple):
    id: int
    label: str


def default_labels(m: int) -> tuple[str, ...]:
    """Single letters a..z for small m, then c26, c27, ..."""
    letters = string.ascii_lowercase
    return tuple(letters[i] if i < 26 else f"c{i}" for i in range(m))


def as_weight(w) -> Fraction:
    """Coerce to an exact nonnegative rational; floats are rejected."""
    if isinstance(w, float):
        raise InputError(f"float weight {w!r} not allowed; pass int, str or Fraction")
    try:
        wf = Fraction(w)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad weight {w!r}") from exc
    if wf < 0:
        raise InputError(f"negative weight {w!r}")
    return wf


@dataclass(frozen=True)
class ApprovalBallot:
    """A set of approved candidate ids with a multiplicity weight."""

    approved: frozenset[int]
    weight: Fraction

    def __init__(self, approved: Iterable[int], weight=1):
        object.__setattr__(self, "approved", frozenset(approved))
        object.__setattr__(self, "weight", as_weight(weight))


@dataclass(frozen=True)
class RankedBallot:
    """A full ranking (best first) plus an approved set and a weight.

    The approved set is stored explicitly rather than as a threshold so
    that ballots breaking prefix consistency (approving someone ranked
    below an unapproved candidate) remain representable; axiom searches
    need them. `validate(strict=True)` flags such ballots.
    """

    ranking: tuple[int, ...]
    approved: frozenset[int]
    weight: Fraction

    def __init__(self, ranking: Iterable[int], approved: Iterable[int], weight=1):
        object.__setattr__(self, "ranking", tuple(ranking))
        object.__setattr__(self, "approved", frozenset(approved))
        object.__setattr__(self, "weight", as_weight(weight))

    @classmethod
    def from_threshold(cls, ranking: Iterable[int], threshold: int, weight=1) -> "RankedBallot":
        ranking = tuple(ranking)
        if not 0 <= threshold <= len(ranking):
            raise InputError(f"threshold {threshold} outside 0..{len(ranking)}")
        return cls(ranking, ranking[:threshold], weight)

    @property
    def threshold(self) -> int:
        return len(self.approved)

    def position(self, c: int) -> int:
        return self._positions()[c]

    def prefers(self, a: int, b: int) -> bool:
        pos = self._positions()
        return pos[a] < pos[b]

    def _positions(self) -> dict[int, int]:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {c: i for i, c in enumerate(self.ranking)}
            self.__dict__["_pos"] = pos
        return pos

    def is_consistent(self) -> bool:
        """True if the approved set is exactly the top-|approved| prefix."""
        return self.approved == frozenset(self.ranking[: len(self.approved)])


@dataclass(frozen=True)
class ValidationIssue:
    ballot_index: Optional[int]
    message: str


def _check_labels(m: int, labels) -> tuple[str, ...]:
    labels = default_labels(m) if labels is None else tuple(labels)
    if len(labels) != m:
        raise InputError(f"{len(labels)} labels for {m} candidates")
    if len(set(labels)) != m:
        raise InputError("duplicate candidate labels")
    return labels


@dataclass(frozen=True)
class ApprovalProfile:
    """A weighted multiset of approval ballots over candidates 0..m-1."""

    m: int
    ballots: tuple[ApprovalBallot, ...]
    labels: tuple[str, ...] = None

    def __init__(self, m: int, ballots: Iterable[ApprovalBallot], labels=None):
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "ballots", tuple(ballots))
        object.__setattr__(self, "labels", _check_labels(self.m, labels))

    @property
    def candidates(self) -> list[Candidate]:
        return [Candidate(i, lab) for i, lab in enumerate(self.labels)]

    @property
    def total_weight(self) -> Fraction:
        return sum((b.weight for b in self.ballots), Fraction(0))

    def _require_candidate(self, c: int) -> None:
        if not (isinstance(c, int) and 0 <= c < self.m):
            raise InputError(f"unknown candidate id {c!r} (m={self.m})")

    def _int_weights(self) -> tuple[list[int], int]:
        """Weights as integers over a common denominator (cached).

        Keeps the score accumulation in plain int arithmetic; results are
        turned back into exact Fractions at the end.
        """
        cached = self.__dict__.get("_iw")
        if cached is None:
            denom = math.lcm(*(b.weight.denominator for b in self.ballots)) if self.ballots else 1
            ints = [int(b.weight * denom) for b in self.ballots]
            cached = (ints, denom)
            self.__dict__["_iw"] = cached
        return cached

    def approval_score(self, c: int) -> Fraction:
        """Total weight of ballots approving c."""
        self._require_candidate(c)
        ints, denom = self._int_weights()
        return Fraction(
            sum(w for b, w in zip(self.ballots, ints) if c in b.approved), denom
        )

    def joint_score(self, group: Iterable[int]) -> Fraction:
        """Total weight of ballots approving every candidate in `group`."""
        group = frozenset(group)
        for c in group:
            self._require_candidate(c)
        ints, denom = self._int_weights()
        return Fraction(
            sum(w for b, w in zip(self.ballots, ints) if group <= b.approved), denom
        )

    def score_vector(self) -> list[Fraction]:
        ints, denom = self._int_weights()
        scores = [0] * self.m
        for b, w in zip(self.ballots, ints):
            for c in b.approved:
                scores[c] += w
        return [Fraction(s, denom) for s in scores]

    def joint_matrix(self) -> dict[tuple[int, int], Fraction]:
        """Joint approval weight for every pair (i, j) with i < j."""
        ints, denom = self._int_weights()
        joint: dict[tuple[int, int], int] = {}
        for b, w in zip(self.ballots, ints):
            app = sorted(b.approved)
            for i, x in enumerate(app):
                for y in app[i + 1:]:
                    key = (x, y)
                    joint[key] = joint.get(key, 0) + w
        return {k: Fraction(v, denom) for k, v in joint.items()}

    def approval_winners(self) -> frozenset[int]:
        """All candidates with the maximal approval score."""
        if self.m < 1:
            raise InputError("no candidates")
        scores = self.score_vector()
        best = max(scores)
        return frozenset(c for c, s in enumerate(scores) if s == best)

    def validate(self) -> list[ValidationIssue]:
        issues = []
        for i, b in enumerate(self.ballots):
            bad = [c for c in b.approved if not 0 <= c < self.m]
            if bad:
                issues.append(ValidationIssue(i, f"approved ids out of range: {sorted(bad)}"))
        return issues

    def relabel(self, perm: Sequence[int]) -> "ApprovalProfile":
        """Candidate i of the result is candidate perm[i] of self."""
        inv = _inverse_perm(perm, self.m)
        ballots = [ApprovalBallot({inv[c] for c in b.approved}, b.weight) for b in self.ballots]
        labels = tuple(self.labels[perm[i]] for i in range(self.m))
        return ApprovalProfile(self.m, ballots, labels)

    def scaled(self, factor) -> "ApprovalProfile":
        factor = Fraction(factor)
        return ApprovalProfile(
            self.m,
            [ApprovalBallot(b.approved, b.weight * factor) for b in self.ballots],
            self.labels,
        )

    def canonical(self) -> "ApprovalProfile":
        """Merge equal ballots and sort groups; drops zero-weight groups."""
        merged: dict[frozenset[int], Fraction] = {}
        for b in self.ballots:
            merged[b.approved] = merged.get(b.approved, Fraction(0)) + b.weight
        groups = sorted(
            ((tuple(sorted(a)), w) for a, w in merged.items() if w),
            key=lambda kv: kv[0],
        )
        return ApprovalProfile(self.m, [ApprovalBallot(a, w) for a, w in groups], self.labels)


@dataclass(frozen=True)
class RankedProfile:
    """A weighted multiset of ranked ballots with approved sets.

    Projects onto an :class:`ApprovalProfile` for the first-round rules;
    rankings feed the pairwise majority comparisons of the runoff.
    """

    m: int
    ballots: tuple[RankedBallot, ...]
    labels: tuple[str, ...] = None

    def __init__(self, m: int, ballots: Iterable[RankedBallot], labels=None):
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "ballots", tuple(ballots))
        object.__setattr__(self, "labels", _check_labels(self.m, labels))

    @property
    def total_weight(self) -> Fraction:
        return sum((b.weight for b in self.ballots), Fraction(0))

    def _require_candidate(self, c: int) -> None:
        if not (isinstance(c, int) and 0 <= c < self.m):
            raise InputError(f"unknown candidate id {c!r} (m={self.m})")

    def as_approval(self) -> ApprovalProfile:
        return ApprovalProfile(
            self.m,
            [ApprovalBallot(b.approved, b.weight) for b in self.ballots],
            self.labels,
        )

    def _int_weights(self) -> tuple[list[int], int]:
        cached = self.__dict__.get("_iw")
        if cached is None:
            denom = math.lcm(*(b.weight.denominator for b in self.ballots)) if self.ballots else 1
            ints = [int(b.weight * denom) for b in self.ballots]
            cached = (ints, denom)
            self.__dict__["_iw"] = cached
        return cached

    def majority_margin(self, a: int, b: int) -> Fraction:
        """Weight preferring a over b minus weight preferring b over a."""
        self._require_candidate(a)
        self._require_candidate(b)
        if a == b:
            raise InputError("majority comparison needs two distinct candidates")
        ints, denom = self._int_weights()
        margin = 0
        for bal, w in zip(self.ballots, ints):
            if w:
                margin += w if bal.prefers(a, b) else -w
        return Fraction(margin, denom)

    def majority_winners(self, a: int, b: int) -> frozenset[int]:
        """{a}, {b}, or {a, b} on an exact tie."""
        margin = self.majority_margin(a, b)
        if margin > 0:
            return frozenset({a})
        if margin < 0:
            return frozenset({b})
        return frozenset({a, b})

    def dominates(self, a: int, b: int) -> bool:
        """a beats b on every positive-weight ballot and is approved over b somewhere.

        Condition (1): every voter ranks a above b. Condition (2): some
        voter approves a but not b.
        """
        self._require_candidate(a)
        self._require_candidate(b)
        if a == b:
            raise InputError("domination needs two distinct candidates")
        live = [bal for bal in self.ballots if bal.weight > 0]
        if not all(bal.prefers(a, b) for bal in live):
            return False
        return any(a in bal.approved and b not in bal.approved for bal in live)

    def condorcet_loser(self) -> Optional[int]:
        """The candidate losing every pairwise majority strictly, if any."""
        if self.m < 2:
            return None
        for c in range(self.m):
            if all(self.majority_margin(c, other) < 0 for other in range(self.m) if other != c):
                return c
        return None

    def validate(self, strict: bool = True) -> list[ValidationIssue]:
        """Structural problems, plus prefix-consistency failures when strict."""
        issues = []
        full = frozenset(range(self.m))
        for i, b in enumerate(self.ballots):
            if len(b.ranking) != len(set(b.ranking)):
                issues.append(ValidationIssue(i, "duplicate candidate in ranking"))
                continue
            if frozenset(b.ranking) != full:
                issues.append(ValidationIssue(i, "ranking is not a permutation of all candidates"))
                continue
            if not b.approved <= full:
                issues.append(ValidationIssue(i, "approved set mentions unknown candidates"))
                continue
            if strict and not b.is_consistent():
                issues.append(
                    ValidationIssue(i, "approved set is not the top prefix of the ranking")
                )
        return issues

    def relabel(self, perm: Sequence[int]) -> "RankedProfile":
        inv = _inverse_perm(perm, self.m)
        ballots = [
            RankedBallot(
                tuple(inv[c] for c in b.ranking),
                {inv[c] for c in b.approved},
                b.weight,
            )
            for b in self.ballots
        ]
        labels = tuple(self.labels[perm[i]] for i in range(self.m))
        return RankedProfile(self.m, ballots, labels)

    def scaled(self, factor) -> "RankedProfile":
        factor = Fraction(factor)
        return RankedProfile(
            self.m,
            [RankedBallot(b.ranking, b.approved, b.weight * factor) for b in self.ballots],
            self.labels,
        )

    def canonical(self) -> "RankedProfile":
        merged: dict[tuple[tuple[int, ...], frozenset[int]], Fraction] = {}
        for b in self.ballots:
            key = (b.ranking, b.approved)
            merged[key] = merged.get(key, Fraction(0)) + b.weight
        groups = sorted(
            ((r, a, w) for (r, a), w in merged.items() if w),
            key=lambda kv: (kv[0], tuple(sorted(kv[1]))),
        )
        return RankedProfile(self.m, [RankedBallot(r, a, w) for r, a, w in groups], self.labels)

    def replace_ballot(self, index: int, new: RankedBallot) -> "RankedProfile":
        """Split one unit of weight off group `index` and give it ballot `new`.

        Group weights must be positive integers (each group stands for that
        many identical voters); the deviator is a single voter.
        """
        old = self.ballots[index]
        if old.weight != int(old.weight) or old.weight < 1:
            raise InputError("single-voter deviation needs integer group weights")
        ballots = list(self.ballots)
        if old.weight == 1:
            ballots[index] = RankedBallot(new.ranking, new.approved, 1)
        else:
            ballots[index] = RankedBallot(old.ranking, old.approved, old.weight - 1)
            ballots.append(RankedBallot(new.ranking, new.approved, 1))
        return RankedProfile(self.m, ballots, self.labels)


def _inverse_perm(perm: Sequence[int], m: int) -> list[int]:
    perm = list(perm)
    if sorted(perm) != list(range(m)):
        raise InputError("not a permutation of candidate ids")
    inv = [0] * m
    for i, p in enumerate(perm):
        inv[p] = i
    return inv
