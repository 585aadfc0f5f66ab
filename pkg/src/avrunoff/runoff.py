"""Composition of a two-committee rule with a pairwise majority runoff."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from avrunoff.profiles import InputError, RankedProfile
from avrunoff.rules import TRIV, CandidatePair, RuleOutcome, RuleSpec, evaluate


@dataclass(frozen=True)
class RunoffResult:
    """Majority outcome of every finalist pair, winners unioned.

    A tied pair contributes both of its members; no tie-break is invented.
    """

    winners: frozenset[int]
    finalist_pairs: RuleOutcome
    per_pair_majority: Mapping[CandidatePair, frozenset[int]]


def avr(profile: RankedProfile, spec: RuleSpec) -> RunoffResult:
    """Run `spec` on the approval projection, then majority-vote each pair.

    Rankings are required; prefix consistency of the ballots is not (the
    axiom searches feed deviations that may break it).
    """
    if not isinstance(profile, RankedProfile):
        raise InputError("runoff needs ranked ballots; approval-only profiles "
                         "cannot be majority-voted")
    outcome = evaluate(profile.as_approval(), spec)
    per_pair = {p: profile.majority_winners(p.lo, p.hi) for p in outcome.pairs}
    winners = frozenset(c for ws in per_pair.values() for c in ws)
    return RunoffResult(winners, outcome, per_pair)


def triv_runoff_winners(profile: RankedProfile) -> frozenset[int]:
    """Winners when every pair reaches the runoff: everyone except a
    strict loser of all pairwise contests."""
    return avr(profile, TRIV).winners
