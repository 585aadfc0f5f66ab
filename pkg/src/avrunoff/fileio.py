"""Plain-text profile format, debiasing reweighter, affinity networks.

Ballot lines mirror the bar notation for ranked ballots with an approval
threshold::

    # comment
    candidates: a b c d
    2 * a | b c d          # two voters ranking a>b>c>d, approving {a}
    3 * b a | d c @ b      # optional trailing reported plurality vote
    4 * | b c a            # empty approval set

Files without a bar carry approval sets only; they parse to an
ApprovalProfile that the first-round rules accept but the runoff rejects.
All weights are exact rationals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from avrunoff.profiles import (
    ApprovalBallot,
    ApprovalProfile,
    InputError,
    RankedBallot,
    RankedProfile,
)

Profile = Union[ApprovalProfile, RankedProfile]


class ParseError(InputError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class ProfileDocument:
    """A parsed profile plus the optional reported vote of each group."""

    profile: Profile
    reported: tuple[Optional[int], ...]


def parse_document(text: str) -> ProfileDocument:
    labels: Optional[list[str]] = None
    rows = []  # (lineno, weight, prefix labels, suffix labels or None, reported)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("candidates:"):
            if rows or labels is not None:
                raise ParseError("candidates: header must come first", lineno)
            labels = line[len("candidates:"):].split()
            if len(set(labels)) != len(labels):
                raise ParseError("duplicate label in candidates: header", lineno)
            continue
        rows.append(_parse_ballot_line(line, lineno))

    if not rows:
        if labels is None:
            raise ParseError("no ballots found")
        return ProfileDocument(ApprovalProfile(len(labels), [], labels), ())
    ranked = rows[0][3] is not None
    for lineno, _, _, suffix, _ in rows:
        if (suffix is not None) != ranked:
            raise ParseError("cannot mix ranked (bar) and approval-only lines", lineno)

    if labels is None:
        seen = set()
        for _, _, prefix, suffix, reported in rows:
            seen.update(prefix)
            seen.update(suffix or [])
            if reported:
                seen.add(reported)
        labels = sorted(seen)
    ids = {lab: i for i, lab in enumerate(labels)}
    m = len(labels)

    def lookup(lab: str, lineno: int) -> int:
        try:
            return ids[lab]
        except KeyError:
            raise ParseError(f"unknown candidate label {lab!r}", lineno) from None

    ballots, reported_votes, linenos = [], [], []
    for lineno, weight, prefix, suffix, reported in rows:
        names = prefix + (suffix or [])
        if len(set(names)) != len(names):
            raise ParseError("duplicate candidate in ballot", lineno)
        approved = [lookup(lab, lineno) for lab in prefix]
        if ranked:
            ranking = approved + [lookup(lab, lineno) for lab in suffix]
            ballots.append(RankedBallot(ranking, approved, weight))
        else:
            ballots.append(ApprovalBallot(approved, weight))
        reported_votes.append(lookup(reported, lineno) if reported else None)
        linenos.append(lineno)

    if ranked:
        profile: Profile = RankedProfile(m, ballots, labels)
        issues = profile.validate(strict=True)
    else:
        profile = ApprovalProfile(m, ballots, labels)
        issues = profile.validate()
    if issues:
        first = issues[0]
        raise ParseError(first.message, linenos[first.ballot_index])
    return ProfileDocument(profile, tuple(reported_votes))


def parse_profile(text: str) -> Profile:
    """Parse ballot text; strict validation applied."""
    return parse_document(text).profile


def _parse_ballot_line(line: str, lineno: int):
    reported = None
    if "@" in line:
        body, _, rep = line.rpartition("@")
        reported = rep.strip()
        if not reported or len(reported.split()) != 1:
            raise ParseError("reported vote must be a single label", lineno)
        line = body
    weight = Fraction(1)
    if "*" in line:
        wtext, _, line = line.partition("*")
        try:
            weight = Fraction(wtext.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad weight {wtext.strip()!r}", lineno) from exc
        if weight < 0:
            raise ParseError("negative weight", lineno)
    if line.count("|") > 1:
        raise ParseError("more than one bar", lineno)
    if "|" in line:
        prefix, _, suffix = line.partition("|")
        return lineno, weight, prefix.split(), suffix.split(), reported
    return lineno, weight, line.split(), None, reported


def serialize_document(doc: ProfileDocument) -> str:
    """Canonical text: header, merged groups in sorted order, reduced weights."""
    profile, reported = doc.profile, doc.reported
    labels = profile.labels
    merged: dict[tuple, Fraction] = {}
    for ballot, rep in zip(profile.ballots, reported):
        if isinstance(ballot, RankedBallot):
            # the bar notation cannot express approvals that are not a
            # ranking prefix, so refuse rather than silently reorder
            if not ballot.is_consistent():
                raise InputError(
                    "cannot serialize a ballot whose approvals are not a "
                    "prefix of its ranking"
                )
            t = ballot.threshold
            key = (ballot.ranking[:t], ballot.ranking[t:], True, rep)
        else:
            key = (tuple(sorted(ballot.approved)), (), False, rep)
        merged[key] = merged.get(key, Fraction(0)) + ballot.weight
    lines = ["candidates: " + " ".join(labels)]
    for (prefix, suffix, ranked, rep), weight in sorted(
        merged.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][3] is not None, kv[0][3] or 0)
    ):
        if weight == 0:
            continue
        body = " ".join(labels[c] for c in prefix)
        if ranked:
            body = (body + " | " + " ".join(labels[c] for c in suffix)).strip()
        text = f"{weight} * {body}".rstrip()
        if rep is not None:
            text += f" @ {labels[rep]}"
        lines.append(text)
    return "\n".join(lines) + "\n"


def serialize_profile(profile: Profile) -> str:
    return serialize_document(ProfileDocument(profile, (None,) * len(profile.ballots)))


@dataclass(frozen=True)
class DebiasSpec:
    """Reported plurality vote per ballot group, and the population shares
    those votes should be reweighted to match."""

    reported: tuple[Optional[int], ...]
    target_shares: Mapping[int, Fraction]


def debias(profile: Profile, spec: DebiasSpec) -> Profile:
    """Reweight each group by target_share / sample_share of its reported
    vote, then rescale so the total weight is unchanged."""
    if len(spec.reported) != len(profile.ballots):
        raise InputError("one reported vote per ballot group required")
    if any(r is None for r in spec.reported):
        raise InputError("every ballot group needs a reported vote to debias")
    targets = {c: Fraction(s) for c, s in spec.target_shares.items()}
    if any(s < 0 for s in targets.values()) or sum(targets.values()) > 1:
        raise InputError("target shares must be nonnegative and sum to at most 1")
    n = profile.total_weight
    if n == 0:
        raise InputError("cannot debias an empty profile")
    sample = {}
    for ballot, rep in zip(profile.ballots, spec.reported):
        sample[rep] = sample.get(rep, Fraction(0)) + ballot.weight
    factors = {}
    for rep, share in sample.items():
        if rep not in targets:
            raise InputError(f"no target share for reported candidate {profile.labels[rep]!r}")
        if share == 0:
            raise InputError(f"zero sample share for {profile.labels[rep]!r}")
        factors[rep] = targets[rep] / (share / n)
    new_weights = [b.weight * factors[rep] for b, rep in zip(profile.ballots, spec.reported)]
    total = sum(new_weights, Fraction(0))
    if total == 0:
        raise InputError("debiasing zeroed out the profile")
    scale = n / total
    if isinstance(profile, RankedProfile):
        ballots = [RankedBallot(b.ranking, b.approved, w * scale)
                   for b, w in zip(profile.ballots, new_weights)]
        return RankedProfile(profile.m, ballots, profile.labels)
    ballots = [ApprovalBallot(b.approved, w * scale)
               for b, w in zip(profile.ballots, new_weights)]
    return ApprovalProfile(profile.m, ballots, profile.labels)


@dataclass(frozen=True)
class AffinityGraph:
    """Complete candidate graph weighted by ballot overlap.

    Edge weight is joint / (score_a + score_b - joint); pairs nobody
    approves have no defined edge and are omitted.
    """

    labels: tuple[str, ...]
    node_sizes: tuple[Fraction, ...]
    edges: Mapping[tuple[int, int], Fraction]


def jaccard_affinity(profile: ApprovalProfile) -> AffinityGraph:
    if profile.m < 2:
        raise InputError("need at least two candidates")
    scores = profile.score_vector()
    joint = profile.joint_matrix()
    edges = {}
    for a in range(profile.m):
        for b in range(a + 1, profile.m):
            j = joint.get((a, b), Fraction(0))
            union = scores[a] + scores[b] - j
            if union > 0:
                edges[(a, b)] = j / union
    return AffinityGraph(profile.labels, tuple(scores), edges)


def export_network(graph: AffinityGraph, threshold, fmt: str = "dot") -> str:
    """Emit nodes plus the edges strictly above `threshold`, deterministically."""
    threshold = Fraction(threshold) if not isinstance(threshold, float) else Fraction(str(threshold))
    if not 0 <= threshold <= 1:
        raise InputError("threshold must lie in [0, 1]")
    kept = sorted((pair, w) for pair, w in graph.edges.items() if w > threshold)
    max_size = max(graph.node_sizes) if any(graph.node_sizes) else Fraction(1)
    if fmt == "dot":
        out = ["graph affinity {", "  node [shape=circle];"]
        for i, lab in enumerate(graph.labels):
            rel = graph.node_sizes[i] / max_size if max_size else Fraction(0)
            out.append(
                f'  "{lab}" [score="{graph.node_sizes[i]}", width={float(rel):.6f}];'
            )
        for (a, b), w in kept:
            out.append(
                f'  "{graph.labels[a]}" -- "{graph.labels[b]}" '
                f'[weight="{w}", penwidth={float(w) * 10:.6f}];'
            )
        out.append("}")
        return "\n".join(out) + "\n"
    if fmt == "json":
        payload = {
            "nodes": [
                {"id": i, "label": lab, "score": str(graph.node_sizes[i])}
                for i, lab in enumerate(graph.labels)
            ],
            "edges": [
                {"source": a, "target": b, "weight": str(w)} for (a, b), w in kept
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    raise InputError(f"unknown network format {fmt!r}")


def load_target_shares(text: str, labels: Sequence[str]) -> dict[int, Fraction]:
    """Targets from JSON ({label: share}) with decimal strings kept exact."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad targets file: {exc}") from exc
    ids = {lab: i for i, lab in enumerate(labels)}
    shares = {}
    for lab, value in raw.items():
        if lab not in ids:
            raise InputError(f"target for unknown candidate {lab!r}")
        shares[ids[lab]] = Fraction(str(value))
    return shares
