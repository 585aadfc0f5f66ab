"""Two-committee rules over approval profiles.

Every rule returns the full irresolute set of optimal candidate pairs with
exact scores. The joint family scores a pair {x, y} as
S(x) + S(y) - alpha * S(xy); alpha = 0, 1/2, 1 give the maximal-approval,
proportional, and coverage (Chamberlin-Courant style) rules, and alpha = 2
the clone-resistant variant. Sequential variants fix the first finalist as
an approval winner and optimize the second seat only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Literal, Mapping, NamedTuple, Optional

from avrunoff.profiles import ApprovalProfile, InputError


class CandidatePair(NamedTuple):
    """Unordered pair of distinct candidates, stored with lo < hi."""

    lo: int
    hi: int

    @classmethod
    def of(cls, a: int, b: int) -> "CandidatePair":
        if a == b:
            raise InputError("a committee pair needs two distinct candidates")
        return cls(a, b) if a < b else cls(b, a)

    def members(self) -> frozenset[int]:
        return frozenset(self)


ALPHA_AV = "alpha-av"
ALPHA_SEQ = "alpha-seq"
SEQ_PHRAGMEN = "seq-phragmen"
ENESTROM_PHRAGMEN = "enestrom-phragmen"
SAV_KIND = "sav"
TRIV_KIND = "triv"
CCAV_PLUS_KIND = "ccav-plus"


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise InputError(f"float parameter {x!r} not allowed; pass int, str or Fraction")
    return Fraction(x)


@dataclass(frozen=True)
class RuleSpec:
    """Which rule to run, with its exact-rational parameters.

    For the quota rule, exactly one of `quota` (absolute) or `beta`
    (fraction of the total ballot weight) is set.
    """

    kind: str
    alpha: Optional[Fraction] = None
    quota: Optional[Fraction] = None
    beta: Optional[Fraction] = None

    @classmethod
    def alpha_av(cls, alpha) -> "RuleSpec":
        alpha = _as_fraction(alpha)
        if alpha < 0:
            raise InputError("alpha must be >= 0")
        return cls(ALPHA_AV, alpha=alpha)

    @classmethod
    def alpha_seq(cls, alpha) -> "RuleSpec":
        alpha = _as_fraction(alpha)
        if not 0 <= alpha <= 1:
            raise InputError("sequential alpha must lie in [0, 1]")
        return cls(ALPHA_SEQ, alpha=alpha)

    @classmethod
    def seq_phragmen(cls) -> "RuleSpec":
        return cls(SEQ_PHRAGMEN)

    @classmethod
    def enestrom_phragmen(cls, quota=None, beta=None) -> "RuleSpec":
        if (quota is None) == (beta is None):
            raise InputError("give exactly one of quota or beta")
        if quota is not None:
            quota = _as_fraction(quota)
            if quota < 0:
                raise InputError("quota must be >= 0")
            return cls(ENESTROM_PHRAGMEN, quota=quota)
        beta = _as_fraction(beta)
        if not 0 <= beta <= 1:
            raise InputError("beta must lie in [0, 1]")
        return cls(ENESTROM_PHRAGMEN, beta=beta)

    @classmethod
    def sav(cls) -> "RuleSpec":
        return cls(SAV_KIND)

    @classmethod
    def triv(cls) -> "RuleSpec":
        return cls(TRIV_KIND)

    @classmethod
    def ccav_plus(cls) -> "RuleSpec":
        return cls(CCAV_PLUS_KIND)

    @classmethod
    def named(cls, name: str, quota_beta=None) -> "RuleSpec":
        """Resolve a CLI-style rule name (mav, pav, alpha-av:1/4, ...)."""
        name = name.strip().lower()
        if name.startswith("alpha-av:"):
            return cls.alpha_av(name.split(":", 1)[1])
        if name.startswith("alpha-seq:"):
            return cls.alpha_seq(name.split(":", 1)[1])
        if name == "enephr":
            beta = Fraction(1, 3) if quota_beta is None else _as_fraction(quota_beta)
            return cls.enestrom_phragmen(beta=beta)
        try:
            return _NAMED_RULES[name]()
        except KeyError:
            raise InputError(f"unknown rule name {name!r}") from None

    def describe(self) -> str:
        if self.kind == ALPHA_AV:
            return _ALPHA_AV_NAMES.get(self.alpha, f"alpha-av:{self.alpha}")
        if self.kind == ALPHA_SEQ:
            return _ALPHA_SEQ_NAMES.get(self.alpha, f"alpha-seq:{self.alpha}")
        if self.kind == ENESTROM_PHRAGMEN:
            if self.beta is not None:
                return f"enephr[beta={self.beta}]"
            return f"enephr[Q={self.quota}]"
        return {SEQ_PHRAGMEN: "sphr", SAV_KIND: "sav", TRIV_KIND: "triv",
                CCAV_PLUS_KIND: "ccav+"}[self.kind]


_ALPHA_AV_NAMES = {Fraction(0): "mav", Fraction(1, 2): "pav", Fraction(1): "ccav",
                   Fraction(2): "2av"}
_ALPHA_SEQ_NAMES = {Fraction(0): "mav", Fraction(1, 2): "spav", Fraction(1): "sccav"}

_NAMED_RULES = {
    "mav": lambda: RuleSpec.alpha_av(0),
    "av": lambda: RuleSpec.alpha_av(0),
    "pav": lambda: RuleSpec.alpha_av(Fraction(1, 2)),
    "ccav": lambda: RuleSpec.alpha_av(1),
    "2av": lambda: RuleSpec.alpha_av(2),
    "spav": lambda: RuleSpec.alpha_seq(Fraction(1, 2)),
    "sccav": lambda: RuleSpec.alpha_seq(1),
    "sphr": lambda: RuleSpec.seq_phragmen(),
    "sav": lambda: RuleSpec.sav(),
    "triv": lambda: RuleSpec.triv(),
    "ccav+": lambda: RuleSpec.ccav_plus(),
}

RULE_NAMES = tuple(sorted(_NAMED_RULES)) + ("enephr", "alpha-av:<r>", "alpha-seq:<r>")

MAV = RuleSpec.alpha_av(0)
PAV = RuleSpec.alpha_av(Fraction(1, 2))
CCAV = RuleSpec.alpha_av(1)
TWO_AV = RuleSpec.alpha_av(2)
SPAV = RuleSpec.alpha_seq(Fraction(1, 2))
SCCAV = RuleSpec.alpha_seq(1)
SPHR = RuleSpec.seq_phragmen()
ENEPHR = RuleSpec.enestrom_phragmen(beta=Fraction(1, 3))
SAV = RuleSpec.sav()
TRIV = RuleSpec.triv()
CCAV_PLUS = RuleSpec.ccav_plus()


@dataclass(frozen=True)
class RuleOutcome:
    """Optimal pairs plus the exact score of every scored pair.

    For joint rules the table covers all C(m, 2) pairs and `pairs` is its
    argmax (argmin for the load-minimizing rule). For sequential rules the
    table covers the (first finalist, other) pairs of every first-stage
    branch, and `pairs` is the union of per-branch optima.
    """

    pairs: tuple[CandidatePair, ...]
    score_table: Mapping[CandidatePair, Fraction]
    objective_sense: Literal["max", "min"] = "max"
    first_stage: Optional[tuple[int, ...]] = None
    branch_alphas: Optional[Mapping[int, Fraction]] = None
    candidate_scores: Optional[Mapping[int, Fraction]] = None

    @property
    def pair_set(self) -> frozenset[CandidatePair]:
        return frozenset(self.pairs)

    def winners_union(self) -> frozenset[int]:
        return frozenset(c for p in self.pairs for c in p)


def _require_two(profile: ApprovalProfile) -> None:
    if profile.m < 2:
        raise InputError("need at least two candidates")


def _argbest(table: Mapping[CandidatePair, Fraction], sense: str) -> tuple[CandidatePair, ...]:
    extreme = max(table.values()) if sense == "max" else min(table.values())
    return tuple(sorted(p for p, s in table.items() if s == extreme))


def all_pairs(profile: ApprovalProfile) -> list[CandidatePair]:
    return [CandidatePair(a, b) for a, b in combinations(range(profile.m), 2)]


def alpha_av(profile: ApprovalProfile, alpha) -> RuleOutcome:
    """Pairs maximizing S(x) + S(y) - alpha * S(xy) over all pairs."""
    _require_two(profile)
    alpha = _as_fraction(alpha)
    if alpha < 0:
        raise InputError("alpha must be >= 0")
    scores = profile.score_vector()
    joint = profile.joint_matrix()
    table = {
        p: scores[p.lo] + scores[p.hi] - alpha * joint.get(p, Fraction(0))
        for p in all_pairs(profile)
    }
    return RuleOutcome(_argbest(table, "max"), table)


def _seq_branches(profile: ApprovalProfile) -> tuple[list[Fraction], dict, tuple[int, ...]]:
    scores = profile.score_vector()
    joint = profile.joint_matrix()
    winners = tuple(sorted(profile.approval_winners()))
    return scores, joint, winners


def alpha_seq_av(profile: ApprovalProfile, alpha) -> RuleOutcome:
    """First finalist an approval winner, second maximizing S(y) - alpha * S(x1,y).

    All first-stage ties are expanded as branches and the per-branch optima
    unioned. Table entries carry the full pair score S(x1) + S(y) - alpha*S(x1,y).
    """
    _require_two(profile)
    alpha = _as_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise InputError("sequential alpha must lie in [0, 1]")
    scores, joint, winners = _seq_branches(profile)
    return _seq_alpha_outcome(profile, scores, joint, winners, {w: alpha for w in winners})


def _seq_alpha_outcome(profile, scores, joint, winners, alpha_by_branch) -> RuleOutcome:
    table: dict[CandidatePair, Fraction] = {}
    best: set[CandidatePair] = set()
    for x1 in winners:
        a = alpha_by_branch[x1]
        branch: dict[CandidatePair, Fraction] = {}
        for y in range(profile.m):
            if y == x1:
                continue
            p = CandidatePair.of(x1, y)
            branch[p] = scores[x1] + scores[y] - a * joint.get(p, Fraction(0))
        table.update(branch)
        best.update(_argbest(branch, "max"))
    return RuleOutcome(
        tuple(sorted(best)),
        table,
        first_stage=winners,
        branch_alphas=dict(alpha_by_branch),
    )


def enestrom_phragmen(profile: ApprovalProfile, quota=None, beta=None) -> RuleOutcome:
    """Sequential rule with per-branch discount min(1, Q / S(x1)).

    The quota is given either absolutely or as beta with Q = beta * n.
    A zero-score first finalist (all-empty profile) uses discount 1.
    """
    _require_two(profile)
    if (quota is None) == (beta is None):
        raise InputError("give exactly one of quota or beta")
    n = profile.total_weight
    q = _as_fraction(beta) * n if beta is not None else _as_fraction(quota)
    if not 0 <= q <= n:
        raise InputError(f"quota {q} outside [0, {n}]")
    scores, joint, winners = _seq_branches(profile)
    alphas = {
        w: (Fraction(1) if scores[w] == 0 else min(Fraction(1), q / scores[w]))
        for w in winners
    }
    return _seq_alpha_outcome(profile, scores, joint, winners, alphas)


def seq_phragmen(profile: ApprovalProfile) -> RuleOutcome:
    """First finalist an approval winner; second minimizes the voter load
    (1 + S(x1,y)/S(x1)) / S(y).

    Zero-score candidates carry infinite load and are excluded; if every
    candidate scores zero the outcome degenerates to all pairs.
    """
    _require_two(profile)
    scores, joint, winners = _seq_branches(profile)
    if all(s == 0 for s in scores):
        pairs = tuple(all_pairs(profile))
        return RuleOutcome(pairs, {p: Fraction(0) for p in pairs},
                           objective_sense="min", first_stage=winners)
    table: dict[CandidatePair, Fraction] = {}
    best: set[CandidatePair] = set()
    for x1 in winners:
        branch: dict[CandidatePair, Fraction] = {}
        for y in range(profile.m):
            if y == x1 or scores[y] == 0:
                continue
            p = CandidatePair.of(x1, y)
            branch[p] = (1 + joint.get(p, Fraction(0)) / scores[x1]) / scores[y]
        if branch:
            table.update(branch)
            best.update(_argbest(branch, "min"))
        else:
            # every other candidate scores zero: keep all pairs with x1
            best.update(CandidatePair.of(x1, y) for y in range(profile.m) if y != x1)
    return RuleOutcome(tuple(sorted(best)), table, objective_sense="min", first_stage=winners)


def sav(profile: ApprovalProfile) -> RuleOutcome:
    """Each ballot splits its weight evenly over its approved candidates;
    pairs maximizing the summed split scores win. Empty ballots contribute
    nothing."""
    _require_two(profile)
    split = [Fraction(0)] * profile.m
    for b in profile.ballots:
        if b.approved:
            share = b.weight / len(b.approved)
            for c in b.approved:
                split[c] += share
    table = {p: split[p.lo] + split[p.hi] for p in all_pairs(profile)}
    return RuleOutcome(
        _argbest(table, "max"),
        table,
        candidate_scores={c: split[c] for c in range(profile.m)},
    )


def triv(profile: ApprovalProfile) -> RuleOutcome:
    """All pairs, regardless of the ballots."""
    _require_two(profile)
    pairs = tuple(all_pairs(profile))
    return RuleOutcome(pairs, {p: Fraction(0) for p in pairs})


def ccav_plus(profile: ApprovalProfile) -> RuleOutcome:
    """Coverage-optimal pairs, ties broken by the plain approval sum.

    Scores are (coverage score, approval sum) compared lexicographically,
    so `pairs` is still the exact argmax of the table.
    """
    _require_two(profile)
    scores = profile.score_vector()
    joint = profile.joint_matrix()
    table = {}
    for p in all_pairs(profile):
        msum = scores[p.lo] + scores[p.hi]
        table[p] = (msum - joint.get(p, Fraction(0)), msum)
    best = max(table.values())
    pairs = tuple(sorted(p for p, s in table.items() if s == best))
    return RuleOutcome(pairs, table)


def evaluate(profile: ApprovalProfile, spec: RuleSpec) -> RuleOutcome:
    """Dispatch a RuleSpec to the matching rule."""
    if spec.kind == ALPHA_AV:
        return alpha_av(profile, spec.alpha)
    if spec.kind == ALPHA_SEQ:
        return alpha_seq_av(profile, spec.alpha)
    if spec.kind == SEQ_PHRAGMEN:
        return seq_phragmen(profile)
    if spec.kind == ENESTROM_PHRAGMEN:
        return enestrom_phragmen(profile, quota=spec.quota, beta=spec.beta)
    if spec.kind == SAV_KIND:
        return sav(profile)
    if spec.kind == TRIV_KIND:
        return triv(profile)
    if spec.kind == CCAV_PLUS_KIND:
        return ccav_plus(profile)
    raise InputError(f"unknown rule kind {spec.kind!r}")


def alpha_av_breakpoints(profile: ApprovalProfile, lo=Fraction(0), hi=Fraction(1)) -> list[Fraction]:
    """Exact alpha values in (lo, hi] where the alpha-av argmax set changes.

    Pair scores are affine in alpha, so the argmax can only change where two
    pair lines cross; each candidate crossing is kept if the argmax set
    differs on its two sides.
    """
    _require_two(profile)
    lo, hi = _as_fraction(lo), _as_fraction(hi)
    scores = profile.score_vector()
    joint = profile.joint_matrix()
    lines = {
        p: (scores[p.lo] + scores[p.hi], joint.get(p, Fraction(0)))
        for p in all_pairs(profile)
    }

    def argmax_at(a: Fraction) -> frozenset[CandidatePair]:
        vals = {p: m - a * j for p, (m, j) in lines.items()}
        best = max(vals.values())
        return frozenset(p for p, v in vals.items() if v == best)

    crossings = set()
    for (p, (mp, jp)), (q, (mq, jq)) in combinations(lines.items(), 2):
        if jp != jq:
            a = Fraction(mp - mq, jp - jq)
            if lo < a <= hi:
                crossings.add(a)
    # the argmax set is piecewise constant; it can only jump at a crossing
    # of two pair lines, so compare each candidate point with the open
    # intervals on both sides
    points = sorted(crossings)
    breakpoints = []
    for i, a in enumerate(points):
        left = (points[i - 1] + a) / 2 if i > 0 else (lo + a) / 2
        at = argmax_at(a)
        changed = argmax_at(left) != at
        if a < hi:
            right = (a + points[i + 1]) / 2 if i + 1 < len(points) else (a + hi) / 2
            changed = changed or at != argmax_at(right)
        if changed:
            breakpoints.append(a)
    return breakpoints
