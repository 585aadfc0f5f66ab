"""Command-line front end.

Subcommands: score, finalists, winner, sweep-alpha, simulate, axioms,
network, debias. Exit codes: 0 ok, 1 input error, 2 internal error,
3 inconclusive axiom search.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import traceback
from fractions import Fraction
from pathlib import Path

from avrunoff import axioms as axioms_mod
from avrunoff import fileio, rules, spatial
from avrunoff.profiles import InputError, RankedProfile
from avrunoff.rules import CandidatePair, RuleSpec
from avrunoff.runoff import avr

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2
EXIT_INCONCLUSIVE = 3

DEFAULT_SCORE_RULES = "mav,pav,ccav,sphr,sav"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if not exc.code else EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="avr", description="approval-with-runoff elections toolbox"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", help="write output to this file instead of stdout")
        return p

    p = add("score", cmd_score, "pair score table for one or more rules")
    p.add_argument("--profile", required=True)
    p.add_argument("--rule", default=DEFAULT_SCORE_RULES,
                   help=f"comma-separated rule names (default {DEFAULT_SCORE_RULES})")
    p.add_argument("--quota-beta", default=None)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p = add("finalists", cmd_finalists, "optimal finalist pairs of a rule")
    p.add_argument("--profile", required=True)
    p.add_argument("--rule", required=True,
                   help="one of: " + ", ".join(rules.RULE_NAMES))
    p.add_argument("--alpha", default=None)
    p.add_argument("--quota-beta", default=None)

    p = add("winner", cmd_winner, "runoff winners (rule + pairwise majority)")
    p.add_argument("--profile", required=True)
    p.add_argument("--rule", required=True)
    p.add_argument("--alpha", default=None)
    p.add_argument("--quota-beta", default=None)

    p = add("sweep-alpha", cmd_sweep_alpha,
            "alpha-av winning pairs and alpha-seq second-seat scores over [0,1]")
    p.add_argument("--profile", required=True)
    p.add_argument("--points", type=int, default=101, help="grid points (default 101)")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p = add("simulate", cmd_simulate, "spatial second-finalist sweep, CSV output")
    p.add_argument("--distribution", choices=(spatial.TRIANGULAR, spatial.GAUSSIAN),
                   default=spatial.TRIANGULAR)
    p.add_argument("--d", default="0.1,0.25,0.33,0.5", help="comma-separated radii")
    p.add_argument("--alphas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")
    p.add_argument("--n-voters", type=int, default=20000)
    p.add_argument("--n-candidates", type=int, default=1000)
    p.add_argument("--placement", choices=("grid", "sampled"), default="grid")
    p.add_argument("--seed", type=int, default=7)

    p = add("axioms", cmd_axioms, "axiom grid for a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--rule", default=None, help="restrict to one rule")
    p.add_argument("--axiom", default=None, choices=(None,) + axioms_mod.GRID_AXIOMS)
    p.add_argument("--samples", type=int, default=None,
                   help="sample this many transformations instead of exhausting")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("network", cmd_network, "candidate affinity network (ballot overlap)")
    p.add_argument("--profile", required=True)
    p.add_argument("--threshold", default="0.1")
    p.add_argument("--format", choices=("dot", "json"), default="dot")

    p = add("debias", cmd_debias, "reweight groups to match reported-vote shares")
    p.add_argument("--profile", required=True)
    p.add_argument("--targets", required=True, help="JSON file {label: share}")

    return parser


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _load_document(path: str) -> fileio.ProfileDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read profile {path!r}: {exc}") from exc
    return fileio.parse_document(text)


def _resolve_rule(args) -> RuleSpec:
    name = args.rule
    alpha = getattr(args, "alpha", None)
    if alpha is not None and name in ("alpha-av", "alpha-seq"):
        name = f"{name}:{alpha}"
    return RuleSpec.named(name, quota_beta=getattr(args, "quota_beta", None))


def _fmt_pair(pair: CandidatePair, labels) -> str:
    return "{%s,%s}" % (labels[pair.lo], labels[pair.hi])


def _fmt_score(score) -> str:
    if isinstance(score, tuple):
        return ";".join(str(s) for s in score)
    return str(score)


def cmd_score(args) -> int:
    profile = _load_document(args.profile).profile
    V = profile.as_approval() if isinstance(profile, RankedProfile) else profile
    names = [n.strip() for n in args.rule.split(",") if n.strip()]
    outcomes = {}
    for name in names:
        spec = RuleSpec.named(name, quota_beta=args.quota_beta)
        outcomes[name] = rules.evaluate(V, spec)
    pairs = sorted({p for o in outcomes.values() for p in o.score_table})
    if args.format == "json":
        payload = {
            name: {
                "pairs": [_fmt_pair(p, V.labels) for p in o.pairs],
                "sense": o.objective_sense,
                "scores": {_fmt_pair(p, V.labels): _fmt_score(s)
                           for p, s in sorted(o.score_table.items())},
            }
            for name, o in outcomes.items()
        }
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    rows = []
    for p in pairs:
        row = [_fmt_pair(p, V.labels)]
        for name in names:
            o = outcomes[name]
            cell = _fmt_score(o.score_table[p]) if p in o.score_table else ""
            if p in o.pair_set:
                cell += "*"
            row.append(cell)
        rows.append(row)
    header = ["pair"] + names
    if args.format == "csv":
        _emit(args, _csv_text([header] + rows))
        return EXIT_OK
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    _emit(args, "\n".join(lines) + "\n* marks the optimal pairs of each rule\n")
    return EXIT_OK


def cmd_finalists(args) -> int:
    profile = _load_document(args.profile).profile
    V = profile.as_approval() if isinstance(profile, RankedProfile) else profile
    outcome = rules.evaluate(V, _resolve_rule(args))
    _emit(args, "\n".join(_fmt_pair(p, V.labels) for p in outcome.pairs) + "\n")
    return EXIT_OK


def cmd_winner(args) -> int:
    profile = _load_document(args.profile).profile
    result = avr(profile, _resolve_rule(args))
    _emit(args, " ".join(profile.labels[c] for c in sorted(result.winners)) + "\n")
    return EXIT_OK


def cmd_sweep_alpha(args) -> int:
    profile = _load_document(args.profile).profile
    V = profile.as_approval() if isinstance(profile, RankedProfile) else profile
    breakpoints = rules.alpha_av_breakpoints(V)
    points = sorted(
        {Fraction(i, args.points - 1) for i in range(args.points)} | set(breakpoints)
    )
    scores = V.score_vector()
    grid = []
    for a in points:
        av = rules.alpha_av(V, a)
        seq = rules.alpha_seq_av(V, a)
        x1 = seq.first_stage[0]
        curve = {
            y: seq.score_table[CandidatePair.of(x1, y)] - scores[x1]
            for y in range(V.m)
            if y != x1
        }
        grid.append((a, av.pairs, seq.pairs, x1, curve))
    if args.format == "json":
        payload = {
            "breakpoints": [str(b) for b in breakpoints],
            "grid": [
                {
                    "alpha": str(a),
                    "av_pairs": [_fmt_pair(p, V.labels) for p in av_pairs],
                    "seq_pairs": [_fmt_pair(p, V.labels) for p in seq_pairs],
                    "first": V.labels[x1],
                    "second_seat_scores": {V.labels[y]: str(s) for y, s in curve.items()},
                }
                for a, av_pairs, seq_pairs, x1, curve in grid
            ],
        }
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    curve_labels = [V.labels[y] for y in range(V.m)]
    if args.format == "csv":
        table = [["alpha", "av_pairs", "seq_pairs"] + [f"seq:{l}" for l in curve_labels]]
        for a, av_pairs, seq_pairs, x1, curve in grid:
            cells = [
                str(a),
                ";".join(_fmt_pair(p, V.labels) for p in av_pairs),
                ";".join(_fmt_pair(p, V.labels) for p in seq_pairs),
            ]
            cells += [str(curve.get(y, "")) for y in range(V.m)]
            table.append(cells)
        _emit(args, _csv_text(table))
        return EXIT_OK
    lines = ["argmax changes at: " + (", ".join(str(b) for b in breakpoints) or "never")]
    for a, av_pairs, seq_pairs, x1, curve in grid:
        lines.append(
            f"alpha={a}  av={' '.join(_fmt_pair(p, V.labels) for p in av_pairs)}  "
            f"seq={' '.join(_fmt_pair(p, V.labels) for p in seq_pairs)}"
        )
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = spatial.SpatialConfig(
        distribution=args.distribution,
        n_voters=args.n_voters,
        n_candidates=args.n_candidates,
        candidate_placement=args.placement,
        seed=args.seed,
    )
    ds = [float(Fraction(x)) for x in args.d.split(",") if x.strip()]
    alphas = [Fraction(x) for x in args.alphas.split(",") if x.strip()]
    rows = spatial.sweep(config, alphas, ds)
    _emit(args, spatial.sweep_csv(rows))
    return EXIT_OK


def cmd_axioms(args) -> int:
    profile = _load_document(args.profile).profile
    if not isinstance(profile, RankedProfile):
        raise InputError("axiom checks need ranked ballots")
    budget = axioms_mod.SearchBudget()
    if args.samples is not None:
        budget = axioms_mod.SearchBudget(mode="sampled", samples=args.samples,
                                         seed=args.seed)
    rule_items = axioms_mod.GRID_RULES
    if args.rule:
        rule_items = ((args.rule, RuleSpec.named(args.rule)),)
    axiom_names = axioms_mod.GRID_AXIOMS if not args.axiom else (args.axiom,)
    cells = {}
    inconclusive = 0
    for name, spec in rule_items:
        for axiom in axiom_names:
            out = axioms_mod.check_axiom(profile, spec, axiom, budget)
            cells[(name, axiom)] = out
            if out.status == "inconclusive":
                inconclusive += 1
    if args.format == "json":
        payload = {
            f"{name}/{axiom}": {
                "rule": dict(rule_items)[name].describe(),
                "status": out.status,
                "searched": out.searched,
                "note": out.violation.note if out.violation else "",
            }
            for (name, axiom), out in cells.items()
        }
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return EXIT_INCONCLUSIVE if inconclusive else EXIT_OK
    names = [n for n, _ in rule_items]
    width = max(len(n) for n in names + ["rule"])
    cols = [a for a in axiom_names]
    lines = ["  ".join(["rule".ljust(width)] + [c.ljust(18) for c in cols])]
    marks = {"none": "ok", "violation": "VIOLATION", "inconclusive": "inconclusive?",
             "vacuous": "vacuous-pass"}
    for name, _ in rule_items:
        row = [name.ljust(width)]
        for axiom in cols:
            row.append(marks[cells[(name, axiom)].status].ljust(18))
        lines.append("  ".join(row).rstrip())
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_INCONCLUSIVE if inconclusive else EXIT_OK


def cmd_network(args) -> int:
    profile = _load_document(args.profile).profile
    V = profile.as_approval() if isinstance(profile, RankedProfile) else profile
    graph = fileio.jaccard_affinity(V)
    _emit(args, fileio.export_network(graph, Fraction(args.threshold), args.format))
    return EXIT_OK


def cmd_debias(args) -> int:
    doc = _load_document(args.profile)
    try:
        targets_text = Path(args.targets).read_text()
    except OSError as exc:
        raise InputError(f"cannot read targets {args.targets!r}: {exc}") from exc
    shares = fileio.load_target_shares(targets_text, doc.profile.labels)
    spec = fileio.DebiasSpec(doc.reported, shares)
    debiased = fileio.debias(doc.profile, spec)
    _emit(args, fileio.serialize_document(fileio.ProfileDocument(debiased, doc.reported)))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
