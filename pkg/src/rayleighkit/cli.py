"""Command-line front end.

Every subcommand prints one sorted-key JSON report on stdout:
``{"command", "input_digest", "payload", "verdicts"}``. Rationals are
strings ``"p/q"``. Exit status is 0 when every verdict holds, 1 when some
verdict is violated, and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from .forests import DEFAULT_FOREST_CAP, Instance, SearchSpec, SpecError, forest_correlation, search_counterexample
from .graph import GraphError, Multigraph, format_rational, is_connected, parse_graph
from .monotonicity import (
    OrientedForestClasses,
    matroid_rayleigh_check,
    monomial_tally,
    parse_matroid,
    rayleigh_delta,
    verify_identity,
)
from .sampler import empirical_conditionals
from .trees import DEFAULT_TREE_CAP, FamilyWeights, effective_resistance, family_weights

EXIT_OK, EXIT_VIOLATED, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _q(x: Fraction | None) -> str | None:
    return None if x is None else format_rational(x)


def _families(fw: FamilyWeights) -> dict:
    return {
        "t_both": _q(fw.t_both),
        "t_first_only": _q(fw.t_first_only),
        "t_second_only": _q(fw.t_second_only),
        "t_neither": _q(fw.t_neither),
        "t_total": _q(fw.t_total),
    }


def _forest_classes(c: OrientedForestClasses) -> dict:
    return {
        "positive": [sorted(f) for f in c.positive],
        "negative": [sorted(f) for f in c.negative],
        "weight_positive": _q(c.weight_positive),
        "weight_negative": _q(c.weight_negative),
    }


def _read(path: str | None, flag: str) -> tuple[str, str]:
    if path is None:
        raise UsageError(f"missing required flag {flag}")
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise UsageError(f"{path} is not valid UTF-8") from None
    return text, "sha256:" + hashlib.sha256(data).hexdigest()


def _load_graph(args) -> tuple[Multigraph, str]:
    text, digest = _read(args.graph, "--graph")
    return parse_graph(text), digest


def _need(args, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"missing required flag --{name.replace('_', '-')}")


def cmd_resistance(args):
    _need(args, "edge")
    g, digest = _load_graph(args)
    r = effective_resistance(g, args.edge)
    return digest, {"edge": args.edge, "resistance": _q(r)}, {}


def cmd_families(args):
    _need(args, "e1", "e2")
    g, digest = _load_graph(args)
    fw = family_weights(g, args.e1, args.e2)
    return digest, {"e1": args.e1, "e2": args.e2, **_families(fw)}, {"partition": fw.partition_holds}


def cmd_rayleigh(args):
    _need(args, "e1", "e2")
    g, digest = _load_graph(args)
    d = rayleigh_delta(g, args.e1, args.e2)
    return digest, {"e1": args.e1, "e2": args.e2, "delta": _q(d)}, {"nonnegative": d >= 0}


def cmd_identity(args):
    _need(args, "e1", "e2")
    g, digest = _load_graph(args)
    if not is_connected(g):
        raise GraphError("graph is disconnected")
    rep = verify_identity(g, args.e1, args.e2, args.cap)
    payload = {
        "e1": args.e1,
        "e2": args.e2,
        "delta": _q(rep.delta),
        "square_form": _q(rep.square_form),
        "weight_positive": _q(rep.weight_positive),
        "weight_negative": _q(rep.weight_negative),
        "expanded_lhs": _q(rep.expanded_lhs),
        "expanded_rhs": _q(rep.expanded_rhs),
    }
    return digest, payload, {"equal": rep.equal, "expanded_equal": rep.expanded_equal}


def cmd_monomials(args):
    _need(args, "e1", "e2")
    g, digest = _load_graph(args)
    tally = monomial_tally(g, args.e1, args.e2, args.cap)
    rows = []
    for key, c in tally.items():
        rows.append(
            {
                "monomial": key.exponents,
                "a_split": c.a_split,
                "a_joint": c.a_joint,
                "a_pm": c.a_pm,
                "a_pp": c.a_pp,
                "a_mm": c.a_mm,
                "balanced": c.balanced,
                "feasible": not key.feasibility_errors(g, args.e1, args.e2),
            }
        )
    verdicts = {
        "all_balanced": all(r["balanced"] for r in rows),
        "all_feasible": all(r["feasible"] for r in rows),
    }
    return digest, {"e1": args.e1, "e2": args.e2, "monomials": rows}, verdicts


def cmd_sample(args):
    _need(args, "e1", "e2")
    g, digest = _load_graph(args)
    n = args.samples if args.samples is not None else 10000
    seed = args.seed if args.seed is not None else 0
    if n < 1:
        raise UsageError("--samples must be >= 1")
    absent, present = empirical_conditionals(g, args.e1, args.e2, n, seed)
    rows = [
        {
            "condition": r.condition,
            "event_count": r.event_count,
            "hit_count": r.hit_count,
            "empirical_p": _q(r.empirical_p),
            "exact_p": _q(r.exact_p),
            "abs_gap": _q(r.abs_gap),
            "insufficient_samples": r.insufficient,
        }
        for r in (absent, present)
    ]
    payload = {"e1": args.e1, "e2": args.e2, "n_samples": n, "seed": seed, "conditionals": rows}
    return digest, payload, {"corollary": absent.exact_p >= present.exact_p}


def _correlation(c) -> dict:
    return {
        "f_both": _q(c.f_both),
        "f_first_only": _q(c.f_first_only),
        "f_second_only": _q(c.f_second_only),
        "f_neither": _q(c.f_neither),
        "p_given_absent": _q(c.p_given_absent),
        "p_given_present": _q(c.p_given_present),
        "delta_f": _q(c.delta_f),
    }


def cmd_forest_corr(args):
    _need(args, "e1", "e2")
    g, digest = _load_graph(args)
    c = forest_correlation(g, args.e1, args.e2, args.forest_cap)
    payload = {"e1": args.e1, "e2": args.e2, "has_parallel_edges": g.has_parallel_edges(), **_correlation(c)}
    return digest, payload, {"holds": c.holds}


def _instance(inst: Instance | None):
    if inst is None:
        return None
    return {
        "index": inst.index,
        "graph": inst.graph.to_json(),
        "e1": inst.e1,
        "e2": inst.e2,
        "has_parallel_edges": inst.has_parallel_edges,
        **_correlation(inst.correlation),
    }


def cmd_search(args):
    text, digest = _read(args.spec, "--spec")
    spec = SearchSpec.parse(text)
    rep = search_counterexample(spec, args.forest_cap)
    payload = {
        "graphs_checked": rep.graphs_checked,
        "instances_checked": rep.instances_checked,
        "parallel_edge_instances": rep.parallel_edge_instances,
        "min_delta_f": _q(rep.min_delta_f),
        "argmin": _instance(rep.argmin),
        "counterexample": _instance(rep.counterexample),
    }
    return digest, payload, {"no_counterexample": not rep.found}


def cmd_matroid(args):
    _need(args, "e1", "e2")
    text, digest = _read(args.matroid, "--matroid")
    m = parse_matroid(text)
    rep = matroid_rayleigh_check(m, args.e1, args.e2)
    payload = {"e1": args.e1, "e2": args.e2, "rank": m.rank, "difference": _q(rep.difference), **_families(rep.families)}
    return digest, payload, {"rayleigh": rep.rayleigh}


COMMANDS = {
    "resistance": cmd_resistance,
    "families": cmd_families,
    "rayleigh": cmd_rayleigh,
    "identity": cmd_identity,
    "monomials": cmd_monomials,
    "sample": cmd_sample,
    "forest-corr": cmd_forest_corr,
    "search": cmd_search,
    "matroid": cmd_matroid,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rayleighkit", description="Exact spanning-tree weights and Rayleigh monotonicity checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--graph")
        p.add_argument("--matroid")
        p.add_argument("--e1")
        p.add_argument("--e2")
        p.add_argument("--edge")
        p.add_argument("--samples", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--spec")
        p.add_argument("--cap", type=int, help="edge cap for brute-force enumeration")
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.forest_cap = args.cap if args.cap is not None else DEFAULT_FOREST_CAP
        if args.cap is None:
            args.cap = DEFAULT_TREE_CAP
        digest, payload, verdicts = COMMANDS[args.command](args)
    except (UsageError, GraphError, SpecError, ValueError) as exc:
        print(f"rayleighkit: error: {exc}", file=stderr)
        return EXIT_ERROR
    report = {"command": args.command, "input_digest": digest, "payload": payload, "verdicts": verdicts}
    stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return EXIT_OK if all(verdicts.values()) else EXIT_VIOLATED


def main() -> None:
    sys.exit(run())
