"""Command-line front end; every analysis is a subcommand with JSON output.

Exit codes are part of the contract: 0 success (for ``absorb``: a deletion
certificate), 1 the parity-cut branch of a decision, 2 invalid input, and 3
an internal inconsistency that should never happen.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from .absorb import (
    AbsorptionProblem,
    Applies,
    DeletionCertificate,
    ParityCut,
    certificate_from_json,
    certificate_to_json,
    pair_trace_sufficiency,
    solve_core_correction,
    verify_deletion_certificate,
    verify_parity_cut,
)
from .errors import InternalInvariantError, ParseError
from .graph import Graph, load_graph
from .oracle import brute_force_absorption, brute_force_max_regular
from .parity import parity_partition, verify_even_partition
from .reservoir import RNG_ALGORITHM, ReservoirSpec, estimate_availability
from .traces import (
    NotConstantModulo,
    compute_traces,
    next_bit_obstruction,
    neighborhood_diversity,
    pair_trace_graph,
    tail_degrees,
)
from .witness import ModularWitness, is_q_modular


def _load(args) -> Graph:
    with open(args.graph, "r", encoding="utf-8") as handle:
        return load_graph(handle, fmt=args.format)


def _ids(graph: Graph, spec: str) -> list[int]:
    names = [token.strip() for token in spec.split(",") if token.strip()]
    return graph.ids_of(names)


def _emit(args, payload: dict, human: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in human:
            print(line)


def _cmd_parity(args) -> int:
    graph = _load(args)
    part0, part1 = parity_partition(graph)
    verified = verify_even_partition(graph, part0, part1)
    if not verified:
        raise InternalInvariantError("parity partition failed verification")
    payload = {
        "command": "parity",
        "n": graph.n,
        "part0": graph.names_of(part0),
        "part1": graph.names_of(part1),
        "larger_size": max(len(part0), len(part1)),
        "verified": verified,
    }
    _emit(args, payload, [
        f"part0 ({len(part0)}): {' '.join(payload['part0'])}",
        f"part1 ({len(part1)}): {' '.join(payload['part1'])}",
        f"larger part: {payload['larger_size']} of {graph.n}, verified: {verified}",
    ])
    return 0


def _problem_from_args(args, graph: Graph) -> AbsorptionProblem:
    witness_ids = _ids(graph, args.witness)
    core_ids = _ids(graph, args.core)
    if not set(core_ids) <= set(witness_ids):
        raise ValueError("core must be a subset of the witness")
    witness = ModularWitness.build(graph, witness_ids, args.q)
    return AbsorptionProblem.build(witness, core_ids)


def _cmd_absorb(args) -> int:
    graph = _load(args)
    problem = _problem_from_args(args, graph)
    certificate = solve_core_correction(problem)
    if isinstance(certificate, DeletionCertificate):
        verified = verify_deletion_certificate(problem, certificate)
    else:
        verified = verify_parity_cut(problem, certificate.members)
    if not verified:
        raise InternalInvariantError("emitted certificate failed re-verification")
    payload = certificate_to_json(certificate, name_of=graph.name_of)
    payload["verified"] = verified
    kind = payload["kind"]
    _emit(args, payload, [
        f"certificate: {kind} (verified)",
        json.dumps(payload, indent=2),
    ])
    return 0 if isinstance(certificate, DeletionCertificate) else 1


def _cmd_check_modular(args) -> int:
    graph = _load(args)
    members = _ids(graph, args.witness)
    check = is_q_modular(graph, members, args.q)
    payload = {
        "command": "check-modular",
        "q": args.q,
        "modular": check.modular,
        "residue": check.residue,
        "conflict": None if check.conflict is None else [graph.name_of(v) for v in check.conflict],
    }
    _emit(args, payload, [
        f"{args.q}-modular: {check.modular}"
        + (f", residue {check.residue}" if check.modular else f", conflict {payload['conflict']}"),
    ])
    return 0


def _core_table(args, graph: Graph):
    witness_ids = set(_ids(graph, args.witness))
    core_ids = set(_ids(graph, args.core))
    if not core_ids:
        raise ValueError("core must be nonempty")
    if not core_ids <= witness_ids:
        raise ValueError("core must be a subset of the witness")
    return compute_traces(graph, core_ids, witness_ids - core_ids)


def _cmd_traces(args) -> int:
    graph = _load(args)
    table = _core_table(args, graph)
    payload = {"command": "traces", **table.to_json_dict(name_of=graph.name_of)}
    payload["tail_neighbor_counts"] = list(tail_degrees(table))
    _emit(args, payload, [
        f"core: {' '.join(payload['core'])}",
        *(
            f"trace {{{', '.join(entry['trace'])}}}: count {entry['count']}"
            for entry in payload["entries"]
        ),
        f"tail neighbor counts: {payload['tail_neighbor_counts']}",
    ])
    return 0


def _cmd_next_bit(args) -> int:
    graph = _load(args)
    table = _core_table(args, graph)
    rho = tail_degrees(table)
    results = []
    cap = max(rho).bit_length() + 2 if rho else 2
    for m in range(cap + 1):
        outcome = next_bit_obstruction(rho, m, core=table.core)
        if isinstance(outcome, NotConstantModulo):
            results.append({"m": m, "defined": False, "theta": None, "zero": None})
            break
        results.append({
            "m": m,
            "defined": True,
            "theta": outcome.coords.to_tuple(),
            "zero": outcome.is_zero(),
        })
    payload = {
        "command": "next-bit",
        "core": [graph.name_of(v) for v in table.core],
        "tail_neighbor_counts": list(rho),
        "results": results,
    }
    _emit(args, payload, [
        f"counts: {list(rho)}",
        *(
            f"m={r['m']}: " + ("undefined (not constant)" if not r["defined"]
                               else f"theta={''.join(map(str, r['theta']))} zero={r['zero']}")
            for r in results
        ),
    ])
    return 0


def _cmd_pair_trace(args) -> int:
    graph = _load(args)
    table = _core_table(args, graph)
    view = pair_trace_graph(table, args.q, name_of=graph.name_of)
    outcome = pair_trace_sufficiency(table, args.q)
    applies = isinstance(outcome, Applies)
    payload = {
        "command": "pair-trace",
        "q": args.q,
        "core": [graph.name_of(v) for v in table.core],
        "edges": [
            [view.graph.name_of(a), view.graph.name_of(b)] for a, b in view.graph.edges()
        ],
        "connected": view.connected,
        "odd_heavy_trace": view.has_odd_heavy_trace,
        "applies": applies,
        "reason": None if applies else outcome.reason,
    }
    _emit(args, payload, [
        f"heavy pair edges: {payload['edges']}",
        f"connected: {view.connected}, odd heavy trace: {view.has_odd_heavy_trace}",
        f"sufficiency applies: {applies}" + ("" if applies else f" ({outcome.reason})"),
    ])
    return 0


def _cmd_nd(args) -> int:
    graph = _load(args)
    partition = neighborhood_diversity(graph)
    payload = {
        "command": "nd",
        "t": partition.t,
        "classes": [[graph.name_of(v) for v in cls] for cls in partition.classes],
    }
    _emit(args, payload, [
        f"neighborhood diversity: {partition.t}",
        *(f"class: {' '.join(names)}" for names in payload["classes"]),
    ])
    return 0


def _cmd_oracle_f(args) -> int:
    graph = _load(args)
    size, members = brute_force_max_regular(graph)
    payload = {
        "command": "oracle-f",
        "f": size,
        "witness": [graph.name_of(v) for v in members],
    }
    _emit(args, payload, [f"f = {size}, witness: {' '.join(payload['witness'])}"])
    return 0


def _cmd_oracle_absorb(args) -> int:
    graph = _load(args)
    problem = _problem_from_args(args, graph)
    exists, chosen = brute_force_absorption(problem)
    payload = {
        "command": "oracle-absorb",
        "exists": exists,
        "chosen_traces": None if chosen is None else [
            [graph.name_of(v) for v in trace] for trace in chosen
        ],
    }
    _emit(args, payload, [
        f"absorption exists: {exists}"
        + ("" if chosen is None else f", traces: {payload['chosen_traces']}"),
    ])
    return 0 if exists else 1


def _cmd_reservoir(args) -> int:
    spec = ReservoirSpec(
        core_size=args.m,
        q=args.q,
        samples=args.samples,
        trials=args.trials,
        seed=args.seed,
    )
    report = estimate_availability(spec)
    payload = {"command": "reservoir", **report.to_json_dict()}
    _emit(args, payload, [
        f"rng: {RNG_ALGORITHM}, trials: {spec.trials}, samples: {spec.samples}",
        f"empirical failure rate: {report.empirical_failure_rate}",
        f"bound: {report.bound}",
        f"rank-rich fraction: {report.rank_rich_fraction}",
        f"advisory (Np < 2q): {report.advisory_small_sample}",
    ])
    return 0


def _cmd_ladder_budget(args) -> int:
    log2 = 1.0 + math.log2(args.C0) + args.r
    for j in range(2, args.r):
        log2 += math.log2(args.C) + j * args.a
    budget = 2.0 ** log2 if log2 < 1020 else math.inf
    payload = {
        "command": "ladder-budget",
        "C": args.C,
        "a": args.a,
        "C0": args.C0,
        "r": args.r,
        "budget": budget,
        "log2": log2,
    }
    _emit(args, payload, [f"budget: {budget} (log2 = {log2})"])
    return 0


def _cmd_verify_cert(args) -> int:
    graph = _load(args)
    problem = _problem_from_args(args, graph)
    with open(args.certificate, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    certificate = certificate_from_json(payload, ids_of=graph.ids_of)
    if isinstance(certificate, ParityCut):
        valid = verify_parity_cut(problem, certificate.members)
    else:
        valid = verify_deletion_certificate(problem, certificate)
    _emit(args, {"command": "verify-cert", "valid": valid}, [f"valid: {valid}"])
    return 0 if valid else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modcert",
        description="Parity partitions, trace tables, and absorption certificates "
                    "for regular induced subgraph analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, *, graph=True, core=False, witness=False, q=False):
        cmd = sub.add_parser(name, help=help_text)
        cmd.set_defaults(func=func)
        if graph:
            cmd.add_argument("graph", help="path to the input graph file")
            cmd.add_argument("--format", choices=["edge-list", "dimacs"], default="edge-list")
        cmd.add_argument("--json", action="store_true", help="emit machine-readable JSON")
        if core:
            cmd.add_argument("--core", required=True, help="comma-separated core vertex names")
        if witness:
            cmd.add_argument("--witness", required=True, help="comma-separated witness vertex names")
        if q:
            cmd.add_argument("--q", type=int, required=True, help="modulus (power of two)")
        return cmd

    add("parity", _cmd_parity, "even-degree bipartition with verification")
    add("absorb", _cmd_absorb, "solve one core correction; exit 0 deletion / 1 parity cut",
        core=True, witness=True, q=True)
    add("check-modular", _cmd_check_modular, "test degree congruence of a vertex set",
        witness=True, q=True)
    add("traces", _cmd_traces, "trace table of the tail against the core",
        core=True, witness=True)
    add("next-bit", _cmd_next_bit, "next-bit obstruction classes of the tail counts",
        core=True, witness=True)
    add("pair-trace", _cmd_pair_trace, "heavy pair-trace graph and sufficiency flags",
        core=True, witness=True, q=True)
    add("nd", _cmd_nd, "neighborhood diversity and twin classes")
    add("oracle-f", _cmd_oracle_f, "exact largest regular induced subgraph (small n)")
    add("oracle-absorb", _cmd_oracle_absorb, "brute-force absorption search (small instances)",
        core=True, witness=True, q=True)

    reservoir_cmd = add("reservoir", _cmd_reservoir, "sample random reservoirs and compare "
                        "against the availability bound", graph=False)
    reservoir_cmd.add_argument("--m", type=int, required=True, help="core size")
    reservoir_cmd.add_argument("--q", type=int, required=True, help="modulus (power of two)")
    reservoir_cmd.add_argument("--samples", type=int, required=True, help="tail samples per trial")
    reservoir_cmd.add_argument("--trials", type=int, default=100)
    reservoir_cmd.add_argument("--seed", type=int, required=True, help="RNG seed (no default)")

    ladder_cmd = add("ladder-budget", _cmd_ladder_budget, "starting-size budget of the "
                     "dyadic ladder for given loss constants", graph=False)
    ladder_cmd.add_argument("--C", type=float, required=True)
    ladder_cmd.add_argument("--a", type=float, required=True)
    ladder_cmd.add_argument("--C0", type=float, required=True)
    ladder_cmd.add_argument("--r", type=int, required=True)

    verify_cmd = add("verify-cert", _cmd_verify_cert, "re-verify a serialized certificate",
                     core=True, witness=True, q=True)
    verify_cmd.add_argument("--certificate", required=True, help="path to certificate JSON")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
