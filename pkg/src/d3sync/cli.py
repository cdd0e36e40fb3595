"""Command line interface.

Subcommands: minlen (minimal D3 word for one NFA), oracle (exact reference
answer), gen (random NFA files), encode (DIMACS export), experiment (full
campaign), bench (solver backend comparison).

Exit codes for minlen/oracle: 0 synchronizing, 3 not synchronizing up to the
cap, 1 error (2 is argparse's usage-error code).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .automata import Nfa
from .encoding import encode, write_dimacs
from .experiments import CampaignConfig, run_campaign, write_outputs
from .oracle import shortest_d3_bfs, shortest_d3_exhaustive
from .randomnfa import ModelSpec, derive_seed, generate, passes_filter
from .search import find_min_length
from .solver import BACKEND, ConflictBudgetExceeded, SolverError, solve_internal
from .solver.external import SOLVER_ENV, solve_external

EXIT_SYNC = 0
EXIT_ERROR = 1
EXIT_NOT_SYNC = 3


def _solver_callable(args):
    command = getattr(args, "solver", None) or os.environ.get(SOLVER_ENV)
    timeout = getattr(args, "solver_timeout", None)
    if command:
        return lambda cnf: solve_external(cnf, command, timeout)
    return solve_internal


def _cmd_minlen(args) -> int:
    nfa = Nfa.from_json_file(args.nfa)
    if args.emit_dimacs:
        os.makedirs(args.emit_dimacs, exist_ok=True)
    outcome = find_min_length(
        nfa,
        l0=args.l0,
        variant=args.variant,
        mode=args.mode,
        solve=_solver_callable(args),
        cap=args.cap,
        emit_dimacs_dir=args.emit_dimacs,
    )
    report = {
        "synchronizing": outcome.synchronizing,
        "length": outcome.length,
        "witness": list(outcome.witness) if outcome.witness else None,
        "not_sync_up_to": outcome.not_sync_up_to,
        "queries": outcome.queries,
        "mode": outcome.mode_used,
        "variant": outcome.variant,
        "trace": [{"l": l, "status": s, "cached": c} for l, s, c in outcome.trace],
    }
    json.dump(report, sys.stdout, indent=2)
    print()
    return EXIT_SYNC if outcome.synchronizing else EXIT_NOT_SYNC


def _cmd_oracle(args) -> int:
    nfa = Nfa.from_json_file(args.nfa)
    if args.method == "bfs":
        answer = shortest_d3_bfs(nfa)
    else:
        answer = shortest_d3_exhaustive(nfa, args.cap)
    if answer is None:
        report = {"synchronizing": False}
        if args.method == "exhaustive":
            report["cap"] = args.cap
        json.dump(report, sys.stdout, indent=2)
        print()
        return EXIT_NOT_SYNC
    length, witness = answer
    json.dump({"synchronizing": True, "length": length, "witness": list(witness)}, sys.stdout, indent=2)
    print()
    return EXIT_SYNC


def _cmd_gen(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    manifest = {
        "model": args.model,
        "lambda": args.lam,
        "n": args.n,
        "count": args.count,
        "seed": args.seed,
        "files": [],
    }
    for idx in range(args.count):
        spec = ModelSpec(
            kind=args.model,
            n=args.n,
            seed=derive_seed(args.seed, args.n, idx),
            lam=args.lam if args.model == "poisson" else None,
        )
        nfa = generate(spec)
        name = f"nfa_{idx:05d}.json"
        with open(os.path.join(args.out, name), "w") as fh:
            json.dump(nfa.to_json(), fh)
        manifest["files"].append(
            {"file": name, "seed": spec.seed, "filter_passed": passes_filter(nfa)}
        )
    with open(os.path.join(args.out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
    passed = sum(1 for f in manifest["files"] if f["filter_passed"])
    print(f"wrote {args.count} NFAs to {args.out} ({passed} passed the filter)")
    return 0


def _cmd_encode(args) -> int:
    nfa = Nfa.from_json_file(args.nfa)
    cnf, vm = encode(nfa, args.length, args.variant)
    write_dimacs(cnf, args.out, vm)
    print(f"wrote {cnf.num_vars} variables, {cnf.num_clauses} clauses to {args.out}")
    return 0


def _cmd_experiment(args) -> int:
    with open(args.config) as fh:
        config = CampaignConfig.from_json(json.load(fh))
    records = run_campaign(config)
    summary = write_outputs(records, args.out)
    sync = sum(1 for r in records if r.synchronizing)
    print(f"{len(records)} records ({sync} synchronizing) -> {args.out}")
    if args.verbose:
        json.dump(summary["histograms"], sys.stdout, indent=2)
        print()
    return 0


def _cmd_bench(args) -> int:
    from .solver import cdcl_py

    backends = [("pure-python", cdcl_py)]
    try:
        from .solver import _cdcl

        backends.append(("compiled", _cdcl))
    except ImportError:
        print("compiled core not built; benchmarking pure Python only")

    rows = []
    for n, lam in [(15, None), (20, None), (25, 1.0)]:
        kind = "poisson" if lam else "uniform"
        spec = ModelSpec(kind=kind, n=n, seed=derive_seed(args.seed, n, 0), lam=lam)
        nfa = generate(spec)
        if not passes_filter(nfa):
            continue
        for ell in (args.length,):
            cnf, _ = encode(nfa, ell, "basic")
            label = f"{kind} n={n} l={ell} ({cnf.num_clauses} clauses)"
            for name, impl in backends:
                start = time.perf_counter()
                for _ in range(args.repeat):
                    status, _, _ = impl.solve_cdcl(cnf.num_vars, cnf.clauses)
                elapsed = (time.perf_counter() - start) / args.repeat
                rows.append((label, name, status, elapsed))
    width = max(len(r[0]) for r in rows) if rows else 0
    for label, name, status, elapsed in rows:
        print(f"{label:<{width}}  {name:<12} {status:<6} {elapsed * 1000:9.2f} ms")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="d3sync",
        description="Minimum-length D3-synchronizing words for NFAs via SAT "
        f"(solver backend: {BACKEND})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("minlen", help="minimal D3-synchronizing word length of one NFA")
    p.add_argument("nfa", help="NFA JSON file")
    p.add_argument("--l0", type=int, default=None, help="initial length guess (default: heuristic)")
    p.add_argument("--mode", choices=["binary", "linear"], default="binary")
    p.add_argument("--variant", choices=["basic", "letterfree", "forced0"], default="basic")
    p.add_argument("--cap", type=int, default=None, help="largest length to certify against")
    p.add_argument("--emit-dimacs", metavar="DIR", default=None, help="write each probed CNF here")
    p.add_argument("--solver", default=None, help=f"external solver command (or ${SOLVER_ENV})")
    p.add_argument("--solver-timeout", type=float, default=None, help="external solver timeout in seconds")
    p.set_defaults(func=_cmd_minlen)

    p = sub.add_parser("oracle", help="exact reference answer by subset BFS or enumeration")
    p.add_argument("nfa", help="NFA JSON file")
    p.add_argument("--method", choices=["bfs", "exhaustive"], default="bfs")
    p.add_argument("--cap", type=int, default=10, help="length cap for --method exhaustive")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("gen", help="generate random NFA JSON files")
    p.add_argument("--model", choices=["uniform", "poisson"], required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="Poisson parameter")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("encode", help="write the CNF of one (NFA, length) instance")
    p.add_argument("nfa", help="NFA JSON file")
    p.add_argument("-l", "--length", type=int, required=True)
    p.add_argument("--variant", choices=["basic", "letterfree", "forced0"], default="basic")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("experiment", help="run a generate/filter/minimize campaign")
    p.add_argument("--config", required=True, help="campaign config JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("bench", help="compare pure-Python and compiled solver cores")
    p.add_argument("--length", type=int, default=2)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConflictBudgetExceeded as exc:
        print(f"unknown result: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (SolverError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
