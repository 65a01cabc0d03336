"""Command-line interface.

Exit codes: 0 success, 1 verification mismatch, 2 bad input (instance file or
arguments), 3 engine or sweep configuration error.
"""
from __future__ import annotations

import argparse
import csv
import inspect
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional

import jsonschema
import numpy as np

from .bench import SweepConfig, SweepConfigError, mode_slopes, run_sweep, write_csv
from .core import QDPError
from .depgraph import bucket_bound_check, build_depgraph, degree_stats, verify_simple
from .engine import MODES, run
from .oracles import CAPS, RefusalError, brute_force, classical_reference, values_agree
from .problems import InstanceError
from .problems.registry import PROBLEMS, get
from .qsearch import mc_qmin_trial_stats

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_ENGINE = 0, 1, 2, 3

_INT = {"type": "integer"}
_NUM = {"type": "number"}
_POINTS = {"type": "array", "items": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}}


def _obj(required, **props):
    return {"type": "object", "required": list(required), "properties": props, "additionalProperties": False}


_GRAPH = dict(n={"type": "integer", "minimum": 1},
              edges={"type": "array", "items": {"type": "array", "items": _INT, "minItems": 3, "maxItems": 3}},
              source={"type": "integer", "minimum": 0})

SCHEMAS = {
    "coinchange": _obj(["denominations", "target"], denominations={"type": "array", "items": _INT},
                       target={"type": "integer", "minimum": 0}),
    "matrixchain": _obj(["dims"], dims={"type": "array", "items": _INT, "minItems": 3}),
    "sssp": _obj(["n", "edges", "source"], **_GRAPH),
    "apsp": _obj(["n", "edges"], **_GRAPH),
    "mwt": _obj(["points"], points=dict(_POINTS, minItems=3)),
    "sls": _obj(["points", "penalty"], points=_POINTS, penalty=_NUM),
    "rna": _obj(["bases"], bases={"type": "string", "pattern": "^[ACGU]*$"}),
    "rodcutting": _obj(["n", "prices"], n={"type": "integer", "minimum": 0}, prices={"type": "array", "items": _INT}),
    "lds": _obj(["values"], values={"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}),
    "ukp": _obj(["capacity", "items"], capacity={"type": "integer", "minimum": 0},
                items={"type": "array", "items": {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}}),
    "viterbi": _obj(["pi", "a", "b", "obs"], pi={"type": "array", "items": _NUM},
                    a={"type": "array", "items": {"type": "array", "items": _NUM}},
                    b={"type": "array", "items": {"type": "array", "items": _NUM}},
                    obs={"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1}),
    "textseg": _obj(["text", "dictionary"], text={"type": "string"},
                    dictionary={"type": "array", "items": {"type": "string"}}),
    "cyk": _obj(["nonterminals", "start", "binary", "terminal", "input"],
                nonterminals={"type": "array", "items": {"type": "string"}, "minItems": 1},
                start={"type": "string"},
                binary={"type": "array", "items": {"type": "array", "items": {"type": "string"},
                                                   "minItems": 3, "maxItems": 3}},
                terminal={"type": "array", "items": {"type": "array", "items": {"type": "string"},
                                                     "minItems": 2, "maxItems": 2}},
                input={"type": "string", "minLength": 1}),
}


class InputError(Exception):
    """Instance file could not be read, parsed or validated."""


def to_jsonable(value):
    """JSON-ready copy of a result: infinities become the strings "inf" / "-inf"."""
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def load_instance(problem: str, path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        jsonschema.validate(data, SCHEMAS[problem])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "(top level)"
        raise InputError(f"{path}: field {where}: {exc.message}") from None
    try:
        return get(problem).from_json(data)
    except (InstanceError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(obj, out: Optional[str] = None) -> None:
    text = json.dumps(to_jsonable(obj), indent=2) + "\n"
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _graph_summary(g):
    stats = degree_stats(g)
    return g, stats, {
        "nodes": g.node_count,
        "arcs": g.arc_count,
        "delta": float(stats.delta),
        "max_out_degree": stats.max_out_degree,
    }


def cmd_solve(args) -> int:
    adapter = get(args.problem)
    inst = load_instance(args.problem, args.instance)
    spec = adapter.build(inst)
    result = run(spec, args.mode, seed=args.seed)
    _, _, summary = _graph_summary(build_depgraph(spec, result.table))
    _emit({"solution": adapter.answer(result.solution, inst), "ledger": result.ledger.as_dict(),
           "depgraph": summary}, args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    adapter = get(args.problem)
    inst = load_instance(args.problem, args.instance)
    spec = adapter.build(inst)
    g, stats, summary = _graph_summary(build_depgraph(spec))
    summary.update({
        "delta_exact": str(Fraction(stats.delta)),
        "recursive_nodes": g.recursive_count,
        "buckets": [{"i": i, "count": c} for i, c in stats.buckets],
        "bucket_bound": bucket_bound_check(stats, g),
        "simple": verify_simple(spec, g),
    })
    _emit(summary)
    return EXIT_OK


def verify_instance(problem: str, inst, seed: int) -> List[str]:
    """Disagreements between engine modes and oracles for one instance."""
    adapter = get(problem)
    spec = adapter.build(inst)
    real = adapter.real_valued
    reference = classical_reference(problem, inst).value
    found = []
    try:
        brute = brute_force(problem, inst).value
        if not values_agree(brute, reference, real):
            found.append(f"brute-force {brute!r} != classical reference {reference!r}")
    except RefusalError:
        pass
    for mode in MODES:
        got = adapter.answer(run(spec, mode, seed=seed).solution, inst)
        if not values_agree(got, reference, real):
            found.append(f"{mode} engine {got!r} != classical reference {reference!r}")
    return found


def _verify_one(problem: str, seed: int, max_size: int):
    inst = get(problem).random(np.random.default_rng(seed), max_size=max_size)
    try:
        problems = verify_instance(problem, inst, seed)
    except QDPError as exc:
        problems = [f"engine error: {exc}"]
    return seed, problems, inst.to_json()


def cmd_verify(args) -> int:
    seeds = [args.seed + i for i in range(args.random)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_one, *zip(*[(args.problem, s, args.max_size) for s in seeds])))
    else:
        results = [_verify_one(args.problem, s, args.max_size) for s in seeds]
    failures = 0
    for seed, problems, data in results:
        if problems:
            failures += 1
            for p in problems:
                print(f"mismatch: problem={args.problem} seed={seed}: {p}", file=sys.stderr)
            print(f"  instance: {json.dumps(to_jsonable(data))}", file=sys.stderr)
    print(json.dumps({"problem": args.problem, "instances": args.random, "mismatches": failures}))
    return EXIT_MISMATCH if failures else EXIT_OK


def _parse_sizes(text: str) -> List[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_bench(args) -> int:
    adapter = get(args.problem)
    params = {}
    if args.density is not None:
        if "density" not in inspect.signature(adapter.scaled).parameters:
            print(f"error: --density does not apply to {args.problem}", file=sys.stderr)
            return EXIT_ENGINE
        params["density"] = args.density
    config = SweepConfig(args.problem, args.sizes, args.trials, args.seed, tuple(args.modes), params, args.jobs)
    try:
        config.validate()
    except SweepConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    rows = run_sweep(config)
    failed = write_csv(rows, args.csv if args.csv else sys.stdout)
    for row in failed:
        print(f"row failed: n={row.n} trial={row.trial} mode={row.mode} seed={row.seed}: {row.error}",
              file=sys.stderr)
    report = sys.stdout if args.csv else sys.stderr
    try:
        for mode, fit in sorted(mode_slopes(rows).items()):
            print(f"{mode}: slope={fit.slope:.4f} intercept={fit.intercept:.4f} r2={fit.r2:.4f}", file=report)
    except ValueError as exc:
        print(f"error: cannot fit slopes: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    return EXIT_OK


def cmd_qmin_sim(args) -> int:
    if any(n < 2 for n in args.n):
        print("error: --n must be at least 2", file=sys.stderr)
        return EXIT_INPUT
    if args.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["n", "trial", "queries"])
        for n in args.n:
            for t, q in enumerate(mc_qmin_trial_stats(n, args.trials, args.seed)):
                writer.writerow([n, t, q])
    finally:
        if args.csv:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    problems = sorted(PROBLEMS)

    p = sub.add_parser("solve", help="solve one instance and report its cost ledger")
    p.add_argument("--problem", required=True, choices=problems)
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=MODES, default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("analyze", help="dependency digraph statistics for one instance")
    p.add_argument("--problem", required=True, choices=problems)
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="cross-check the engine against reference solvers on random instances")
    p.add_argument("--problem", required=True, choices=problems)
    p.add_argument("--random", type=int, default=100, metavar="N")
    p.add_argument("--max-size", type=int, default=None, metavar="K",
                   help="largest instance size (defaults to a per-problem size within the brute-force cap)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="scaling sweep with fitted log-log slopes")
    p.add_argument("--problem", required=True, choices=problems)
    p.add_argument("--sizes", required=True, type=_parse_sizes)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    p.add_argument("--modes", type=lambda s: s.split(","), default=["exact", "classical"])
    p.add_argument("--density", type=float, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("qmin-sim", help="Monte-Carlo minimum-finding query counts")
    p.add_argument("--n", required=True, type=_parse_sizes)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_qmin_sim)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_size", "unset") is None:
        args.max_size = _default_max_size(args.problem)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QDPError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ENGINE


def _default_max_size(problem: str) -> int:
    default = inspect.signature(get(problem).random).parameters["max_size"].default
    return min(default, CAPS[problem]) if problem != "viterbi" else default


if __name__ == "__main__":
    sys.exit(main())
