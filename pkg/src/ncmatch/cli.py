"""Command-line front end.

Subcommands: sample, solve, estimate, sweep, verify.  Exit codes:
0 success, 1 usage, 2 validation, 3 resource guard, 4 suite failure.
Every output embeds the effective run config (defaults included) and the
tool version, so any artifact can be reproduced from its own header.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from . import estimators as est
from . import suites
from .errors import ContractViolation, ResourceLimitError, ValidationError
from .graphs import MatchingResult
from .instance_io import header_for, read_instance_file, write_instance
from .samplers import ModelSpec, expected_edges, sample_instance, sample_word
from .seeds import Seed
from .solvers import longest_noncrossing_matching, validate_witness

DEFAULT_EDGE_GUARD = 50_000_000


class _UsageExit(Exception):
    def __init__(self, message: str):
        self.message = message


class _Parser(argparse.ArgumentParser):
    # exit code 1 for usage problems (argparse defaults to 2)
    def error(self, message):
        raise _UsageExit(message)


def _default_workers() -> int:
    env = os.environ.get("NCMATCH_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ContractViolation(f"cannot parse dims {text!r}; expected e.g. 100,100")
    return dims


def _spec_from_args(args) -> ModelSpec:
    kind = args.model
    if kind in ("binomial", "word"):
        if not args.dims:
            raise ContractViolation(f"--dims is required for the {kind} model")
        dims = _parse_dims(args.dims)
        if kind == "binomial":
            if args.p is None:
                raise ContractViolation("--p is required for the binomial model")
            return ModelSpec.binomial(dims, args.p)
        if args.k is None:
            raise ContractViolation("--k is required for the word model")
        return ModelSpec.word(dims, args.k)
    if args.n is None:
        raise ContractViolation(f"--n is required for the {kind} model")
    if kind == "permutation":
        return ModelSpec.permutation(args.n, args.d)
    if args.p is None:
        raise ContractViolation(f"--p is required for the {kind} model")
    if kind == "symmetric":
        return ModelSpec.symmetric(args.n, args.p)
    if kind == "antisymmetric":
        return ModelSpec.antisymmetric(args.n, args.p)
    return ModelSpec.oriented(args.n, args.p)


def _effective_config(args, fields: list[str]) -> dict:
    cfg = {name: getattr(args, name) for name in fields}
    cfg["command"] = args.command
    return cfg


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _emit(path: str | None, text: str) -> None:
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _guard_cap(args) -> int | None:
    if args.force:
        return None
    return args.max_edges


def _eval_rule(expr: str, var: str, value: float) -> float:
    names = {"sqrt": math.sqrt, "log": math.log, "log2": math.log2, var: value}
    try:
        out = eval(expr, {"__builtins__": {}}, names)  # noqa: S307 - local tool, documented flag
    except Exception as exc:
        raise ContractViolation(f"cannot evaluate rule {expr!r} at {var}={value}: {exc}")
    return float(out)


# --------------------------------------------------------------------------
# subcommands


def _cmd_sample(args) -> int:
    spec = _spec_from_args(args)
    cap = _guard_cap(args)
    if cap is not None and expected_edges(spec) > cap:
        raise ResourceLimitError(
            f"expected edge count {expected_edges(spec):.4g} exceeds the cap of {cap}; "
            "re-run with --force to override"
        )
    rng = Seed(args.seed).generator(args.rep)
    words = None
    if spec.kind == "word":
        words = sample_word(spec.dims, spec.k, rng, cap)
        graph = words.graph
    else:
        graph = sample_instance(spec, rng, cap)
    config = _effective_config(
        args, ["model", "dims", "n", "d", "p", "k", "seed", "rep", "max_edges", "force", "output"]
    )
    header = header_for(spec, graph, args.seed, words, extra={"config": config, "version": __version__})
    fh, close = _open_out(args.output)
    try:
        write_instance(fh, graph, header)
    finally:
        if close:
            fh.close()
    return 0


def _cmd_solve(args) -> int:
    path = Path(args.instance)
    if not path.exists():
        raise ValidationError(f"instance file not found: {path}")
    graph, _header = read_instance_file(path)
    result: MatchingResult = longest_noncrossing_matching(graph, want_witness=args.witness)
    if args.witness:
        validate_witness(graph, result)
    out: dict = {"L": result.length}
    if args.witness:
        out["witness"] = [list(e) for e in result.witness]
    _emit(args.output, json.dumps(out, sort_keys=True) + "\n")
    return 0


def _cmd_estimate(args) -> int:
    spec = _spec_from_args(args)
    cap = _guard_cap(args)
    if cap is not None and expected_edges(spec) > cap:
        raise ResourceLimitError(
            f"expected edge count {expected_edges(spec):.4g} exceeds the cap of {cap}; "
            "re-run with --force to override"
        )
    seed = Seed(args.seed)
    lengths, edges = est.collect_L(spec, args.reps, seed, args.workers, cap)
    stats = est.SampleStats.from_values(lengths)
    if args.replicates:
        with open(args.replicates, "w", encoding="utf-8") as fh:
            for r in range(args.reps):
                fh.write(
                    json.dumps(
                        {"rep": r, "seed": seed.child(r), "L": int(lengths[r]), "edges": int(edges[r])}
                    )
                    + "\n"
                )
    config = _effective_config(
        args,
        ["model", "dims", "n", "d", "p", "k", "reps", "seed", "workers", "max_edges", "force",
         "output", "replicates"],
    )
    summary = {"config": config, "version": __version__, "stats": stats.to_dict()}
    _emit(args.output, json.dumps(summary, sort_keys=True) + "\n")
    return 0


def _cmd_sweep(args) -> int:
    if args.p_grid and args.k_grid:
        raise ContractViolation("give either --p-grid or --k-grid, not both")
    if args.model == "word":
        if not args.k_grid:
            raise ContractViolation("word sweeps need --k-grid")
        grid = [int(v) for v in args.k_grid.split(",")]
        var = "k"
    else:
        if not args.p_grid:
            raise ContractViolation(f"{args.model} sweeps need --p-grid")
        grid = [float(v) for v in args.p_grid.split(",")]
        var = "p"
    rule = args.n_rule

    def dims_rule(param: float) -> int:
        return int(round(_eval_rule(rule, var, param)))

    cap = _guard_cap(args)
    report = est.sweep_constant(
        args.model, grid, dims_rule, args.reps, Seed(args.seed),
        d=args.d, workers=args.workers, scale=args.scale, max_edges=cap,
    )
    config = _effective_config(
        args,
        ["model", "p_grid", "k_grid", "n_rule", "reps", "seed", "workers", "d", "scale",
         "format", "max_edges", "force", "output"],
    )
    if args.format == "csv":
        text = report.to_csv()
        # CSV is the derived plot-ready view; embed the config as a comment
        text = f"# config={json.dumps(config, sort_keys=True)} version={__version__}\n" + text
    else:
        text = json.dumps(
            {"config": config, "version": __version__, "report": report.to_dict()}, sort_keys=True
        ) + "\n"
    _emit(args.output, text)
    return 0


def _cmd_verify(args) -> int:
    names = list(suites.SUITE_NAMES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in suites.SUITE_NAMES:
            raise _UsageExit(f"unknown suite {name!r}; choose from {suites.SUITE_NAMES} or 'all'")
    results = [
        suites.run_suite(name, seed=Seed(args.seed), workers=args.workers, cases=args.cases)
        for name in names
    ]
    config = _effective_config(args, ["suite", "cases", "seed", "workers", "output"])
    ok = all(r["ok"] for r in results)
    _emit(
        args.output,
        json.dumps(
            {"config": config, "version": __version__, "ok": ok, "results": results},
            sort_keys=True, default=str,
        ) + "\n",
    )
    return 0 if ok else 4


# --------------------------------------------------------------------------
# parser


def _add_model_flags(p: _Parser) -> None:
    p.add_argument("--model", required=True,
                   choices=["binomial", "word", "symmetric", "antisymmetric", "oriented", "permutation"])
    p.add_argument("--dims", help="comma-separated class sizes (binomial/word)")
    p.add_argument("--n", type=int, help="class size (symmetric/oriented/permutation) "
                                         "or half-size n for antisymmetric classes of size 2n")
    p.add_argument("--d", type=int, default=2, help="dimension for the permutation model")
    p.add_argument("--p", type=float, help="edge/orbit probability")
    p.add_argument("--k", type=int, help="alphabet size (word model)")


def _add_common_flags(p: _Parser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=_default_workers(),
                   help="worker processes (default from NCMATCH_WORKERS)")
    p.add_argument("--max-edges", type=int, default=DEFAULT_EDGE_GUARD,
                   help=f"refuse instances with more expected edges (default {DEFAULT_EDGE_GUARD})")
    p.add_argument("--force", action="store_true", help="disable the edge guard")
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")


def build_parser() -> _Parser:
    parser = _Parser(prog="ncmatch",
                     description="Longest non-crossing matchings in random bipartite (hyper-)graphs")
    parser.add_argument("--version", action="version", version=f"ncmatch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="draw one instance and write it as JSONL")
    _add_model_flags(p)
    _add_common_flags(p)
    p.add_argument("--rep", type=int, default=0, help="replicate index within the seed stream")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("solve", help="compute L for a JSONL instance")
    p.add_argument("instance")
    p.add_argument("--witness", action="store_true", help="also print one optimal chain")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("estimate", help="Monte Carlo statistics of L")
    _add_model_flags(p)
    _add_common_flags(p)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--replicates", default=None, help="also write per-replicate JSONL here")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("sweep", help="normalized-constant sweep over a parameter grid")
    p.add_argument("--model", required=True,
                   choices=["binomial", "word", "symmetric", "antisymmetric", "oriented"])
    p.add_argument("--p-grid", help="comma-separated p values")
    p.add_argument("--k-grid", help="comma-separated k values")
    p.add_argument("--n-rule", required=True,
                   help="class size rule, an expression in p or k, e.g. 200/sqrt(p)")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--scale", type=float, default=20.0,
                   help="minimum N / t^lambda ratio; smaller grid points are skipped")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True, help=f"one of {suites.SUITE_NAMES} or 'all'")
    p.add_argument("--cases", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageExit as exc:
        print(f"usage error: {exc.message}", file=sys.stderr)
        return 1
    except (ValidationError, ContractViolation) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
