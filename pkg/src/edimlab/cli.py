"""``edimlab`` command line: gen, solve, theory, mc, sweep.

Exit codes: 0 ok, 2 bad arguments or input file, 3 cap exceeded,
4 infeasible instance, 5 search refused by the brute-force guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

from . import config
from .errors import CapExceededError, EdgeListFormatError, EdimlabError, InfeasibleError, SearchTooLargeError
from .graph_core import Graph, format_edge_list, generate_er, read_edge_list
from .montecarlo import (
    default_workers,
    estimate_diameter2,
    estimate_joint_fail,
    estimate_nondistinguish,
    estimate_profile_table,
    estimate_type_pair_counts,
    random_set_trial,
)
from .resolving import Mode
from .solvers import Method, edge_metric_dimension, metric_dimension
from .theory import dim_asymptotic, edim_asymptotic, q_of, s_of, theory_params

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_INFEASIBLE = 4
EXIT_GUARD = 5

MC_TARGETS = ("q", "profile", "s_p", "diameter2", "type_pairs", "random_set")


@dataclass
class ExperimentRecord:
    schema_version: int
    command: str
    n: int
    p: float | None
    seed: int | None
    method: str
    mode: str
    result_size: int | None
    optimal: bool | None
    theory_edim_asym: float | None
    theory_dim_asym: float | None
    q: float | None
    ratio: float | None
    wall_time_ms: float | None
    error: str
    extra: str


CSV_FIELDS = [f.name for f in fields(ExperimentRecord)]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{config.JSON_SIG_DIGITS}g}"
    return str(v)


def write_records(records, fh, header: bool = True) -> None:
    w = csv.writer(fh, lineterminator="\n")
    if header:
        w.writerow(CSV_FIELDS)
    for rec in records:
        row = asdict(rec)
        w.writerow([_fmt(row[k]) for k in CSV_FIELDS])


def append_records(records, path: str) -> None:
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", encoding="utf-8", newline="") as fh:
        write_records(records, fh, header=new)


def _theory_columns(n: int, p: float | None):
    if p is None or not 0.0 < p < 1.0 or n < 2:
        return None, None, None
    return edim_asymptotic(n, p), dim_asymptotic(n, p), q_of(p)


def make_record(command: str, n: int, p, seed, method: Method, mode: Mode, res=None, error: str = "", wall_ms=None):
    edim_a, dim_a, q = _theory_columns(n, p)
    size = optimal = ratio = None
    extra: dict = {}
    if res is not None:
        size, optimal = res.size, res.optimal
        extra = {"witness": list(res.witness), "warnings": list(res.warnings), "nodes_explored": res.nodes_explored}
        asym = edim_a if mode is Mode.EDGE else dim_a
        ratio = size / asym if asym else None
        if wall_ms is None:
            wall_ms = round(res.wall_time * 1000.0, 3)
    return ExperimentRecord(
        config.CSV_SCHEMA_VERSION, command, n, p, seed, method.value, mode.value, size, optimal,
        edim_a, dim_a, q, ratio, wall_ms, error, json.dumps(extra, separators=(",", ":"), sort_keys=True),
    )


def solve_record(g: Graph, mode: Mode, method: Method, cap, *, command: str, n: int, p, seed) -> ExperimentRecord:
    """Solve one instance into a record; solver errors land in ``error`` rather than raising."""
    t0 = time.perf_counter()
    res, error = None, ""
    try:
        fn = metric_dimension if mode is Mode.VERTEX else edge_metric_dimension
        res = fn(g, method, cap)
    except CapExceededError:
        error = "CAP_EXCEEDED"
    except InfeasibleError:
        error = "INFEASIBLE"
    except SearchTooLargeError:
        error = "SEARCH_TOO_LARGE"
    wall = round((time.perf_counter() - t0) * 1000.0, 3)
    return make_record(command, n, p, seed, method, mode, res, error, wall)


# --- argument helpers ----------------------------------------------------------


def _prob(text: str) -> float:
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"p must lie in [0, 1], got {text}")
    return p


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        try:
            f = float(text)  # allow 1e5
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not f.is_integer():
            raise argparse.ArgumentTypeError(f"expected an integer, got {text}") from None
        v = int(f)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _seed(text: str) -> int:
    v = _count(text)
    if v >= 2**64:
        raise argparse.ArgumentTypeError("seed must be < 2**64")
    return v


def _int_list(text: str) -> list[int]:
    return [_count(t) for t in text.split(",") if t.strip()]


def _prob_list(text: str) -> list[float]:
    return [_prob(t) for t in text.split(",") if t.strip()]


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, allow_nan=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="edimlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a seeded G(n, p) edge-list file")
    g.add_argument("--n", type=_count, required=True)
    g.add_argument("--p", type=_prob, required=True)
    g.add_argument("--seed", type=_seed, default=0)
    g.add_argument("--out", help="output path (stdout if omitted)")

    s = sub.add_parser("solve", help="compute dim or edim of one graph")
    s.add_argument("--graph", help="edge-list file")
    s.add_argument("--n", type=_count)
    s.add_argument("--p", type=_prob)
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--mode", choices=[m.value for m in Mode], default="edge")
    s.add_argument("--method", choices=[m.value for m in Method], default="bnb")
    s.add_argument("--max-size", type=_count, default=None)
    s.add_argument("--csv", help="append an experiment record to this CSV file")

    t = sub.add_parser("theory", help="closed-form quantities for G(n, p)")
    t.add_argument("--n", type=float, required=True)
    t.add_argument("--p", type=_prob, required=True)

    m = sub.add_parser("mc", help="Monte Carlo estimator")
    m.add_argument("--target", choices=MC_TARGETS, required=True)
    m.add_argument("--n", type=_count, required=True)
    m.add_argument("--p", type=_prob, required=True)
    m.add_argument("--trials", type=_count, default=10_000, help="trials (or graphs for whole-graph targets)")
    m.add_argument("--seed", type=_seed, default=0)
    m.add_argument("--w", type=_count, default=None, help="landmark set size for random_set")
    m.add_argument("--protocol", choices=["local", "full"], default="local")

    w = sub.add_parser("sweep", help="solve a grid of seeded G(n, p) instances into CSV")
    w.add_argument("--n-list", type=_int_list, required=True)
    w.add_argument("--p-list", type=_prob_list, required=True)
    w.add_argument("--seeds", type=_count, required=True, help="number of seeds; seeds 0..k-1 are used")
    w.add_argument("--mode", choices=["both", "vertex", "edge"], default="both")
    w.add_argument("--method", choices=[m.value for m in Method], default="bnb")
    w.add_argument("--max-size", type=_count, default=None)
    w.add_argument("--out", help="CSV path (stdout if omitted)")
    return ap


# --- commands ---------------------------------------------------------------------


def cmd_gen(args, ap) -> int:
    if args.n < 1:
        ap.error("--n must be >= 1")
    text = format_edge_list(generate_er(args.n, args.p, args.seed))
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_solve(args, ap) -> int:
    if args.graph:
        if args.n is not None or args.p is not None:
            ap.error("--graph excludes --n/--p")
        try:
            g = read_edge_list(args.graph)
        except (OSError, EdgeListFormatError) as exc:
            print(f"edimlab: {exc}", file=sys.stderr)
            return EXIT_USAGE
        p = seed = None
    else:
        if args.n is None or args.p is None:
            ap.error("either --graph or both --n and --p are required")
        if args.n < 1:
            ap.error("--n must be >= 1")
        g = generate_er(args.n, args.p, args.seed)
        p, seed = args.p, args.seed
    mode, method = Mode(args.mode), Method(args.method)
    try:
        fn = metric_dimension if mode is Mode.VERTEX else edge_metric_dimension
        res = fn(g, method, args.max_size)
    except CapExceededError as exc:
        print(f"edimlab: CAP_EXCEEDED: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InfeasibleError as exc:
        print(f"edimlab: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SearchTooLargeError as exc:
        print(f"edimlab: {exc}", file=sys.stderr)
        return EXIT_GUARD
    for warning in res.warnings:
        print(f"edimlab: warning: {warning}", file=sys.stderr)
    _emit(res.to_json_dict())
    if args.csv:
        append_records([make_record("solve", g.n, p, seed, method, mode, res)], args.csv)
    return EXIT_OK


def cmd_theory(args, ap) -> int:
    n = args.n
    if not math.isfinite(n) or n < 16:
        ap.error("--n must be >= 16 (eps needs log log n > 0)")
    if not 0.0 < args.p < 1.0:
        ap.error("--p must lie strictly between 0 and 1")
    if n.is_integer():
        n = int(n)
    _emit(theory_params(n, args.p).to_json_dict())
    return EXIT_OK


def cmd_mc(args, ap) -> int:
    if args.trials < 1:
        ap.error("--trials must be >= 1")
    workers = default_workers()
    n, p, trials, seed = args.n, args.p, args.trials, args.seed
    try:
        if args.target == "q":
            est = estimate_nondistinguish(n, p, trials, seed, args.protocol, workers)
            out = est.to_json_dict() | {"reference": q_of(p), "tolerance": est.tolerance(config.MC_SLACK_Q)}
        elif args.target == "s_p":
            est = estimate_joint_fail(n, p, trials, seed, args.protocol, workers)
            out = est.to_json_dict() | {"reference": s_of(p), "tolerance": est.tolerance(config.MC_SLACK_SP)}
        elif args.target == "profile":
            out = estimate_profile_table(n, p, trials, seed, args.protocol, workers).to_json_dict()
        elif args.target == "diameter2":
            out = estimate_diameter2(n, p, trials, seed, workers).to_json_dict()
        elif args.target == "type_pairs":
            out = estimate_type_pair_counts(n, p, trials, seed, workers).to_json_dict()
        else:
            if args.w is None:
                ap.error("--w is required for target random_set")
            out = random_set_trial(n, p, args.w, trials, seed, workers).to_json_dict()
    except ValueError as exc:
        ap.error(str(exc))
    except EdimlabError as exc:
        print(f"edimlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(out)
    return EXIT_OK


def _sweep_cell(cell) -> ExperimentRecord:
    n, p, seed, mode, method, cap = cell
    try:
        g = generate_er(n, p, seed)
    except ValueError as exc:
        return make_record("sweep", n, p, seed, method, mode, error=f"BAD_INPUT: {exc}")
    return solve_record(g, mode, method, cap, command="sweep", n=n, p=p, seed=seed)


def sweep(n_list, p_list, seeds: int, modes, method: Method, cap=None, workers: int = 1) -> list[ExperimentRecord]:
    """Records in grid order n -> p -> seed -> mode, whatever the worker count."""
    cells = [(n, p, s, mode, method, cap) for n in n_list for p in p_list for s in range(seeds) for mode in modes]
    if workers <= 1 or len(cells) < 2:
        return [_sweep_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_cell, cells))


def cmd_sweep(args, ap) -> int:
    if not args.n_list or not args.p_list:
        ap.error("--n-list and --p-list must be non-empty")
    modes = [Mode.VERTEX, Mode.EDGE] if args.mode == "both" else [Mode(args.mode)]
    records = sweep(args.n_list, args.p_list, args.seeds, modes, Method(args.method), args.max_size, default_workers())
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_records(records, fh)
    else:
        buf = io.StringIO()
        write_records(records, buf)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "theory": cmd_theory, "mc": cmd_mc, "sweep": cmd_sweep}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return COMMANDS[args.command](args, ap)
    except SystemExit as exc:  # argparse reports usage errors this way
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
