"""Command line interface: ``wbag solve|trace|check|gen|bench|plot``.

Exit codes: 0 success (converged or exact), 1 input or usage error,
2 the solver stopped at a time or wall-clock cap.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .acyclic import topological_order
from .bag import BagError, fixture, load_bag, serialize_bag
from .bench import run_benchmark
from .export import read_trajectory_csv, render_svg, write_report_csv, write_trajectory_csv
from .generator import GenSpec, cycle_k, generate_benchmark, random_bag
from .semantics import MODELS, get_model
from .solver import SolverConfig, SolverError, integrate, integrate_with_refinement, solve

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 1, 2


class UsageError(Exception):
    pass


def _add_solver_flags(p: argparse.ArgumentParser, algo: bool = True) -> None:
    p.add_argument("--model", default="quad", choices=sorted(MODELS),
                   help="semantics (default: quad)")
    p.add_argument("--delta", type=float, default=0.01, help="step size (default 0.01)")
    p.add_argument("--epsilon", type=float, default=1e-4,
                   help="convergence threshold on max |ds/dt| (default 1e-4)")
    p.add_argument("--tmax", type=float, default=1000.0, help="simulated time cap (default 1000)")
    p.add_argument("--wall-limit", type=float, default=30.0,
                   help="wall-clock cap in seconds, 0 disables (default 30)")
    p.add_argument("--method", default="rk4", choices=("rk4", "euler"))
    p.add_argument("--record-every", type=int, default=10, help="trajectory sampling stride")
    if algo:
        p.add_argument("--algo", default="auto", choices=("auto", "ode", "acyclic"))


def _config(args) -> SolverConfig:
    try:
        return SolverConfig(
            step=args.delta,
            epsilon=args.epsilon,
            max_time=args.tmax,
            wall_clock_limit=args.wall_limit or None,
            method=args.method,
            record_every=args.record_every,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read(path: str):
    if path.startswith("fixture:"):
        return fixture(path.split(":", 1)[1])
    return load_bag(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wbag", description="Argument strength in weighted bipolar argumentation graphs."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute final strengths")
    p.add_argument("file", help="graph file, or fixture:stock / fixture:edemocracy")
    _add_solver_flags(p)
    p.add_argument("--refine", action="store_true",
                   help="re-run at half the step size and report the difference")

    p = sub.add_parser("trace", help="write the trajectory of an ODE run as CSV")
    p.add_argument("file")
    _add_solver_flags(p, algo=False)
    p.add_argument("--out", required=True, help="trajectory CSV path")
    p.add_argument("--report", help="optional convergence report CSV path")

    p = sub.add_parser("check", help="validate a graph and test it for cycles")
    p.add_argument("file")

    p = sub.add_parser("gen", help="generate graphs")
    p.add_argument("--out", required=True, help="output file (single graph) or directory (--batch)")
    p.add_argument("--batch", action="store_true", help="write a benchmark directory tree")
    p.add_argument("--cycle", type=int, metavar="K", help="write Cycle(K) instead of a random graph")
    p.add_argument("--nodes", type=int, default=100)
    p.add_argument("--edges", type=int, default=1000)
    p.add_argument("--p-attack", type=float, default=0.5)
    p.add_argument("--weight", type=float, default=None, help="constant weight (default uniform)")
    p.add_argument("--no-self-loops", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--base-size", type=int, default=100)
    p.add_argument("--increments", type=int, default=30)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--edge-ratio", type=float, default=10.0)

    p = sub.add_parser("bench", help="run a benchmark directory")
    p.add_argument("dir")
    _add_solver_flags(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--records", default="bench_records.csv", help="per-file CSV path")
    p.add_argument("--stats", default="bench_stats.csv", help="per-size stats CSV path")

    p = sub.add_parser("plot", help="render a trajectory CSV as an SVG line chart")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.add_argument("--title", default="")
    return parser


# ---------------------------------------------------------------------------

def cmd_solve(args, out) -> int:
    config = _config(args)
    model = get_model(args.model)
    bag = _read(args.file)
    sol = solve(model, bag, config, algo=args.algo)

    if sol.result is not None:
        converged = sol.result.report.converged
    else:
        converged = [True] * len(bag)
    width = max([len("name"), *(len(n) for n in bag.names)])
    print(f"{'name':<{width}}  initial  final   converged", file=out)
    for name, w, s, ok in zip(bag.names, bag.weights, sol.state, converged):
        print(f"{name:<{width}}  {w:.4f}   {s:.4f}  {'yes' if ok else 'no'}", file=out)

    if sol.algorithm == "acyclic":
        print(f"status: exact (acyclic pass, model {model.key})", file=out)
    else:
        r = sol.result
        print(f"status: {r.status} (model {model.key}, {config.method}, "
              f"steps={r.steps_taken}, t={r.final_time:.4g})", file=out)
        if not r.converged:
            print("not converged: " + ", ".join(r.report.unconverged()), file=out)
    if args.refine:
        ref = integrate_with_refinement(model, bag, config)
        print(f"refinement: step {config.step:g} vs {config.step / 2:g}, "
              f"max difference {ref.difference:.3g}, "
              f"{'stable' if ref.stable else 'NOT stable'}", file=out)
    return EXIT_OK if sol.ok else EXIT_CAP


def cmd_trace(args, out) -> int:
    config = _config(args)
    model = get_model(args.model)
    bag = _read(args.file)
    result = integrate(model, bag, config, record=True)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        write_trajectory_csv(result, bag.names, fh)
    if args.report:
        with open(args.report, "w", newline="", encoding="utf-8") as fh:
            write_report_csv(result, fh)
    print(f"{result.status}: {len(result.trajectory)} samples written to {args.out}", file=out)
    return EXIT_OK if result.converged else EXIT_CAP


def cmd_check(args, out) -> int:
    bag = _read(args.file)
    order = topological_order(bag)
    sizes = f"{len(bag)} arguments, {len(bag.attacks)} attacks, {len(bag.supports)} supports"
    if order.acyclic:
        print(f"acyclic; {sizes}", file=out)
    else:
        witness = ", ".join(bag.names[i] for i in order.cycle)
        print(f"cyclic; witness: {witness}", file=out)
        print(sizes, file=out)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    try:
        if args.batch:
            paths = generate_benchmark(args.out, args.base_size, args.increments, args.trials,
                                       args.edge_ratio, args.seed, args.p_attack)
            print(f"wrote {len(paths)} files under {args.out}", file=out)
            return EXIT_OK
        if args.cycle is not None:
            bag = cycle_k(args.cycle)
            header = [f"generator: cycle_k k={args.cycle}"]
        else:
            spec = GenSpec(args.nodes, args.edges, args.seed, args.p_attack, args.weight,
                           not args.no_self_loops)
            bag = random_bag(spec)
            header = [f"generator: {spec.describe()}"]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    Path(args.out).write_text(serialize_bag(bag, header), encoding="utf-8")
    print(f"wrote {bag!r} to {args.out}", file=out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    config = _config(args)
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    res = run_benchmark(args.dir, args.model, config, algo=args.algo, jobs=args.jobs,
                        records_csv=args.records, stats_csv=args.stats)
    for r in res.records:
        print(f"{r.size}/{r.file}: {r.status} steps={r.steps} {r.wall_time * 1e3:.1f} ms", file=out)
    for s in res.stats:
        print(f"size {s.size}: n={s.count} min={s.min_ms:.1f} mean={s.mean_ms:.1f} "
              f"max={s.max_ms:.1f} ms", file=out)
    print(f"{len(res.records)} files, {res.converged_fraction():.1%} converged; "
          f"stats in {args.stats}", file=out)
    return EXIT_OK


def cmd_plot(args, out) -> int:
    with open(args.csv, newline="", encoding="utf-8") as fh:
        names, times, states = read_trajectory_csv(fh)
    Path(args.out).write_text(render_svg(names, times, states, title=args.title), encoding="utf-8")
    print(f"wrote {len(names)} series to {args.out}", file=out)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "trace": cmd_trace,
    "check": cmd_check,
    "gen": cmd_gen,
    "bench": cmd_bench,
    "plot": cmd_plot,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"wbag: error: {exc}", file=sys.stderr)
    except (BagError, KeyError, OSError, ValueError, SolverError) as exc:
        print(f"wbag: {args.command}: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
