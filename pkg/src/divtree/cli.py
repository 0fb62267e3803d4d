"""Command-line interface.

Subcommands: gen-grid, gen-worstcase-basic, gen-worstcase-inherit,
build, select, verify, oracle, dist, rel-gmm, timing, bounds,
stream-demo.

Exit codes: 0 success, 1 usage error, 2 data error, 3 invariant or
bound violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import covertree, generators, pointio
from .bounds import curves_csv
from .errors import BoundViolationError, DivtreeError, FormatError, InvalidConfigError
from .experiments import (
    ALL_METHODS,
    ExperimentConfig,
    build_tree,
    run_distribution,
    run_relative_to_gmm,
    run_stream,
    run_timing,
)
from .metric import MetricKind
from .oracle import exact_diverse
from .selection import SelectionMethod, select

USAGE_ERROR, DATA_ERROR, VIOLATION_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _parse_k_range(text: str) -> tuple[int, ...]:
    """'lo:hi[:step]' inclusive, or a comma list '2,5,9'."""
    if ":" in text:
        parts = [int(x) for x in text.split(":")]
        lo, hi = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return tuple(range(lo, hi + 1, step))
    return tuple(int(x) for x in text.split(","))


def _add_common(sub, *, b=True, seed=True, metric=True, output=False):
    if b:
        sub.add_argument("--b", type=float, default=2.0, help="cover tree base (> 1)")
    if seed:
        sub.add_argument("--seed", type=int, default=0, help="master seed")
    if metric:
        sub.add_argument(
            "--metric", choices=["euclidean", "cosine"], default="euclidean"
        )
    if output:
        sub.add_argument("--output", required=True, help="output directory")


def _methods_arg(sub):
    sub.add_argument(
        "--method",
        default=",".join(ALL_METHODS),
        help="comma list from gmm,ict-basic,ict-greedy,ict-inherit",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="divtree", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("gen-grid", help="grid + interior noise instance")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--side", type=int, default=3, help="grid points per axis")
    p.add_argument("--noise", type=int, default=491)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="point file to write")

    for name in ("gen-worstcase-basic", "gen-worstcase-inherit"):
        p = subs.add_parser(name, help=f"{name.removeprefix('gen-')} instance")
        p.add_argument("--b", type=float, default=2.0)
        p.add_argument("--mu", type=float, default=0.1)
        p.add_argument("--eta", type=float, default=0.1)
        p.add_argument("--output", required=True, help="point file to write")

    p = subs.add_parser("build", help="build a tree, print a summary")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.add_argument("--output", help="optional snapshot dump path")

    p = subs.add_parser("verify", help="build a tree and verify its invariants")
    p.add_argument("--input", required=True)
    _add_common(p)

    p = subs.add_parser("select", help="run one selection")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", default="ict-inherit", choices=list(ALL_METHODS))
    _add_common(p)

    p = subs.add_parser("oracle", help="exact optimum by enumeration")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p, b=False, seed=False)

    p = subs.add_parser("dist", help="ratio distribution study")
    p.add_argument("--input")
    p.add_argument("--generator", choices=["grid", "worstcase-basic", "worstcase-inherit"])
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--side", type=int, default=3)
    p.add_argument("--noise", type=int, default=491)
    p.add_argument("--mu", type=float, default=0.1)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    _methods_arg(p)
    _add_common(p, output=True)
    p.add_argument("--no-figures", action="store_true")

    p = subs.add_parser("rel-gmm", help="diversity relative to the greedy baseline")
    p.add_argument("--input", required=True)
    p.add_argument("--k-range", required=True, help="lo:hi[:step] or comma list")
    _methods_arg(p)
    _add_common(p, output=True)
    p.add_argument("--no-figures", action="store_true")

    p = subs.add_parser("timing", help="selection wall-time sweep")
    p.add_argument("--input", required=True)
    p.add_argument("--k-range", required=True)
    _methods_arg(p)
    _add_common(p, output=True)
    p.add_argument("--no-figures", action="store_true")

    p = subs.add_parser("bounds", help="bound curves as CSV (+ figure)")
    p.add_argument("--b", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--no-figures", action="store_true")

    p = subs.add_parser("stream-demo", help="insert one by one, select after each")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p)
    p.add_argument("--output", help="optional records path")

    return parser


def _gen_command(args, name: str) -> int:
    if name == "grid":
        inst = generators.gen_grid(
            generators.GridConfig(
                dimension=args.dim, grid_side=args.side,
                noise_count=args.noise, spacing=args.spacing, seed=args.seed,
            )
        )
    elif name == "worstcase-basic":
        inst = generators.gen_worstcase_basic(
            generators.WorstCaseBasicConfig(b=args.b, mu=args.mu, eta=args.eta)
        )
    else:
        inst = generators.gen_worstcase_inherit(
            generators.WorstCaseInheritConfig(b=args.b, mu=args.mu, eta=args.eta)
        )
    side = pointio.write_instance(args.output, inst)
    print(f"wrote {len(inst.pool)} points to {args.output} (sidecar {side})")
    if inst.known_d_star is not None:
        print(f"known optimum: d*={inst.known_d_star!r} at k={inst.optimal_k}")
    return 0


def _load_tree(args):
    inst = pointio.read_instance(args.input, MetricKind(args.metric))
    tree = build_tree(inst.pool, args.b, inst.insertion_order)
    return inst, tree


def _experiment_config(args, k_values, trials=1) -> ExperimentConfig:
    generator = getattr(args, "generator", None)
    params = {}
    if generator == "grid":
        params = dict(dimension=args.dim, grid_side=args.side, noise_count=args.noise)
    elif generator in ("worstcase-basic", "worstcase-inherit"):
        params = dict(b=args.b, mu=args.mu, eta=args.eta)
    return ExperimentConfig(
        generator=generator,
        generator_params=params,
        input_path=getattr(args, "input", None),
        metric_kind=MetricKind(args.metric),
        methods=tuple(args.method.split(",")),
        k_values=tuple(k_values),
        trials=trials,
        b=args.b,
        seed=args.seed,
    )


def _write_report(outdir: str, stem: str, records, figure, no_figures: bool) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    pointio.write_records(out / f"{stem}_records.txt", records)
    pointio.write_summary_csv(out / f"{stem}_summary.csv", records)
    made = [f"{stem}_records.txt", f"{stem}_summary.csv"]
    if not no_figures:
        figure(out / f"{stem}.png")
        made.append(f"{stem}.png")
    print(f"wrote {', '.join(made)} in {out}")


def run(args) -> int:
    cmd = args.command
    if cmd == "gen-grid":
        return _gen_command(args, "grid")
    if cmd == "gen-worstcase-basic":
        return _gen_command(args, "worstcase-basic")
    if cmd == "gen-worstcase-inherit":
        return _gen_command(args, "worstcase-inherit")

    if cmd == "build":
        inst, tree = _load_tree(args)
        print(f"n={tree.size} b={tree.b:g} i_max={tree.i_max} i_min={tree.i_min}")
        for level in range(tree.i_max, tree.i_min - 1, -1):
            print(f"  layer {level}: {len(tree.layer(level))} nodes")
        if args.output:
            Path(args.output).write_text(tree.snapshot(), encoding="utf-8")
            print(f"snapshot written to {args.output}")
        return 0

    if cmd == "verify":
        inst, tree = _load_tree(args)
        report = tree.verify_invariants()
        if report.ok:
            print(f"ok: {tree.size} points, no violations")
            return 0
        for v in report.violations:
            print(f"{v.kind} violation at level {v.level}: ids {v.ids} ({v.detail})")
        return VIOLATION_ERROR

    if cmd == "select":
        inst, tree = _load_tree(args)
        sel = select(SelectionMethod(args.method), tree, inst.pool, args.k,
                     seed=args.seed)
        print(f"method={sel.method.value} k={args.k} diversity={sel.achieved_diversity!r}")
        if sel.termination_level is not None:
            print(f"termination_level={sel.termination_level}")
        print("ids:", " ".join(str(i) for i in sel.ids))
        return 0

    if cmd == "oracle":
        pool = pointio.ingest_points(args.input, MetricKind(args.metric))
        res = exact_diverse(pool, args.k)
        print(f"d_star={res.d_star!r} subsets_enumerated={res.instances_enumerated}")
        print("ids:", " ".join(str(i) for i in res.optimal_set.ids()))
        return 0

    if cmd == "dist":
        if args.generator is None and args.input is None:
            raise InvalidConfigError("dist needs --generator or --input")
        cfg = _experiment_config(args, [args.k], trials=args.trials)
        records = run_distribution(cfg)
        def fig(path):
            from .plots import plot_distribution
            plot_distribution(records, path, args.b)
        _write_report(args.output, "dist", records, fig, args.no_figures)
        return 0

    if cmd == "rel-gmm":
        cfg = _experiment_config(args, _parse_k_range(args.k_range))
        records = run_relative_to_gmm(cfg)
        def fig(path):
            from .plots import plot_relative
            plot_relative(records, path)
        _write_report(args.output, "rel_gmm", records, fig, args.no_figures)
        return 0

    if cmd == "timing":
        cfg = _experiment_config(args, _parse_k_range(args.k_range))
        records = run_timing(cfg)
        def fig(path):
            from .plots import plot_timing
            plot_timing(records, path)
        _write_report(args.output, "timing", records, fig, args.no_figures)
        return 0

    if cmd == "bounds":
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"bounds_b{args.b:g}.csv"
        csv_path.write_text(curves_csv(args.b, args.samples), encoding="utf-8")
        made = [csv_path.name]
        if not args.no_figures:
            from .plots import plot_bound_curves
            png = out / f"bounds_b{args.b:g}.png"
            plot_bound_curves(args.b, png)
            made.append(png.name)
        print(f"wrote {', '.join(made)} in {out}")
        return 0

    if cmd == "stream-demo":
        inst = pointio.read_instance(args.input, MetricKind(args.metric))
        records = run_stream(inst.pool, args.k, args.b, inst.insertion_order)
        for rec in records:
            floor = args.b**rec.termination_level
            print(
                f"n={rec.n} level={rec.termination_level} "
                f"diversity={rec.diversity!r} floor={floor!r}"
            )
        if args.output:
            pointio.write_records(args.output, records)
        return 0

    raise AssertionError(f"unhandled command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return run(args)
    except BoundViolationError as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return VIOLATION_ERROR
    except (DivtreeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
