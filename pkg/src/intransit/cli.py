"""Command-line surface: validate, relax, solve, benders, compare, generate.

Exit codes: 0 success, 1 infeasible instance, 2 usage error, 3 solver
failure. All outputs are deterministic for fixed inputs and parameters.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import benders as bd
from .errors import InfeasibleInstanceError, IntransitError, SolverError
from .instance import GeneratorConfig, generate_synthetic, load_instance, save_instance, validate_routes
from .milp import MILP_INFEASIBLE, MILP_OPTIMAL, solve_milp
from .model import MODE_EXACT_DAY, MODE_WINDOW, build_mip, expected_num_vars
from .report import (
    ScenarioReport,
    delivery_histogram,
    consolidation_share,
    export_solution_json,
    scenario_row,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3

DEFAULT_SOLVE_VAR_LIMIT = 200_000


def _mode(arg: str) -> str:
    return MODE_EXACT_DAY if arg == "exact-day" else MODE_WINDOW


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", required=True, help="instance directory")
    p.add_argument("--mode", choices=["window", "exact-day"], default="window")
    p.add_argument("--out", default=None, help="output directory for result files")
    p.add_argument("--verbose", action="store_true")


def _add_solver_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=1e-9, help="bound-gap termination tolerance")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--gap-tol", type=float, default=1e-9)
    p.add_argument("--node-limit", type=int, default=100_000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intransit",
        description="Multi-period in-transit freight consolidation solver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="route diagnostics for an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("relax", help="LP relaxation (containers continuous)")
    _add_common(p)

    p = sub.add_parser("solve", help="monolithic integer solve (small instances)")
    _add_common(p)
    _add_solver_opts(p)
    p.add_argument(
        "--max-vars",
        type=int,
        default=DEFAULT_SOLVE_VAR_LIMIT,
        help="refuse models above this variable count (use benders instead)",
    )

    p = sub.add_parser("benders", help="decomposition solve")
    _add_common(p)
    _add_solver_opts(p)

    p = sub.add_parser("compare", help="relaxation vs both decomposition modes")
    p.add_argument("--instance", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--verbose", action="store_true")
    _add_solver_opts(p)

    p = sub.add_parser("generate", help="write a synthetic instance")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--products", type=int, default=10)
    p.add_argument("--suppliers", type=int, default=3)
    p.add_argument("--gateways", type=int, default=2)
    p.add_argument("--days", type=int, default=30)
    p.add_argument("--window", type=int, default=9)
    p.add_argument("--weight-min", type=float, default=15.0)
    p.add_argument("--weight-max", type=float, default=40000.0)
    p.add_argument("--capacity", type=float, default=48000.0)
    return parser


def _emit_outputs(out_dir, model, x, objective, trace=None, label="solution") -> None:
    if out_dir is None:
        return
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    export_solution_json(model, x, objective, out / "solution.json")
    if trace is not None:
        with open(out / "trace.csv", "w", newline="", encoding="utf-8") as fh:
            trace.export_csv(fh)
    report = ScenarioReport(rows=[scenario_row(label, model, x)])
    with open(out / "report.csv", "w", newline="", encoding="utf-8") as fh:
        report.export_csv(fh)
    # histogram only for integral solutions; the relaxation skips it
    t_vals = np.asarray(x)[model.integer_columns]
    if len(t_vals) == 0 or np.abs(t_vals - np.round(t_vals)).max(initial=0.0) <= 1e-6:
        hist = delivery_histogram(model, x)
        with open(out / "histogram.csv", "w", newline="", encoding="utf-8") as fh:
            hist.export_csv(fh)


def _cmd_validate(args) -> int:
    instance = load_instance(args.instance)
    diag = validate_routes(instance)
    print(f"pickups checked: {diag.checked}")
    if diag.feasible:
        print("all pickups have an in-window route arriving inside the horizon")
        return EXIT_OK
    for issue in diag.issues:
        print(
            f"infeasible pickup ({issue.product}, {issue.supplier}, day {issue.day}): "
            f"{issue.reason}",
            file=sys.stderr,
        )
    return EXIT_INFEASIBLE


def _require_routes(instance) -> bool:
    diag = validate_routes(instance)
    if not diag.feasible:
        issue = diag.issues[0]
        print(
            f"instance is infeasible: pickup ({issue.product}, {issue.supplier}, "
            f"day {issue.day}) {issue.reason}",
            file=sys.stderr,
        )
    return diag.feasible


def _cmd_relax(args) -> int:
    instance = load_instance(args.instance)
    if not _require_routes(instance):
        return EXIT_INFEASIBLE
    objective, x, breakdown = bd.lp_relaxation(instance, _mode(args.mode))
    model = build_mip(instance, _mode(args.mode))
    print(f"LP relaxation objective: {objective:,.2f}")
    print(
        f"  first leg {breakdown.first_leg:,.2f}  LCL+hold {breakdown.lcl_and_hold:,.2f}  "
        f"FCL {breakdown.fcl:,.2f}  fixed pickups {breakdown.fixed_pickup:,.2f}"
    )
    _emit_outputs(args.out, model, x, objective, label="relaxation")
    return EXIT_OK


def _cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    if not _require_routes(instance):
        return EXIT_INFEASIBLE
    mode = _mode(args.mode)
    ix_size = expected_num_vars(
        len(instance.products),
        len(instance.suppliers),
        len(instance.gateways),
        instance.horizon_days,
        mode,
    )
    if ix_size > args.max_vars:
        print(
            f"model has {ix_size} variables, above the monolithic limit "
            f"{args.max_vars}; use the benders subcommand",
            file=sys.stderr,
        )
        return EXIT_USAGE
    model = build_mip(instance, mode)
    outcome = solve_milp(model, gap_tol=args.gap_tol, node_limit=args.node_limit)
    if outcome.status == MILP_INFEASIBLE:
        print("instance is infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    if outcome.status != MILP_OPTIMAL:
        print(
            f"node limit reached; best bound {outcome.bound:,.2f}, "
            f"incumbent {outcome.objective}",
            file=sys.stderr,
        )
        return EXIT_SOLVER
    print(f"optimal objective: {outcome.objective:,.2f} ({outcome.nodes} nodes)")
    _emit_outputs(args.out, model, outcome.x, outcome.objective, label="monolithic")
    return EXIT_OK


def _cmd_benders(args) -> int:
    instance = load_instance(args.instance)
    mode = _mode(args.mode)
    params = bd.BendersParams(
        tol=args.tol,
        max_iters=args.max_iters,
        gap_tol=args.gap_tol,
        node_limit=args.node_limit,
    )
    result = bd.run_benders(instance, mode, params)
    if result.status == "infeasible":
        print("instance is infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    if not result.proven:
        print(
            f"iteration limit reached: bounds [{result.lower_bound:,.2f}, "
            f"{result.upper_bound:,.2f}]",
            file=sys.stderr,
        )
        return EXIT_SOLVER
    print(
        f"optimal objective: {result.objective:,.2f} "
        f"({result.iterations} iterations, {int(result.t_values.sum())} containers)"
    )
    if args.verbose:
        for r in result.trace.records:
            print(f"  iter {r.iteration}: lb {r.lower:,.2f} ub {r.upper:,.2f} {r.cut_kind}")
    share = consolidation_share(result.model, result.x_full)
    if share is not None:
        print(f"consolidated (FCL) share of delivered weight: {share:.1%}")
    _emit_outputs(
        args.out, result.model, result.x_full, result.objective,
        trace=result.trace, label=f"benders_{args.mode}",
    )
    return EXIT_OK


def _cmd_compare(args) -> int:
    instance = load_instance(args.instance)
    if not _require_routes(instance):
        return EXIT_INFEASIBLE
    params = bd.BendersParams(
        tol=args.tol,
        max_iters=args.max_iters,
        gap_tol=args.gap_tol,
        node_limit=args.node_limit,
    )
    report = ScenarioReport()

    relax_obj, relax_x, _ = bd.lp_relaxation(instance, MODE_WINDOW)
    relax_model = build_mip(instance, MODE_WINDOW)
    report.rows.append(scenario_row("lp_relaxation", relax_model, relax_x))

    results = {}
    for label, mode in (("benders_window", MODE_WINDOW), ("benders_exact_day", MODE_EXACT_DAY)):
        result = bd.run_benders(instance, mode, params)
        if result.status == "infeasible":
            print("instance is infeasible", file=sys.stderr)
            return EXIT_INFEASIBLE
        if not result.proven:
            print(f"{label}: iteration limit reached", file=sys.stderr)
            return EXIT_SOLVER
        report.rows.append(scenario_row(label, result.model, result.x_full))
        results[label] = result

    print(report.format_table())
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "report.csv", "w", newline="", encoding="utf-8") as fh:
            report.export_csv(fh)
        for label, result in results.items():
            export_solution_json(
                result.model, result.x_full, result.objective, out / f"{label}_solution.json"
            )
            with open(out / f"{label}_trace.csv", "w", newline="", encoding="utf-8") as fh:
                result.trace.export_csv(fh)
            hist = delivery_histogram(result.model, result.x_full)
            with open(out / f"{label}_histogram.csv", "w", newline="", encoding="utf-8") as fh:
                hist.export_csv(fh)
    return EXIT_OK


def _cmd_generate(args) -> int:
    cfg = GeneratorConfig(
        n_products=args.products,
        n_suppliers=args.suppliers,
        n_gateways=args.gateways,
        horizon_days=args.days,
        window_days=args.window,
        weight_min=args.weight_min,
        weight_max=args.weight_max,
        container_capacity=args.capacity,
    )
    instance = generate_synthetic(cfg, args.seed)
    save_instance(instance, args.out)
    print(
        f"wrote instance with {len(instance.products)} products, "
        f"{len(instance.suppliers)} suppliers, {len(instance.gateways)} gateways, "
        f"{instance.horizon_days} days to {args.out}"
    )
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "relax": _cmd_relax,
    "solve": _cmd_solve,
    "benders": _cmd_benders,
    "compare": _cmd_compare,
    "generate": _cmd_generate,
}


def run(argv=None) -> int:
    """Parse arguments and dispatch; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except InfeasibleInstanceError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except IntransitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
