"""Command-line surface: gen-scenario, solve, oracle-check, sweep.

Exit codes: 0 success, 2 configuration or usage error, 3 infeasible
targets, 4 iteration did not converge.
"""

import argparse
import math
import sys

from .errors import CobeamError, ConfigError, Infeasible, NotConverged
from .oracle import exhaustive_minimum
from .scenario import (
    build_catalog,
    default_scenario,
    export_solution,
    generate_users,
    load_scenario,
    save_scenario,
    solve_scenario,
)
from .sweep import SweepSpec, export_table, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_NOT_CONVERGED = 4

_PARAM_NAMES = {"B": "cluster_size", "gamma": "target_sinr_db", "users": "num_users"}


def _parse_region(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError(f"--region needs lat1,lon1,lat2,lon2, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"--region has a non-numeric entry: {text!r}") from exc


def _parse_list(text, kind, flag):
    try:
        return tuple(kind(p) for p in text.split(",") if p != "")
    except ValueError as exc:
        raise ConfigError(f"{flag} has a non-numeric entry: {text!r}") from exc


def _cmd_gen_scenario(args):
    region = _parse_region(args.region)
    users = generate_users(args.users, region, args.seed)
    scenario = default_scenario(users, rng_seed=args.seed, user_region=region)
    save_scenario(scenario, args.out)
    print(f"wrote scenario with {len(users)} users and {scenario.num_satellites} satellites to {args.out}")
    return EXIT_OK


def _cmd_solve(args):
    scenario = load_scenario(args.scenario)
    overrides = {}
    if args.cluster_size is not None:
        overrides["cluster_size"] = args.cluster_size
    if args.target_sinr_db is not None:
        overrides["target_sinr_db"] = (args.target_sinr_db,)
    if overrides:
        from dataclasses import replace

        scenario = replace(scenario, **overrides)
    solution = solve_scenario(scenario, args.algorithm)
    export_solution(solution, args.out)
    print(
        f"{args.algorithm}: total power {solution.total_power_w:.6e} W "
        f"({solution.total_power_dbw:.2f} dBW) in {solution.iterations} iterations; "
        f"solution written to {args.out}"
    )
    return EXIT_OK


def _cmd_oracle_check(args):
    scenario = load_scenario(args.scenario)
    catalog, _ = build_catalog(scenario)
    report = exhaustive_minimum(
        catalog, scenario.targets_linear, scenario.budget.noise_power_w, cap=args.cap
    )
    print(f"assignments evaluated: {report.assignments_evaluated}")
    print(f"feasible assignments:  {report.feasible_assignments}")
    if report.pruned_assignments:
        print(f"pruned early:          {report.pruned_assignments}")
    if report.all_infeasible:
        print("result: every assignment is infeasible at the requested targets")
        return EXIT_OK
    print(f"best assignment:       {list(report.best_assignment)}")
    print(f"best power:            {report.best_power_w:.9e} W ({10*math.log10(report.best_power_w):.3f} dBW)")
    if math.isfinite(report.dual_power_w):
        print(f"dual solver power:     {report.dual_power_w:.9e} W")
        print(f"relative gap:          {report.relative_gap:.3e}")
    else:
        print("dual solver power:     infeasible")
    return EXIT_OK


def _cmd_sweep(args):
    scenario = load_scenario(args.scenario)
    parameter = _PARAM_NAMES[args.param]
    kind = float if args.param == "gamma" else int
    spec = SweepSpec(
        parameter=parameter,
        values=_parse_list(args.values, kind, "--values"),
        seeds=_parse_list(args.seeds, int, "--seeds"),
        algorithms=tuple(args.algorithms.split(",")),
    )
    rows = run_sweep(scenario, spec)
    export_table(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cobeam",
        description="Beam-cluster selection and SINR-constrained precoding for satellite downlinks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-scenario", help="generate a scenario with random users")
    gen.add_argument("--users", type=int, required=True, help="number of users")
    gen.add_argument("--seed", type=int, default=0, help="PRNG seed (PCG64)")
    gen.add_argument("--region", default="51.0,5.5,54.0,9.5", help="lat1,lon1,lat2,lon2")
    gen.add_argument("--out", required=True, help="output scenario file")
    gen.set_defaults(handler=_cmd_gen_scenario)

    solve = sub.add_parser("solve", help="solve one scenario")
    solve.add_argument("--scenario", required=True)
    solve.add_argument("--algorithm", choices=("dual", "simple"), default="dual")
    solve.add_argument("--cluster-size", type=int, default=None, help="override B")
    solve.add_argument("--target-sinr-db", type=float, default=None, help="override the uniform target")
    solve.add_argument("--out", required=True, help="output solution file")
    solve.set_defaults(handler=_cmd_solve)

    oracle = sub.add_parser("oracle-check", help="exhaustive assignment search")
    oracle.add_argument("--scenario", required=True)
    oracle.add_argument("--cap", type=int, default=10**6, help="assignment-count cap")
    oracle.set_defaults(handler=_cmd_oracle_check)

    sweep = sub.add_parser("sweep", help="sweep a parameter over values and seeds")
    sweep.add_argument("--scenario", required=True)
    sweep.add_argument("--param", choices=tuple(_PARAM_NAMES), required=True)
    sweep.add_argument("--values", required=True, help="comma-separated values")
    sweep.add_argument("--seeds", required=True, help="comma-separated seeds")
    sweep.add_argument("--algorithms", default="dual,simple", help="comma-separated subset of dual,simple,oracle")
    sweep.add_argument("--out", required=True, help="output CSV file")
    sweep.set_defaults(handler=_cmd_sweep)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NotConverged as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except CobeamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
