"""Parameter sweeps over cluster size, SINR target, or user count.

Every (value, seed) cell regenerates the user set from the scenario's
region with that seed, so seeds act as independent channel realizations.
Rows never abort the sweep: infeasible or non-converged solves are
recorded as row status.
"""

import csv
import math
import time
from dataclasses import dataclass, replace

from .errors import ConfigError, Infeasible, NotConverged, OracleTooLarge
from .oracle import exhaustive_minimum
from .scenario import DEFAULT_USER_REGION, build_catalog, generate_users
from .solver import solve_dual, solve_simple

SWEEP_PARAMETERS = ("cluster_size", "target_sinr_db", "num_users")
SWEEP_ALGORITHMS = ("dual", "simple", "oracle")

# Stable column order of exported tables.  Wall time is kept out of the
# default export so fixed seeds give byte-identical files.
SWEEP_COLUMNS = (
    "parameter",
    "value",
    "seed",
    "algorithm",
    "status",
    "total_power_w",
    "total_power_dbw",
    "mean_power_w",
    "iterations",
    "converged",
)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple
    seeds: tuple
    algorithms: tuple = ("dual", "simple")
    oracle_cap: int = 10**6

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"parameter must be one of {SWEEP_PARAMETERS}, got {self.parameter!r}")
        if not self.values:
            raise ConfigError("values must be nonempty")
        if not self.seeds:
            raise ConfigError("seeds must be nonempty")
        if not self.algorithms:
            raise ConfigError("algorithms must be nonempty")
        unknown = set(self.algorithms) - set(SWEEP_ALGORITHMS)
        if unknown:
            raise ConfigError(f"unknown algorithms: {sorted(unknown)}")
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))


def _configure(scenario, parameter, value, seed):
    # Build the cell's scenario: regenerate users at this seed, then apply
    # the swept value.
    region = scenario.user_region or DEFAULT_USER_REGION
    count = len(scenario.users)
    uniform = set(scenario.target_sinr_db)
    if parameter == "num_users":
        if len(uniform) != 1:
            raise ConfigError("a num_users sweep needs a uniform SINR target")
        count = int(value)
    users = generate_users(count, region, seed)
    changes = {"users": users, "rng_seed": seed}
    if parameter == "num_users":
        changes["target_sinr_db"] = (next(iter(uniform)),)
    elif parameter == "cluster_size":
        changes["cluster_size"] = int(value)
    elif parameter == "target_sinr_db":
        changes["target_sinr_db"] = (float(value),)
    return replace(scenario, **changes)


def run_sweep(scenario, spec):
    """One row per (value, seed, algorithm), in spec order.

    Returns
    -------
    list of dict
        Keys are SWEEP_COLUMNS plus wall_time_s.
    """
    rows = []
    for value in spec.values:
        for seed in spec.seeds:
            cell = _configure(scenario, spec.parameter, value, seed)
            catalog, _ = build_catalog(cell)
            targets = cell.targets_linear
            sigma2 = cell.budget.noise_power_w
            for algorithm in spec.algorithms:
                row = {
                    "parameter": spec.parameter,
                    "value": value,
                    "seed": seed,
                    "algorithm": algorithm,
                    "status": "ok",
                    "total_power_w": None,
                    "total_power_dbw": None,
                    "mean_power_w": None,
                    "iterations": None,
                    "converged": False,
                }
                started = time.perf_counter()
                try:
                    if algorithm == "oracle":
                        report = exhaustive_minimum(catalog, targets, sigma2, cap=spec.oracle_cap)
                        if report.all_infeasible:
                            row["status"] = "infeasible"
                        else:
                            row["total_power_w"] = report.best_power_w
                            row["converged"] = True
                    else:
                        solve = solve_dual if algorithm == "dual" else solve_simple
                        solution = solve(catalog, targets, sigma2)
                        row["total_power_w"] = solution.total_power_w
                        row["iterations"] = solution.iterations
                        row["converged"] = solution.converged
                except Infeasible:
                    row["status"] = "infeasible"
                except NotConverged:
                    row["status"] = "not_converged"
                except OracleTooLarge:
                    row["status"] = "oracle_too_large"
                row["wall_time_s"] = time.perf_counter() - started
                if row["total_power_w"] is not None:
                    row["total_power_dbw"] = 10.0 * math.log10(row["total_power_w"])
                    row["mean_power_w"] = row["total_power_w"] / cell.num_users
                rows.append(row)
    return rows


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def export_table(rows, path, include_wall_time=False):
    """Write sweep rows as CSV with the documented column order.

    Pass include_wall_time=True for profiling output; the default omits
    the timing column so repeated runs are byte-identical.
    """
    columns = SWEEP_COLUMNS + ("wall_time_s",) if include_wall_time else SWEEP_COLUMNS
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row.get(column)) for column in columns])
