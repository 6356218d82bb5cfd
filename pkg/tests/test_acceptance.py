"""End-to-end acceptance checks, one test per shipped guarantee.

Each test prints a single pass/fail line through the criterion fixture;
pytest's terminal summary collects them into one report.
"""

import math
import time

import numpy as np
from conftest import make_random_catalog, make_structured_catalog

from cobeam.cli import EXIT_INFEASIBLE, EXIT_OK, main
from cobeam.errors import Infeasible
from cobeam.oracle import certificate_matrices, exhaustive_minimum, recompute_sinr
from cobeam.scenario import default_scenario, generate_users, solve_scenario
from cobeam.solver import SolverOptions, f_values, solve_dual, solve_simple
from cobeam.sweep import SweepSpec, run_sweep
from cobeam.clustering import Cluster, ClusterCatalog


def _random_instance(rng):
    """Small instance in the oracle-tractable regime."""
    num_users = int(rng.integers(1, 4))
    num_satellites = int(rng.integers(1, 4))
    catalog = make_structured_catalog(
        rng,
        num_users=num_users,
        num_satellites=num_satellites,
        candidate_size=4,
        cluster_size=int(rng.integers(1, 3)),
    )
    targets = rng.uniform(0.5, 2.5, size=num_users)
    return catalog, targets


def test_criterion_01_oracle_optimality(criterion):
    rng = np.random.default_rng(2024)
    started = time.perf_counter()
    feasible = 0
    attempts = 0
    worst_gap = 0.0
    worst_undercut = 0.0
    while feasible < 100:
        attempts += 1
        catalog, targets = _random_instance(rng)
        report = exhaustive_minimum(catalog, targets, 1.0)
        try:
            solution = solve_dual(catalog, targets, 1.0)
        except Infeasible:
            assert report.all_infeasible
            continue
        assert math.isfinite(report.best_power_w)
        feasible += 1
        gap = (solution.total_power_w - report.best_power_w) / report.best_power_w
        worst_gap = max(worst_gap, abs(gap))
        worst_undercut = min(worst_undercut, gap)
    elapsed = time.perf_counter() - started
    passed = worst_gap <= 1e-5 and worst_undercut >= -1e-9 and elapsed < 120.0
    criterion(
        1,
        passed,
        f"{feasible} feasible of {attempts} instances, max |gap| {worst_gap:.2e} "
        f"(<=1e-5), worst undercut {worst_undercut:.2e} (>=-1e-9), {elapsed:.1f}s (<120s)",
    )
    assert passed


def test_criterion_02_strong_duality(criterion):
    rng = np.random.default_rng(2025)
    gaps = []
    for _ in range(80):
        catalog, targets = _random_instance(rng)
        try:
            solution = solve_dual(catalog, targets, 1.0)
        except Infeasible:
            continue
        gaps.append(solution.duality_gap)
    for seed in range(3):
        scenario = default_scenario(generate_users(4, seed=seed))
        for algorithm in ("dual", "simple"):
            gaps.append(solve_scenario(scenario, algorithm).duality_gap)
    worst = max(gaps)
    passed = worst < 1e-6 and len(gaps) >= 50
    criterion(2, passed, f"max duality gap {worst:.2e} (<1e-6) over {len(gaps)} feasible solves")
    assert passed


def test_criterion_03_targets_met_with_equality(criterion):
    rng = np.random.default_rng(2026)
    worst = 0.0
    solves = 0
    for _ in range(40):
        catalog, targets = _random_instance(rng)
        for solve in (solve_dual, solve_simple):
            try:
                solution = solve(catalog, targets, 1.0)
            except Infeasible:
                continue
            sinr = recompute_sinr(solution, catalog)
            worst = max(worst, float(np.max(np.abs(sinr - targets) / targets)))
            solves += 1
    for seed in range(3):
        scenario = default_scenario(generate_users(4, seed=seed))
        targets = scenario.targets_linear
        for algorithm in ("dual", "simple"):
            solution = solve_scenario(scenario, algorithm)
            worst = max(
                worst,
                float(np.max(np.abs(solution.achieved_sinr - targets) / targets)),
            )
            solves += 1
    passed = worst < 1e-6 and solves >= 60
    criterion(3, passed, f"max relative SINR miss {worst:.2e} (<1e-6) over {solves} solves")
    assert passed


def test_criterion_04_standard_function_axioms(criterion):
    rng = np.random.default_rng(2027)
    samples = 0
    min_value = math.inf
    min_monotone_margin = math.inf
    min_scaling_margin = math.inf
    for _ in range(50):
        catalog, targets = _random_instance(rng)
        num_users = catalog.num_users

        def interference_map(lam):
            return np.array(
                [np.min(f_values(catalog, m, lam, targets)) for m in range(num_users)]
            )

        for _ in range(20):
            lam = rng.uniform(0.0, 3.0, size=num_users)
            if rng.uniform() < 0.1:
                lam[:] = 0.0
            value = interference_map(lam)
            min_value = min(min_value, float(value.min()))

            larger = lam + rng.uniform(0.1, 1.0, size=num_users)
            min_monotone_margin = min(
                min_monotone_margin, float((interference_map(larger) - value).min())
            )

            scaled = interference_map(2.0 * lam)
            min_scaling_margin = min(min_scaling_margin, float((2.0 * value - scaled).min()))
            samples += 1
    passed = (
        samples >= 1000
        and min_value > 0.0
        and min_monotone_margin >= -1e-14
        and min_scaling_margin > 0.0
    )
    criterion(
        4,
        passed,
        f"{samples} samples: min value {min_value:.2e} (>0), monotone margin "
        f">= {min_monotone_margin:.1e}, strict scaling margin {min_scaling_margin:.2e} (>0)",
    )
    assert passed


def test_criterion_05_scalar_closed_form(criterion):
    catalog = ClusterCatalog(
        [[Cluster(owner=0, satellite=0, beams=(0,), catalog_index=0,
                  channels=np.array([[1.0 + 0.0j]]))]]
    )
    gamma = 10.0 ** 0.5  # 5 dB
    solution = solve_dual(catalog, [gamma], 1.0)
    error = abs(solution.total_power_w - 10.0 ** 0.5)
    passed = error <= 1e-9
    criterion(5, passed, f"single-link power off by {error:.2e} (<=1e-9) from 10^0.5")
    assert passed


def test_criterion_06_dual_dominates_simple(criterion):
    rows = 0
    worst = -math.inf
    for num_users in (4, 8):
        for seed in range(20):
            scenario = default_scenario(generate_users(num_users, seed=seed))
            try:
                dual = solve_scenario(scenario, "dual")
                simple = solve_scenario(scenario, "simple")
            except Infeasible:
                continue
            rows += 1
            worst = max(worst, dual.total_power_w - simple.total_power_w)
    passed = rows == 40 and worst <= 1e-9
    criterion(
        6,
        passed,
        f"dual - simple <= {worst:.2e} W (<=1e-9) on {rows} feasible rows, M in (4, 8)",
    )
    assert passed


def test_criterion_07_power_trends(criterion):
    started = time.perf_counter()
    base = default_scenario(generate_users(8, seed=0))
    seeds = tuple(range(10))

    def means(parameter, values, scenario=base):
        spec = SweepSpec(parameter=parameter, values=values, seeds=seeds, algorithms=("dual",))
        rows = run_sweep(scenario, spec)
        assert all(row["status"] == "ok" for row in rows)
        return [
            float(np.mean([r["total_power_w"] for r in rows if r["value"] == value]))
            for value in values
        ]

    by_cluster = means("cluster_size", (1, 2, 3, 4))
    non_increasing = all(
        later <= earlier * (1.0 + 1e-9) for earlier, later in zip(by_cluster, by_cluster[1:])
    )
    strict_first_drop = by_cluster[1] < by_cluster[0]

    by_target = means("target_sinr_db", (0.0, 5.0, 10.0))
    target_increasing = by_target[0] < by_target[1] < by_target[2]

    by_users = means("num_users", (4, 8, 12))
    users_increasing = by_users[0] < by_users[1] < by_users[2]

    elapsed = time.perf_counter() - started
    passed = (
        non_increasing
        and strict_first_drop
        and target_increasing
        and users_increasing
        and elapsed < 600.0
    )
    criterion(
        7,
        passed,
        "mean power non-increasing in B "
        f"({', '.join(f'{p:.3f}' for p in by_cluster)} W, drop B1->B2 "
        f"{by_cluster[0] / by_cluster[1]:.2f}x), increasing in gamma "
        f"({', '.join(f'{p:.3f}' for p in by_target)} W) and in M "
        f"({', '.join(f'{p:.3f}' for p in by_users)} W), {elapsed:.1f}s (<600s)",
    )
    assert passed


def test_criterion_08_certificate_separation(criterion):
    rng = np.random.default_rng(2028)
    instances = 0
    worst_winner = 0.0
    worst_loser = math.inf
    options = SolverOptions(tol=1e-13)
    while instances < 50:
        catalog = make_random_catalog(
            rng, num_users=3, clusters_per_user=4, cluster_size=2
        )
        targets = rng.uniform(0.5, 2.0, size=3)
        try:
            solution = solve_dual(catalog, targets, 1.0, options)
        except Infeasible:
            continue
        instances += 1
        for m in range(3):
            matrices = certificate_matrices(catalog, m, solution.lam, targets)
            for t, omega in enumerate(matrices):
                smallest = float(np.linalg.eigvalsh(omega)[0])
                scale = float(np.linalg.norm(omega, 2))
                ratio = smallest / scale
                if t == solution.cluster_index[m]:
                    worst_winner = max(worst_winner, abs(ratio))
                else:
                    worst_loser = min(worst_loser, ratio)
    passed = worst_winner <= 1e-6 and worst_loser > 1e-9
    criterion(
        8,
        passed,
        f"{instances} instances: winner |min eig|/norm <= {worst_winner:.2e} (<=1e-6), "
        f"loser min eig/norm >= {worst_loser:.2e} (>1e-9)",
    )
    assert passed


def test_criterion_09_byte_identical_artifacts(criterion, tmp_path):
    digests = {"scenario": [], "solution": [], "sweep": []}
    for run in ("first", "second"):
        workdir = tmp_path / run
        workdir.mkdir()
        scenario = workdir / "scenario.json"
        solution = workdir / "solution.json"
        table = workdir / "sweep.csv"
        assert main(["gen-scenario", "--users", "4", "--seed", "11",
                     "--out", str(scenario)]) == EXIT_OK
        assert main(["solve", "--scenario", str(scenario), "--out", str(solution)]) == EXIT_OK
        assert main(["sweep", "--scenario", str(scenario), "--param", "gamma",
                     "--values", "0,5", "--seeds", "0,1", "--algorithms", "dual,simple",
                     "--out", str(table)]) == EXIT_OK
        digests["scenario"].append(scenario.read_bytes())
        digests["solution"].append(solution.read_bytes())
        digests["sweep"].append(table.read_bytes())
    passed = all(pair[0] == pair[1] for pair in digests.values())
    sizes = {name: len(pair[0]) for name, pair in digests.items()}
    criterion(
        9,
        passed,
        "scenario, solution, and sweep files byte-identical across reruns "
        f"(sizes {sizes['scenario']}/{sizes['solution']}/{sizes['sweep']} bytes)",
    )
    assert passed


def test_criterion_10_overloaded_instance(criterion, tmp_path):
    # Six users on one spot with a single candidate beam per satellite and
    # a 10 dB target: no assignment can carry them.
    spot = (52.0, 8.0, 52.0, 8.0)
    scenario = default_scenario(
        generate_users(6, region=spot, seed=0),
        user_region=spot,
        candidate_size=1,
        cluster_size=1,
        target_sinr_db=(10.0,),
    )
    raised = []
    for algorithm in ("dual", "simple"):
        try:
            solve_scenario(scenario, algorithm)
        except Infeasible:
            raised.append(algorithm)
    from cobeam.scenario import build_catalog

    catalog, _ = build_catalog(scenario)
    report = exhaustive_minimum(
        catalog, scenario.targets_linear, scenario.budget.noise_power_w
    )

    scenario_path = tmp_path / "overloaded.json"
    assert main(["gen-scenario", "--users", "6", "--seed", "0",
                 "--region", "52.0,8.0,52.0,8.0", "--out", str(scenario_path)]) == EXIT_OK
    exit_codes = [
        main(["solve", "--scenario", str(scenario_path), "--algorithm", algorithm,
              "--cluster-size", "1", "--target-sinr-db", "10.0",
              "--out", str(tmp_path / f"{algorithm}.json")])
        for algorithm in ("dual", "simple")
    ]
    passed = (
        raised == ["dual", "simple"]
        and report.all_infeasible
        and exit_codes == [EXIT_INFEASIBLE, EXIT_INFEASIBLE]
    )
    criterion(
        10,
        passed,
        "both solvers raise Infeasible (CLI exit 3) and the oracle reports "
        f"0 of {report.assignments_evaluated} assignments feasible",
    )
    assert passed
