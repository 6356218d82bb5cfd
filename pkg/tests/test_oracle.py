"""Exhaustive assignment search, SINR recomputation, optimality certificates."""

import itertools
import math

import cvxpy as cp
import numpy as np
import pytest
from conftest import make_random_catalog, make_structured_catalog

from cobeam.clustering import Cluster, ClusterCatalog
from cobeam.errors import OracleTooLarge
from cobeam.oracle import (
    certificate_matrices,
    exhaustive_minimum,
    fixed_assignment_power,
    recompute_sinr,
    recompute_sinr_from_tensor,
)
from cobeam.scenario import build_catalog, default_scenario, generate_users
from cobeam.solver import SolverOptions, solve_dual


def socp_reference(catalog, assignment, targets, sigma2):
    """Convex second-order-cone reformulation of the pinned problem.

    Rotating each precoder so its direct coefficient is real positive
    turns every SINR constraint into a second-order cone; the solved
    objective is the exact minimum power for this assignment, or +inf
    when the interior-point solver certifies infeasibility.
    """
    num_users = catalog.num_users
    precoders = [
        cp.Variable(catalog.cluster(m, assignment[m]).size, complex=True)
        for m in range(num_users)
    ]
    constraints = []
    for m in range(num_users):
        received = []
        for j in range(num_users):
            row = catalog.cluster(j, assignment[j]).channels[m]
            amplitude = cp.sum(cp.multiply(np.conj(row), precoders[j]))
            received.append(amplitude)
        direct = received[m]
        constraints.append(cp.imag(direct) == 0)
        stacked = cp.hstack(
            [fn(a) for a in received for fn in (cp.real, cp.imag)] + [np.sqrt(sigma2)]
        )
        constraints.append(
            cp.SOC(np.sqrt(1.0 + 1.0 / targets[m]) * cp.real(direct), stacked)
        )
    problem = cp.Problem(
        cp.Minimize(cp.sum([cp.sum_squares(u) for u in precoders])), constraints
    )
    # Tighter than Clarabel certifies, so "inaccurate" still means ~1e-8.
    problem.solve(
        solver=cp.CLARABEL, tol_gap_abs=1e-11, tol_gap_rel=1e-11, tol_feas=1e-11
    )
    if problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return math.inf
    assert problem.status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE)
    return float(problem.value)


def test_single_user_oracle_closed_form():
    g_strong = np.array([[1.0 + 1.0j, 0.5]])
    g_weak = np.array([[0.3, 0.1j]])
    catalog = ClusterCatalog(
        [[
            Cluster(owner=0, satellite=0, beams=(0, 1), catalog_index=0, channels=g_weak),
            Cluster(owner=0, satellite=0, beams=(2, 3), catalog_index=1, channels=g_strong),
        ]]
    )
    gamma, sigma2 = 2.0, 0.5
    report = exhaustive_minimum(catalog, [gamma], sigma2)
    energy = float(np.sum(np.abs(g_strong) ** 2))
    assert report.best_assignment == (1,)
    assert report.best_power_w == pytest.approx(gamma * sigma2 / energy, rel=1e-10)
    assert report.assignments_evaluated == 2
    assert report.feasible_assignments == 2
    assert report.relative_gap == pytest.approx(0.0, abs=1e-9)


# The conic solver runs at tolerances tighter than it certifies, so it may
# warn about inaccuracy even though the solution is good to ~1e-8.
@pytest.mark.filterwarnings("ignore::UserWarning")
def test_fixed_assignment_power_matches_socp():
    rng = np.random.default_rng(20)
    for num_users in (2, 3):
        catalog = make_random_catalog(rng, num_users, clusters_per_user=2, cluster_size=2)
        targets = rng.uniform(0.8, 2.0, size=num_users)
        for assignment in itertools.product(range(2), repeat=num_users):
            ours = fixed_assignment_power(catalog, assignment, targets, 1.0)
            reference = socp_reference(catalog, assignment, targets, 1.0)
            if math.isinf(reference):
                assert math.isinf(ours)
            else:
                assert ours == pytest.approx(reference, rel=5e-6)


def test_exhaustive_matches_per_assignment_loop():
    rng = np.random.default_rng(21)
    catalog = make_random_catalog(rng, num_users=2, clusters_per_user=3, cluster_size=2)
    targets = np.array([1.5, 1.1])
    report = exhaustive_minimum(catalog, targets, 1.0)
    values = {
        assignment: fixed_assignment_power(catalog, assignment, targets, 1.0)
        for assignment in itertools.product(range(3), repeat=2)
    }
    best = min(values, key=values.get)
    assert report.best_assignment == best
    assert report.best_power_w == pytest.approx(values[best], rel=1e-10)
    assert report.assignments_evaluated == 9
    # Rows abandoned early stay unresolved, so the resolved count brackets
    # the true feasible count together with the pruned count.
    true_feasible = sum(1 for v in values.values() if math.isfinite(v))
    assert 1 <= report.feasible_assignments <= true_feasible
    assert true_feasible <= report.feasible_assignments + report.pruned_assignments


def test_oracle_agrees_with_dual_solver():
    rng = np.random.default_rng(22)
    worst = 0.0
    for _ in range(10):
        catalog = make_random_catalog(rng, num_users=3, clusters_per_user=3, cluster_size=2)
        targets = rng.uniform(0.5, 2.0, size=3)
        report = exhaustive_minimum(catalog, targets, 1.0)
        assert math.isfinite(report.best_power_w)
        assert report.relative_gap >= -1e-9
        worst = max(worst, abs(report.relative_gap))
    assert worst < 1e-6


def test_oracle_invariant_under_cluster_reordering():
    rng = np.random.default_rng(23)
    catalog = make_random_catalog(rng, num_users=2, clusters_per_user=3, cluster_size=2)
    targets = np.array([1.0, 1.4])
    report = exhaustive_minimum(catalog, targets, 1.0)

    permutations = [[2, 0, 1], [1, 2, 0]]
    shuffled = ClusterCatalog(
        [[catalog.cluster(m, t) for t in permutations[m]] for m in range(2)]
    )
    shuffled_report = exhaustive_minimum(shuffled, targets, 1.0)
    assert shuffled_report.best_power_w == pytest.approx(report.best_power_w, rel=1e-10)
    recovered = tuple(
        permutations[m][shuffled_report.best_assignment[m]] for m in range(2)
    )
    assert recovered == report.best_assignment


def test_oracle_chunking_invariance(monkeypatch):
    rng = np.random.default_rng(24)
    catalog = make_random_catalog(rng, num_users=3, clusters_per_user=3, cluster_size=2)
    targets = np.full(3, 1.3)
    baseline = exhaustive_minimum(catalog, targets, 1.0)
    monkeypatch.setattr("cobeam.oracle._CHUNK", 3)
    chunked = exhaustive_minimum(catalog, targets, 1.0)
    assert chunked.best_assignment == baseline.best_assignment
    assert chunked.best_power_w == baseline.best_power_w
    # Which rows get pruned depends on chunk order, but the resolved and
    # pruned counts still partition the same evaluated set.
    assert chunked.assignments_evaluated == baseline.assignments_evaluated
    assert chunked.feasible_assignments >= 1
    assert (
        chunked.feasible_assignments + chunked.pruned_assignments
        <= chunked.assignments_evaluated
    )


def test_oracle_cap():
    rng = np.random.default_rng(25)
    catalog = make_random_catalog(rng, num_users=3, clusters_per_user=5, cluster_size=2)
    with pytest.raises(OracleTooLarge):
        exhaustive_minimum(catalog, np.ones(3), 1.0, cap=100)


def test_oracle_all_infeasible():
    shared = np.array([[1.0, 0.4j]] * 3)
    catalog = ClusterCatalog(
        [
            [Cluster(owner=m, satellite=0, beams=(0, 1), catalog_index=t,
                     channels=shared.copy()) for t in range(2)]
            for m in range(3)
        ]
    )
    targets = np.full(3, 10.0)
    assert fixed_assignment_power(catalog, (0, 0, 0), targets, 1.0) == math.inf
    report = exhaustive_minimum(catalog, targets, 1.0)
    assert report.all_infeasible
    assert report.best_assignment is None
    assert report.best_power_w == math.inf
    assert report.dual_power_w == math.inf
    assert math.isnan(report.relative_gap)
    assert report.assignments_evaluated == 8
    # No finite bound ever exists, so nothing can be pruned away.
    assert report.pruned_assignments == 0


def test_recompute_sinr_matches_solution():
    rng = np.random.default_rng(26)
    catalog = make_random_catalog(rng, num_users=3, clusters_per_user=4, cluster_size=2)
    targets = np.array([1.0, 2.0, 0.8])
    solution = solve_dual(catalog, targets, 1.0)
    recomputed = recompute_sinr(solution, catalog)
    np.testing.assert_allclose(recomputed, solution.achieved_sinr, rtol=1e-12)
    np.testing.assert_allclose(recomputed, targets, rtol=1e-8)

    # Muting one interferer can only raise everybody else's SINR.
    muted = [u.copy() for u in solution.precoders]
    muted[1] = np.zeros_like(muted[1])
    solution.precoders = muted
    relaxed = recompute_sinr(solution, catalog)
    assert relaxed[0] >= recomputed[0] and relaxed[2] >= recomputed[2]
    assert relaxed[1] == 0.0


def test_recompute_sinr_from_tensor_identity():
    scenario = default_scenario(generate_users(4, seed=1))
    catalog, tensor = build_catalog(scenario)
    solution = solve_dual(catalog, scenario.targets_linear, scenario.budget.noise_power_w)
    from_catalog = recompute_sinr(solution, catalog)
    from_tensor = recompute_sinr_from_tensor(solution, tensor)
    np.testing.assert_allclose(from_tensor, from_catalog, rtol=1e-12)
    np.testing.assert_allclose(from_tensor, scenario.targets_linear, rtol=1e-8)


def test_certificate_separates_winner_from_losers():
    rng = np.random.default_rng(27)
    catalog = make_random_catalog(rng, num_users=3, clusters_per_user=4, cluster_size=2)
    targets = np.array([1.2, 0.9, 1.6])
    solution = solve_dual(catalog, targets, 1.0, SolverOptions(tol=1e-13))
    for m in range(3):
        matrices = certificate_matrices(catalog, m, solution.lam, targets)
        for t, omega in enumerate(matrices):
            np.testing.assert_allclose(omega, omega.conj().T, atol=1e-12)
            eigenvalues = np.linalg.eigvalsh(omega)
            scale = float(np.max(np.abs(eigenvalues)))
            if t == solution.cluster_index[m]:
                assert abs(eigenvalues[0]) <= 1e-6 * scale
            else:
                assert eigenvalues[0] > 1e-9 * scale


def test_structured_catalog_oracle_round():
    rng = np.random.default_rng(28)
    catalog = make_structured_catalog(
        rng, num_users=2, num_satellites=2, candidate_size=3, cluster_size=2
    )
    targets = np.full(2, 1.5)
    report = exhaustive_minimum(catalog, targets, 1.0)
    dual = solve_dual(catalog, targets, 1.0)
    assert dual.total_power_w <= report.best_power_w * (1.0 + 1e-6)
    assert report.relative_gap == pytest.approx(0.0, abs=1e-6)
