"""Brute-force certification of the duality solver.

On small instances every cluster assignment can be enumerated and its
fixed-assignment power minimum computed exactly; comparing the best of
those against the duality solver certifies global optimality end to end.
The module also recomputes SINRs straight from a finished solution,
independent of solver internals, and evaluates the per-cluster
certificate matrices whose spectra separate winning from losing clusters.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import Infeasible, OracleTooLarge
from .solver import (
    SolverOptions,
    _checked_targets,
    fixed_point_iterate,
    mmse_receiver,
    power_scaling,
    solve_dual,
)

# Tighter than the solver default so the reference values carry more
# accurate digits than the quantity under test.
ORACLE_OPTIONS = SolverOptions(tol=1e-12)

_CHUNK = 2048


@dataclass
class OracleReport:
    """Outcome of an exhaustive assignment search.

    best_power_w and dual_power_w are +inf when infeasible;
    relative_gap = (dual_power_w - best_power_w) / best_power_w, or NaN
    unless both sides are finite.  feasible_assignments counts assignments
    actually driven to their fixed point; pruned_assignments were
    abandoned once their running lower bound (the iteration is monotone
    from zero) exceeded the best value, so their feasibility stays
    unresolved but they provably cannot hold the optimum.  Pruning needs
    a finite bound from some resolved row, so an all-infeasible search
    never prunes.
    """

    best_assignment: tuple | None
    best_power_w: float
    assignments_evaluated: int
    feasible_assignments: int
    pruned_assignments: int
    dual_power_w: float
    relative_gap: float

    @property
    def all_infeasible(self):
        return self.feasible_assignments == 0


def fixed_assignment_power(catalog, assignment, targets, sigma2, options=None):
    """Minimal total power with every user's cluster pinned.

    Returns +inf when the pinned assignment cannot meet the targets;
    infeasibility is a value here, not an error.

    Parameters
    ----------
    catalog : ClusterCatalog
    assignment : sequence of int, per-user cluster index
    targets : array_like, linear SINR targets
    sigma2 : float
    options : SolverOptions, optional

    Returns
    -------
    float
    """
    options = options or ORACLE_OPTIONS
    restricted = catalog.restrict(assignment)
    try:
        state = fixed_point_iterate(restricted, targets, sigma2, options)
    except Infeasible:
        return math.inf
    num_users = restricted.num_users
    receivers = [mmse_receiver(restricted, m, 0, state.lam) for m in range(num_users)]
    delta = power_scaling(restricted, [0] * num_users, receivers, targets, sigma2)
    norms2 = np.array([float(np.vdot(u, u).real) for u in receivers])
    return float(np.sum(delta * norms2))


def _assignment_stacks(catalog):
    # Per-user channel stacks padded to one common width.
    stacks = [catalog.stacked_channels(m) for m in range(catalog.num_users)]
    width = max(stack.shape[2] for stack in stacks)
    padded = []
    for stack in stacks:
        if stack.shape[2] < width:
            grown = np.zeros(stack.shape[:2] + (width,), dtype=complex)
            grown[:, :, : stack.shape[2]] = stack
            stack = grown
        padded.append(stack)
    return padded, width


def _batch_dual_objectives(stacks, indices, targets, sigma2, options, width, prune_above=math.inf):
    """Fixed-point dual objectives for a batch of assignments.

    indices has shape (C, M).  Returns (objectives, converged, diverged):
    converged rows hold sigma2 * sum(lam) at the fixed point, diverged
    rows +inf.  Rows that are neither hold a lower bound on their optimum
    (the iteration is monotone from zero), either because they hit the
    iteration cap or because the bound already exceeded prune_above or a
    converged row of this batch, so they cannot be the minimum and are
    dropped early.  Gauss-Seidel over users, vectorized over the batch.
    """
    num_rows, num_users = indices.shape
    batch = np.empty((num_rows, num_users, num_users, width), dtype=complex)
    for m in range(num_users):
        batch[:, m] = stacks[m][indices[:, m]]
    coefficients = targets / (1.0 + targets)
    lam = np.full((num_rows, num_users), float(options.lambda_init))
    lam_cap = options.resolved_lambda_max(sigma2)
    tiny = np.finfo(float).tiny
    eye = np.eye(width)
    converged = np.zeros(num_rows, dtype=bool)
    diverged_all = np.zeros(num_rows, dtype=bool)
    pruned = np.zeros(num_rows, dtype=bool)
    threshold = prune_above
    for _ in range(options.max_iterations):
        active = np.nonzero(~converged & ~diverged_all & ~pruned)[0]
        if active.size == 0:
            break
        sub = batch[active]
        lam_active = lam[active]
        previous = lam_active.copy()
        for m in range(num_users):
            sub_m = sub[:, m]  # channels of user m's assigned cluster toward every user
            coupling = np.einsum("cjs,cj,cju->csu", sub_m, lam_active, sub_m.conj())
            coupling += eye
            rhs = sub_m[:, m, :]
            solved = np.linalg.solve(coupling, rhs[:, :, None])[:, :, 0]
            quad = np.einsum("cs,cs->c", rhs.conj(), solved).real
            values = np.full(active.size, np.inf)
            positive = quad > 0.0
            values[positive] = coefficients[m] / quad[positive]
            lam_active[:, m] = values
        diverged = ~np.all(np.isfinite(lam_active), axis=1) | np.any(lam_active > lam_cap, axis=1)
        change = np.max(
            np.abs(lam_active - previous) / np.maximum(np.abs(lam_active), tiny), axis=1
        )
        done = (change < options.tol) & ~diverged
        lam[active] = lam_active
        diverged_all[active[diverged]] = True
        converged[active[done]] = True
        bounds = lam_active.sum(axis=1) * sigma2
        if np.any(done):
            threshold = min(threshold, float(np.min(bounds[done])))
        over = ~done & ~diverged & (bounds > threshold)
        pruned[active[over]] = True
    objectives = lam.sum(axis=1) * sigma2
    objectives[diverged_all] = np.inf
    return objectives, converged, diverged_all


def exhaustive_minimum(catalog, targets, sigma2, cap=10**6, options=None):
    """Exact minimum total power over all cluster assignments.

    Assignments are enumerated in mixed-radix order with user 0 as the
    most significant digit; near-ties resolve to the earliest assignment.
    The search ranks assignments by their fixed-point dual objectives,
    evaluated in vectorized batches, then recomputes the winner's power
    through the full primal chain.  The duality solver is run on the full
    catalog for comparison.

    Parameters
    ----------
    catalog : ClusterCatalog
    targets : array_like, linear SINR targets
    sigma2 : float
    cap : int
        Maximum number of assignments to enumerate.
    options : SolverOptions, optional

    Returns
    -------
    OracleReport

    Raises
    ------
    OracleTooLarge
        If the assignment count exceeds the cap.
    """
    options = options or ORACLE_OPTIONS
    targets = _checked_targets(targets, catalog.num_users)
    counts = catalog.counts
    total_assignments = math.prod(counts)
    if total_assignments > cap:
        raise OracleTooLarge(f"{total_assignments} assignments exceed the cap of {cap}")

    stacks, width = _assignment_stacks(catalog)
    grid = np.indices(counts).reshape(len(counts), -1).T  # (A, M), user 0 slowest
    best_value = math.inf
    best_row = None
    feasible = 0
    undecided = []  # (row, lower bound) pairs that hit the iteration cap
    for start in range(0, total_assignments, _CHUNK):
        indices = grid[start : start + _CHUNK]
        objectives, converged, diverged = _batch_dual_objectives(
            stacks, indices, targets, sigma2, options, width, prune_above=best_value
        )
        feasible += int(np.sum(converged))
        slow = np.nonzero(~converged & ~diverged)[0]
        undecided.extend((start + int(r), float(objectives[r])) for r in slow)
        objectives[~converged] = np.inf
        pick = int(np.argmin(objectives))
        if objectives[pick] < best_value:
            best_value = float(objectives[pick])
            best_row = start + pick

    # Rows that stalled at the iteration cap carry a lower bound on their
    # optimum (the iteration is monotone from zero), so any bound above
    # the best converged value is safely out of the running.  The rest
    # get an individually boosted re-run.
    boosted = replace(options, max_iterations=options.max_iterations * 50)
    pruned = 0
    for row, bound in undecided:
        if bound > best_value:
            pruned += 1
            continue
        value = fixed_assignment_power(
            catalog, tuple(int(t) for t in grid[row]), targets, sigma2, boosted
        )
        if math.isfinite(value):
            feasible += 1
            if value < best_value:
                best_value = value
                best_row = row

    if best_row is None or not math.isfinite(best_value):
        best_assignment = None
        best_power = math.inf
    else:
        best_assignment = tuple(int(t) for t in grid[best_row])
        best_power = fixed_assignment_power(catalog, best_assignment, targets, sigma2, boosted)

    try:
        dual_power = solve_dual(catalog, targets, sigma2, options).total_power_w
    except Infeasible:
        dual_power = math.inf

    if math.isfinite(best_power) and math.isfinite(dual_power):
        relative_gap = (dual_power - best_power) / best_power
    else:
        relative_gap = math.nan
    return OracleReport(
        best_assignment=best_assignment,
        best_power_w=best_power,
        assignments_evaluated=total_assignments,
        feasible_assignments=feasible,
        pruned_assignments=pruned,
        dual_power_w=dual_power,
        relative_gap=relative_gap,
    )


def recompute_sinr(solution, catalog):
    """Per-user downlink SINRs evaluated directly from stored precoders.

    Uses only the solution's association and precoders plus the catalog's
    concatenated channels; no solver internals.

    Returns
    -------
    ndarray, shape (M,)
    """
    num_users = catalog.num_users
    gains = np.zeros((num_users, num_users))
    for j in range(num_users):
        channels = catalog.cluster(j, solution.cluster_index[j]).channels
        gains[:, j] = np.abs(channels.conj() @ solution.precoders[j]) ** 2
    signal = np.diag(gains).copy()
    interference = gains.sum(axis=1) - signal
    return signal / (interference + solution.sigma2_w)


def recompute_sinr_from_tensor(solution, tensor):
    """The same SINRs as recompute_sinr, built from the raw beam tensor.

    Reconstructs each user's full per-satellite beam-weight vector (zeros
    off the chosen cluster) and accumulates received coefficients beam by
    beam.  Agreement with the concatenated-vector path is an algebraic
    identity, which makes this a useful consistency check on catalogs.

    Parameters
    ----------
    solution : PrecoderSolution
    tensor : ndarray, shape (L, N, M), complex

    Returns
    -------
    ndarray, shape (M,)
    """
    _, num_beams, num_users = tensor.shape
    amplitudes = np.zeros((num_users, num_users), dtype=complex)
    for j in range(num_users):
        weights = np.zeros(num_beams, dtype=complex)
        weights[list(solution.beams[j])] = solution.precoders[j]
        amplitudes[:, j] = tensor[solution.satellites[j]].conj().T @ weights
    gains = np.abs(amplitudes) ** 2
    signal = np.diag(gains).copy()
    interference = gains.sum(axis=1) - signal
    return signal / (interference + solution.sigma2_w)


def certificate_matrices(catalog, m, lam, targets):
    """Certificate matrix per cluster of user m at multipliers lam.

    For cluster t the matrix is
      I + sum_{j != m} lam_j g_jm g_jm^H - (lam_m / gamma_m) g_mm g_mm^H.
    At the converged multipliers it is singular exactly on the winning
    cluster and positive definite on the losers.

    Returns
    -------
    list of ndarray, each (size, size), complex Hermitian
    """
    lam = np.asarray(lam, dtype=float)
    targets = _checked_targets(targets, catalog.num_users)
    matrices = []
    for cluster in catalog.clusters(m):
        channels = cluster.channels
        weights = lam.copy()
        weights[m] = -lam[m] / targets[m]
        omega = np.einsum("js,j,ju->su", channels, weights, channels.conj())
        omega += np.eye(channels.shape[1])
        matrices.append(omega)
    return matrices
