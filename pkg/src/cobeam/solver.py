"""Power-minimizing precoding under per-user SINR targets.

Both algorithms run a fixed-point iteration on a vector of positive
multipliers, one per user, that play the role of virtual-uplink powers
scaled by the noise.  The duality solver lets every user re-pick its
cheapest cluster at each step, which solves the joint cluster-association
and precoding problem; the simple solver freezes each user's cluster to
the one with the strongest direct channel.  Both finish by turning MMSE
receive vectors into downlink precoders through a power-scaling solve
that meets every SINR target with equality.

The multiplier update for user m is

    lambda_m <- min over clusters t of
        (gamma_m / (1 + gamma_m)) / (g_mm^H (sum_j lambda_j g_jm g_jm^H + I)^{-1} g_mm)

where g_jm is the concatenated channel of user m's cluster t toward user
j.  The map is a standard interference function (positive, monotone,
scalable), so iterating from zero converges monotonically to the unique
fixed point whenever the targets are feasible; the total downlink power
then equals sigma^2 times the sum of the multipliers.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    Infeasible,
    NegativePower,
    NoCandidateCluster,
    NotConverged,
    SingularF,
    ZeroDirectChannel,
)

SWEEP_MODES = ("gauss-seidel", "simultaneous")

# Relative condition-number bound beyond which the power-coupling solve
# is reported as singular rather than trusted.
_MAX_F_CONDITION = 1e12


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for the fixed-point iteration.

    tol is the convergence threshold on the per-user relative change,
    taken as a sup norm over users.  lambda_max is the divergence guard;
    None resolves to 1e12 / sigma2 at solve time.  sweep selects
    "gauss-seidel" (ascending user order, freshest values) or
    "simultaneous" (all users from the previous iterate, kept for
    cross-checks).
    """

    tol: float = 1e-10
    max_iterations: int = 10000
    lambda_init: float = 0.0
    lambda_max: float | None = None
    sweep: str = "gauss-seidel"

    def __post_init__(self):
        if not self.tol > 0:
            raise ConfigError(f"tol must be > 0, got {self.tol}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.lambda_init < 0:
            raise ConfigError(f"lambda_init must be >= 0, got {self.lambda_init}")
        if self.lambda_max is not None and not self.lambda_max > 0:
            raise ConfigError(f"lambda_max must be > 0, got {self.lambda_max}")
        if self.sweep not in SWEEP_MODES:
            raise ConfigError(f"sweep must be one of {SWEEP_MODES}, got {self.sweep!r}")

    def resolved_lambda_max(self, sigma2):
        return self.lambda_max if self.lambda_max is not None else 1e12 / sigma2


@dataclass
class DualState:
    """Multiplier vector at the end of the fixed-point iteration."""

    lam: np.ndarray
    iteration: int
    max_delta: float
    converged: bool


@dataclass
class PrecoderSolution:
    """One solved instance: association, precoders, powers, diagnostics.

    Exactly one cluster per user carries a precoder; all SINRs are linear.
    duality_gap is |total_power_w - dual_objective_w| / dual_objective_w.
    """

    algorithm: str
    cluster_index: list
    satellites: list
    beams: list
    precoders: list
    powers_w: np.ndarray
    achieved_sinr: np.ndarray
    target_sinr: np.ndarray
    lam: np.ndarray
    delta: np.ndarray
    sigma2_w: float
    total_power_w: float
    dual_objective_w: float
    duality_gap: float
    iterations: int
    converged: bool

    @property
    def num_users(self):
        return len(self.cluster_index)

    @property
    def total_power_dbw(self):
        return 10.0 * math.log10(self.total_power_w)


def _checked_targets(targets, num_users):
    targets = np.asarray(targets, dtype=float)
    if targets.shape != (num_users,):
        raise ConfigError(f"expected {num_users} SINR targets, got shape {targets.shape}")
    if not np.all(targets > 0) or not np.all(np.isfinite(targets)):
        raise ConfigError("SINR targets must be finite and > 0 (linear scale)")
    return targets


def f_values(catalog, m, lam, targets):
    """Interference-function values of every cluster of user m at lam.

    Clusters whose direct channel is numerically zero evaluate to +inf so
    they can never win the argmin.

    Returns
    -------
    ndarray, shape (T_m,)
    """
    stack = catalog.stacked_channels(m)
    direct = stack[:, m, :]
    coupling = np.einsum("tjs,j,tju->tsu", stack, lam, stack.conj())
    coupling += np.eye(stack.shape[2])
    solved = np.linalg.solve(coupling, direct[:, :, None])[:, :, 0]
    quad = np.einsum("ts,ts->t", direct.conj(), solved).real
    values = np.full(quad.shape, np.inf)
    positive = quad > 0.0
    coefficient = targets[m] / (1.0 + targets[m])
    values[positive] = coefficient / quad[positive]
    return values


def f_value(catalog, m, t, lam, target):
    """Interference-function value of one cluster of user m.

    Parameters
    ----------
    catalog : ClusterCatalog
    m, t : int
        User and per-user catalog index of the cluster.
    lam : array_like, shape (M,)
        Nonnegative multipliers.
    target : float
        The user's linear SINR target.

    Raises
    ------
    ZeroDirectChannel
        If the cluster's channel toward its own user is numerically zero.
    """
    channels = catalog.cluster(m, t).channels
    direct = channels[m]
    if not np.any(direct != 0):
        raise ZeroDirectChannel(f"cluster {t} of user {m} has a zero direct channel")
    lam = np.asarray(lam, dtype=float)
    coupling = np.einsum("js,j,ju->su", channels, lam, channels.conj())
    coupling += np.eye(channels.shape[1])
    quad = float(np.vdot(direct, np.linalg.solve(coupling, direct)).real)
    if quad <= 0.0:
        raise ZeroDirectChannel(f"cluster {t} of user {m} has a vanishing direct gain")
    return (target / (1.0 + target)) / quad


def fixed_point_iterate(catalog, targets, sigma2, options=None):
    """Drive the multipliers to their fixed point.

    Iterates lambda_m <- min_t f_m^t(lambda) until the sup-norm relative
    change drops below options.tol.  Starting from zero the iteration is
    monotone increasing, so crossing the lambda cap certifies that the
    targets are infeasible.

    Returns
    -------
    DualState

    Raises
    ------
    Infeasible
        If any multiplier exceeds the cap.
    NotConverged
        If the iteration cap is hit first.
    ZeroDirectChannel
        If every cluster of some user has a zero direct channel.
    """
    options = options or SolverOptions()
    if not sigma2 > 0:
        raise ConfigError(f"sigma2 must be > 0, got {sigma2}")
    num_users = catalog.num_users
    targets = _checked_targets(targets, num_users)
    lam = np.full(num_users, float(options.lambda_init))
    lam_cap = options.resolved_lambda_max(sigma2)
    tiny = np.finfo(float).tiny
    max_delta = math.inf
    for iteration in range(1, options.max_iterations + 1):
        previous = lam.copy()
        if options.sweep == "gauss-seidel":
            for m in range(num_users):
                lam[m] = np.min(f_values(catalog, m, lam, targets))
        else:
            lam = np.array(
                [np.min(f_values(catalog, m, previous, targets)) for m in range(num_users)]
            )
        if not np.all(np.isfinite(lam)):
            bad = int(np.argmax(~np.isfinite(lam)))
            raise ZeroDirectChannel(f"every candidate cluster of user {bad} has a zero direct channel")
        if np.any(lam > lam_cap):
            bad = int(np.argmax(lam > lam_cap))
            raise Infeasible(
                f"multiplier of user {bad} exceeded the cap {lam_cap:.3e} at iteration "
                f"{iteration}; the SINR targets are unreachable"
            )
        max_delta = float(np.max(np.abs(lam - previous) / np.maximum(np.abs(lam), tiny)))
        if max_delta < options.tol:
            return DualState(lam=lam, iteration=iteration, max_delta=max_delta, converged=True)
    raise NotConverged(
        f"fixed point not reached after {options.max_iterations} iterations; "
        f"last relative change {max_delta:.3e}"
    )


def select_clusters(catalog, lam, targets):
    """Winning cluster per user: argmin of f at the given multipliers.

    Ties resolve to the lowest catalog index.

    Returns
    -------
    list of int, length M
    """
    targets = _checked_targets(targets, catalog.num_users)
    return [
        int(np.argmin(f_values(catalog, m, lam, targets))) for m in range(catalog.num_users)
    ]


def mmse_receiver(catalog, m, t, lam):
    """MMSE receive vector of cluster t of user m at multipliers lam.

    Solves (sum_j lam_j g_jm g_jm^H + I) u = g_mm at the cluster's natural
    (unpadded) size; the matrix is Hermitian positive definite for any
    nonnegative lam.

    Returns
    -------
    ndarray, shape (cluster size,), complex
    """
    channels = catalog.cluster(m, t).channels
    lam = np.asarray(lam, dtype=float)
    coupling = np.einsum("js,j,ju->su", channels, lam, channels.conj())
    coupling += np.eye(channels.shape[1])
    return np.linalg.solve(coupling, channels[m])


def power_scaling(catalog, winners, receivers, targets, sigma2):
    """Per-user power scalings that hit every SINR target with equality.

    Solves F delta = sigma2 * 1 where the diagonal of F carries each
    user's own-cluster gain divided by its target and the off-diagonal
    entries the negated cross gains from the other users' winning
    clusters.  The recomputed SINRs are validated before returning.

    Parameters
    ----------
    catalog : ClusterCatalog
    winners : sequence of int, per-user cluster index
    receivers : sequence of ndarray, unit-scale receive vectors
    targets : array_like, linear SINR targets
    sigma2 : float, noise power in W

    Returns
    -------
    ndarray, shape (M,), nonnegative

    Raises
    ------
    SingularF
        If F is numerically singular or the validation misses the targets.
    NegativePower
        If the solve yields a meaningfully negative power.
    """
    num_users = catalog.num_users
    targets = _checked_targets(targets, num_users)
    gains = np.zeros((num_users, num_users))
    for j in range(num_users):
        channels = catalog.cluster(j, winners[j]).channels
        gains[:, j] = np.abs(channels.conj() @ receivers[j]) ** 2
    coupling = -gains.copy()
    coupling[np.diag_indices(num_users)] = np.diag(gains) / targets
    condition = np.linalg.cond(coupling)
    if not np.isfinite(condition) or condition > _MAX_F_CONDITION:
        raise SingularF(
            f"power-coupling matrix condition {condition:.3e} exceeds {_MAX_F_CONDITION:.0e}"
        )
    delta = np.linalg.solve(coupling, np.full(num_users, float(sigma2)))
    if np.any(delta < -1e-12):
        worst = int(np.argmin(delta))
        raise NegativePower(f"power scaling gave {delta[worst]:.3e} for user {worst}")
    delta = np.maximum(delta, 0.0)

    signal = delta * np.diag(gains)
    interference = gains @ delta - signal
    sinr = signal / (interference + sigma2)
    miss = float(np.max(np.abs(sinr - targets) / targets))
    if miss > 1e-6:
        raise SingularF(f"scaled SINRs miss the targets by {miss:.3e} relative")
    return delta


def _downlink_sinr(catalog, winners, precoders, sigma2):
    # Direct evaluation of the achieved SINRs from the final precoders.
    num_users = catalog.num_users
    gains = np.zeros((num_users, num_users))
    for j in range(num_users):
        channels = catalog.cluster(j, winners[j]).channels
        gains[:, j] = np.abs(channels.conj() @ precoders[j]) ** 2
    signal = np.diag(gains).copy()
    interference = gains.sum(axis=1) - signal
    return signal / (interference + sigma2)


def _assemble(catalog, winners, state, targets, sigma2, algorithm):
    receivers = [mmse_receiver(catalog, m, winners[m], state.lam) for m in range(catalog.num_users)]
    delta = power_scaling(catalog, winners, receivers, targets, sigma2)
    precoders = [np.sqrt(delta[m]) * receivers[m] for m in range(catalog.num_users)]
    powers = np.array([float(np.vdot(u, u).real) for u in precoders])
    total = float(powers.sum())
    dual_objective = float(np.sum(state.lam) * sigma2)
    chosen = [catalog.cluster(m, winners[m]) for m in range(catalog.num_users)]
    return PrecoderSolution(
        algorithm=algorithm,
        cluster_index=[c.catalog_index for c in chosen],
        satellites=[c.satellite for c in chosen],
        beams=[c.beams for c in chosen],
        precoders=precoders,
        powers_w=powers,
        achieved_sinr=_downlink_sinr(catalog, winners, precoders, sigma2),
        target_sinr=np.asarray(targets, dtype=float),
        lam=state.lam.copy(),
        delta=delta,
        sigma2_w=float(sigma2),
        total_power_w=total,
        dual_objective_w=dual_objective,
        duality_gap=abs(total - dual_objective) / dual_objective,
        iterations=state.iteration,
        converged=state.converged,
    )


def solve_dual(catalog, targets, sigma2, options=None):
    """Joint cluster association and precoding via the duality fixed point.

    Runs the multi-cluster fixed point, picks each user's argmin cluster
    at the converged multipliers, computes MMSE receive vectors there,
    and scales them into downlink precoders.  Strong duality makes the
    returned total power match sigma2 * sum(lam) up to roundoff, which is
    exposed as duality_gap.

    Parameters
    ----------
    catalog : ClusterCatalog
    targets : array_like, shape (M,), linear SINR targets
    sigma2 : float, noise power in W
    options : SolverOptions, optional

    Returns
    -------
    PrecoderSolution

    Raises
    ------
    Infeasible, NotConverged, SingularF, NegativePower
    """
    options = options or SolverOptions()
    targets = _checked_targets(targets, catalog.num_users)
    state = fixed_point_iterate(catalog, targets, sigma2, options)
    winners = select_clusters(catalog, state.lam, targets)
    return _assemble(catalog, winners, state, targets, sigma2, "dual")


def strongest_cluster(catalog, m):
    """Cluster of user m with the largest direct-channel energy.

    Ties resolve to the lowest catalog index.

    Raises
    ------
    NoCandidateCluster
        If the user has no clusters.
    """
    group = catalog.clusters(m)
    if not group:
        raise NoCandidateCluster(f"user {m} has no candidate clusters")
    norms = [float(np.sum(np.abs(cluster.channels[m]) ** 2)) for cluster in group]
    return int(np.argmax(norms))


def solve_simple(catalog, targets, sigma2, options=None):
    """Frozen-association baseline.

    Pins each user to its strongest direct cluster, then runs the same
    fixed point and power scaling as solve_dual on the pinned catalog.
    The reported cluster indices refer to the original catalog.

    Parameters, returns, and errors match solve_dual.
    """
    options = options or SolverOptions()
    targets = _checked_targets(targets, catalog.num_users)
    picks = [strongest_cluster(catalog, m) for m in range(catalog.num_users)]
    restricted = catalog.restrict(picks)
    state = fixed_point_iterate(restricted, targets, sigma2, options)
    winners = [0] * restricted.num_users
    solution = _assemble(restricted, winners, state, targets, sigma2, "simple")
    return solution
