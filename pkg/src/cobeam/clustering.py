"""Candidate-beam selection and beam-cluster enumeration.

A cluster is a set of at most B beams, all from one satellite, drawn from
a user's candidate beams there.  The catalog materializes, for every
cluster of every user, the concatenated channels from the cluster's beams
to all users; the solvers work exclusively on these vectors.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NoCandidateCluster


def candidate_beams(user_uv, centers, count):
    """Rank beams by (u, v) distance per link and keep the closest.

    Parameters
    ----------
    user_uv : ndarray, shape (L, M, 2)
        Direction cosines of user m in satellite l's frame; NaN rows mark
        links that are not visible.
    centers : ndarray, shape (N, 2)
        Beam-center coordinates.
    count : int
        Beams kept per visible link; fewer only if N < count.

    Returns
    -------
    list of list of ndarray
        result[l][m] holds beam indices closest first, equidistant beams
        ordered by ascending index; empty for invisible links.
    """
    if count < 1:
        raise ConfigError(f"candidate count must be >= 1, got {count}")
    num_beams = centers.shape[0]
    tie_break = np.arange(num_beams)
    result = []
    for sat_uv in user_uv:
        per_sat = []
        for uv in sat_uv:
            if not np.all(np.isfinite(uv)):
                per_sat.append(np.empty(0, dtype=int))
                continue
            dist2 = np.sum((centers - uv) ** 2, axis=1)
            order = np.lexsort((tie_break, dist2))
            per_sat.append(order[:count].copy())
        result.append(per_sat)
    return result


@dataclass(frozen=True, eq=False)
class Cluster:
    """One candidate cluster: beams of a single satellite serving one user.

    channels[j, i] equals the effective channel of beam beams[i] at its
    satellite toward user j, copied verbatim from the channel tensor.
    """

    owner: int
    satellite: int
    beams: tuple
    catalog_index: int
    channels: np.ndarray = field(repr=False)

    @property
    def size(self):
        return len(self.beams)


class ClusterCatalog:
    """Per-user candidate clusters with concatenated channel vectors."""

    def __init__(self, clusters_by_user):
        clusters_by_user = [list(group) for group in clusters_by_user]
        for m, group in enumerate(clusters_by_user):
            if not group:
                raise NoCandidateCluster(f"user {m} has no candidate cluster on any satellite")
        self._by_user = clusters_by_user
        self._stacked = {}

    @property
    def num_users(self):
        return len(self._by_user)

    @property
    def counts(self):
        """Number of candidate clusters per user."""
        return [len(group) for group in self._by_user]

    def clusters(self, m):
        return self._by_user[m]

    def cluster(self, m, t):
        return self._by_user[m][t]

    def stacked_channels(self, m):
        """Channel stacks of user m's clusters: shape (T_m, M, width).

        Clusters narrower than the widest are zero-padded on the right;
        trailing zero coordinates are equivalent to absent beams in every
        quadratic form the solvers evaluate.  Cached per user.
        """
        if m not in self._stacked:
            group = self._by_user[m]
            width = max(cluster.size for cluster in group)
            stack = np.zeros((len(group), self.num_users, width), dtype=complex)
            for t, cluster in enumerate(group):
                stack[t, :, : cluster.size] = cluster.channels
            self._stacked[m] = stack
        return self._stacked[m]

    def restrict(self, assignment):
        """Catalog with one pinned cluster per user.

        The Cluster objects, including their catalog_index, are shared
        with this catalog, so restricted solutions still report original
        indices.
        """
        if len(assignment) != self.num_users:
            raise ConfigError(
                f"assignment length {len(assignment)} does not match {self.num_users} users"
            )
        return ClusterCatalog([[self._by_user[m][t]] for m, t in enumerate(assignment)])


def enumerate_clusters(candidates, tensor, cluster_size):
    """Build the full cluster catalog from candidate sets and the tensor.

    Per satellite (ascending id), all cluster_size-combinations of the
    candidate set are emitted in lexicographic order over ascending beam
    indices; a candidate set with at most cluster_size beams contributes
    itself as a single cluster.  The per-user catalog index is the
    position in this enumeration.

    Parameters
    ----------
    candidates : list of list of array_like
        candidates[l][m] from candidate_beams.
    tensor : ndarray, shape (L, N, M), complex
    cluster_size : int

    Returns
    -------
    ClusterCatalog

    Raises
    ------
    NoCandidateCluster
        If some user has an empty candidate set at every satellite.
    """
    if cluster_size < 1:
        raise ConfigError(f"cluster_size must be >= 1, got {cluster_size}")
    num_sats, _, num_users = tensor.shape
    by_user = []
    for m in range(num_users):
        group = []
        for sat in range(num_sats):
            cand = sorted(int(b) for b in candidates[sat][m])
            if not cand:
                continue
            if len(cand) <= cluster_size:
                combos = [tuple(cand)]
            else:
                combos = list(itertools.combinations(cand, cluster_size))
            for beams in combos:
                group.append(
                    Cluster(
                        owner=m,
                        satellite=sat,
                        beams=beams,
                        catalog_index=len(group),
                        channels=tensor[sat, list(beams), :].T.copy(),
                    )
                )
        if not group:
            raise NoCandidateCluster(f"user {m} has no candidate beams at any satellite")
        by_user.append(group)
    return ClusterCatalog(by_user)
