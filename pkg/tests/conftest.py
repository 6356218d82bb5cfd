"""Shared fixtures: synthetic catalog factories and acceptance reporting."""

import itertools

import numpy as np
import pytest

from cobeam.clustering import Cluster, ClusterCatalog

_CRITERION_LINES = []


def record_criterion(number, passed, detail):
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'} - {detail}"
    _CRITERION_LINES.append(line)
    print(line)


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)


def complex_gaussian(rng, shape, scale=1.0):
    return scale * (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / np.sqrt(2.0)


def make_random_catalog(rng, num_users, clusters_per_user, cluster_size,
                        num_satellites=2, scale=1.0, ragged=False):
    """Catalog with a fixed cluster count per user and random channels.

    ragged=True draws each cluster's size from 1..cluster_size so the
    zero-padding paths get exercised.
    """
    by_user = []
    for m in range(num_users):
        group = []
        for t in range(clusters_per_user):
            size = int(rng.integers(1, cluster_size + 1)) if ragged else cluster_size
            group.append(
                Cluster(
                    owner=m,
                    satellite=int(t % num_satellites),
                    beams=tuple(range(t * cluster_size, t * cluster_size + size)),
                    catalog_index=t,
                    channels=complex_gaussian(rng, (num_users, size), scale),
                )
            )
        by_user.append(group)
    return ClusterCatalog(by_user)


def make_structured_catalog(rng, num_users, num_satellites, candidate_size,
                            cluster_size, scale=1.0):
    """Catalog shaped like a real enumeration: per satellite, all
    cluster_size-subsets of a random candidate set (or the whole set when
    it is small)."""
    by_user = []
    for m in range(num_users):
        group = []
        for sat in range(num_satellites):
            n_cand = int(rng.integers(1, candidate_size + 1))
            beams = sorted(int(b) for b in rng.choice(64, size=n_cand, replace=False))
            if n_cand <= cluster_size:
                combos = [tuple(beams)]
            else:
                combos = list(itertools.combinations(beams, cluster_size))
            for chosen in combos:
                group.append(
                    Cluster(
                        owner=m,
                        satellite=sat,
                        beams=chosen,
                        catalog_index=len(group),
                        channels=complex_gaussian(rng, (num_users, len(chosen)), scale),
                    )
                )
        by_user.append(group)
    return ClusterCatalog(by_user)
