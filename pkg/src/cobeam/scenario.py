"""Problem instances and their serialization.

A Scenario bundles satellites, users, array and codebook configuration,
the link budget, and per-user SINR targets.  This module also provides
deterministic user placement, the channel and catalog build pipeline, and
JSON round-tripping of scenarios and solutions.  All randomness flows
through numpy's default_rng (PCG64), so a seed pins every artifact byte
for byte.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    ArrayConfig,
    CodebookConfig,
    LinkBudget,
    beam_centers,
    build_codebook,
    effective_channels,
    synthesize_channel,
)
from .clustering import candidate_beams, enumerate_clusters
from .errors import ConfigError, UserNotVisible
from .geometry import (
    DEFAULT_MIN_ELEVATION_DEG,
    BoresightSpec,
    GeodeticPosition,
    link_geometry,
)
from .solver import PrecoderSolution, solve_dual, solve_simple

# Three-satellite constellation used when none is configured.
DEFAULT_SATELLITE_LATLON = (
    (52.817247, 9.291984),
    (52.589261, 7.669242),
    (52.054784, 7.876349),
)
DEFAULT_ALTITUDE_M = 550e3

# Service rectangle for random user placement: lat1, lon1, lat2, lon2.
DEFAULT_USER_REGION = (51.0, 5.5, 54.0, 9.5)

DEFAULT_CANDIDATE_SIZE = 5
DEFAULT_CLUSTER_SIZE = 3
DEFAULT_TARGET_SINR_DB = 5.0


@dataclass(frozen=True)
class Satellite:
    position: GeodeticPosition
    boresight: BoresightSpec = BoresightSpec()


@dataclass(frozen=True)
class Scenario:
    """One complete problem instance.

    target_sinr_db holds one entry per user; a single entry expands to
    all users on construction.
    """

    satellites: tuple
    users: tuple
    array: ArrayConfig = ArrayConfig()
    codebook: CodebookConfig = CodebookConfig()
    budget: LinkBudget = LinkBudget()
    candidate_size: int = DEFAULT_CANDIDATE_SIZE
    cluster_size: int = DEFAULT_CLUSTER_SIZE
    target_sinr_db: tuple = (DEFAULT_TARGET_SINR_DB,)
    rng_seed: int = 0
    min_elevation_deg: float = DEFAULT_MIN_ELEVATION_DEG
    user_region: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "satellites", tuple(self.satellites))
        object.__setattr__(self, "users", tuple(self.users))
        if not self.satellites:
            raise ConfigError("satellites must contain at least one entry")
        if not self.users:
            raise ConfigError("users must contain at least one entry")
        if self.candidate_size < 1:
            raise ConfigError(f"candidate_size must be >= 1, got {self.candidate_size}")
        if self.cluster_size < 1:
            raise ConfigError(f"cluster_size must be >= 1, got {self.cluster_size}")
        targets = tuple(float(t) for t in np.atleast_1d(self.target_sinr_db))
        if len(targets) == 1:
            targets = targets * len(self.users)
        if len(targets) != len(self.users):
            raise ConfigError(
                f"target_sinr_db must have 1 or {len(self.users)} entries, got {len(targets)}"
            )
        if not all(math.isfinite(t) for t in targets):
            raise ConfigError("target_sinr_db entries must be finite")
        object.__setattr__(self, "target_sinr_db", targets)
        if self.user_region is not None:
            region = tuple(float(c) for c in self.user_region)
            if len(region) != 4:
                raise ConfigError("user_region must be (lat1, lon1, lat2, lon2)")
            object.__setattr__(self, "user_region", region)

    @property
    def num_users(self):
        return len(self.users)

    @property
    def num_satellites(self):
        return len(self.satellites)

    @property
    def targets_linear(self):
        return 10.0 ** (np.asarray(self.target_sinr_db) / 10.0)


def generate_users(count, region=DEFAULT_USER_REGION, seed=0):
    """Users drawn uniformly over a latitude/longitude rectangle.

    One (lat, lon) pair is drawn per user, in user order, from numpy's
    default_rng (PCG64).  A fixed seed therefore yields the same leading
    users for any count, and degenerate rectangles simply repeat the
    corner point.

    Returns
    -------
    tuple of GeodeticPosition, at altitude 0
    """
    if count < 1:
        raise ConfigError(f"user count must be >= 1, got {count}")
    lat1, lon1, lat2, lon2 = (float(c) for c in region)
    if not (lat1 <= lat2 and lon1 <= lon2):
        raise ConfigError(f"region corners must be ordered, got {region}")
    draws = np.random.default_rng(seed).uniform(size=(count, 2))
    lats = lat1 + draws[:, 0] * (lat2 - lat1)
    lons = lon1 + draws[:, 1] * (lon2 - lon1)
    return tuple(
        GeodeticPosition(float(lat), float(lon), 0.0) for lat, lon in zip(lats, lons)
    )


def default_satellites(altitude_m=DEFAULT_ALTITUDE_M):
    return tuple(
        Satellite(GeodeticPosition(lat, lon, altitude_m))
        for lat, lon in DEFAULT_SATELLITE_LATLON
    )


def default_scenario(users, **overrides):
    """Scenario over the default three-satellite constellation."""
    overrides.setdefault("satellites", default_satellites())
    overrides.setdefault("user_region", DEFAULT_USER_REGION)
    return Scenario(users=tuple(users), **overrides)


def build_channels(scenario):
    """Effective channel tensor plus per-link direction cosines.

    Links below the elevation mask contribute zero channels and NaN
    coordinates; they never attract candidate beams.

    Returns
    -------
    tensor : ndarray, shape (L, N, M), complex
    user_uv : ndarray, shape (L, M, 2)
    """
    num_sats = scenario.num_satellites
    num_users = scenario.num_users
    codebook_matrix = build_codebook(scenario.array, scenario.codebook)
    channels = np.zeros((num_sats, num_users, scenario.array.num_elements), dtype=complex)
    user_uv = np.full((num_sats, num_users, 2), np.nan)
    for l, sat in enumerate(scenario.satellites):
        for m, user in enumerate(scenario.users):
            try:
                link = link_geometry(
                    sat.position, user, sat.boresight, scenario.min_elevation_deg
                )
            except UserNotVisible:
                continue
            channels[l, m] = synthesize_channel(link, scenario.array, scenario.budget)
            user_uv[l, m] = (link.u, link.v)
    return effective_channels(channels, codebook_matrix), user_uv


def build_catalog(scenario):
    """Cluster catalog and channel tensor for a scenario.

    Returns
    -------
    catalog : ClusterCatalog
    tensor : ndarray, shape (L, N, M), complex
    """
    tensor, user_uv = build_channels(scenario)
    centers = beam_centers(scenario.array, scenario.codebook)
    candidates = candidate_beams(user_uv, centers, scenario.candidate_size)
    return enumerate_clusters(candidates, tensor, scenario.cluster_size), tensor


def solve_scenario(scenario, algorithm="dual", options=None):
    """End-to-end solve: channels, catalog, then the chosen algorithm."""
    catalog, _ = build_catalog(scenario)
    targets = scenario.targets_linear
    sigma2 = scenario.budget.noise_power_w
    if algorithm == "dual":
        return solve_dual(catalog, targets, sigma2, options)
    if algorithm == "simple":
        return solve_simple(catalog, targets, sigma2, options)
    raise ConfigError(f"algorithm must be 'dual' or 'simple', got {algorithm!r}")


# --- JSON serialization -------------------------------------------------
#
# Scenarios and solutions are plain JSON with sorted keys; floats are
# written with repr-level precision, so fixed inputs produce byte-stable
# files that round-trip exactly.

_SCENARIO_KEYS = {
    "satellites",
    "users",
    "array",
    "codebook",
    "budget",
    "candidate_size",
    "cluster_size",
    "target_sinr_db",
    "rng_seed",
    "min_elevation_deg",
    "user_region",
}


def scenario_to_dict(scenario):
    return {
        "satellites": [
            {
                "latitude_deg": sat.position.latitude_deg,
                "longitude_deg": sat.position.longitude_deg,
                "altitude_m": sat.position.altitude_m,
                "boresight_azimuth_deg": sat.boresight.azimuth_deg,
            }
            for sat in scenario.satellites
        ],
        "users": [
            {
                "latitude_deg": user.latitude_deg,
                "longitude_deg": user.longitude_deg,
                "altitude_m": user.altitude_m,
            }
            for user in scenario.users
        ],
        "array": {
            "rows": scenario.array.rows,
            "cols": scenario.array.cols,
            "element_spacing_wavelengths": scenario.array.element_spacing_wavelengths,
            "subarray_rows": scenario.array.subarray_rows,
            "subarray_cols": scenario.array.subarray_cols,
            "subarray_spacing_wavelengths": scenario.array.subarray_spacing_wavelengths,
        },
        "codebook": {
            "fft_rows": scenario.codebook.fft_rows,
            "fft_cols": scenario.codebook.fft_cols,
        },
        "budget": {
            "carrier_hz": scenario.budget.carrier_hz,
            "tx_element_gain_dbi": scenario.budget.tx_element_gain_dbi,
            "rx_gain_dbi": scenario.budget.rx_gain_dbi,
            "noise_power_w": scenario.budget.noise_power_w,
        },
        "candidate_size": scenario.candidate_size,
        "cluster_size": scenario.cluster_size,
        "target_sinr_db": list(scenario.target_sinr_db),
        "rng_seed": scenario.rng_seed,
        "min_elevation_deg": scenario.min_elevation_deg,
        "user_region": list(scenario.user_region) if scenario.user_region else None,
    }


def _require_mapping(data, context):
    if not isinstance(data, dict):
        raise ConfigError(f"{context} must be a JSON object, got {type(data).__name__}")


def _build(cls, data, context, **extra):
    _require_mapping(data, context)
    try:
        return cls(**data, **extra)
    except TypeError as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def scenario_from_dict(data):
    _require_mapping(data, "scenario")
    unknown = set(data) - _SCENARIO_KEYS
    if unknown:
        raise ConfigError(f"unknown scenario fields: {sorted(unknown)}")
    if "satellites" not in data or "users" not in data:
        raise ConfigError("scenario requires 'satellites' and 'users'")

    satellites = []
    for i, entry in enumerate(data["satellites"]):
        _require_mapping(entry, f"satellites[{i}]")
        entry = dict(entry)
        azimuth = entry.pop("boresight_azimuth_deg", 0.0)
        entry.setdefault("altitude_m", DEFAULT_ALTITUDE_M)
        position = _build(GeodeticPosition, entry, f"satellites[{i}]")
        satellites.append(Satellite(position, BoresightSpec(azimuth)))
    users = [
        _build(GeodeticPosition, entry, f"users[{i}]")
        for i, entry in enumerate(data["users"])
    ]

    kwargs = {"satellites": tuple(satellites), "users": tuple(users)}
    if "array" in data:
        kwargs["array"] = _build(ArrayConfig, data["array"], "array")
    if "codebook" in data:
        kwargs["codebook"] = _build(CodebookConfig, data["codebook"], "codebook")
    if "budget" in data:
        kwargs["budget"] = _build(LinkBudget, data["budget"], "budget")
    for key in ("candidate_size", "cluster_size", "target_sinr_db", "rng_seed", "min_elevation_deg"):
        if key in data:
            kwargs[key] = data[key]
    if data.get("user_region") is not None:
        kwargs["user_region"] = tuple(data["user_region"])
    return Scenario(**kwargs)


def save_scenario(scenario, path):
    with open(path, "w") as fh:
        json.dump(scenario_to_dict(scenario), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_scenario(path):
    """Parse and validate a scenario file.

    Raises
    ------
    ConfigError
        With a field-level message for malformed content.
    """
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(data)


def solution_to_dict(solution):
    return {
        "algorithm": solution.algorithm,
        "converged": solution.converged,
        "iterations": solution.iterations,
        "sigma2_w": solution.sigma2_w,
        "total_power_w": solution.total_power_w,
        "total_power_dbw": solution.total_power_dbw,
        "dual_objective_w": solution.dual_objective_w,
        "duality_gap": solution.duality_gap,
        "users": [
            {
                "cluster_index": int(solution.cluster_index[m]),
                "satellite": int(solution.satellites[m]),
                "beams": [int(b) for b in solution.beams[m]],
                "precoder_real": [float(x) for x in solution.precoders[m].real],
                "precoder_imag": [float(x) for x in solution.precoders[m].imag],
                "power_w": float(solution.powers_w[m]),
                "lambda": float(solution.lam[m]),
                "delta": float(solution.delta[m]),
                "target_sinr": float(solution.target_sinr[m]),
                "achieved_sinr": float(solution.achieved_sinr[m]),
            }
            for m in range(solution.num_users)
        ],
    }


def export_solution(solution, path):
    with open(path, "w") as fh:
        json.dump(solution_to_dict(solution), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_solution(path):
    """Rebuild a PrecoderSolution from an exported file."""
    with open(path) as fh:
        data = json.load(fh)
    users = data["users"]
    precoders = [
        np.array(entry["precoder_real"]) + 1j * np.array(entry["precoder_imag"])
        for entry in users
    ]
    return PrecoderSolution(
        algorithm=data["algorithm"],
        cluster_index=[entry["cluster_index"] for entry in users],
        satellites=[entry["satellite"] for entry in users],
        beams=[tuple(entry["beams"]) for entry in users],
        precoders=precoders,
        powers_w=np.array([entry["power_w"] for entry in users]),
        achieved_sinr=np.array([entry["achieved_sinr"] for entry in users]),
        target_sinr=np.array([entry["target_sinr"] for entry in users]),
        lam=np.array([entry["lambda"] for entry in users]),
        delta=np.array([entry["delta"] for entry in users]),
        sigma2_w=data["sigma2_w"],
        total_power_w=data["total_power_w"],
        dual_objective_w=data["dual_objective_w"],
        duality_gap=data["duality_gap"],
        iterations=data["iterations"],
        converged=data["converged"],
    )
