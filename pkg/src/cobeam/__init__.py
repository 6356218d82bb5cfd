"""Joint beam-cluster selection and power-minimizing linear precoding
for coordinated multi-satellite downlinks."""

__version__ = "0.1.0"

from .channel import (
    ArrayConfig,
    CodebookConfig,
    LinkBudget,
    beam_centers,
    build_codebook,
    effective_channels,
    element_pattern,
    noise_power,
    steering_vector,
    synthesize_channel,
)
from .clustering import Cluster, ClusterCatalog, candidate_beams, enumerate_clusters
from .errors import (
    CobeamError,
    ConfigError,
    Infeasible,
    InvalidDirection,
    NegativePower,
    NoCandidateCluster,
    NotConverged,
    OracleTooLarge,
    SingularF,
    UserNotVisible,
    ZeroDirectChannel,
)
from .geometry import (
    BoresightSpec,
    GeodeticPosition,
    LinkGeometry,
    ecef_to_geodetic,
    enu_basis,
    geodetic_to_ecef,
    link_geometry,
)
from .oracle import (
    OracleReport,
    certificate_matrices,
    exhaustive_minimum,
    fixed_assignment_power,
    recompute_sinr,
    recompute_sinr_from_tensor,
)
from .scenario import (
    Satellite,
    Scenario,
    build_catalog,
    build_channels,
    default_satellites,
    default_scenario,
    export_solution,
    generate_users,
    load_scenario,
    load_solution,
    save_scenario,
    solve_scenario,
)
from .solver import (
    DualState,
    PrecoderSolution,
    SolverOptions,
    f_value,
    f_values,
    fixed_point_iterate,
    mmse_receiver,
    power_scaling,
    select_clusters,
    solve_dual,
    solve_simple,
    strongest_cluster,
)
from .sweep import SweepSpec, export_table, run_sweep

__all__ = [
    "ArrayConfig",
    "BoresightSpec",
    "Cluster",
    "ClusterCatalog",
    "CobeamError",
    "CodebookConfig",
    "ConfigError",
    "DualState",
    "GeodeticPosition",
    "Infeasible",
    "InvalidDirection",
    "LinkBudget",
    "LinkGeometry",
    "NegativePower",
    "NoCandidateCluster",
    "NotConverged",
    "OracleReport",
    "OracleTooLarge",
    "PrecoderSolution",
    "Satellite",
    "Scenario",
    "SingularF",
    "SolverOptions",
    "SweepSpec",
    "UserNotVisible",
    "ZeroDirectChannel",
    "beam_centers",
    "build_catalog",
    "build_channels",
    "build_codebook",
    "candidate_beams",
    "certificate_matrices",
    "default_satellites",
    "default_scenario",
    "ecef_to_geodetic",
    "effective_channels",
    "element_pattern",
    "enu_basis",
    "enumerate_clusters",
    "exhaustive_minimum",
    "export_solution",
    "export_table",
    "f_value",
    "f_values",
    "fixed_assignment_power",
    "fixed_point_iterate",
    "generate_users",
    "geodetic_to_ecef",
    "link_geometry",
    "load_scenario",
    "load_solution",
    "mmse_receiver",
    "noise_power",
    "power_scaling",
    "recompute_sinr",
    "recompute_sinr_from_tensor",
    "run_sweep",
    "save_scenario",
    "select_clusters",
    "solve_dual",
    "solve_scenario",
    "solve_simple",
    "steering_vector",
    "strongest_cluster",
    "synthesize_channel",
]
