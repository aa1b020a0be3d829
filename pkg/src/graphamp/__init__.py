"""Boundary operators, self-consistent sources, and restricted Gaussian
partition functions on oriented graphs, with the two-rail ladder family
worked out in closed form and certified against brute-force oracles."""

from .chain_complex import (
    BoundaryCheck,
    ChainComplex,
    Link,
    LinkValues,
    OrientedGraph,
    Plaquette,
    SignedLink,
    apply_d1,
    build_boundary_1,
    build_boundary_2,
    verify_boundary_of_boundary,
)
from .errors import (
    GraphAmpError,
    GraphParseError,
    GraphStructureError,
    NullModeError,
    PlaquetteError,
    RankLimitError,
    RowSpaceError,
    SingularMatrixError,
)
from .gaussian_engine import (
    AmplitudeResult,
    ModeProbability,
    SpectralData,
    full_space_log_z,
    mode_distribution,
    mode_probability_density,
    most_probable_field,
    partition_function,
    spectral_decompose,
)
from .graph_io import graph_from_dict, graph_to_dict, load_graph
from .ladder_family import (
    ClosedFormMode,
    ClosedFormSpectrum,
    LadderCertification,
    LadderSpec,
    build_ladder,
    certify_ladder,
    closed_form_spectrum,
    ladder_source_vector,
    phi_mixed,
    phi_spatial,
    phi_temporal,
    phi_total,
)
from .oracle import (
    QuadratureResult,
    QuadratureSpec,
    SccSweepReport,
    direct_phi,
    exhaustive_scc_check,
    quadrature_log_z,
    random_connected_graph,
)
from .oscillator_action import (
    OscillatorMatrix,
    OscillatorParams,
    PatternMatchReport,
    build_oscillator_K,
    pattern_match_laplacian,
    potential_energy,
)
from .scc_core import (
    DifferenceMatrix,
    NullSpace,
    SccCheck,
    SccConfig,
    SourceVector,
    action_exponent,
    build_J,
    build_K,
    gauge_null_space,
    link_values_from_vertices,
    verify_scc,
)

__version__ = "0.1.0"
