"""kdscope: Kirkwood-Dirac quasiprobability distributions, basis-pair
incompatibility analysis, and classified support-uncertainty diagrams."""

__version__ = "0.1.0"

from .bases import (
    BasisSpec,
    TransitionMatrix,
    dft,
    load_matrix,
    mub4,
    perturbed,
    save_matrix,
    spin_transition,
)
from .diagram import (
    CLASSICAL,
    EMPTY,
    MIXED,
    NONCLASSICAL,
    Diagram,
    DiagramPoint,
    SearchConfig,
    classify_point,
    dft6_two_support,
    dft_min_states,
    generic_support,
    minimize_ncc_over_subspace,
    mub4_edge_states,
    support_subspace,
    uncertainty_diagram,
)
from .errors import KDScopeError
from .incompat import (
    IncompatReport,
    OverlapExtrema,
    coinc_witness,
    incompat_report,
    is_coinc,
    is_stroinc,
    min_support_uncertainty,
    overlap_extrema,
)
from .kdcore import (
    BoundReport,
    KDDistribution,
    StateVector,
    SupportProfile,
    bound_report,
    is_kd_classical,
    kd_distribution,
    nonclassicality,
    random_state,
    support,
)
from .linalg import (
    SubspaceBasis,
    hermitian_eig,
    minor,
    orthonormal_null_space,
    unitary_from_generator,
)
from .render import emit_svg, svg_document

__all__ = [
    "__version__",
    "BasisSpec",
    "TransitionMatrix",
    "dft",
    "mub4",
    "perturbed",
    "spin_transition",
    "load_matrix",
    "save_matrix",
    "StateVector",
    "KDDistribution",
    "SupportProfile",
    "BoundReport",
    "kd_distribution",
    "nonclassicality",
    "is_kd_classical",
    "support",
    "bound_report",
    "random_state",
    "OverlapExtrema",
    "IncompatReport",
    "overlap_extrema",
    "is_stroinc",
    "is_coinc",
    "coinc_witness",
    "min_support_uncertainty",
    "incompat_report",
    "Diagram",
    "DiagramPoint",
    "SearchConfig",
    "EMPTY",
    "CLASSICAL",
    "NONCLASSICAL",
    "MIXED",
    "support_subspace",
    "generic_support",
    "uncertainty_diagram",
    "classify_point",
    "minimize_ncc_over_subspace",
    "dft_min_states",
    "mub4_edge_states",
    "dft6_two_support",
    "SubspaceBasis",
    "hermitian_eig",
    "unitary_from_generator",
    "minor",
    "orthonormal_null_space",
    "KDScopeError",
    "emit_svg",
    "svg_document",
]
