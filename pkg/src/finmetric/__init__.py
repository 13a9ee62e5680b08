"""Metric geometry on finite metric spaces.

Validation and quotients, nets and packings, tree and ultrametric tests,
Hausdorff and Gromov-Hausdorff distances, tight spans, and random
Urysohn-space growth.  Hot loops run in a compiled extension when it is
available and in pure Python otherwise (see ``finmetric._backend``).
"""

from ._backend import BACKEND, use_backend
from .core import (
    DEFAULT_TOL,
    FiniteMetricSpace,
    ShapeError,
    SubsetSelection,
    ValidationError,
    ValidationReport,
    Violation,
    diameter,
    eccentricity,
    from_points,
    metric_components,
    midpoints,
    permute,
    quotient_pseudometric,
    require_valid,
    restrict,
    scale,
    selection,
    validate,
)
from .gh import (
    Correspondence,
    GhPrimeResult,
    GhResult,
    distortion,
    gh_exact,
    gh_lower_bound,
    gh_prime,
    gh_upper_from_map,
    glue_along,
    map_distortion,
)
from .hausdorff import convex_hull, directed_hausdorff, hausdorff_distance, planar_hausdorff, set_distance_function
from .injective import (
    PointFunction,
    PreconditionError,
    distance_function,
    extremal_below,
    hyperconvexity_witness,
    inj_distance,
    is_admissible,
    is_extremal,
    sample_tight_span,
    tight_span_vertices,
)
from .nets import PackingCertificate, doubling_report, greedy_packing, is_eps_net, max_packing, packing_number
from .trees import DefectWitness, four_point_defect, gromov_tripod, sphere, ultrametric_defect
from .urysohn import (
    GrowthState,
    PartialIsometry,
    back_and_forth,
    extension_property_stats,
    grow,
    new_state,
    random_extension_function,
    random_grow,
)

__version__ = "0.1.0"
