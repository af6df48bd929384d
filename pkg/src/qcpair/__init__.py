"""qcpair: numerical geometry of Jordan-region pairs.

Relative hyperbolic and quasihyperbolic metrics on masked grids, empirical
quasisymmetric/quasi-Mobius distortion profiles, quasicircle constants, ring
moduli, and explicit piecewise-linear quasiconformal extension constructions
with measured dilatation.
"""

from .geom import (
    INF,
    Disk,
    ExtPoint,
    HalfPlane,
    MobiusMap,
    PolyJordan,
    Region,
    Scene,
    apply_mobius,
    boundary_distance,
    chordal_distance,
    cross_ratio,
    is_inf,
    relative_distance,
)
from .gridmetric import (
    DISK_EXACT,
    DISK_EXTERIOR_EXACT,
    HALF_PLANE_EXACT,
    SIMPLY_CONNECTED_PROXY,
    DensityModel,
    GeodesicResult,
    GridSpec,
    MetricGrid,
    hyperbolic_density,
    metric_table,
    quasihyperbolic_distance,
    relative_hyperbolic_distance,
)
from .distortion import (
    DistortionProfile,
    PairVerdict,
    QuasicircleReport,
    increasing_qs_ratio,
    pair_verdict,
    qm_profile,
    qs_profile,
    quasicircle_constants,
)
from .extend import (
    AnnulusCompositeMap,
    AnnulusExtension,
    BoundaryHomeo,
    Circle,
    LiftPair,
    Line,
    PLMap,
    annuli_identity_check,
    annulus_extend_general,
    annulus_extend_large,
    annulus_extend_unit,
    ba_extend,
    circle_lift_pair,
    dyadic_pl_extend,
    glue_meshes,
    mesh_overlap_free,
    power_map,
    radial_blend,
    strip_bounds_check,
    trapezoid_strip_extend,
)
from .dilatation import (
    DilatationReport,
    ModulusComparison,
    RingSpec,
    extension_condition_check,
    numeric_beltrami,
    pl_dilatation,
    ring_modulus,
)
from . import scenarios
from . import errors

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
