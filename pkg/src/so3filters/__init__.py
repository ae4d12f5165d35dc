"""Nonlinear complementary attitude filters on SO(3) with closed-form oracles."""
from .errors import (
    AxisUndefinedError,
    ConfigError,
    DegenerateObservationError,
    DomainError,
    InvalidArgumentError,
    InvalidGainError,
    SingularityError,
)
from .filters import (
    FilterConfig,
    FilterKind,
    FilterState,
    VectorObservation,
    distI_sq_from_vectors,
    filter_step,
    gain_k,
    gain_k_rodrigues,
    innovation,
    innovation_from_vectors,
)
from .oracle import (
    BoundEnvelope,
    bounds_filter1,
    bounds_filter2,
    bounds_filter3,
    convergence_time_lower,
    distI_explicit,
    explicit_error,
)
from .so3 import (
    abar_of,
    cayley,
    dist_I,
    exp_so3,
    exp_sym,
    psi,
    rodrigues_of,
    rot_angle_axis,
    skew,
    sym_eig,
    vex,
)

__version__ = "0.1.0"
