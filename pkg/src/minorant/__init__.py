"""Lower-bound certificates for subharmonic functions on discs."""

from .bounds import (
    BoundCertificate,
    DiscProblem,
    disc_certificate,
    n0_gauge_integral,
    power_content_budget,
    theorem1_pointwise_bound,
)
from .core import Gauge, gauge_constant, kernel, sphere_area
from .errors import (
    DivergenceError,
    DomainError,
    MinorantError,
    NumericFailure,
    UnsupportedGaugeError,
    ValidationError,
)
from .harnack import (
    BoundaryAtomMeasure,
    HarnackBound,
    ball_center_distance,
    ball_pair_upper,
    poisson_disc_distance,
    punctured_disc_circle_bound,
    punctured_harmonic_sample,
)
from .hcontent import CoverEstimate, content_of_violation_set, content_upper
from .harness import (
    GridSpec,
    SubharmonicSample,
    boundary_sup,
    make_log_poly,
    random_family,
    run_verification,
)
from .riesz import AtomicMeasure, integrated_counting, radial_counting

__version__ = "0.1.0"
