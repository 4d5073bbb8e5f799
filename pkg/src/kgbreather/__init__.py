"""Nonlinear Klein-Gordon breather toolkit.

Analytic traveling-breather constructions for sine-Gordon, graphene
superlattice, and cubic Klein-Gordon models; an explicit finite
difference solver; a kink profile integrator; and the envelope plus
correlation pipeline that quantifies how long an approximate breather
stays close to the numerical solution.
"""

from .analytic import (
    BreatherParams,
    HarmonicProfiles,
    approximate_breather,
    carrier_phase,
    comoving_coordinate,
    envelope_amplitude,
    gsl_breather_dimensional,
    sg_standing_breather,
    sg_traveling_breather,
    small_amplitude_breather,
    solve_third_harmonic,
    third_harmonic_residual,
)
from .analysis import (
    CorrelationRecord,
    EnvelopeModel,
    ExtremaSet,
    burst_duration,
    correlation,
    correlation_timeseries,
    envelope,
    find_extrema,
    locate_max,
    track_speed,
)
from .errors import (
    CflViolation,
    ConfigError,
    DegenerateVariance,
    GridTooNarrow,
    GridTooSmall,
    InvalidParam,
    NoExtremaFound,
    NonFiniteSample,
    NumericalBlowup,
    NumericsError,
    SingularSystem,
    ToleranceNotMet,
    TooFewExtrema,
)
from .kink import (
    KinkProfile,
    kink_initial_state,
    kink_profile,
    kink_slope_at_center,
    verify_against_quadrature,
)
from .models import (
    CubicKG,
    GrapheneSL,
    NonlinearityModel,
    PhysicalScales,
    SineGordon,
    cubic_coefficient,
    force,
    from_dimensionless,
    potential,
    to_dimensionless,
)
from .solver import (
    BLOWUP_THRESHOLD,
    CFL_LIMIT,
    DIRICHLET0,
    PERIODIC,
    EnergyRecord,
    FieldState,
    Grid1D,
    ProbeSeries,
    RunResult,
    SimConfig,
    energy,
    init_from_solution,
    run,
    step,
)

__version__ = "0.1.0"
