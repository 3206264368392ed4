"""Steady-state squeezing, entanglement and EPR steering of a linearized
electro-optomechanical system (optical cavity, mechanical resonator,
LC microwave circuit)."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BogoliubovDomainError,
    ConfigurationError,
    DimensionError,
    EomechError,
    InstabilityError,
    OracleFailure,
    PhysicalityError,
)
from .gaussian import (  # noqa: E402
    CovarianceMatrix,
    WignerField,
    log_negativity,
    log_negativity_pt,
    partial_transpose,
    quadrature_variance,
    reduced_cm,
    renyi2_entropy,
    squeezing_db,
    steering_pair,
    symplectic_eigenvalues,
    symplectic_form,
    wigner_single_mode,
)
from .system import (  # noqa: E402
    DriveConfig,
    GeometryParams,
    SystemParams,
    ThermalOccupations,
    bogoliubov_params,
    build_diffusion,
    build_drift,
    couplings_from_powers,
    effective_couplings,
    steady_state_amplitudes,
    thermal_occupation,
    thermal_occupations,
)
from .steady import (  # noqa: E402
    SteadyStateReport,
    covariance_ode_oracle,
    solve_lyapunov,
    stability,
    steady_state_report,
)
from .sweep import (  # noqa: E402
    Axis,
    DriveSettings,
    SweepResult,
    SweepSpec,
    figure_preset,
    run_sweep,
)
