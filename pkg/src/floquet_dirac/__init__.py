"""Dispersive decay of 1D Dirac equations with time-periodic mass."""

__version__ = "0.1.0"

from .dispersion import (
    eigenbasis,
    floquet_multipliers,
    monodromy_symbol,
    omega,
    sinc,
    theta,
    theta_derivative,
    theta_derivs_at_zero,
)
from .errors import (
    ConfigError,
    DomainError,
    FloquetError,
    GridInsufficientError,
    OracleError,
    QuadratureError,
)
from .evolution import (
    MassModel,
    SpectralField,
    SpectralGrid,
    Wavepacket,
    auto_grid,
    check_grid_sufficiency,
    evolve,
    make_wavepacket,
    point_eval,
    propagator,
    smooth,
    sup_norm,
)
from .exceptional_masses import find_exceptional_masses, inflection_scan
from .oracle import mode_oracle
from .stationary_phase import (
    PhaseProfile,
    airy_constant,
    airy_leading,
    fit_decay,
    predicted_peak,
    quintic_leading,
    s_zero,
    vdc_scaling_check,
)
