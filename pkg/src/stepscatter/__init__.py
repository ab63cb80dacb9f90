"""Characteristic times for quantum scattering on a 1D potential step.

Decomposes the total stationary state into transmission and reflection
subprocess wave functions, evaluates their dwell and asymptotic group times
in closed form with independent numerical oracles, and propagates Gaussian
wave packets spectrally to observe the time-dependent behavior.
"""

from ._backend import backend_name
from .core import (
    DEFAULT_CONFIG,
    BranchKappa,
    EnergyRegime,
    PhysicalConfig,
    StationaryAmplitudes,
    StepPotential,
    kappa_of_k,
    probability_current,
    regime_of,
    stationary_amplitudes,
    total_wavefunction,
    total_wavefunction_dx,
    wave_velocity,
)
from .errors import (
    BadFitWindowError,
    ConfigError,
    DegenerateEnergyError,
    EmptyChannelError,
    GridTooSmallError,
    NonPositiveWavenumberError,
    NoZeroFoundError,
    QuadratureNotConvergedError,
    SpectralGuardError,
    StepScatterError,
    WrongRegimeError,
)
from .packet import (
    CHANNELS,
    MomentRecord,
    PacketSnapshot,
    ScatteringDiagnostics,
    SpatialGrid,
    SpectralProfile,
    TrajectoryFit,
    asymptotic_channel_norms,
    channel_norms,
    cm_trajectory,
    evolve,
    moments,
    spectral_amplitude,
    spectral_nodes,
    validate_completed_scattering,
)
from .swf import (
    OracleZeroReport,
    SwfAmplitudes,
    TransitionalRegion,
    alternative_swf_ref,
    alternative_swf_ref_dx,
    lambda_phase,
    stationary_swf_ref,
    stationary_swf_ref_dx,
    stationary_swf_tr,
    stationary_swf_tr_dx,
    swf_amplitudes,
    total_reflection_swf,
    total_reflection_swf_dx,
    turning_point,
    turning_point_oracle,
)
from .times import (
    DwellReport,
    GroupReport,
    TotalReflectionReport,
    dwell_time_oracle,
    dwell_times,
    flow_velocity,
    group_times,
    total_reflection_dwell_oracle,
    total_reflection_times,
)

__version__ = "0.1.0"
