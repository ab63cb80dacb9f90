"""Time-dependent Gaussian wave packets propagated by spectral quadrature.

A packet is defined by its Gaussian spectral amplitude
A(k) = (2*l0^2/pi)^(1/4) * exp(-l0^2*(k - k_bar)^2), truncated to the window
[k_bar - window, k_bar + window] (default window = 8 sigma_k, sigma_k =
1/(2*l0)).  Each channel field is

    psi(x, t) = (2*pi)^(-1/2) * integral A(k) phi(x, k) exp(-i*E(k)*t/hbar) dk

evaluated by fixed Gauss-Legendre quadrature on the window.  phi is the total
stationary state, the bare incident wave, one of the two subprocess wave
functions (with the per-k support cutoff of the reflection part applied
exactly), or the initial-stage free forms sqrt(T)*exp(i[kx+beta(lambda-pi/2)])
and sqrt(R)*exp(i[kx+beta*lambda]).

The quadrature reduction runs in ascending node order with compensated
summation (see _kernels_py), so outputs are bit-reproducible across runs and
thread counts; threads only split the spatial grid into fixed-size chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .core import (
    DEFAULT_CONFIG,
    PhysicalConfig,
    StepPotential,
    stationary_amplitudes,
)
from .errors import (
    BadFitWindowError,
    ConfigError,
    EmptyChannelError,
    GridTooSmallError,
    SpectralGuardError,
)
from .swf import swf_amplitudes, turning_point

CHANNELS = ("total", "incident", "tr", "ref", "tr_inc", "ref_inc")
_CHANNEL_IDS = {name: i for i, name in enumerate(CHANNELS)}
_CHUNK = 2048


@dataclass(frozen=True)
class SpectralProfile:
    """Gaussian spectral profile: width parameter l0, center k_bar.

    window defaults to 8*sigma_k with sigma_k = 1/(2*l0); nodes is the
    Gauss-Legendre node count on the truncated window.
    """

    l0: float
    k_bar: float
    window: float | None = None
    nodes: int = 513

    def __post_init__(self):
        if not (self.l0 > 0.0):
            raise ConfigError(f"packet width l0 must be positive, got {self.l0}")
        if self.window is None:
            object.__setattr__(self, "window", 8.0 * self.sigma_k)
        if not (self.window > 0.0):
            raise ConfigError(f"spectral window must be positive, got {self.window}")
        if not (self.k_bar - self.window > 0.0):
            raise ConfigError(
                f"spectral window [{self.k_bar - self.window}, {self.k_bar + self.window}] "
                "reaches k <= 0"
            )
        if self.nodes < 2:
            raise ConfigError(f"need at least 2 quadrature nodes, got {self.nodes}")

    @property
    def sigma_k(self) -> float:
        return 1.0 / (2.0 * self.l0)


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform sampling grid [x_min, x_max] with n_points points."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (self.x_min < self.x_max):
            raise ConfigError(f"empty grid: x_min={self.x_min} >= x_max={self.x_max}")
        if self.n_points < 2:
            raise ConfigError(f"need at least 2 grid points, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


@dataclass(frozen=True)
class PacketSnapshot:
    """Sampled complex field of one channel at time t."""

    t: float
    grid: SpatialGrid
    values: np.ndarray
    channel: str


@dataclass(frozen=True)
class MomentRecord:
    """Norm and position/momentum moments of a snapshot."""

    t: float
    norm: float
    x_mean: float
    p_mean: float
    x2_mean: float

    @property
    def spread(self) -> float:
        return math.sqrt(max(self.x2_mean - self.x_mean**2, 0.0))


@dataclass(frozen=True)
class TrajectoryFit:
    """Least-squares line through the center-of-mass samples."""

    slope: float
    intercept: float
    rms_residual: float
    t_window: tuple[float, float]


@dataclass(frozen=True)
class ScatteringDiagnostics:
    """Pass/fail report of the completed-scattering (narrow packet) conditions."""

    a_over_l0: float
    far_start_ok: bool
    spectral_guard_ok: bool
    turning_sensitivity: float
    sensitivity_ok: bool
    transitional_length: float
    narrowness_ok: bool
    effective_transitional_length: float
    effective_length_finite: bool

    @property
    def all_passed(self) -> bool:
        return (
            self.far_start_ok
            and self.spectral_guard_ok
            and self.sensitivity_ok
            and self.narrowness_ok
            and self.effective_length_finite
        )


def spectral_amplitude(profile: SpectralProfile, k):
    """Gaussian spectral amplitude A(k), normalized so integral |A|^2 dk = 1."""
    out = (2.0 * profile.l0**2 / math.pi) ** 0.25 * np.exp(
        -profile.l0**2 * (np.asarray(k, dtype=float) - profile.k_bar) ** 2
    )
    return out[()] if out.ndim == 0 else out


def spectral_nodes(profile: SpectralProfile) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped onto the spectral window."""
    s, w = np.polynomial.legendre.leggauss(profile.nodes)
    return profile.k_bar + profile.window * s, profile.window * w


def check_spectral_guard(profile: SpectralProfile, step: StepPotential) -> None:
    """Raise unless every node of the window is strictly propagating."""
    k_lo = profile.k_bar - profile.window
    if k_lo <= 0.0:
        raise SpectralGuardError(f"spectral window reaches k = {k_lo} <= 0")
    if step.beta == 1 and k_lo <= step.kappa0:
        raise SpectralGuardError(
            f"spectral window reaches k = {k_lo} <= kappa0 = {step.kappa0}; "
            "packets straddling the propagating-branch boundary are not supported"
        )


@lru_cache(maxsize=16)
def _node_tables(profile: SpectralProfile, step: StepPotential):
    """Per-node stationary data for the kernel (read-only arrays)."""
    check_spectral_guard(profile, step)
    k, w = spectral_nodes(profile)
    n = k.shape[0]
    kappa = np.empty(n)
    x_cut = np.empty(n)
    trans = np.empty(n)
    refl = np.empty(n)
    amp_a = np.empty(n, dtype=complex)
    amp_b = np.empty(n, dtype=complex)
    amp_tr = np.empty(n, dtype=complex)
    amp_ref = np.empty(n, dtype=complex)
    amp_c = np.empty(n, dtype=complex)
    for j in range(n):
        amps = stationary_amplitudes(step, k[j])
        swfa = swf_amplitudes(step, k[j])
        region = turning_point(step, k[j])
        kappa[j] = amps.kappa
        trans[j] = amps.trans_coef
        refl[j] = amps.refl_coef
        amp_a[j] = amps.amp_a
        amp_b[j] = amps.amp_b
        amp_tr[j] = swfa.amp_tr
        amp_ref[j] = swfa.amp_ref
        amp_c[j] = region.amp_c
        x_cut[j] = region.x_c
    tables = (k, w, kappa, amp_a, amp_b, amp_tr, amp_ref, amp_c, x_cut, trans, refl)
    for arr in tables:
        arr.flags.writeable = False
    return tables


def evolve(
    profile: SpectralProfile,
    step: StepPotential,
    t: float,
    grid: SpatialGrid,
    channel: str,
    cfg: PhysicalConfig = DEFAULT_CONFIG,
    threads: int = 1,
) -> PacketSnapshot:
    """Evaluate one channel field on the grid at time t."""
    if channel not in _CHANNEL_IDS:
        raise ConfigError(f"unknown channel {channel!r}, expected one of {CHANNELS}")
    max_spacing = math.pi / (4.0 * (profile.k_bar + profile.window))
    if grid.spacing > max_spacing:
        raise ConfigError(
            f"grid spacing {grid.spacing:.6g} does not resolve the shortest "
            f"wavelength (need <= {max_spacing:.6g})"
        )
    k, w, kappa, amp_a, amp_b, amp_tr, amp_ref, amp_c, x_cut, _, _ = _node_tables(
        profile, step
    )
    # w_j A(k_j) exp(-i E_j t / hbar) / sqrt(2 pi), E/hbar = hbar k^2 / (2 m)
    coef = (
        w
        * spectral_amplitude(profile, k)
        * np.exp(-0.5j * cfg.hbar * k**2 * t / cfg.mass)
        / math.sqrt(2.0 * math.pi)
    )
    x = grid.points()
    out = np.empty(grid.n_points, dtype=complex)
    channel_id = _CHANNEL_IDS[channel]

    def run(start: int) -> None:
        stop = min(start + _CHUNK, grid.n_points)
        kernels.evolve_chunk(
            coef, k, kappa, amp_a, amp_b, amp_tr, amp_ref, amp_c, x_cut,
            step.a, x[start:stop], channel_id, out[start:stop],
        )

    starts = range(0, grid.n_points, _CHUNK)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, starts))
    else:
        for start in starts:
            run(start)
    out.flags.writeable = False
    return PacketSnapshot(t, grid, out, channel)


def moments(snapshot: PacketSnapshot, cfg: PhysicalConfig = DEFAULT_CONFIG) -> MomentRecord:
    """Norm, mean position, mean momentum and mean squared position.

    Spatial integrals use the trapezoidal rule; the momentum density uses
    centered finite differences for the spatial derivative (one-sided at the
    grid ends).
    """
    x = snapshot.grid.points()
    h = snapshot.grid.spacing
    psi = snapshot.values
    dens = np.abs(psi) ** 2
    norm = float(np.trapezoid(dens, dx=h))
    if norm <= 1e-12:
        raise EmptyChannelError(
            f"channel {snapshot.channel!r} norm {norm} at t={snapshot.t} is below 1e-12"
        )
    x_mean = float(np.trapezoid(x * dens, dx=h)) / norm
    x2_mean = float(np.trapezoid(x * x * dens, dx=h)) / norm
    dpsi = np.empty_like(psi)
    dpsi[1:-1] = (psi[2:] - psi[:-2]) / (2.0 * h)
    dpsi[0] = (psi[1] - psi[0]) / h
    dpsi[-1] = (psi[-1] - psi[-2]) / h
    p_mean = (
        cfg.hbar * float(np.trapezoid(np.imag(np.conj(psi) * dpsi), dx=h)) / norm
    )
    return MomentRecord(snapshot.t, norm, x_mean, p_mean, x2_mean)


def _edge_check(snapshot: PacketSnapshot) -> None:
    dens = np.abs(snapshot.values) ** 2
    peak = float(dens.max())
    if peak > 0.0 and max(dens[0], dens[-1]) >= 1e-10 * peak:
        raise GridTooSmallError(
            f"channel {snapshot.channel!r} density at the grid edges is not "
            f"negligible at t={snapshot.t}; enlarge the grid"
        )


def channel_norms(
    profile: SpectralProfile,
    step: StepPotential,
    t: float,
    grid: SpatialGrid,
    cfg: PhysicalConfig = DEFAULT_CONFIG,
    threads: int = 1,
) -> tuple[float, float]:
    """Spatial norms (T(t), R(t)) of the transmission and reflection channels."""
    norms = []
    for channel in ("tr", "ref"):
        snap = evolve(profile, step, t, grid, channel, cfg, threads)
        _edge_check(snap)
        norms.append(float(np.trapezoid(np.abs(snap.values) ** 2, dx=grid.spacing)))
    return norms[0], norms[1]


def asymptotic_channel_norms(
    profile: SpectralProfile, step: StepPotential
) -> tuple[float, float]:
    """Spectral norms (T_as, R_as) = integral |A(k)|^2 {T, R}(k) dk."""
    k, w, _, _, _, _, _, _, _, trans, refl = _node_tables(profile, step)
    weight = w * spectral_amplitude(profile, k) ** 2
    return math.fsum(weight * trans), math.fsum(weight * refl)


def _line_fit(ts: np.ndarray, xs: np.ndarray) -> tuple[float, float, float]:
    t_mean = math.fsum(ts) / len(ts)
    x_mean = math.fsum(xs) / len(xs)
    dt = ts - t_mean
    slope = math.fsum(dt * (xs - x_mean)) / math.fsum(dt * dt)
    intercept = x_mean - slope * t_mean
    residuals = xs - (slope * ts + intercept)
    rms = math.sqrt(math.fsum(residuals * residuals) / len(ts))
    return slope, intercept, rms


def cm_trajectory(
    profile: SpectralProfile,
    step: StepPotential,
    times,
    grid: SpatialGrid,
    channel: str,
    cfg: PhysicalConfig = DEFAULT_CONFIG,
    threads: int = 1,
) -> tuple[list[MomentRecord], TrajectoryFit]:
    """Center-of-mass samples and their least-squares line over one stage.

    Within one asymptotic stage the center of mass moves linearly; a large
    rms residual means the window is contaminated by the scattering stage.
    """
    times = list(times)
    if len(times) < 2:
        raise ConfigError("need at least two times for a trajectory fit")
    records = [
        moments(evolve(profile, step, t, grid, channel, cfg, threads), cfg)
        for t in times
    ]
    ts = np.array([r.t for r in records])
    xs = np.array([r.x_mean for r in records])
    slope, intercept, rms = _line_fit(ts, xs)
    if rms > 0.01 * profile.l0:
        raise BadFitWindowError(
            f"rms residual {rms:.3g} exceeds 0.01*l0 for channel {channel!r}; "
            "the fit window mixes asymptotic and scattering stages"
        )
    return records, TrajectoryFit(slope, intercept, rms, (min(times), max(times)))


def validate_completed_scattering(
    profile: SpectralProfile, step: StepPotential, cfg: PhysicalConfig = DEFAULT_CONFIG
) -> ScatteringDiagnostics:
    """Check the narrow-packet conditions for completed scattering.

    Reports pass/fail flags only; evolve itself refuses to run just on the
    spectral guard.
    """
    a_over_l0 = step.a / profile.l0
    far_ok = a_over_l0 >= 10.0
    try:
        check_spectral_guard(profile, step)
        guard_ok = True
    except SpectralGuardError:
        guard_ok = False
    if guard_ok:
        region = turning_point(step, profile.k_bar)
        dk = 1e-5 * step.kappa0
        d_xc = (
            turning_point(step, profile.k_bar + dk).x_c
            - turning_point(step, profile.k_bar - dk).x_c
        ) / (2.0 * dk)
        sensitivity = abs(d_xc / region.x_c)
        trans_len = region.length
        k, w, _, _, _, _, _, _, x_cut, trans, _ = _node_tables(profile, step)
        weight = w * spectral_amplitude(profile, k) ** 2
        t_as = math.fsum(weight * trans)
        eff_len = math.fsum(weight * trans * (x_cut - step.a)) / t_as
    else:
        sensitivity = math.nan
        trans_len = math.nan
        eff_len = math.nan
    return ScatteringDiagnostics(
        a_over_l0=a_over_l0,
        far_start_ok=far_ok,
        spectral_guard_ok=guard_ok,
        turning_sensitivity=sensitivity,
        sensitivity_ok=guard_ok and profile.l0 >= 10.0 * sensitivity,
        transitional_length=trans_len,
        narrowness_ok=guard_ok and profile.l0 >= 10.0 * trans_len,
        effective_transitional_length=eff_len,
        effective_length_finite=guard_ok and math.isfinite(eff_len),
    )
