"""Closed-form characteristic times and lengths for both subprocesses.

All times carry the prefactor m/hbar; with the default unit system they come
out in units m/(hbar*kappa0^2) once wavenumbers are expressed in kappa0.
Dwell times are defined as the occupation of the transitional region [a, x_c]
per unit incident flux; group times are asymptotic (extrapolated) times of
the packet centers of mass with the free-flight segments removed.  Clock-model
(Davies) predictions are computed alongside as comparison values only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import (
    ArrayLike,
    DEFAULT_CONFIG,
    EnergyRegime,
    PhysicalConfig,
    StepPotential,
    kappa_of_k,
    wave_velocity,
)
from .errors import ConfigError, QuadratureNotConvergedError, WrongRegimeError
from .swf import (
    alternative_swf_ref,
    stationary_swf_ref,
    stationary_swf_tr,
    total_reflection_swf,
    turning_point,
)


@dataclass(frozen=True)
class DwellReport:
    """Dwell times of both subprocesses in the transitional region.

    tau_free is the free flight time (x_c - a)/v_kappa; the transmission
    dwell delay is tau_tr_dwell - tau_free and has the sign of -beta.
    l_depth is the effective penetration depth of reflected particles,
    defined through tau_ref_dwell = 2*l_depth/v_k.
    """

    tau_tr_dwell: float
    tau_ref_dwell: float
    tau_free: float
    tau_tr_dwell_delay: float
    l_depth: float
    regime: EnergyRegime


@dataclass(frozen=True)
class GroupReport:
    """Departure, arrival and asymptotic group times for the interval [0, a+L].

    Both subprocess centers of mass launch from x_start = -beta*lambda'(k)
    at the common departure time t_dep; the clock-model comparison values
    are davies_tau_tr = tau_free and davies_tau_ref = 0.
    """

    t_dep: float
    x_start: float
    t_arr_tr: float
    t_arr_ref: float
    tau_tr_group: float
    tau_ref_group: float
    tau_group_delay: float
    davies_tau_tr: float
    davies_tau_ref: float


@dataclass(frozen=True)
class TotalReflectionReport:
    """Times and depths in the evanescent regime (total reflection).

    davies_depth = 1/kappa is the clock-model penetration depth, kept for
    comparison with the dwell-based l_depth = k^2/(kappa*kappa0^2).
    """

    tau_ref_dwell: float
    l_depth: float
    tau_ref_group: float
    davies_depth: float


def _require_propagating(step: StepPotential, k: float) -> float:
    regime, kappa = kappa_of_k(step, k)
    if regime is not EnergyRegime.PROPAGATING:
        raise WrongRegimeError(
            f"k = {k} is evanescent for this step; use total_reflection_times"
        )
    return kappa


def flow_velocity(
    step: StepPotential, k: float, x: ArrayLike, cfg: PhysicalConfig = DEFAULT_CONFIG
) -> ArrayLike:
    """Flow velocity of transmitted particles, I_tr / |psi_tr(x, k)|^2.

    Equals v_k for x <= a and v_kappa for x >= x_c; varies monotonically
    between them inside the transitional region.
    """
    kappa = _require_propagating(step, k)
    amps_t = 4.0 * k * kappa / (k + kappa) ** 2
    current = wave_velocity(k, cfg) * amps_t
    density = np.abs(stationary_swf_tr(step, k, x)) ** 2
    return current / density


def dwell_times(
    step: StepPotential, k: float, cfg: PhysicalConfig = DEFAULT_CONFIG
) -> DwellReport:
    """Closed-form dwell times, dwell delay and penetration depth."""
    kappa = _require_propagating(step, k)
    region = turning_point(step, k)
    m_over_h = cfg.mass / cfg.hbar
    theta = math.atan(math.sqrt(kappa / k))
    root_kk = math.sqrt(k * kappa)
    tau_tr = (
        m_over_h
        / (2.0 * k * kappa**3)
        * ((kappa**2 + k**2) * theta - step.beta * step.kappa0**2 * root_kk / (k + kappa))
    )
    bracket = theta - root_kk / (k + kappa)
    tau_ref = 2.0 * m_over_h / kappa**2 * bracket
    tau_free = m_over_h * region.length / kappa
    delay = (
        m_over_h
        * (kappa - k)
        / (2.0 * k * kappa**3)
        * ((kappa - k) * theta + root_kk)
    )
    l_depth = k / kappa**2 * bracket
    return DwellReport(tau_tr, tau_ref, tau_free, delay, l_depth, EnergyRegime.PROPAGATING)


def dwell_time_oracle(
    step: StepPotential,
    k: float,
    channel: str,
    cfg: PhysicalConfig = DEFAULT_CONFIG,
    use_alternative_roots: bool = False,
) -> float:
    """Dwell time by adaptive quadrature of |psi|^2 over [a, x_c].

    Independent numerical route against the closed forms of dwell_times.
    channel is "tr" (normalized by the transmitted flux) or "ref"
    (normalized by the incident flux share (hbar*k/m)*R).  With
    use_alternative_roots the reflection integrand is built from the
    rejected root pair, which must NOT reproduce the closed form.
    """
    kappa = _require_propagating(step, k)
    region = turning_point(step, k)
    trans = 4.0 * k * kappa / (k + kappa) ** 2
    refl = ((k - kappa) / (k + kappa)) ** 2
    if channel == "tr":
        if use_alternative_roots:
            raise ConfigError("alternative roots apply to the reflection channel only")
        integrand = lambda x: abs(stationary_swf_tr(step, k, x)) ** 2
        flux = wave_velocity(k, cfg) * trans
    elif channel == "ref":
        if use_alternative_roots:
            integrand = lambda x: abs(alternative_swf_ref(step, k, x)) ** 2
        else:
            integrand = lambda x: abs(stationary_swf_ref(step, k, x)) ** 2
        flux = wave_velocity(k, cfg) * refl
    else:
        raise ConfigError(f"unknown dwell channel {channel!r}, expected 'tr' or 'ref'")
    value, _abserr, info = quad(
        integrand, step.a, region.x_c, epsabs=1e-12, epsrel=1e-11, limit=60, full_output=1
    )[:3]
    if info["last"] >= 60:
        raise QuadratureNotConvergedError(
            f"dwell quadrature used all 60 subdivisions at k={k}"
        )
    return value / flux


def group_times(
    step: StepPotential,
    k: float,
    interval_l: float,
    cfg: PhysicalConfig = DEFAULT_CONFIG,
) -> GroupReport:
    """Departure/arrival times and asymptotic group times for [0, a+L]."""
    kappa = _require_propagating(step, k)
    if not (interval_l > 0.0):
        raise ConfigError(f"observation interval length must be positive, got {interval_l}")
    m_over_h = cfg.mass / cfg.hbar
    v_k = wave_velocity(k, cfg)
    v_kap = wave_velocity(kappa, cfg)
    t_dep = m_over_h * (k - kappa) / (k * kappa) ** 1.5
    x_start = -v_k * t_dep
    t_arr_ref = 2.0 * step.a / v_k
    t_arr_tr = step.a / v_k + interval_l / v_kap
    tau_free = m_over_h * turning_point(step, k).length / kappa
    return GroupReport(
        t_dep=t_dep,
        x_start=x_start,
        t_arr_tr=t_arr_tr,
        t_arr_ref=t_arr_ref,
        tau_tr_group=tau_free - t_dep,
        tau_ref_group=-t_dep,
        tau_group_delay=-t_dep,
        davies_tau_tr=tau_free,
        davies_tau_ref=0.0,
    )


def total_reflection_times(
    step: StepPotential, k: float, cfg: PhysicalConfig = DEFAULT_CONFIG
) -> TotalReflectionReport:
    """Reflection dwell/group times and penetration depths under total reflection."""
    regime, kappa = kappa_of_k(step, k)
    if regime is not EnergyRegime.EVANESCENT:
        raise WrongRegimeError(
            f"k = {k} is propagating for this step; use dwell_times/group_times"
        )
    m_over_h = cfg.mass / cfg.hbar
    l_depth = k**2 / (kappa * step.kappa0**2)
    tau_ref_dwell = 2.0 * l_depth / wave_velocity(k, cfg)
    tau_ref_group = 2.0 * m_over_h / (k * kappa)
    return TotalReflectionReport(tau_ref_dwell, l_depth, tau_ref_group, 1.0 / kappa)


def total_reflection_dwell_oracle(
    step: StepPotential, k: float, cfg: PhysicalConfig = DEFAULT_CONFIG
) -> float:
    """Reflection dwell time by quadrature of |psi_ref|^2 over (a, infinity)."""
    regime, kappa = kappa_of_k(step, k)
    if regime is not EnergyRegime.EVANESCENT:
        raise WrongRegimeError(f"k = {k} is propagating for this step")
    integrand = lambda x: abs(total_reflection_swf(step, k, x)) ** 2
    value, _abserr, info = quad(
        integrand, step.a, np.inf, epsabs=1e-12, epsrel=1e-11, limit=60, full_output=1
    )[:3]
    if info["last"] >= 60:
        raise QuadratureNotConvergedError(
            f"total-reflection quadrature used all 60 subdivisions at k={k}"
        )
    return value / wave_velocity(k, cfg)
