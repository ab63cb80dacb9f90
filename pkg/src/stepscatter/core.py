"""Stationary scattering of a particle on a 1D potential step.

The potential is V(x) = 0 for x < a and V(x) = v0 for x > a, with the step
located at a > 0.  A plane wave of wavenumber k > 0 impinges from the left.
Two energy regimes occur:

* propagating, E > v0: the transmitted wave is a plane wave with wavenumber
  kappa = k*sqrt(1 - beta*(kappa0/k)^2),
* evanescent, 0 < E < v0 (only for v0 > 0): the field behind the step decays
  as exp(-kappa*x) with kappa = sqrt(kappa0^2 - k^2) and reflection is total.

Here kappa0 = sqrt(2*m*|v0|)/hbar and beta = sgn(v0).  All functions are pure
and safe to call concurrently.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import InitVar, dataclass, field
from enum import Enum
from typing import NamedTuple, Union

import numpy as np

from .errors import (
    ConfigError,
    DegenerateEnergyError,
    NonPositiveWavenumberError,
)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class PhysicalConfig:
    """Unit system: hbar and particle mass, both strictly positive.

    All closed forms carry hbar and m as simple prefactors, so computations
    run internally with hbar = m = 1 and rescale at the boundary.
    """

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0.0):
            raise ConfigError(f"hbar must be positive, got {self.hbar}")
        if not (self.mass > 0.0):
            raise ConfigError(f"mass must be positive, got {self.mass}")


DEFAULT_CONFIG = PhysicalConfig()


class EnergyRegime(Enum):
    PROPAGATING = "propagating"
    EVANESCENT = "evanescent"


@dataclass(frozen=True)
class StepPotential:
    """Potential step of height v0 (nonzero, either sign) at position a > 0.

    Derived fields: kappa0 = sqrt(2*m*|v0|)/hbar and beta = sgn(v0).
    """

    v0: float
    a: float
    cfg: InitVar[PhysicalConfig | None] = None
    kappa0: float = field(init=False)
    beta: int = field(init=False)

    def __post_init__(self, cfg):
        cfg = cfg if cfg is not None else DEFAULT_CONFIG
        if self.v0 == 0.0:
            raise ConfigError("v0 must be nonzero (beta = sgn(v0) is undefined at 0)")
        if not (self.a > 0.0):
            raise ConfigError(f"step position a must be positive, got {self.a}")
        object.__setattr__(
            self, "kappa0", math.sqrt(2.0 * cfg.mass * abs(self.v0)) / cfg.hbar
        )
        object.__setattr__(self, "beta", 1 if self.v0 > 0.0 else -1)


class BranchKappa(NamedTuple):
    """Wavenumber behind the step, tagged with the energy regime."""

    regime: EnergyRegime
    kappa: float


@dataclass(frozen=True)
class StationaryAmplitudes:
    """Amplitudes and coefficients of the total stationary state at fixed k.

    Propagating:
        A = 2k/(k+kappa) * exp(i(k-kappa)a),  B = (k-kappa)/(k+kappa) * exp(2ika),
        T = 4k*kappa/(k+kappa)^2,             R = ((k-kappa)/(k+kappa))^2.
    Evanescent:
        A = 2k/(k+i*kappa) * exp((kappa+ik)a), B = (k-i*kappa)/(k+i*kappa) * exp(2ika),
        T = 0, R = 1 (|B| = 1, total reflection).
    """

    k: float
    kappa: float
    regime: EnergyRegime
    amp_a: complex
    amp_b: complex
    trans_coef: float
    refl_coef: float


def regime_of(step: StepPotential, k: float) -> EnergyRegime:
    """Classify the energy regime of wavenumber k for this step."""
    if not (k > 0.0):
        raise NonPositiveWavenumberError(f"k must be positive, got {k}")
    if step.beta == 1:
        if k == step.kappa0:
            raise DegenerateEnergyError(
                "k = kappa0 for a repulsive step: kappa vanishes and the "
                "characteristic times diverge"
            )
        if k < step.kappa0:
            return EnergyRegime.EVANESCENT
    return EnergyRegime.PROPAGATING


def kappa_of_k(step: StepPotential, k: float) -> BranchKappa:
    """Wavenumber (or decay constant) behind the step.

    Propagating: kappa = k*sqrt(1 - beta*(kappa0/k)^2) > 0.
    Evanescent:  kappa = sqrt(kappa0^2 - k^2) > 0 (decay constant).
    """
    regime = regime_of(step, k)
    if regime is EnergyRegime.EVANESCENT:
        kappa = math.sqrt((step.kappa0 - k) * (step.kappa0 + k))
    else:
        kappa = k * math.sqrt(1.0 - step.beta * (step.kappa0 / k) ** 2)
    return BranchKappa(regime, kappa)


def wave_velocity(k: float, cfg: PhysicalConfig = DEFAULT_CONFIG) -> float:
    """Plane-wave velocity hbar*k/m."""
    return cfg.hbar * k / cfg.mass


def stationary_amplitudes(
    step: StepPotential, k: float, cfg: PhysicalConfig = DEFAULT_CONFIG
) -> StationaryAmplitudes:
    """Amplitudes A, B and coefficients T, R of the total stationary state."""
    regime, kappa = kappa_of_k(step, k)
    a = step.a
    if regime is EnergyRegime.PROPAGATING:
        amp_a = 2.0 * k / (k + kappa) * cmath.exp(1j * (k - kappa) * a)
        amp_b = (k - kappa) / (k + kappa) * cmath.exp(2j * k * a)
        trans = 4.0 * k * kappa / (k + kappa) ** 2
        refl = ((k - kappa) / (k + kappa)) ** 2
    else:
        amp_a = 2.0 * k / (k + 1j * kappa) * cmath.exp((kappa + 1j * k) * a)
        amp_b = (k - 1j * kappa) / (k + 1j * kappa) * cmath.exp(2j * k * a)
        trans = 0.0
        refl = 1.0
    return StationaryAmplitudes(k, kappa, regime, amp_a, amp_b, trans, refl)


def total_wavefunction(step: StepPotential, k: float, x: ArrayLike) -> ArrayLike:
    """Total stationary wave function at position(s) x.

    exp(ikx) + B*exp(-ikx) on the left of the step; A*exp(i*kappa*x)
    (propagating) or A*exp(-kappa*x) (evanescent) on the right.
    """
    amps = stationary_amplitudes(step, k)
    x = np.asarray(x, dtype=float)
    left = x < step.a
    # evaluate the right branch only at x >= a so the evanescent exponential
    # cannot overflow where the result is discarded
    xr = np.where(left, step.a, x)
    lhs = np.exp(1j * k * x) + amps.amp_b * np.exp(-1j * k * x)
    if amps.regime is EnergyRegime.PROPAGATING:
        rhs = amps.amp_a * np.exp(1j * amps.kappa * xr)
    else:
        rhs = amps.amp_a * np.exp(-amps.kappa * xr)
    out = np.where(left, lhs, rhs)
    return out[()] if out.ndim == 0 else out


def total_wavefunction_dx(step: StepPotential, k: float, x: ArrayLike) -> ArrayLike:
    """Spatial derivative of the total stationary wave function."""
    amps = stationary_amplitudes(step, k)
    x = np.asarray(x, dtype=float)
    left = x < step.a
    xr = np.where(left, step.a, x)
    lhs = 1j * k * (np.exp(1j * k * x) - amps.amp_b * np.exp(-1j * k * x))
    if amps.regime is EnergyRegime.PROPAGATING:
        rhs = 1j * amps.kappa * amps.amp_a * np.exp(1j * amps.kappa * xr)
    else:
        rhs = -amps.kappa * amps.amp_a * np.exp(-amps.kappa * xr)
    out = np.where(left, lhs, rhs)
    return out[()] if out.ndim == 0 else out


def probability_current(
    value: ArrayLike, derivative: ArrayLike, cfg: PhysicalConfig = DEFAULT_CONFIG
) -> ArrayLike:
    """Probability current density (hbar/m) * Im(conj(psi) * dpsi/dx)."""
    return cfg.hbar / cfg.mass * np.imag(np.conj(value) * derivative)
