"""Decomposition of the total stationary state into subprocess wave functions.

For a propagating wavenumber k the total state splits uniquely into a
transmission part psi_tr and a reflection part psi_ref such that

* psi_tr + psi_ref reproduces the total state everywhere,
* each part carries one incoming and one outgoing wave,
* each part is continuous, with continuous probability current, at the
  matching point x_c where its incoming and outgoing waves join,
* x_c is the zero of the (currentless) reflection part whose sensitivity
  |dx_c/dk| is minimal among all zeros.

The construction fixes the incident amplitudes to

    A_ref = sqrt(R) * exp(i*beta*lambda),
    A_tr  = sqrt(T) * exp(i*beta*(lambda - pi/2)),
    lambda = arctan(sqrt(T/R)) = 2*arctan(sqrt((kappa/k)^beta)),

and places the turning point at x_c = a + arctan(sqrt(kappa/k))/kappa.  The
reflection part vanishes identically for x > x_c; between a and x_c it is a
pure standing wave C*sin(kappa*(x - x_c)).

In the evanescent regime reflection is total: the reflection part coincides
with the total state and the transmission part is identically zero.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import (
    ArrayLike,
    EnergyRegime,
    StepPotential,
    kappa_of_k,
    stationary_amplitudes,
    total_wavefunction,
    total_wavefunction_dx,
)
from .errors import NoZeroFoundError, WrongRegimeError

# series fallback threshold for arctan(u)/kappa, u = sqrt(kappa/k)
_SERIES_U = 1e-8


@dataclass(frozen=True)
class SwfAmplitudes:
    """Incident-wave amplitudes of both subprocess wave functions.

    chosen_roots and rejected_roots are the two (mu, nu) phase pairs solving
    sqrt(T)*exp(i*mu) + sqrt(R)*exp(i*nu) = 1; only the chosen pair yields a
    reflection part whose nearest zero behind the step has minimal |dx_c/dk|.
    """

    lam: float
    amp_tr: complex
    amp_ref: complex
    chosen_roots: tuple[float, float]
    rejected_roots: tuple[float, float]


@dataclass(frozen=True)
class TransitionalRegion:
    """Interval [a, x_c] accessible to reflected particles behind the step."""

    x_c: float
    length: float
    amp_c: complex


@dataclass(frozen=True)
class OracleZeroReport:
    """Zeros of the continued reflection mode located by bracketing.

    position is the zero nearest the step.  family_positions holds the first
    zeros in increasing order; family_sensitivity the central-difference
    estimates of |dx_n/dk| (None when the finite-difference stencil would
    leave the propagating regime).
    """

    position: float
    family_positions: tuple[float, ...]
    family_sensitivity: tuple[float, ...] | None
    selected_minimizes_sensitivity: bool | None


def _require_propagating(step: StepPotential, k: float) -> float:
    regime, kappa = kappa_of_k(step, k)
    if regime is not EnergyRegime.PROPAGATING:
        raise WrongRegimeError(
            f"k = {k} is evanescent for this step; use total_reflection_swf"
        )
    return kappa


def lambda_phase(step: StepPotential, k: float) -> float:
    """Mixing phase lambda = 2*arctan(sqrt((kappa/k)^beta)), in (0, pi/2)."""
    kappa = _require_propagating(step, k)
    ratio = kappa / k if step.beta == 1 else k / kappa
    return 2.0 * math.atan(math.sqrt(ratio))


def swf_amplitudes(step: StepPotential, k: float) -> SwfAmplitudes:
    """Incident amplitudes A_tr, A_ref of the two subprocess wave functions."""
    _require_propagating(step, k)
    amps = stationary_amplitudes(step, k)
    lam = lambda_phase(step, k)
    beta = step.beta
    mu = beta * (lam - 0.5 * math.pi)
    nu = beta * lam
    amp_tr = math.sqrt(amps.trans_coef) * cmath.exp(1j * mu)
    amp_ref = math.sqrt(amps.refl_coef) * cmath.exp(1j * nu)
    return SwfAmplitudes(lam, amp_tr, amp_ref, (mu, nu), (-mu, -nu))


def turning_point(step: StepPotential, k: float) -> TransitionalRegion:
    """Extreme right turning point x_c = a + arctan(sqrt(kappa/k))/kappa.

    For kappa*(x_c - a) below the series threshold the length is evaluated as
    (1 - u^2/3)/sqrt(kappa*k) with u = sqrt(kappa/k), which avoids the 0/0
    amplification of arctan(u)/kappa.
    """
    kappa = _require_propagating(step, k)
    amps = stationary_amplitudes(step, k)
    lam = lambda_phase(step, k)
    u = math.sqrt(kappa / k)
    if u < _SERIES_U:
        length = (1.0 - u * u / 3.0) / math.sqrt(kappa * k)
    else:
        length = math.atan(u) / kappa
    prefactor = -2.0 if step.beta == 1 else 2.0j
    amp_c = (
        prefactor
        * math.sqrt(k * amps.refl_coef / kappa)
        * cmath.exp(1j * (k * step.a + step.beta * lam / 2.0))
    )
    return TransitionalRegion(step.a + length, length, amp_c)


def stationary_swf_ref(step: StepPotential, k: float, x: ArrayLike) -> ArrayLike:
    """Reflection subprocess wave function at position(s) x (propagating).

    A_ref*exp(ikx) + B*exp(-ikx) for x < a, the standing wave
    C*sin(kappa*(x - x_c)) on [a, x_c], exactly zero beyond x_c.
    """
    kappa = _require_propagating(step, k)
    amps = stationary_amplitudes(step, k)
    swfa = swf_amplitudes(step, k)
    region = turning_point(step, k)
    x = np.asarray(x, dtype=float)
    left = x < step.a
    mid = (x >= step.a) & (x <= region.x_c)
    lhs = swfa.amp_ref * np.exp(1j * k * x) + amps.amp_b * np.exp(-1j * k * x)
    standing = region.amp_c * np.sin(kappa * (x - region.x_c))
    out = np.select([left, mid], [lhs, standing], default=0.0)
    return out[()] if out.ndim == 0 else out


def stationary_swf_ref_dx(step: StepPotential, k: float, x: ArrayLike) -> ArrayLike:
    """Spatial derivative of the reflection subprocess wave function."""
    kappa = _require_propagating(step, k)
    amps = stationary_amplitudes(step, k)
    swfa = swf_amplitudes(step, k)
    region = turning_point(step, k)
    x = np.asarray(x, dtype=float)
    left = x < step.a
    mid = (x >= step.a) & (x <= region.x_c)
    lhs = 1j * k * (swfa.amp_ref * np.exp(1j * k * x) - amps.amp_b * np.exp(-1j * k * x))
    standing = region.amp_c * kappa * np.cos(kappa * (x - region.x_c))
    out = np.select([left, mid], [lhs, standing], default=0.0)
    return out[()] if out.ndim == 0 else out


def stationary_swf_tr(step: StepPotential, k: float, x: ArrayLike) -> ArrayLike:
    """Transmission subprocess wave function at position(s) x.

    A_tr*exp(ikx) for x < a, total minus reflection part on [a, x_c],
    the transmitted plane wave A*exp(i*kappa*x) beyond x_c.  Identically
    zero in the evanescent regime (transmission is absent).
    """
    regime, kappa = kappa_of_k(step, k)
    x = np.asarray(x, dtype=float)
    if regime is EnergyRegime.EVANESCENT:
        out = np.zeros(x.shape, dtype=complex)
        return out[()] if out.ndim == 0 else out
    amps = stationary_amplitudes(step, k)
    swfa = swf_amplitudes(step, k)
    region = turning_point(step, k)
    left = x < step.a
    mid = (x >= step.a) & (x <= region.x_c)
    lhs = swfa.amp_tr * np.exp(1j * k * x)
    rhs = amps.amp_a * np.exp(1j * kappa * x)
    standing = region.amp_c * np.sin(kappa * (x - region.x_c))
    out = np.where(left, lhs, np.where(mid, rhs - standing, rhs))
    return out[()] if out.ndim == 0 else out


def stationary_swf_tr_dx(step: StepPotential, k: float, x: ArrayLike) -> ArrayLike:
    """Spatial derivative of the transmission subprocess wave function."""
    regime, kappa = kappa_of_k(step, k)
    x = np.asarray(x, dtype=float)
    if regime is EnergyRegime.EVANESCENT:
        out = np.zeros(x.shape, dtype=complex)
        return out[()] if out.ndim == 0 else out
    amps = stationary_amplitudes(step, k)
    swfa = swf_amplitudes(step, k)
    region = turning_point(step, k)
    left = x < step.a
    mid = (x >= step.a) & (x <= region.x_c)
    lhs = 1j * k * swfa.amp_tr * np.exp(1j * k * x)
    rhs = 1j * kappa * amps.amp_a * np.exp(1j * kappa * x)
    standing = region.amp_c * kappa * np.cos(kappa * (x - region.x_c))
    out = np.where(left, lhs, np.where(mid, rhs - standing, rhs))
    return out[()] if out.ndim == 0 else out


def _continued_boundary(step: StepPotential, k: float, incident_amp: complex):
    """Value and derivative at x = a of a left-side wave incident_amp*e^{ikx} + B*e^{-ikx}."""
    amps = stationary_amplitudes(step, k)
    ea = cmath.exp(1j * k * step.a)
    f0 = incident_amp * ea + amps.amp_b / ea
    f1 = 1j * k * (incident_amp * ea - amps.amp_b / ea)
    return f0, f1


def turning_point_oracle(
    step: StepPotential, k: float, n_families: int = 3
) -> OracleZeroReport:
    """Locate zeros of the continued reflection mode without its closed form.

    The left-side wave A_ref*exp(ikx) + B*exp(-ikx) is continued through
    x = a by matching value and first derivative, which fixes the solution
    f0*cos(kappa*(x-a)) + (f1/kappa)*sin(kappa*(x-a)) behind the step.  Its
    global phase is removed and the real standing-wave factor is scanned
    with step pi/(8*kappa); each bracketed zero is refined by Brent's
    method to 1e-12 in position.

    |dx_n/dk| is estimated for each zero family by central differences with
    dk = 1e-5*kappa0 (reduced near the k = kappa0 threshold so the stencil
    stays propagating; skipped if that is impossible).
    """
    kappa = _require_propagating(step, k)

    def zeros_at(kk: float, count: int) -> list[float]:
        kap = _require_propagating(step, kk)
        swfa = swf_amplitudes(step, kk)
        f0, f1 = _continued_boundary(step, kk, swfa.amp_ref)
        dephase = abs(f0) / f0

        def g(xx: float) -> float:
            d = xx - step.a
            return (
                dephase * (f0 * math.cos(kap * d) + (f1 / kap) * math.sin(kap * d))
            ).real

        h = math.pi / (8.0 * kap)
        limit = step.a + 10.0 * math.pi / kap
        found: list[float] = []
        x_prev, g_prev = step.a, g(step.a)
        while len(found) < count:
            x_next = x_prev + h
            if x_next > limit and not found:
                raise NoZeroFoundError(
                    f"no sign change of the reflection mode in (a, a + 10*pi/kappa] at k={kk}"
                )
            if x_next > limit:
                break
            g_next = g(x_next)
            if g_next == 0.0:
                found.append(x_next)
            elif g_prev * g_next < 0.0:
                found.append(brentq(g, x_prev, x_next, xtol=1e-12, rtol=1e-15))
            x_prev, g_prev = x_next, g_next
        return found

    positions = zeros_at(k, n_families)

    dk = 1e-5 * step.kappa0
    if step.beta == 1:
        dk = min(dk, (k - step.kappa0) / 2.0)
    sensitivity = None
    minimizes = None
    if dk > 1e-12 * step.kappa0:
        lo = zeros_at(k - dk, n_families)
        hi = zeros_at(k + dk, n_families)
        n = min(len(positions), len(lo), len(hi))
        sensitivity = tuple(
            abs(hi[i] - lo[i]) / (2.0 * dk) for i in range(n)
        )
        if n > 0:
            minimizes = sensitivity[0] == min(sensitivity)
    return OracleZeroReport(positions[0], tuple(positions), sensitivity, minimizes)


def alternative_swf_ref(step: StepPotential, k: float, x: ArrayLike) -> ArrayLike:
    """Reflection mode built from the rejected root pair of the phase equation.

    Same left-side structure with A_ref replaced by sqrt(R)*exp(-i*beta*lambda),
    continued through x = a by value/derivative matching.  It is nonzero at
    x_c with vanishing derivative there, and has no zero between a and x_c;
    kept for negative-control tests of the root selection.
    """
    kappa = _require_propagating(step, k)
    amps = stationary_amplitudes(step, k)
    lam = lambda_phase(step, k)
    amp_ref_alt = math.sqrt(amps.refl_coef) * cmath.exp(-1j * step.beta * lam)
    f0, f1 = _continued_boundary(step, k, amp_ref_alt)
    x = np.asarray(x, dtype=float)
    left = x < step.a
    d = x - step.a
    lhs = amp_ref_alt * np.exp(1j * k * x) + amps.amp_b * np.exp(-1j * k * x)
    rhs = f0 * np.cos(kappa * d) + (f1 / kappa) * np.sin(kappa * d)
    out = np.where(left, lhs, rhs)
    return out[()] if out.ndim == 0 else out


def alternative_swf_ref_dx(step: StepPotential, k: float, x: ArrayLike) -> ArrayLike:
    """Spatial derivative of the alternative (rejected-root) reflection mode."""
    kappa = _require_propagating(step, k)
    amps = stationary_amplitudes(step, k)
    lam = lambda_phase(step, k)
    amp_ref_alt = math.sqrt(amps.refl_coef) * cmath.exp(-1j * step.beta * lam)
    f0, f1 = _continued_boundary(step, k, amp_ref_alt)
    x = np.asarray(x, dtype=float)
    left = x < step.a
    d = x - step.a
    lhs = 1j * k * (amp_ref_alt * np.exp(1j * k * x) - amps.amp_b * np.exp(-1j * k * x))
    rhs = -f0 * kappa * np.sin(kappa * d) + f1 * np.cos(kappa * d)
    out = np.where(left, lhs, rhs)
    return out[()] if out.ndim == 0 else out


def total_reflection_swf(step: StepPotential, k: float, x: ArrayLike) -> ArrayLike:
    """Reflection wave function in the evanescent regime (total reflection).

    exp(ikx) + B*exp(-ikx) for x < a and the decaying tail A*exp(-kappa*x)
    for x > a; coincides with the total state since transmission is absent.
    """
    regime, kappa = kappa_of_k(step, k)
    if regime is not EnergyRegime.EVANESCENT:
        raise WrongRegimeError(
            f"k = {k} is propagating for this step; use stationary_swf_ref"
        )
    return total_wavefunction(step, k, x)


def total_reflection_swf_dx(step: StepPotential, k: float, x: ArrayLike) -> ArrayLike:
    """Spatial derivative of the total-reflection wave function."""
    regime, kappa = kappa_of_k(step, k)
    if regime is not EnergyRegime.EVANESCENT:
        raise WrongRegimeError(
            f"k = {k} is propagating for this step; use stationary_swf_ref_dx"
        )
    return total_wavefunction_dx(step, k, x)
