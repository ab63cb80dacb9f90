"""Property suite behind the validate subcommand.

Runs the cross-module invariants (superposition, currentlessness, flux
constancy, oracle agreements, sign laws, limiting values, packet norm
identities and quadrature convergence) against the configured potential and
packet, and reports one row per check: name, criterion, measured, result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import backend_name
from .core import (
    StepPotential,
    kappa_of_k,
    probability_current,
    stationary_amplitudes,
    total_wavefunction,
    wave_velocity,
)
from .errors import SpectralGuardError
from .packet import (
    SpatialGrid,
    SpectralProfile,
    asymptotic_channel_norms,
    evolve,
    moments,
)
from .reports import Report, _base_meta
from .runconfig import RunConfig
from .swf import (
    stationary_swf_ref,
    stationary_swf_ref_dx,
    stationary_swf_tr,
    stationary_swf_tr_dx,
    total_reflection_swf,
    total_reflection_swf_dx,
    turning_point,
    turning_point_oracle,
)
from .times import (
    dwell_time_oracle,
    dwell_times,
    group_times,
    total_reflection_dwell_oracle,
    total_reflection_times,
)

_SEED = 20260809


@dataclass(frozen=True)
class CheckResult:
    name: str
    criterion: str
    measured: float
    passed: bool


def _leq(name: str, measured: float, bound: float) -> CheckResult:
    return CheckResult(name, f"<= {bound:g}", measured, bool(measured <= bound))


def _propagating_grid(step: StepPotential, count: int) -> np.ndarray:
    if step.beta == 1:
        return step.kappa0 * (1.0 + np.geomspace(5e-4, 30.0, count))
    return step.kappa0 * np.geomspace(1e-3, 30.0, count)


def _sample_positions(rng, step: StepPotential, count: int) -> np.ndarray:
    half = 30.0 / step.kappa0
    return rng.uniform(step.a - half, step.a + half, count)


def run_validation(config: RunConfig, threads: int = 1) -> tuple[Report, bool]:
    cfg = config.physical()
    v0_mag = abs(config.v0)
    steps = [
        StepPotential(v0_mag, config.a, cfg),
        StepPotential(-v0_mag, config.a, cfg),
    ]
    kap0 = steps[0].kappa0
    rng = np.random.default_rng(_SEED)
    checks: list[CheckResult] = []

    # unitarity of the stationary coefficients
    worst = 0.0
    for step in steps:
        for k in _propagating_grid(step, 40):
            amps = stationary_amplitudes(step, float(k), cfg)
            worst = max(worst, abs(amps.trans_coef + amps.refl_coef - 1.0))
    checks.append(_leq("unitarity_T_plus_R", worst, 1e-12))

    # pointwise superposition of the subprocess wave functions
    worst = 0.0
    for step in steps:
        for k in _propagating_grid(step, 50):
            xs = _sample_positions(rng, step, 100)
            tot = total_wavefunction(step, float(k), xs)
            resid = np.abs(
                stationary_swf_tr(step, float(k), xs)
                + stationary_swf_ref(step, float(k), xs)
                - tot
            ) / np.maximum(1.0, np.abs(tot))
            worst = max(worst, float(resid.max()))
    checks.append(_leq("superposition_identity", worst, 1e-12))

    # reflection parts carry no current (propagating and evanescent)
    worst = 0.0
    for step in steps:
        for k in _propagating_grid(step, 20):
            xs = _sample_positions(rng, step, 60)
            cur = probability_current(
                stationary_swf_ref(step, float(k), xs),
                stationary_swf_ref_dx(step, float(k), xs),
                cfg,
            )
            worst = max(worst, float(np.abs(cur).max()))
    for k in kap0 * np.linspace(0.05, 0.95, 10):
        xs = _sample_positions(rng, steps[0], 60)
        cur = probability_current(
            total_reflection_swf(steps[0], float(k), xs),
            total_reflection_swf_dx(steps[0], float(k), xs),
            cfg,
        )
        worst = max(worst, float(np.abs(cur).max()))
    checks.append(_leq("reflection_currentless", worst, 1e-12))

    # transmission parts carry the constant current (hbar k / m) T
    worst = 0.0
    for step in steps:
        for k in _propagating_grid(step, 20):
            amps = stationary_amplitudes(step, float(k), cfg)
            expected = wave_velocity(float(k), cfg) * amps.trans_coef
            xs = _sample_positions(rng, step, 60)
            cur = probability_current(
                stationary_swf_tr(step, float(k), xs),
                stationary_swf_tr_dx(step, float(k), xs),
                cfg,
            )
            worst = max(worst, float(np.abs(cur - expected).max()) / expected)
    checks.append(_leq("transmission_flux_constancy", worst, 1e-10))

    # closed-form turning point vs the bracketing oracle
    worst = 0.0
    for step in steps:
        for k in _propagating_grid(step, 20):
            closed = turning_point(step, float(k)).x_c
            oracle = turning_point_oracle(step, float(k)).position
            worst = max(worst, abs(closed - oracle) * kap0)
    checks.append(_leq("turning_point_oracle_agreement", worst, 1e-9))

    # near-threshold scaling separates the selected zero from the others
    kappas = np.geomspace(1e-4, 1e-2, 12) * kap0
    lengths = [[], [], []]
    for kap in kappas:
        k = math.sqrt(kap0**2 + kap**2)
        fam = turning_point_oracle(steps[0], k).family_positions
        for i in range(3):
            lengths[i].append(fam[i] - steps[0].a)
    slopes = [
        float(np.polyfit(np.log(kappas), np.log(lengths[i]), 1)[0]) for i in range(3)
    ]
    deviation = max(
        abs(slopes[0] + 0.5), abs(slopes[1] + 1.0), abs(slopes[2] + 1.0)
    )
    checks.append(_leq("zero_family_scaling", deviation, 0.05))

    # closed-form dwell times vs adaptive quadrature
    worst = 0.0
    for step in steps:
        for k in _propagating_grid(step, 20):
            dwell = dwell_times(step, float(k), cfg)
            for channel, closed in (
                ("tr", dwell.tau_tr_dwell),
                ("ref", dwell.tau_ref_dwell),
            ):
                oracle = dwell_time_oracle(step, float(k), channel, cfg)
                worst = max(worst, abs(oracle - closed) / abs(closed))
    checks.append(_leq("dwell_oracle_agreement", worst, 1e-8))

    # delay signs are opposite to the step sign
    worst = -math.inf
    for step in steps:
        for k in _propagating_grid(step, 20):
            dwell = dwell_times(step, float(k), cfg)
            group = group_times(step, float(k), config.observation_length(), cfg)
            worst = max(
                worst,
                step.beta * dwell.tau_tr_dwell_delay,
                step.beta * group.tau_group_delay,
            )
    checks.append(CheckResult("delay_sign_laws", "< 0", worst, bool(worst < 0.0)))

    # high-k limits of the transitional length and penetration depth
    worst = 0.0
    for step in steps:
        k = 100.0 * kap0
        kappa = kappa_of_k(step, k).kappa
        worst = max(
            worst,
            abs(kappa * turning_point(step, k).length - math.pi / 4.0),
            abs(kappa * dwell_times(step, k, cfg).l_depth - (math.pi - 2.0) / 4.0),
        )
    checks.append(_leq("limit_high_k", worst, 1e-3))

    # sqrt scaling of the transitional length at the repulsive threshold
    kap = 1e-3 * kap0
    k = math.sqrt(kap0**2 + kap**2)
    region = turning_point(steps[0], k)
    kappa = kappa_of_k(steps[0], k).kappa
    measured = abs(region.length * math.sqrt(kappa * kap0) - 1.0)
    checks.append(_leq("limit_sqrt_threshold", measured, 1e-3))

    # long-wave limit of the transitional length for the attractive step
    region = turning_point(steps[1], 1e-12 * kap0)
    measured = abs(region.length - math.pi / (2.0 * kap0)) * kap0
    checks.append(_leq("limit_attractive_long_wave", measured, 1e-5))

    # total reflection: closed forms vs quadrature over the decaying tail
    k = 0.6 * kap0
    total = total_reflection_times(steps[0], k, cfg)
    oracle = total_reflection_dwell_oracle(steps[0], k, cfg)
    measured = abs(oracle - total.tau_ref_dwell) / total.tau_ref_dwell
    checks.append(_leq("total_reflection_oracle", measured, 1e-8))

    # the dwell penetration depth diverges on both sides of kappa0
    kap = 1e-3 * kap0
    below = total_reflection_times(steps[0], math.sqrt(kap0**2 - kap**2), cfg).l_depth
    above = dwell_times(steps[0], math.sqrt(kap0**2 + kap**2), cfg).l_depth
    measured = kap0 * min(below, above)
    checks.append(
        CheckResult("penetration_divergence", ">= 10", measured, bool(measured >= 10.0))
    )

    # packet checks against the configured spectral profile
    profile = config.profile()
    step = config.step()
    try:
        trans_as, refl_as = asymptotic_channel_norms(profile, step)
        checks.append(
            _leq("asymptotic_norm_identity", abs(trans_as + refl_as - 1.0), 1e-10)
        )
        kbar = profile.k_bar
        t_mid = step.a / wave_velocity(kbar, cfg)
        spread = profile.l0 * math.sqrt(
            1.0 + (cfg.hbar * t_mid / (2.0 * cfg.mass * profile.l0**2)) ** 2
        )
        half = 12.0 * spread
        spacing = 0.9 * math.pi / (4.0 * (kbar + profile.window))
        n = int(math.ceil(2.0 * half / spacing)) + 1
        grid = SpatialGrid(step.a - half, step.a + half, n)
        snaps = {
            ch: evolve(profile, step, t_mid, grid, ch, cfg, threads)
            for ch in ("tr", "ref", "total")
        }
        resid = np.abs(
            snaps["tr"].values + snaps["ref"].values - snaps["total"].values
        )
        checks.append(_leq("packet_superposition", float(resid.max()), 1e-10))

        fine = SpectralProfile(profile.l0, profile.k_bar, profile.window, 2 * profile.nodes - 1)
        worst = 0.0
        for ch in ("tr", "total"):
            coarse_m = moments(snaps[ch], cfg)
            fine_m = moments(evolve(fine, step, t_mid, grid, ch, cfg, threads), cfg)
            for attr in ("norm", "x_mean", "p_mean", "x2_mean"):
                ref = getattr(fine_m, attr)
                diff = abs(getattr(coarse_m, attr) - ref) / max(1.0, abs(ref))
                worst = max(worst, diff)
        checks.append(_leq("quadrature_convergence", worst, 1e-8))
    except SpectralGuardError:
        checks.append(CheckResult("asymptotic_norm_identity", "<= 1e-10", math.nan, False))
        checks.append(CheckResult("packet_superposition", "<= 1e-10", math.nan, False))
        checks.append(CheckResult("quadrature_convergence", "<= 1e-08", math.nan, False))

    rows = [
        [c.name, c.criterion, c.measured, "pass" if c.passed else "fail"]
        for c in checks
    ]
    all_passed = all(c.passed for c in checks)
    meta = _base_meta(config)
    meta["backend"] = backend_name()
    meta["all_passed"] = "true" if all_passed else "false"
    report = Report(
        "validate", ["check[-]", "criterion[-]", "measured[1]", "result[-]"], rows, meta=meta
    )
    return report, all_passed
