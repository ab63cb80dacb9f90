"""Dataset builders behind the CLI subcommands.

All emitted values are dimensionless: times in units m/(hbar*kappa0^2),
lengths in 1/kappa0, wavenumbers in kappa0, velocities in hbar*kappa0/m,
momenta in hbar*kappa0.  With the default unit system (hbar = mass = 1,
|v0| = kappa0^2/2) the scaling factors are all 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import backend_name
from .core import (
    EnergyRegime,
    StepPotential,
    kappa_of_k,
    regime_of,
    stationary_amplitudes,
    wave_velocity,
)
from .errors import ConfigError
from .packet import (
    asymptotic_channel_norms,
    cm_trajectory,
    evolve,
    moments,
    validate_completed_scattering,
)
from .runconfig import RunConfig
from .swf import lambda_phase, turning_point
from .times import dwell_times, flow_velocity, group_times, total_reflection_times

TIME_UNIT = "m/(hbar*kappa0^2)"
LENGTH_UNIT = "1/kappa0"
VELOCITY_UNIT = "hbar*kappa0/m"


@dataclass
class Report:
    """Column-oriented dataset plus optional footer of scalar results."""

    command: str
    columns: list[str]
    rows: list[list]
    footer: dict[str, object] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class _Scales:
    """Raw-value -> natural-unit multipliers."""

    time: float
    length: float
    velocity: float
    wavenumber: float


def _scales(config: RunConfig) -> _Scales:
    step = config.step()
    cfg = config.physical()
    kap0 = step.kappa0
    return _Scales(
        time=cfg.hbar * kap0**2 / cfg.mass,
        length=kap0,
        velocity=cfg.mass / (cfg.hbar * kap0),
        wavenumber=1.0 / kap0,
    )


def _base_meta(config: RunConfig) -> dict[str, str]:
    step = config.step()
    return {
        "v0": repr(config.v0),
        "a[1/kappa0]": repr(config.a * step.kappa0),
        "kappa0": repr(step.kappa0),
        "beta": repr(step.beta),
        "hbar": repr(config.hbar),
        "mass": repr(config.mass),
    }


TIMES_COLUMNS = [
    "k[kappa0]",
    "kappa[kappa0]",
    "regime[-]",
    "T[1]",
    "R[1]",
    "lambda[rad]",
    f"x_c[{LENGTH_UNIT}]",
    f"tau_tr_dwell[{TIME_UNIT}]",
    f"tau_ref_dwell[{TIME_UNIT}]",
    f"tau_tr_dwell_delay[{TIME_UNIT}]",
    f"l_depth[{LENGTH_UNIT}]",
    f"t_dep[{TIME_UNIT}]",
    f"tau_tr_group[{TIME_UNIT}]",
    f"tau_ref_group[{TIME_UNIT}]",
    f"group_delay[{TIME_UNIT}]",
    f"davies_tau_tr[{TIME_UNIT}]",
    f"davies_tau_ref[{TIME_UNIT}]",
    f"davies_depth[{LENGTH_UNIT}]",
]


def build_times(config: RunConfig) -> Report:
    """One row of characteristic times per wavenumber.

    Evanescent rows carry the total-reflection quantities; transmission-only
    columns are left empty there.
    """
    step = config.step()
    cfg = config.physical()
    sc = _scales(config)
    rows = []
    for k in config.k_values():
        regime = regime_of(step, float(k))
        kappa = kappa_of_k(step, float(k)).kappa
        if regime is EnergyRegime.PROPAGATING:
            amps = stationary_amplitudes(step, float(k), cfg)
            dwell = dwell_times(step, float(k), cfg)
            group = group_times(step, float(k), config.observation_length(), cfg)
            region = turning_point(step, float(k))
            rows.append([
                k * sc.wavenumber,
                kappa * sc.wavenumber,
                "propagating",
                amps.trans_coef,
                amps.refl_coef,
                lambda_phase(step, float(k)),
                region.x_c * sc.length,
                dwell.tau_tr_dwell * sc.time,
                dwell.tau_ref_dwell * sc.time,
                dwell.tau_tr_dwell_delay * sc.time,
                dwell.l_depth * sc.length,
                group.t_dep * sc.time,
                group.tau_tr_group * sc.time,
                group.tau_ref_group * sc.time,
                group.tau_group_delay * sc.time,
                group.davies_tau_tr * sc.time,
                group.davies_tau_ref * sc.time,
                (1.0 / kappa) * sc.length if step.beta == 1 else None,
            ])
        else:
            total = total_reflection_times(step, float(k), cfg)
            rows.append([
                k * sc.wavenumber,
                kappa * sc.wavenumber,
                "evanescent",
                0.0,
                1.0,
                0.0,
                None,
                None,
                total.tau_ref_dwell * sc.time,
                None,
                total.l_depth * sc.length,
                0.0,
                None,
                total.tau_ref_group * sc.time,
                0.0,
                None,
                total.tau_ref_group * sc.time,
                total.davies_depth * sc.length,
            ])
    meta = _base_meta(config)
    meta["interval_l[1/kappa0]"] = repr(config.observation_length() * step.kappa0)
    return Report("times", TIMES_COLUMNS, rows, meta=meta)


def _figure_k_grid(config: RunConfig, kappa0: float) -> tuple[np.ndarray, bool]:
    """Figure wavenumber grid; drops exact kappa0 points (documented gap)."""
    if config.k is not None:
        ks = np.array([config.k])
    elif (config.k_min, config.k_max, config.k_count) != (0.05, 5.0, 100):
        ks = config.k_values()
    else:
        # default documented range k/kappa0 in [0.05, 5]
        ks = np.linspace(0.05 * kappa0, 5.0 * kappa0, 199)
    keep = ks != kappa0
    return ks[keep], bool((~keep).any())


def build_figure(config: RunConfig, which: str) -> Report:
    """Plot-ready datasets for the four figure families.

    fig1/fig2: flow velocity profile v/v0 across the transitional region at
    k = 1.5*kappa0 for the repulsive/attractive step.  fig3: scaled
    transitional lengths and penetration depths vs k for both step signs.
    fig4: dwell vs clock-model penetration depth across both regimes of the
    repulsive step, with a gap at k = kappa0.
    """
    cfg = config.physical()
    sc = _scales(config)
    base_step = config.step()
    kap0 = base_step.kappa0
    meta = _base_meta(config)

    if which in ("fig1", "fig2"):
        v0_mag = abs(config.v0)
        step = StepPotential(v0_mag if which == "fig1" else -v0_mag, config.a, cfg)
        k = 1.5 * kap0
        region = turning_point(step, k)
        margin = 2.0 * region.length
        n = config.n_points if config.n_points is not None else 481
        xs = np.linspace(step.a - margin, region.x_c + margin, n)
        v0_speed = wave_velocity(kap0, cfg)
        vals = flow_velocity(step, k, xs, cfg) / v0_speed
        rows = [[x * sc.length, v] for x, v in zip(xs, vals)]
        meta["k[kappa0]"] = repr(1.5)
        meta["beta"] = repr(step.beta)
        columns = [f"x[{LENGTH_UNIT}]", "v_flow_over_v0[1]"]
        return Report(which, columns, rows, meta=meta)

    if which == "fig3":
        ks, gap = _figure_k_grid(config, kap0)
        v0_mag = abs(config.v0)
        step_pos = StepPotential(v0_mag, config.a, cfg)
        step_neg = StepPotential(-v0_mag, config.a, cfg)
        rows = []
        for k in ks:
            k = float(k)
            row = [k * sc.wavenumber]
            if k > kap0:
                kappa = kappa_of_k(step_pos, k).kappa
                row += [
                    kappa * turning_point(step_pos, k).length / math.pi,
                    kappa * dwell_times(step_pos, k, cfg).l_depth / math.pi,
                ]
            else:
                row += [None, None]
            kappa = kappa_of_k(step_neg, k).kappa
            row += [
                kappa * turning_point(step_neg, k).length / math.pi,
                kappa * dwell_times(step_neg, k, cfg).l_depth / math.pi,
            ]
            rows.append(row)
        if gap:
            meta["gap_at_kappa0"] = "true"
        columns = [
            "k[kappa0]",
            "kappa_xc_len_over_pi_repulsive[1]",
            "kappa_ldepth_over_pi_repulsive[1]",
            "kappa_xc_len_over_pi_attractive[1]",
            "kappa_ldepth_over_pi_attractive[1]",
        ]
        return Report(which, columns, rows, meta=meta)

    if which == "fig4":
        ks, gap = _figure_k_grid(config, kap0)
        step = StepPotential(abs(config.v0), config.a, cfg)
        rows = []
        for k in ks:
            k = float(k)
            if k < kap0:
                total = total_reflection_times(step, k, cfg)
                l_depth, davies = total.l_depth, total.davies_depth
            else:
                l_depth = dwell_times(step, k, cfg).l_depth
                davies = 0.0  # clock model: zero reflection time above the step
            rows.append([k * sc.wavenumber, kap0 * l_depth, kap0 * davies])
        meta["gap_at_kappa0"] = "true" if gap else "false"
        columns = ["k[kappa0]", "kappa0_l_depth[1]", "kappa0_davies_depth[1]"]
        return Report(which, columns, rows, meta=meta)

    raise ConfigError(f"unknown figure {which!r}, expected fig1|fig2|fig3|fig4")


EVOLVE_COLUMNS = [
    f"t[{TIME_UNIT}]",
    "norm_tr[1]",
    "norm_ref[1]",
    "norm_sum[1]",
    f"x_mean_tr[{LENGTH_UNIT}]",
    f"x_mean_ref[{LENGTH_UNIT}]",
    f"x_mean_tot[{LENGTH_UNIT}]",
    "p_mean_tr[hbar*kappa0]",
    "p_mean_ref[hbar*kappa0]",
    f"spread_tr[{LENGTH_UNIT}]",
    f"spread_ref[{LENGTH_UNIT}]",
    f"spread_tot[{LENGTH_UNIT}]",
    "stage[-]",
]


def run_evolution(config: RunConfig, threads: int = 1) -> Report:
    """Propagate the packet, report per-time norms/moments and stage fits.

    The footer carries asymptotic spectral norms, initial-stage fits of the
    free subprocess packets (implied departure time), final-stage fits of
    the scattered packets (extrapolated arrivals), the closed-form
    predictions next to each fitted value, and the norm-deviation summary.
    """
    step = config.step()
    cfg = config.physical()
    profile = config.profile()
    sc = _scales(config)
    diag = validate_completed_scattering(profile, step, cfg)
    grid = config.grid()
    times = config.times()
    kbar = profile.k_bar
    kappa_bar = kappa_of_k(step, kbar).kappa
    x_c = turning_point(step, kbar).x_c
    interval_l = config.observation_length()

    trans_as, refl_as = asymptotic_channel_norms(profile, step)
    group = group_times(step, kbar, interval_l, cfg)

    rows = []
    initial_times: list[float] = []
    final_times: list[float] = []
    stage_errors: list[float] = []
    mid_deviations: list[float] = []
    for t in times:
        t = float(t)
        snaps = {
            ch: evolve(profile, step, t, grid, ch, cfg, threads)
            for ch in ("tr", "ref", "total")
        }
        mom = {ch: moments(s, cfg) for ch, s in snaps.items()}
        m_tr, m_ref, m_tot = mom["tr"], mom["ref"], mom["total"]
        is_initial = m_tot.x_mean + 5.0 * m_tot.spread < step.a
        is_final = (m_tr.x_mean - 5.0 * m_tr.spread > x_c) and (
            m_ref.x_mean + 5.0 * m_ref.spread < step.a
        )
        stage = "initial" if is_initial else ("final" if is_final else "mid")
        if stage == "initial":
            initial_times.append(t)
        elif stage == "final":
            final_times.append(t)
        norm_err = max(abs(m_tr.norm - trans_as), abs(m_ref.norm - refl_as))
        if stage == "mid":
            mid_deviations.append(abs(m_tr.norm - trans_as))
        else:
            stage_errors.append(norm_err)
        rows.append([
            t * sc.time,
            m_tr.norm,
            m_ref.norm,
            m_tr.norm + m_ref.norm,
            m_tr.x_mean * sc.length,
            m_ref.x_mean * sc.length,
            m_tot.x_mean * sc.length,
            m_tr.p_mean / (cfg.hbar * step.kappa0),
            m_ref.p_mean / (cfg.hbar * step.kappa0),
            m_tr.spread * sc.length,
            m_ref.spread * sc.length,
            m_tot.spread * sc.length,
            stage,
        ])

    footer: dict[str, object] = {
        "trans_asymptotic[1]": trans_as,
        "refl_asymptotic[1]": refl_as,
        "norm_sum_asymptotic[1]": trans_as + refl_as,
        f"t_dep_closed_form[{TIME_UNIT}]": group.t_dep * sc.time,
        f"x_start_closed_form[{LENGTH_UNIT}]": group.x_start * sc.length,
        f"arrival_tr_closed_form[{TIME_UNIT}]": group.t_arr_tr * sc.time,
        f"arrival_ref_closed_form[{TIME_UNIT}]": group.t_arr_ref * sc.time,
        f"slope_tr_closed_form[{VELOCITY_UNIT}]": wave_velocity(kappa_bar, cfg) * sc.velocity,
        f"slope_ref_closed_form[{VELOCITY_UNIT}]": -wave_velocity(kbar, cfg) * sc.velocity,
        "asymptotic_norm_error_max[1]": max(stage_errors) if stage_errors else None,
        "mid_norm_deviation_max[1]": max(mid_deviations) if mid_deviations else None,
        "count_initial[1]": float(len(initial_times)),
        "count_final[1]": float(len(final_times)),
        "count_mid[1]": float(len(times) - len(initial_times) - len(final_times)),
    }

    def fit_block(channel: str, fit_times: list[float], tag: str):
        if len(fit_times) < 2:
            fit = None
        else:
            _, fit = cm_trajectory(profile, step, fit_times, grid, channel, cfg, threads)
        footer[f"fit_{tag}_slope[{VELOCITY_UNIT}]"] = (
            fit.slope * sc.velocity if fit else None
        )
        footer[f"fit_{tag}_intercept[{LENGTH_UNIT}]"] = (
            fit.intercept * sc.length if fit else None
        )
        footer[f"fit_{tag}_rms[{LENGTH_UNIT}]"] = (
            fit.rms_residual * sc.length if fit else None
        )
        return fit

    fit_tr_inc = fit_block("tr_inc", initial_times, "tr_inc")
    fit_ref_inc = fit_block("ref_inc", initial_times, "ref_inc")
    fit_tr_fin = fit_block("tr", final_times, "tr_fin")
    fit_ref_fin = fit_block("ref", final_times, "ref_fin")

    footer[f"implied_t_dep_tr_inc[{TIME_UNIT}]"] = (
        -fit_tr_inc.intercept / fit_tr_inc.slope * sc.time if fit_tr_inc else None
    )
    footer[f"implied_t_dep_ref_inc[{TIME_UNIT}]"] = (
        -fit_ref_inc.intercept / fit_ref_inc.slope * sc.time if fit_ref_inc else None
    )
    footer[f"arrival_tr_extrapolated[{TIME_UNIT}]"] = (
        (step.a + interval_l - fit_tr_fin.intercept) / fit_tr_fin.slope * sc.time
        if fit_tr_fin
        else None
    )
    footer[f"arrival_ref_extrapolated[{TIME_UNIT}]"] = (
        -fit_ref_fin.intercept / fit_ref_fin.slope * sc.time if fit_ref_fin else None
    )

    meta = _base_meta(config)
    meta.update({
        "backend": backend_name(),
        "nodes": repr(profile.nodes),
        "l0[1/kappa0]": repr(profile.l0 * step.kappa0),
        "kbar[kappa0]": repr(profile.k_bar / step.kappa0),
        "window[kappa0]": repr(profile.window / step.kappa0),
        "grid": f"[{grid.x_min!r}, {grid.x_max!r}] n={grid.n_points}",
        "interval_l[1/kappa0]": repr(interval_l * step.kappa0),
        "completed_scattering_checks": "pass" if diag.all_passed else "fail",
    })
    return Report("evolve", EVOLVE_COLUMNS, rows, footer=footer, meta=meta)
