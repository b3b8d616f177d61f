"""Preset experiments and the generic parameter-scan engine.

Full D->Q transfer with C switch-off, reverse transfer with adiabatic
preparation, partial STIRAP for superposition synthesis, optical-pumping
state preparation, and deterministic parallel scans over pulse width,
resonance mismatch or laser linewidth.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import dressed, qcore
from .dressed import Mode
from .errors import PumpTimeout, ScheduleError
from .model import AtomParams, LaserField, NSchemeModel
from .propagator import IntegratorConfig, TimeSeries, propagate, sample_grid
from .pulses import (Constant, Direction, StirapSchedule, TanhOn, Zero,
                     default_window, freeze, make_stirap, stirap_edge)
from .qcore import D, P, Q, S


@dataclass(frozen=True)
class TransferParams:
    """Resolved physical parameters of one transfer experiment.

    All angular frequencies in rad/us.  delta_r may be None, meaning
    "derive from the resonance condition of ``mode``".
    """

    atom: AtomParams
    omega_b0: float
    omega_r0: float
    omega_c: float
    delta_b: float
    delta_c: float
    delta_r: float | None = None
    tau: float = 20.0
    delta_t: float = 20.0
    c_switch_off_tau: float | None = 1.0
    prep_ramp: float = 1.0
    t_freeze: float | None = None
    linewidth_b: float = 0.0
    linewidth_r: float = 0.0
    linewidth_c: float = 0.0
    mode: Mode = Mode.WEAK
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    @property
    def alpha_c(self) -> float:
        return dressed.mixing_weak(self.omega_c, self.delta_c)

    def resolved_delta_r(self) -> float:
        if self.delta_r is not None:
            return self.delta_r
        return dressed.resonance_detuning(
            self.delta_b, self.delta_c, self.omega_c, self.mode)

    def build_model(self) -> NSchemeModel:
        return NSchemeModel(
            atom=self.atom,
            laser_b=LaserField("B", self.omega_b0, self.delta_b, self.linewidth_b),
            laser_r=LaserField("R", self.omega_r0, self.resolved_delta_r(),
                               self.linewidth_r),
            laser_c=LaserField("C", self.omega_c, self.delta_c, self.linewidth_c),
        )


def _initial_state(level: int) -> np.ndarray:
    rho = np.zeros((4, 4), dtype=complex)
    rho[level, level] = 1.0
    return rho


def run_full_transfer(params: TransferParams) -> dict:
    """D -> Q STIRAP with constant C coupling and exponential C switch-off.

    Reports the second-order fidelity at the STIRAP end and the bare-state
    population P_Q after the switch-off has completed.
    """
    sched = make_stirap(
        Direction.D_TO_Q, params.omega_b0, params.omega_r0,
        params.tau, params.delta_t, params.omega_c,
        c_switch_off_tau=params.c_switch_off_tau,
    )
    t_start, t_end = default_window(sched)
    model = params.build_model()
    ts = propagate(_initial_state(D), sched, model, t_start, t_end,
                   params.integrator)

    edge = stirap_edge(sched.tau, sched.delta_t, math.exp(-4.0))
    i_edge = int(np.argmin(np.abs(ts.times - edge)))
    alpha_c = params.alpha_c
    ts.fidelity = np.array(
        [dressed.transfer_fidelity(r, alpha_c) for r in ts.rhos])
    f_after = dressed.transfer_fidelity(ts.rhos[i_edge], alpha_c)
    p_q = float(ts.final_state[Q, Q].real)
    return {"timeseries": ts, "F_after_stirap": f_after, "P_Q_final": p_q}


def run_reverse_transfer(params: TransferParams) -> dict:
    """Q -> D transfer: tanh switch-on of the C coupling dresses |Q> into
    |Q_S>, then the STIRAP pulses run in reversed order."""
    model = params.build_model()
    frame = dressed.dressed_frame(params.alpha_c, params.delta_c, Mode.EXACT)

    # Preparation phase: only the C laser, ramped on; B and R are off.
    ramp = params.prep_ramp
    prep_env = TanhOn(params.omega_c, -ramp / 2.0, ramp / 10.0)
    prep_ts = propagate(
        _initial_state(Q), (Zero(), Zero(), prep_env), model,
        -ramp, 0.0, params.integrator)
    prep_fid = qcore.expectation(frame.q_s_state, prep_ts.final_state)

    # STIRAP phase, reversed pulse order, C held constant.
    sched = make_stirap(
        Direction.Q_TO_D, params.omega_b0, params.omega_r0,
        params.tau, params.delta_t, params.omega_c,
    )
    t_start, t_end = default_window(sched)
    ts = propagate(prep_ts.final_state, sched, model, t_start, t_end,
                   params.integrator)
    ts.fidelity = np.real(ts.rhos[:, D, D])
    final_dd = float(ts.final_state[D, D].real)
    return {
        "prep_timeseries": prep_ts,
        "timeseries": ts,
        "prep_fidelity_to_QS": float(prep_fid),
        "final_rho_DD": final_dd,
    }


def run_partial_stirap(params: TransferParams) -> dict:
    """Incomplete STIRAP: the B and R Gaussians are frozen at t_freeze and
    held, steering the system into a dark combination of |D> and |Q_S>.

    The fidelity trace follows the instantaneous dark-state target built
    from the exact dressed frame.
    """
    if params.t_freeze is None:
        raise ScheduleError("partial STIRAP requires t_freeze")
    sched = make_stirap(
        Direction.D_TO_Q, params.omega_b0, params.omega_r0,
        params.tau, params.delta_t, params.omega_c,
    )
    t_start, t_end = default_window(sched)
    if not t_start < params.t_freeze < t_end:
        raise ScheduleError(
            f"t_freeze = {params.t_freeze} outside window [{t_start}, {t_end}]")
    b = freeze(sched.b, params.t_freeze)
    r = freeze(sched.r, params.t_freeze)
    frozen = replace(sched, b=b, r=r)

    model = params.build_model()
    ts = propagate(_initial_state(D), frozen, model, t_start, t_end,
                   params.integrator)

    frame = dressed.dressed_frame(params.alpha_c, params.delta_c, Mode.EXACT)
    fid = np.empty(len(ts.times))
    for i, t in enumerate(ts.times):
        target = dressed.dark_state(frame, float(b(t)), float(r(t)))
        fid[i] = dressed.combination_fidelity(ts.rhos[i], target)
    ts.fidelity = fid
    target_end = dressed.dark_state(
        frame, float(b(t_end)), float(r(t_end)))
    final_fid = dressed.combination_fidelity(ts.final_state, target_end)
    return {"timeseries": ts, "final_combination_fidelity": float(final_fid),
            "fidelity_trace": fid}


def run_optical_pumping_prep(params: TransferParams, rho0=None,
                             threshold: float = 1.0 - 1e-6,
                             horizon: float = 50.0) -> dict:
    """B-laser-only optical pumping into |D>; reports the time at which
    rho_DD first exceeds the threshold."""
    rho0 = _initial_state(S) if rho0 is None else rho0
    if abs(rho0[Q, Q].real) > 1e-12:
        raise ValueError("optical pumping assumes no initial Q population")
    model = params.build_model()
    envs = (Constant(params.omega_b0), Zero(), Zero())
    if float(rho0[D, D].real) >= threshold:
        return {"final_rho_DD": float(rho0[D, D].real), "pump_time": 0.0,
                "timeseries": None}
    cfg = replace(params.integrator, sample_dt=min(
        params.integrator.sample_dt, 0.01))
    ts = propagate(rho0, envs, model, 0.0, horizon, cfg)
    dd = np.real(ts.rhos[:, D, D])
    above = np.nonzero(dd >= threshold)[0]
    if len(above) == 0:
        raise PumpTimeout(
            f"rho_DD reached only {dd[-1]:.8f} within {horizon} us")
    return {"final_rho_DD": float(ts.final_state[D, D].real),
            "pump_time": float(ts.times[above[0]]),
            "timeseries": ts}


@dataclass(frozen=True)
class ScenarioSpec:
    """A preset plus an optional scan axis.

    axis_parameter is one of "tau_us" (scans tau with delta_t = tau
    enforced), "mismatch_over_2pi_MHz" (deviation from the selected-mode
    resonance), "linewidth_HWHM_Hz" (applied to all three lasers), or a
    dotted TransferParams field name.
    """

    preset: str
    base: TransferParams
    axis_parameter: str | None = None
    axis_values: tuple = ()
    observable: str = "F_eq10"

    def __post_init__(self):
        if self.axis_parameter is not None:
            vals = np.asarray(self.axis_values, dtype=float)
            if len(vals) == 0:
                raise ValueError("scan value list must be non-empty")
            if len(vals) > 1 and not (np.all(np.diff(vals) > 0)
                                      or np.all(np.diff(vals) < 0)):
                raise ValueError("scan values must be strictly monotone")


@dataclass
class ScanResult:
    axis_parameter: str
    axis_values: np.ndarray
    one_minus_f: np.ndarray
    p_q: np.ndarray
    status: list[str]
    metadata: list[dict]


def apply_axis(base: TransferParams, parameter: str, value: float) -> TransferParams:
    two_pi = 2.0 * math.pi
    if parameter == "tau_us":
        # Optimal-delay constraint delta_t = tau is enforced on this axis.
        return replace(base, tau=value, delta_t=value)
    if parameter == "mismatch_over_2pi_MHz":
        on_res = dressed.resonance_detuning(
            base.delta_b, base.delta_c, base.omega_c, base.mode)
        return replace(base, delta_r=on_res + two_pi * value)
    if parameter == "linewidth_HWHM_Hz":
        from .model import linewidth_hz_to_rad_per_us
        gl = linewidth_hz_to_rad_per_us(value)
        return replace(base, linewidth_b=gl, linewidth_r=gl, linewidth_c=gl)
    if hasattr(base, parameter):
        return replace(base, **{parameter: value})
    raise ValueError(f"unknown scan parameter {parameter!r}")


def _scan_point(args):
    preset, base, parameter, value = args
    params = apply_axis(base, parameter, value)
    try:
        if preset == "reverse_transfer":
            res = run_reverse_transfer(params)
            one_minus_f = 1.0 - res["final_rho_DD"]
            p_q = res["final_rho_DD"]
            stats = res["timeseries"].stats
        else:
            res = run_full_transfer(params)
            one_minus_f = 1.0 - res["F_after_stirap"]
            p_q = res["P_Q_final"]
            stats = res["timeseries"].stats
        return value, one_minus_f, p_q, "ok", stats
    except Exception as exc:  # per-point failures recorded, scan continues
        return value, math.nan, math.nan, f"error: {exc}", {}


def run_scan(spec: ScenarioSpec, workers: int = 1) -> ScanResult:
    """One preset run per axis value; points are independent tasks and the
    result ordering follows the axis regardless of worker count."""
    if spec.axis_parameter is None:
        raise ValueError("run_scan requires a scan axis")
    tasks = [(spec.preset, spec.base, spec.axis_parameter, v)
             for v in spec.axis_values]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_point, tasks))
    else:
        results = [_scan_point(t) for t in tasks]
    return ScanResult(
        axis_parameter=spec.axis_parameter,
        axis_values=np.array([r[0] for r in results]),
        one_minus_f=np.array([r[1] for r in results]),
        p_q=np.array([r[2] for r in results]),
        status=[r[3] for r in results],
        metadata=[r[4] for r in results],
    )
