"""Master-equation time integration.

Two independent routes: an adaptive Dormand-Prince 5(4) integrator (the
production path, compiled in ``_kernel``) and a piecewise-constant
Liouvillian matrix-exponential propagator used as a cross-check oracle on
short windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import model as model_mod
from . import qcore
from ._kernel import STATUS_STEP_UNDERFLOW, STATUS_TRACE_BREACH, integrate
from .errors import InvariantBreach, StepSizeUnderflow
from .model import NSchemeModel
from .pulses import StirapSchedule
from .qcore import D, DIM, P, Q, S


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "adaptive_rk"  # or "expm_oracle"
    rtol: float = 1e-9
    atol: float = 1e-12
    max_step: float = 1e-3  # us; bounds the step against ~GHz oscillations
    sample_dt: float = 0.05  # us, output grid spacing
    expm_step: float = 1e-4  # us, oracle step
    min_step: float = 1e-9

    def __post_init__(self):
        if self.method not in ("adaptive_rk", "expm_oracle"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.rtol <= 0 or self.atol <= 0 or self.sample_dt <= 0:
            raise ValueError("rtol, atol and sample_dt must be positive")


@dataclass
class TimeSeries:
    """Sampled trajectory: times (us), the density matrix at each sample,
    an observable trace filled in by the scenario layer, and the exact state
    at the window end."""

    times: np.ndarray
    rhos: np.ndarray  # (n, 4, 4) complex
    final_state: np.ndarray  # (4, 4) at t_end exactly
    fidelity: np.ndarray | None = None
    stats: dict = field(default_factory=dict)

    @property
    def populations(self) -> np.ndarray:
        """(n, 4) real populations in basis order (S, P, D, Q)."""
        return np.real(np.einsum("nii->ni", self.rhos))

    def coherence(self, i: int, j: int) -> np.ndarray:
        return self.rhos[:, i, j]

    def invariant_maxima(self) -> dict[str, float]:
        herm = float(np.max(np.abs(self.rhos - self.rhos.conj().transpose(0, 2, 1))))
        trace = float(np.max(np.abs(np.einsum("nii->n", self.rhos).real - 1.0)))
        eigs = np.linalg.eigvalsh(
            0.5 * (self.rhos + self.rhos.conj().transpose(0, 2, 1)))
        negativity = float(max(0.0, -np.min(eigs)))
        return {"hermiticity": herm, "trace": trace, "negativity": negativity}


def _schedule_envelopes(schedule) -> tuple:
    if isinstance(schedule, StirapSchedule):
        return schedule.envelopes
    b, r, c = schedule
    return b, r, c


def _h0_diag(model: NSchemeModel) -> np.ndarray:
    db = model.laser_b.detuning
    dr = model.laser_r.detuning
    dc = model.laser_c.detuning
    return np.array([db, 0.0, dr, db - dc])


def _dephasing_matrix(model: NSchemeModel) -> np.ndarray:
    rates = np.zeros((DIM, DIM))
    for i in range(DIM):
        for j in range(DIM):
            if i != j:
                rates[i, j] = model_mod.dephasing_rate(
                    model.laser_b.linewidth, model.laser_r.linewidth,
                    model.laser_c.linewidth, i, j)
    return rates


def sample_grid(t_start: float, t_end: float, sample_dt: float) -> np.ndarray:
    n = int(math.floor((t_end - t_start) / sample_dt + 1e-9)) + 1
    return t_start + sample_dt * np.arange(n)


def propagate(rho0: np.ndarray, schedule, model: NSchemeModel,
              t_start: float, t_end: float,
              cfg: IntegratorConfig | None = None) -> TimeSeries:
    """Integrate the master equation over [t_start, t_end].

    Samples lie on the regular sample_dt grid; the returned final_state is
    the solution at t_end exactly.
    """
    cfg = cfg or IntegratorConfig()
    if t_end <= t_start:
        raise ValueError("t_end must exceed t_start")
    qcore.assert_density_matrix(rho0)
    if cfg.method == "expm_oracle":
        return _propagate_expm(rho0, schedule, model, t_start, t_end, cfg)

    b, r, c = _schedule_envelopes(schedule)
    atom = model.atom
    t_eval = sample_grid(t_start, t_end, cfg.sample_dt)
    y_eval, y_final, status, n_steps, n_rej = integrate(
        np.ascontiguousarray(rho0, dtype=complex).reshape(16),
        float(t_start), float(t_end), t_eval,
        _h0_diag(model),
        np.ascontiguousarray(b.to_segments()),
        np.ascontiguousarray(r.to_segments()),
        np.ascontiguousarray(c.to_segments()),
        atom.gamma_P, atom.beta_PS, atom.beta_PD, atom.gamma_D, atom.gamma_Q,
        _dephasing_matrix(model),
        cfg.rtol, cfg.atol, cfg.max_step, cfg.min_step,
    )
    if status == STATUS_STEP_UNDERFLOW:
        raise StepSizeUnderflow(
            f"step fell below {cfg.min_step} us (after {n_steps} steps)")
    if status == STATUS_TRACE_BREACH:
        raise InvariantBreach("trace drifted beyond 1e-6; integrator misconfigured")

    ts = TimeSeries(
        times=t_eval,
        rhos=y_eval.reshape(-1, DIM, DIM),
        final_state=y_final.reshape(DIM, DIM),
        stats={"method": "adaptive_rk", "n_steps": int(n_steps),
               "n_rejected": int(n_rej)},
    )
    ts.stats.update(ts.invariant_maxima())
    return ts


def build_liouvillian(model: NSchemeModel, t: float) -> np.ndarray:
    """16x16 generator L with vec(drho/dt) = L vec(rho), row-major vec.

    Independent of the compiled right-hand side: built from Kronecker
    products of the Hamiltonian and the jump operators.
    """
    return (_hamiltonian_liouvillian(model, t)
            + _constant_liouvillian(model))


def _hamiltonian_liouvillian(model: NSchemeModel, t: float) -> np.ndarray:
    h = model_mod.instantaneous_hamiltonian(model, t)
    ident = np.eye(DIM)
    return -1j * (np.kron(h, ident) - np.kron(ident, h.T))


def _constant_liouvillian(model: NSchemeModel) -> np.ndarray:
    atom = model.atom
    jumps = [
        math.sqrt(atom.beta_PS * atom.gamma_P) * qcore.outer(S, P),
        math.sqrt(atom.beta_PD * atom.gamma_P) * qcore.outer(D, P),
    ]
    if atom.gamma_D:
        jumps.append(math.sqrt(atom.gamma_D) * qcore.outer(S, D))
    if atom.gamma_Q:
        jumps.append(math.sqrt(atom.gamma_Q) * qcore.outer(S, Q))
    jumps.extend(model_mod.dephasing_operators(
        model.laser_b.linewidth, model.laser_r.linewidth,
        model.laser_c.linewidth))
    ident = np.eye(DIM)
    out = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    for c in jumps:
        cdc = qcore.dag(c) @ c
        out += np.kron(c, c.conj())
        out -= 0.5 * (np.kron(cdc, ident) + np.kron(ident, cdc.T))
    return out


def _propagate_expm(rho0, schedule, model, t_start, t_end, cfg):
    """March vec(rho) with per-step matrix exponentials of the Liouvillian
    frozen at the step midpoint.  Intended for short validation windows."""
    b, r, c = _schedule_envelopes(schedule)
    work_model = _with_envelopes(model, b, r, c)
    l_const = _constant_liouvillian(work_model)

    t_eval = sample_grid(t_start, t_end, cfg.sample_dt)
    y = np.ascontiguousarray(rho0, dtype=complex).reshape(16)
    out = np.zeros((len(t_eval), 16), dtype=complex)

    ieval = 0
    while ieval < len(t_eval) and t_eval[ieval] <= t_start:
        out[ieval] = y
        ieval += 1

    t = t_start
    n_steps = 0
    while t < t_end - 1e-15:
        dt = min(cfg.expm_step, t_end - t)
        if ieval < len(t_eval) and t_eval[ieval] < t + dt:
            dt = t_eval[ieval] - t
        lv = _hamiltonian_liouvillian(work_model, t + dt / 2.0) + l_const
        y = expm(lv * dt) @ y
        t += dt
        n_steps += 1
        while ieval < len(t_eval) and t_eval[ieval] <= t + 1e-12:
            out[ieval] = y
            ieval += 1
    while ieval < len(t_eval):
        out[ieval] = y
        ieval += 1

    ts = TimeSeries(
        times=t_eval,
        rhos=out.reshape(-1, DIM, DIM),
        final_state=y.reshape(DIM, DIM),
        stats={"method": "expm_oracle", "n_steps": n_steps, "n_rejected": 0},
    )
    ts.stats.update(ts.invariant_maxima())
    return ts


def _with_envelopes(model: NSchemeModel, b, r, c) -> NSchemeModel:
    from dataclasses import replace
    return NSchemeModel(
        atom=model.atom,
        laser_b=replace(model.laser_b, envelope=b),
        laser_r=replace(model.laser_r, envelope=r),
        laser_c=replace(model.laser_c, envelope=c),
    )


def cross_check(rho0, schedule, model, window, cfg_a: IntegratorConfig,
                cfg_b: IntegratorConfig) -> float:
    """Max element-wise |rho_a - rho_b| over the common sample grid of the
    two integration routes."""
    if cfg_a.method == cfg_b.method:
        raise ValueError("cross_check requires two distinct methods")
    t0, t1 = window
    ts_a = propagate(rho0, schedule, model, t0, t1, cfg_a)
    ts_b = propagate(rho0, schedule, model, t0, t1, cfg_b)
    return float(np.max(np.abs(ts_a.rhos - ts_b.rhos)))
