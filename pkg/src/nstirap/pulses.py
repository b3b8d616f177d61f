"""Time-dependent Rabi-frequency envelopes and the STIRAP pulse schedule.

Times in us, Rabi frequencies in rad/us.  Each envelope evaluates in closed
form; Gaussians are never truncated.  The numeric segment encoding produced
by ``to_segments`` feeds the compiled integrator kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import ScheduleError

# Segment kind codes shared with the kernel (propagator._kernel).
KIND_ZERO = 0
KIND_CONSTANT = 1
KIND_GAUSSIAN = 2
KIND_EXP_OFF = 3
KIND_TANH_ON = 4

T_NEG_INF = -1e30

# A switch-off is considered complete after this many time constants.
SWITCH_OFF_SPAN = 10.0
# Relative continuity tolerance at piecewise boundaries.
CONTINUITY_RTOL = 1e-9


class Envelope:
    def __call__(self, t):
        raise NotImplementedError

    def to_segments(self) -> np.ndarray:
        """(n, 5) array of rows [t_start, kind, p0, p1, p2]."""
        raise NotImplementedError

    def shifted(self, s: float) -> "Envelope":
        """Envelope translated in time by s."""
        raise NotImplementedError


@dataclass(frozen=True)
class Zero(Envelope):
    def __call__(self, t):
        return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0

    def to_segments(self):
        return np.array([[T_NEG_INF, KIND_ZERO, 0.0, 0.0, 0.0]])

    def shifted(self, s):
        return self


@dataclass(frozen=True)
class Constant(Envelope):
    value: float

    def __call__(self, t):
        return self.value * np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else self.value

    def to_segments(self):
        return np.array([[T_NEG_INF, KIND_CONSTANT, self.value, 0.0, 0.0]])

    def shifted(self, s):
        return self


@dataclass(frozen=True)
class Gaussian(Envelope):
    peak: float
    center: float
    width: float

    def __call__(self, t):
        x = (np.asarray(t, dtype=float) - self.center) / self.width
        return self.peak * np.exp(-x * x)

    def to_segments(self):
        return np.array([[T_NEG_INF, KIND_GAUSSIAN, self.peak, self.center, self.width]])

    def shifted(self, s):
        return replace(self, center=self.center + s)


@dataclass(frozen=True)
class ExponentialOff(Envelope):
    """Holds ``initial`` until ``start``, then decays with time constant ``tau``."""

    initial: float
    start: float
    tau: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = self.initial * np.exp(-np.maximum(t - self.start, 0.0) / self.tau)
        return out if out.ndim else float(out)

    def to_segments(self):
        return np.array([[T_NEG_INF, KIND_EXP_OFF, self.initial, self.start, self.tau]])

    def shifted(self, s):
        return replace(self, start=self.start + s)


@dataclass(frozen=True)
class TanhOn(Envelope):
    """Smooth turn-on final*(1+tanh((t-center)/rise))/2."""

    final: float
    center: float
    rise: float

    def __call__(self, t):
        x = (np.asarray(t, dtype=float) - self.center) / self.rise
        out = 0.5 * self.final * (1.0 + np.tanh(x))
        return out if out.ndim else float(out)

    def to_segments(self):
        return np.array([[T_NEG_INF, KIND_TANH_ON, self.final, self.center, self.rise]])

    def shifted(self, s):
        return replace(self, center=self.center + s)


@dataclass(frozen=True)
class Piecewise(Envelope):
    """Ordered (switch_time, envelope) segments; the first switch time is -inf.

    Construction rejects boundary discontinuities beyond CONTINUITY_RTOL
    relative to the local scale.
    """

    segments: tuple  # of (t_start, Envelope)

    def __post_init__(self):
        starts = [seg[0] for seg in self.segments]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ScheduleError("piecewise switch times must be strictly increasing")
        for (_, left), (t_sw, right) in zip(self.segments, self.segments[1:]):
            lv, rv = float(left(t_sw)), float(right(t_sw))
            scale = max(abs(lv), abs(rv), 1e-300)
            if abs(lv - rv) > CONTINUITY_RTOL * scale:
                raise ScheduleError(
                    f"discontinuity {lv:.6e} -> {rv:.6e} at t = {t_sw} us"
                )

    def _active(self, t: float) -> Envelope:
        env = self.segments[0][1]
        for t_start, seg in self.segments[1:]:
            if t >= t_start:
                env = seg
            else:
                break
        return env

    def __call__(self, t):
        if np.ndim(t):
            return np.array([float(self._active(ti)(ti)) for ti in np.asarray(t, dtype=float)])
        return float(self._active(float(t))(t))

    def to_segments(self):
        rows = []
        for t_start, seg in self.segments:
            sub = seg.to_segments()
            if len(sub) != 1:
                raise ScheduleError("nested piecewise envelopes are not supported")
            row = sub[0].copy()
            row[0] = T_NEG_INF if t_start == self.segments[0][0] else t_start
            rows.append(row)
        return np.array(rows)

    def shifted(self, s):
        segs = tuple(
            (t0 if t0 <= T_NEG_INF else t0 + s, env.shifted(s))
            for t0, env in self.segments
        )
        return Piecewise(segs)


def evaluate(env: Envelope, t):
    """Closed-form evaluation of any envelope at time t (us)."""
    return env(t)


def freeze(env: Envelope, t_freeze: float) -> Envelope:
    """Hold the instantaneous value of ``env`` constant from t_freeze onward."""
    return Piecewise(((T_NEG_INF, env), (t_freeze, Constant(float(env(t_freeze))))))


class Direction(Enum):
    D_TO_Q = "D_to_Q"
    Q_TO_D = "Q_to_D"


@dataclass(frozen=True)
class StirapSchedule:
    """The (B, R, C) envelope triple for one STIRAP sequence.

    For D_to_Q the B pulse (empty branch) peaks first, at -delta_t/2, and the
    R pulse at +delta_t/2; reversed for Q_to_D.
    """

    direction: Direction
    omega_b0: float
    omega_r0: float
    tau: float
    delta_t: float
    omega_c: float
    c_off: ExponentialOff | None = None
    prep: TanhOn | None = None
    b: Envelope = field(default=Zero())
    r: Envelope = field(default=Zero())
    c: Envelope = field(default=Zero())

    @property
    def envelopes(self) -> tuple[Envelope, Envelope, Envelope]:
        return (self.b, self.r, self.c)

    def shifted(self, s: float) -> "StirapSchedule":
        return replace(
            self,
            c_off=None if self.c_off is None else self.c_off.shifted(s),
            prep=None if self.prep is None else self.prep.shifted(s),
            b=self.b.shifted(s),
            r=self.r.shifted(s),
            c=self.c.shifted(s),
        )


def stirap_edge(tau: float, delta_t: float, tail_fraction: float) -> float:
    """|t| at which both Gaussians have dropped below tail_fraction * peak."""
    return delta_t / 2.0 + tau * math.sqrt(math.log(1.0 / tail_fraction))


def make_stirap(
    direction: Direction,
    omega_b0: float,
    omega_r0: float,
    tau: float,
    delta_t: float,
    omega_c: float,
    c_switch_off_tau: float | None = None,
    prep_ramp: float | None = None,
    tail_fraction: float = math.exp(-4.0),
) -> StirapSchedule:
    """Gaussian STIRAP pair plus constant C coupling.

    ``c_switch_off_tau`` appends an exponential C switch-off starting at the
    STIRAP window edge; ``prep_ramp`` prepends a tanh C turn-on of that total
    duration ending at the window start.
    """
    if tau <= 0 or delta_t <= 0:
        raise ScheduleError("tau and delta_t must be positive")
    if omega_b0 < 0 or omega_r0 < 0 or omega_c < 0:
        raise ScheduleError("Rabi frequencies must be non-negative")

    if direction is Direction.D_TO_Q:
        b_center, r_center = -delta_t / 2.0, +delta_t / 2.0
    else:
        b_center, r_center = +delta_t / 2.0, -delta_t / 2.0

    b = Gaussian(omega_b0, b_center, tau)
    r = Gaussian(omega_r0, r_center, tau)

    edge = stirap_edge(tau, delta_t, tail_fraction)
    c_off = None
    prep = None
    if omega_c == 0.0:
        c: Envelope = Zero()
    else:
        c = Constant(omega_c)
        if prep_ramp:
            # Saturated well before the window start; rise = ramp/10 keeps the
            # residual step below the continuity tolerance scale.
            prep = TanhOn(omega_c, -edge - prep_ramp / 2.0, prep_ramp / 10.0)
            c = prep
        if c_switch_off_tau:
            initial = float(c(edge))
            c_off = ExponentialOff(initial, edge, c_switch_off_tau)
            c = Piecewise(((T_NEG_INF, c), (edge, c_off)))

    return StirapSchedule(
        direction=direction,
        omega_b0=omega_b0,
        omega_r0=omega_r0,
        tau=tau,
        delta_t=delta_t,
        omega_c=omega_c,
        c_off=c_off,
        prep=prep,
        b=b,
        r=r,
        c=c,
    )


def default_window(sched: StirapSchedule, tail_fraction: float = math.exp(-4.0)):
    """Smallest symmetric window with both Gaussians below tail_fraction*peak,
    extended by SWITCH_OFF_SPAN time constants when a switch-off is present."""
    if not 0.0 < tail_fraction < 1.0:
        raise ScheduleError("tail_fraction must be in (0, 1)")
    edge = stirap_edge(sched.tau, sched.delta_t, tail_fraction)
    t_end = edge
    if sched.c_off is not None:
        t_end += SWITCH_OFF_SPAN * sched.c_off.tau
    return -edge, t_end
