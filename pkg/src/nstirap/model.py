"""Physics assembly for the four-level N scheme.

Bare Hamiltonian from detunings, interaction Hamiltonian from instantaneous
Rabi frequencies, radiative relaxation of |P>, per-laser phase-noise jump
operators, the full master-equation right-hand side, and the Doppler-free
beam-geometry helper.  All angular frequencies in rad/us.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qcore
from .errors import NoSolution
from .pulses import Envelope, Zero
from .qcore import D, DIM, P, Q, S

TWO_PI = 2.0 * math.pi


def mhz_to_rad_per_us(nu_mhz: float) -> float:
    """nu = Omega/2pi in MHz -> Omega in rad/us."""
    return TWO_PI * nu_mhz


def rad_per_us_to_mhz(omega: float) -> float:
    return omega / TWO_PI


def hz_to_rad_per_us(nu_hz: float) -> float:
    return TWO_PI * nu_hz * 1e-6


def linewidth_hz_to_rad_per_us(hwhm_hz: float) -> float:
    """HWHM laser linewidth (Hz) -> Lindblad dephasing parameter (rad/us).

    Chosen so the optical coherence driven by that laser decays at the
    angular HWHM 2 pi nu_H: the diagonal-jump closed form gives a decay
    rate Gamma_L/2, hence Gamma_L = 2 * (2 pi nu_H).
    """
    return 2.0 * TWO_PI * hwhm_hz * 1e-6


@dataclass(frozen=True)
class AtomParams:
    """Radiative parameters of the ion.

    gamma_P is 1/lifetime of |P> in rad/us; beta_PS, beta_PD the branching
    fractions into |S> and |D> (summing to 1).  The slow decays of the
    metastable |D>, |Q> (~1 s lifetimes) default to zero but can be enabled.
    """

    gamma_P: float
    beta_PS: float
    beta_PD: float
    gamma_D: float = 0.0
    gamma_Q: float = 0.0

    def __post_init__(self):
        if self.gamma_P <= 0:
            raise ValueError("gamma_P must be positive")
        if abs(self.beta_PS + self.beta_PD - 1.0) > 1e-12:
            raise ValueError("branching fractions must sum to 1")

    @classmethod
    def from_lifetime(cls, lifetime_ns: float, branching_ps_over_pd: float,
                      **kw) -> "AtomParams":
        gamma = 1.0 / (lifetime_ns * 1e-3)
        beta_pd = 1.0 / (1.0 + branching_ps_over_pd)
        return cls(gamma_P=gamma, beta_PS=1.0 - beta_pd, beta_PD=beta_pd, **kw)


@dataclass(frozen=True)
class LaserField:
    """One laser coupling: peak Rabi frequency, detuning, HWHM linewidth
    (all rad/us) and its time envelope."""

    transition: str  # "B", "R" or "C"
    peak_rabi: float
    detuning: float
    linewidth: float = 0.0
    envelope: Envelope = field(default=Zero())

    def __post_init__(self):
        if self.transition not in ("B", "R", "C"):
            raise ValueError(f"unknown transition {self.transition!r}")
        if self.peak_rabi < 0 or self.linewidth < 0:
            raise ValueError("peak_rabi and linewidth must be non-negative")


@dataclass(frozen=True)
class NSchemeModel:
    atom: AtomParams
    laser_b: LaserField
    laser_r: LaserField
    laser_c: LaserField

    @property
    def lasers(self):
        return {"B": self.laser_b, "R": self.laser_r, "C": self.laser_c}


def build_h0(delta_b: float, delta_r: float, delta_c: float) -> np.ndarray:
    """Diagonal bare Hamiltonian in the rotating frame:
    <D|H0|D> = Delta_R, <S|H0|S> = Delta_B, <Q|H0|Q> = Delta_B - Delta_C."""
    h = np.zeros((DIM, DIM), dtype=complex)
    h[D, D] = delta_r
    h[S, S] = delta_b
    h[Q, Q] = delta_b - delta_c
    return h


def build_interaction(omega_b: float, omega_r: float, omega_c: float) -> np.ndarray:
    """Laser-coupling Hamiltonian: (Omega_B/2)|P><S| + (Omega_R/2)|P><D|
    + (Omega_C/2)|Q><S| + h.c."""
    h = np.zeros((DIM, DIM), dtype=complex)
    h[P, S] = omega_b / 2.0
    h[P, D] = omega_r / 2.0
    h[Q, S] = omega_c / 2.0
    return h + h.conj().T


def radiative_rhs(rho: np.ndarray, atom: AtomParams) -> np.ndarray:
    """Relaxation of |P> into |S> and |D> with rate gamma_P and branching
    beta_PS : beta_PD, plus the optional slow D, Q decays into |S>."""
    g = atom.gamma_P
    pp = qcore.projector(P)
    out = -0.5 * g * (rho @ pp + pp @ rho)
    out[S, S] += atom.beta_PS * g * rho[P, P]
    out[D, D] += atom.beta_PD * g * rho[P, P]
    if atom.gamma_D:
        out += qcore.dissipator(math.sqrt(atom.gamma_D) * qcore.outer(S, D), rho)
    if atom.gamma_Q:
        out += qcore.dissipator(math.sqrt(atom.gamma_Q) * qcore.outer(S, Q), rho)
    return out


# Diagonal sign patterns of the per-laser phase-noise jump operators,
# in basis order (S, P, D, Q).
_DEPHASING_SIGNS = {
    "B": (-1.0, +1.0, +1.0, -1.0),
    "R": (-1.0, -1.0, +1.0, -1.0),
    "C": (-1.0, -1.0, -1.0, +1.0),
}


def dephasing_operators(gl_b: float, gl_r: float, gl_c: float) -> list[np.ndarray]:
    """Diagonal jump operators (sqrt(Gamma_L)/2) * diag(signs), one per laser,
    modeling laser phase noise of HWHM linewidth Gamma_L."""
    ops = []
    for gl, key in ((gl_b, "B"), (gl_r, "R"), (gl_c, "C")):
        if gl < 0:
            raise ValueError("linewidths must be non-negative")
        signs = np.array(_DEPHASING_SIGNS[key])
        ops.append(np.diag(0.5 * math.sqrt(gl) * signs).astype(complex))
    return ops


def dephasing_rate(gl_b: float, gl_r: float, gl_c: float, i: int, j: int) -> float:
    """Closed-form decay rate of the coherence rho_ij under the three diagonal
    jump operators: sum_m |C_m,ii - C_m,jj|^2 / 2."""
    rate = 0.0
    for gl, key in ((gl_b, "B"), (gl_r, "R"), (gl_c, "C")):
        s = _DEPHASING_SIGNS[key]
        rate += 0.5 * (0.5 * math.sqrt(gl) * (s[i] - s[j])) ** 2
    return rate


def instantaneous_hamiltonian(model: NSchemeModel, t: float) -> np.ndarray:
    h0 = build_h0(model.laser_b.detuning, model.laser_r.detuning,
                  model.laser_c.detuning)
    hi = build_interaction(
        float(model.laser_b.envelope(t)),
        float(model.laser_r.envelope(t)),
        float(model.laser_c.envelope(t)),
    )
    return h0 + hi


def master_rhs(t: float, rho: np.ndarray, model: NSchemeModel) -> np.ndarray:
    """Full time derivative of rho: -i[H0 + H_I(t), rho] + radiative part
    + phase-noise dissipators."""
    out = -1j * qcore.commutator(instantaneous_hamiltonian(model, t), rho)
    out += radiative_rhs(rho, model.atom)
    for c in dephasing_operators(model.laser_b.linewidth,
                                 model.laser_r.linewidth,
                                 model.laser_c.linewidth):
        out += qcore.dissipator(c, rho)
    return out


@dataclass(frozen=True)
class BeamGeometry:
    """Planar Doppler-free beam arrangement: k_R + k_C = k_B."""

    lambda_b: float  # nm
    lambda_r: float
    lambda_c: float
    theta_rc: float  # angle between R and C beams, rad
    theta_rb: float  # angle between R and B beams, rad

    @property
    def wavevectors(self):
        """(k_B, k_R, k_C) as 2D vectors in 1/nm, with k_B along +x and the
        R beam tilted by +theta_rb, the C beam by theta_rb - theta_rc."""
        k_b = TWO_PI / self.lambda_b
        k_r = TWO_PI / self.lambda_r
        k_c = TWO_PI / self.lambda_c
        vr = k_r * np.array([math.cos(self.theta_rb), math.sin(self.theta_rb)])
        phi_c = self.theta_rb - self.theta_rc
        vc = k_c * np.array([math.cos(phi_c), math.sin(phi_c)])
        return np.array([k_b, 0.0]), vr, vc


def phase_matching_geometry(lambda_b: float, lambda_r: float,
                            lambda_c: float) -> BeamGeometry:
    """Beam angles closing the wavevector triangle k_R + k_C = k_B.

    Raises NoSolution when the triangle inequality
    |k_R - k_C| <= k_B <= k_R + k_C fails.
    """
    k_b = TWO_PI / lambda_b
    k_r = TWO_PI / lambda_r
    k_c = TWO_PI / lambda_c
    if not (abs(k_r - k_c) <= k_b <= k_r + k_c):
        raise NoSolution(
            f"no planar solution: k_B={k_b:.6e}, k_R+k_C={k_r + k_c:.6e}, "
            f"|k_R-k_C|={abs(k_r - k_c):.6e} (1/nm)"
        )
    cos_rc = (k_b * k_b - k_r * k_r - k_c * k_c) / (2.0 * k_r * k_c)
    cos_rb = (k_b * k_b + k_r * k_r - k_c * k_c) / (2.0 * k_b * k_r)
    theta_rc = math.acos(min(1.0, max(-1.0, cos_rc)))
    theta_rb = math.acos(min(1.0, max(-1.0, cos_rb)))
    geom = BeamGeometry(lambda_b, lambda_r, lambda_c, theta_rc, theta_rb)
    vb, vr, vc = geom.wavevectors
    residual = np.linalg.norm(vr + vc - vb) / k_b
    if residual >= 1e-12:
        raise NoSolution(f"geometry residual |dk|/k_B = {residual:.3e}")
    return geom
