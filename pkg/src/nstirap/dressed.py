"""Closed-form dressed-state theory for the weakly-coupled (S, Q) pair.

Weak and exact mixing parameters, the |Q_S>/|S_Q> dressed pair and its
eigen-energies, the three-photon resonance condition in both regimes, dark
state construction and the fidelity observables built on it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import model, qcore
from .errors import DivisionByZeroDetuning, ZeroRabiR
from .qcore import D, P, Q, S

# Above this mixing the weak expansion deviates from the exact result by >1%.
WEAK_MODE_WARN = 0.2


class Mode(Enum):
    WEAK = "weak"
    EXACT = "exact"


def mixing_weak(omega_c: float, delta_c: float) -> float:
    """First-order mixing parameter Omega_C / (2 Delta_C)."""
    if delta_c == 0.0:
        raise DivisionByZeroDetuning("mixing parameter undefined at Delta_C = 0")
    return omega_c / (2.0 * delta_c)


def mixing_exact(alpha_c: float) -> float:
    """All-order mixing 2 alpha_C / (1 + sqrt(1 + 4 alpha_C^2))."""
    return 2.0 * alpha_c / (1.0 + math.sqrt(1.0 + 4.0 * alpha_c * alpha_c))


@dataclass(frozen=True)
class DressedFrame:
    alpha_c: float
    alpha: float
    beta: float
    lambda_q: float  # rad/us, relative to the |S> level
    lambda_s: float
    q_s_state: np.ndarray
    s_q_state: np.ndarray
    mode: Mode
    delta_c: float
    omega_c: float


def dressed_frame(alpha_c: float, delta_c: float, mode: Mode) -> DressedFrame:
    """Dressed (S, Q) pair for mixing alpha_C at detuning Delta_C.

    Energies are measured relative to the bare |S> level, so the block
    Hamiltonian is diag(0, -Delta_C) with off-diagonal Omega_C/2.  The exact
    closed forms hold for either sign of Delta_C: |Q_S> is the eigenvector
    adiabatically connected to |Q>.
    """
    if delta_c == 0.0:
        raise DivisionByZeroDetuning("dressed frame undefined at Delta_C = 0")
    omega_c = 2.0 * alpha_c * delta_c

    if mode is Mode.WEAK:
        if abs(alpha_c) > WEAK_MODE_WARN:
            warnings.warn(
                f"weak-mode dressed frame at alpha_C = {alpha_c:.3g} "
                f"(> {WEAK_MODE_WARN}); exact mode recommended",
                stacklevel=2,
            )
        alpha = alpha_c
        # Light shifts +-alpha_C Omega_C / 2 on top of the bare energies.
        lambda_q = -delta_c - alpha_c * omega_c / 2.0
        lambda_s = alpha_c * omega_c / 2.0
    else:
        root = math.sqrt(1.0 + 4.0 * alpha_c * alpha_c)
        alpha = 2.0 * alpha_c / (1.0 + root)
        lambda_q = -delta_c * (1.0 + root) / 2.0
        lambda_s = -delta_c * (1.0 - root) / 2.0

    norm = math.sqrt(1.0 + alpha * alpha)
    q_s = np.zeros(4, dtype=complex)
    q_s[Q] = 1.0 / norm
    q_s[S] = -alpha / norm
    s_q = np.zeros(4, dtype=complex)
    s_q[S] = 1.0 / norm
    s_q[Q] = alpha / norm

    beta = alpha / norm
    return DressedFrame(
        alpha_c=alpha_c,
        alpha=alpha,
        beta=beta,
        lambda_q=lambda_q,
        lambda_s=lambda_s,
        q_s_state=q_s,
        s_q_state=s_q,
        mode=mode,
        delta_c=delta_c,
        omega_c=omega_c,
    )


def resonance_detuning(delta_b: float, delta_c: float, omega_c: float,
                       mode: Mode) -> float:
    """Delta_R satisfying the (light-shifted) three-photon resonance.

    Weak: Delta_R = Delta_B - Delta_C - alpha_C Omega_C / 2.
    Exact: Delta_R = Delta_B - Delta_C (1 + sqrt(1 + 4 alpha_C^2)) / 2.
    """
    alpha_c = mixing_weak(omega_c, delta_c)
    if mode is Mode.WEAK:
        return delta_b - delta_c - alpha_c * omega_c / 2.0
    root = math.sqrt(1.0 + 4.0 * alpha_c * alpha_c)
    return delta_b - delta_c * (1.0 + root) / 2.0


@dataclass(frozen=True)
class DarkState:
    vector: np.ndarray
    mixing_ratio: float  # E (weak) or E' (exact)


def dark_state(frame: DressedFrame, omega_b: float, omega_r: float,
               on_s_q: bool = False) -> DarkState:
    """Normalized dark combination of |D> and the dressed state.

    The mixing ratio is E = alpha_C Omega_B / Omega_R in weak mode and
    E' = beta Omega_B / Omega_R in exact mode.  With ``on_s_q`` the dark
    state is built on |S_Q> instead (S-dominant variant).
    """
    if omega_r <= 0.0:
        raise ZeroRabiR("dark state requires Omega_R > 0")
    if frame.mode is Mode.WEAK:
        ratio = frame.alpha_c * omega_b / omega_r
    else:
        # Coupling of the dressed state to |P> is -beta Omega_B / 2 for |Q_S>
        # and +Omega_B/(2 sqrt(1+alpha^2)) for |S_Q>; the D amplitude cancels it.
        if on_s_q:
            ratio = -(omega_b / omega_r) / math.sqrt(1.0 + frame.alpha ** 2)
        else:
            ratio = frame.beta * omega_b / omega_r
    base = frame.s_q_state if on_s_q else frame.q_s_state
    vec = ratio * qcore.ket(D) + base
    vec = vec / np.linalg.norm(vec)
    return DarkState(vector=vec, mixing_ratio=ratio)


def transfer_fidelity(rho: np.ndarray, alpha_c: float) -> float:
    """Second-order-in-alpha_C transfer fidelity
    alpha_C^2 rho_SS + (1 - alpha_C^2) rho_QQ - 2 alpha_C Re(rho_SQ)."""
    a2 = alpha_c * alpha_c
    return float(
        a2 * rho[S, S].real
        + (1.0 - a2) * rho[Q, Q].real
        - 2.0 * alpha_c * rho[S, Q].real
    )


def combination_fidelity(rho: np.ndarray, target: DarkState) -> float:
    """<Psi|rho|Psi> against the dark-state target."""
    return qcore.expectation(target.vector, rho)


def dark_coupling_residual(frame: DressedFrame, omega_b: float,
                           omega_r: float) -> float:
    """|<P| H_I |Psi_dark>| with the full 4-level interaction Hamiltonian;
    zero for the exact-mode dark state, O(alpha_C^3) Omega_B in weak mode."""
    if omega_b == 0.0 and omega_r == 0.0:
        return 0.0
    if omega_r <= 0.0:
        raise ZeroRabiR("residual diagnostic requires Omega_R > 0")
    psi = dark_state(frame, omega_b, omega_r).vector
    h_i = model.build_interaction(omega_b, omega_r, frame.omega_c)
    return float(abs((h_i @ psi)[P]))
