"""Complex linear algebra over the fixed 4-level Hilbert space.

Basis ordering is (S, P, D, Q) everywhere; index constants below are the
single source of truth.  Hamiltonian-like operators carry rad/us, jump
operators rad/us^(1/2), density matrices are dimensionless.
"""

from __future__ import annotations

import numpy as np

from .errors import UnnormalizedState

# Basis indices, fixed package-wide.
S, P, D, Q = 0, 1, 2, 3
DIM = 4
BASIS_LABELS = ("S", "P", "D", "Q")

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-8
POSITIVITY_TOL = 1e-8
NORM_TOL = 1e-8


def ket(i: int) -> np.ndarray:
    """Basis state vector |i>."""
    v = np.zeros(DIM, dtype=complex)
    v[i] = 1.0
    return v


def outer(i: int, j: int) -> np.ndarray:
    """Matrix |i><j|."""
    m = np.zeros((DIM, DIM), dtype=complex)
    m[i, j] = 1.0
    return m


def projector(i: int) -> np.ndarray:
    return outer(i, i)


def dag(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def normalize(psi: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(psi)
    if n == 0:
        raise UnnormalizedState("cannot normalize the zero vector")
    return psi / n


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    return float(np.max(np.abs(m - dag(m)))) < tol


def commutator(h: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """[H, rho] = H rho - rho H."""
    return h @ rho - rho @ h


def dissipator(c: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Lindblad dissipator C rho C+ - (1/2){C+C, rho}; traceless for any inputs."""
    cdc = dag(c) @ c
    return c @ rho @ dag(c) - 0.5 * (cdc @ rho + rho @ cdc)


def expectation(psi: np.ndarray, rho: np.ndarray) -> float:
    """<psi|rho|psi> for a normalized psi; the imaginary part must vanish."""
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise UnnormalizedState(f"psi norm deviates by {abs(norm - 1.0):.3e}")
    val = np.vdot(psi, rho @ psi)
    if abs(val.imag) >= 1e-10:
        raise UnnormalizedState(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def spectral_bounds(rho: np.ndarray) -> tuple[float, float]:
    """(min, max) eigenvalue of the Hermitian part; used by positivity monitors."""
    herm = 0.5 * (rho + dag(rho))
    eigs = np.linalg.eigvalsh(herm)
    return float(eigs[0]), float(eigs[-1])


def density_matrix_defects(rho: np.ndarray) -> dict[str, float]:
    """Measured deviations from the density-matrix invariants.

    Returns hermiticity defect max|rho - rho+|, trace defect |Tr rho - 1| and
    the most negative eigenvalue (as a positive number, 0 if none).
    """
    herm = float(np.max(np.abs(rho - dag(rho))))
    trace = abs(float(np.trace(rho).real) - 1.0)
    lo, _ = spectral_bounds(rho)
    return {"hermiticity": herm, "trace": trace, "negativity": max(0.0, -lo)}


def assert_density_matrix(rho: np.ndarray) -> None:
    d = density_matrix_defects(rho)
    if d["hermiticity"] >= HERMITICITY_TOL:
        raise UnnormalizedState(f"hermiticity defect {d['hermiticity']:.3e}")
    if d["trace"] >= TRACE_TOL:
        raise UnnormalizedState(f"trace defect {d['trace']:.3e}")
    if d["negativity"] >= POSITIVITY_TOL:
        raise UnnormalizedState(f"negative eigenvalue -{d['negativity']:.3e}")
