"""Compiled inner loop of the adaptive master-equation integrator.

Dormand-Prince 5(4) embedded Runge-Kutta with the standard quartic dense
interpolant, specialized to the 4x4 N-scheme right-hand side.  Everything in
this module is numba-compiled; the Python-facing wrapper lives in
``propagator``.

The right-hand side is assembled elementwise from the bare-Hamiltonian
diagonal, the three instantaneous Rabi frequencies, the radiative relaxation
of |P> and a precomputed elementwise dephasing-rate matrix (valid because
the phase-noise jump operators are diagonal).
"""

import numpy as np
from numba import njit

# Envelope segment kinds; must match pulses.KIND_*.
_KIND_ZERO = 0
_KIND_CONSTANT = 1
_KIND_GAUSSIAN = 2
_KIND_EXP_OFF = 3
_KIND_TANH_ON = 4

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_TRACE_BREACH = 2

# Basis indices (S, P, D, Q).
_S, _P, _D, _Q = 0, 1, 2, 3

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.zeros((7, 7))
_A[1, 0] = 1 / 5
_A[2, :2] = (3 / 40, 9 / 40)
_A[3, :3] = (44 / 45, -56 / 15, 32 / 9)
_A[4, :4] = (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729)
_A[5, :5] = (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_A[6, :6] = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_B = _A[6, :7].copy()
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920,
               -17253 / 339200, 22 / 525, -1 / 40])


@njit(cache=True)
def env_eval(seg, t):
    """Evaluate a segment-encoded envelope at time t."""
    row = 0
    for i in range(1, seg.shape[0]):
        if t >= seg[i, 0]:
            row = i
        else:
            break
    kind = int(seg[row, 1])
    p0 = seg[row, 2]
    p1 = seg[row, 3]
    p2 = seg[row, 4]
    if kind == _KIND_ZERO:
        return 0.0
    if kind == _KIND_CONSTANT:
        return p0
    if kind == _KIND_GAUSSIAN:
        x = (t - p1) / p2
        return p0 * np.exp(-x * x)
    if kind == _KIND_EXP_OFF:
        dt = t - p1
        if dt <= 0.0:
            return p0
        return p0 * np.exp(-dt / p2)
    # tanh turn-on
    return 0.5 * p0 * (1.0 + np.tanh((t - p1) / p2))


@njit(cache=True)
def rhs(t, y, out, h0diag, seg_b, seg_r, seg_c,
        gamma_p, beta_ps, beta_pd, gamma_d, gamma_q, deph):
    """Master-equation derivative; y and out are flattened 4x4 row-major."""
    wb = env_eval(seg_b, t)
    wr = env_eval(seg_r, t)
    wc = env_eval(seg_c, t)

    h = np.zeros((4, 4), dtype=np.complex128)
    for i in range(4):
        h[i, i] = h0diag[i]
    h[_P, _S] += 0.5 * wb
    h[_S, _P] += 0.5 * wb
    h[_P, _D] += 0.5 * wr
    h[_D, _P] += 0.5 * wr
    h[_Q, _S] += 0.5 * wc
    h[_S, _Q] += 0.5 * wc

    r = y.reshape(4, 4)
    o = out.reshape(4, 4)
    # -i (H r - r H)
    for i in range(4):
        for j in range(4):
            acc = 0.0 + 0.0j
            for k in range(4):
                acc += h[i, k] * r[k, j] - r[i, k] * h[k, j]
            o[i, j] = -1j * acc
    # radiative relaxation of |P>
    hp = 0.5 * gamma_p
    for i in range(4):
        o[i, _P] -= hp * r[i, _P]
        o[_P, i] -= hp * r[_P, i]
    o[_S, _S] += beta_ps * gamma_p * r[_P, _P]
    o[_D, _D] += beta_pd * gamma_p * r[_P, _P]
    if gamma_d > 0.0:
        hd = 0.5 * gamma_d
        for i in range(4):
            o[i, _D] -= hd * r[i, _D]
            o[_D, i] -= hd * r[_D, i]
        o[_S, _S] += gamma_d * r[_D, _D]
    if gamma_q > 0.0:
        hq = 0.5 * gamma_q
        for i in range(4):
            o[i, _Q] -= hq * r[i, _Q]
            o[_Q, i] -= hq * r[_Q, i]
        o[_S, _S] += gamma_q * r[_Q, _Q]
    # elementwise phase-noise decay
    for i in range(4):
        for j in range(4):
            o[i, j] -= deph[i, j] * r[i, j]


@njit(cache=True)
def integrate(y0, t0, t1, t_eval, h0diag, seg_b, seg_r, seg_c,
              gamma_p, beta_ps, beta_pd, gamma_d, gamma_q, deph,
              rtol, atol, max_step, min_step):
    """Adaptive DP5(4) integration sampled on t_eval.

    Steps land exactly on the sample times (they are far sparser than the
    adaptive steps at the oscillation rates involved), so sample accuracy
    equals solution accuracy.  Returns (y_eval, y_final, status, n_steps,
    n_rejected).
    """
    n = 16
    y = y0.copy()
    t = t0
    y_eval = np.zeros((t_eval.shape[0], n), dtype=np.complex128)
    k = np.zeros((7, n), dtype=np.complex128)
    ytmp = np.zeros(n, dtype=np.complex128)

    ieval = 0
    while ieval < t_eval.shape[0] and t_eval[ieval] <= t0:
        y_eval[ieval] = y
        ieval += 1

    rhs(t, y, k[0], h0diag, seg_b, seg_r, seg_c,
        gamma_p, beta_ps, beta_pd, gamma_d, gamma_q, deph)
    n_steps = 0
    n_rejected = 0
    h = min(max_step, (t1 - t0) * 0.01, 1e-4)

    while t < t1:
        if t1 - t <= 1e-12 * max(1.0, abs(t1)):
            break  # remaining interval is at rounding level
        if h > max_step:
            h = max_step
        if t + h > t1:
            h = t1 - t
        if h < min_step:
            return y_eval, y, STATUS_STEP_UNDERFLOW, n_steps, n_rejected
        h_next = h
        if ieval < t_eval.shape[0] and t + h > t_eval[ieval]:
            h = t_eval[ieval] - t  # land exactly on the next sample time

        # stages
        for s in range(1, 7):
            for i in range(n):
                acc = 0.0 + 0.0j
                for m in range(s):
                    a = _A[s, m]
                    if a != 0.0:
                        acc += a * k[m, i]
                ytmp[i] = y[i] + h * acc
            rhs(t + _C[s] * h, ytmp, k[s], h0diag, seg_b, seg_r, seg_c,
                gamma_p, beta_ps, beta_pd, gamma_d, gamma_q, deph)
        # ytmp now holds the 5th-order solution (stage 7 uses B weights)
        ynew = ytmp.copy()

        # embedded error estimate
        err = 0.0
        for i in range(n):
            e = 0.0 + 0.0j
            for m in range(7):
                if _E[m] != 0.0:
                    e += _E[m] * k[m, i]
            e *= h
            sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
            q = abs(e) / sc
            err += q * q
        err = np.sqrt(err / n)

        if err <= 1.0:
            t_new = t + h
            while ieval < t_eval.shape[0] and t_eval[ieval] <= t_new + 1e-12:
                y_eval[ieval] = ytmp
                ieval += 1
            t = t_new
            y = ynew.copy()
            k[0] = k[6].copy()  # FSAL
            n_steps += 1

            tr = (y[0] + y[5] + y[10] + y[15]).real
            if abs(tr - 1.0) > 1e-6:
                return y_eval, y, STATUS_TRACE_BREACH, n_steps, n_rejected

            factor = 0.9 * err ** -0.2 if err > 0.0 else 10.0
            if factor > 10.0:
                factor = 10.0
            # grow from the intended (unclipped) step so sample landings do
            # not permanently shrink the step size
            h = h_next * factor
        else:
            n_rejected += 1
            factor = 0.9 * err ** -0.2
            if factor < 0.2:
                factor = 0.2
            h *= factor

    while ieval < t_eval.shape[0]:
        y_eval[ieval] = y
        ieval += 1
    return y_eval, y, STATUS_OK, n_steps, n_rejected
