"""Acceptance suite: quantitative reproduction bands and the always-on
property checks.  Each criterion prints a single PASS/FAIL line with the
measured value and its tolerance band."""

import math
import os

import numpy as np

from nstirap import dressed, qcore
from nstirap.dressed import Mode
from nstirap.model import AtomParams, LaserField, NSchemeModel
from nstirap.propagator import IntegratorConfig, cross_check
from nstirap.pulses import Constant
from nstirap.scenarios import (ScenarioSpec, TransferParams, apply_axis,
                               run_full_transfer, run_optical_pumping_prep,
                               run_partial_stirap, run_reverse_transfer,
                               run_scan)

TWO_PI = 2.0 * math.pi
ATOM = AtomParams.from_lifetime(7.0, 14.4)
WORKERS = min(4, os.cpu_count() or 1)

# invariant maxima harvested from every criterion run (checked in criterion 8)
_INVARIANT_LOG: list[dict] = []


def _log_invariants(ts):
    _INVARIANT_LOG.append(ts.stats)


def _report(num, ok, detail):
    print(f"\ncriterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def strong_params(**kw):
    base = dict(atom=ATOM, omega_b0=TWO_PI * 400.0, omega_r0=TWO_PI * 40.0,
                omega_c=TWO_PI * 10.0, delta_b=TWO_PI * 100.0,
                delta_c=TWO_PI * 100.0, tau=20.0, delta_t=20.0)
    base.update(kw)
    return TransferParams(**base)


def weak_params(**kw):
    return strong_params(omega_c=TWO_PI * 1.0, delta_c=TWO_PI * 10.0, **kw)


def test_criterion_1_full_transfer_fidelity():
    res = run_full_transfer(strong_params())
    _log_invariants(res["timeseries"])
    one_minus_f = 1.0 - res["F_after_stirap"]
    one_minus_pq = 1.0 - res["P_Q_final"]
    ok = (4e-5 <= one_minus_f <= 1.6e-4) and (4e-5 <= one_minus_pq <= 1.6e-4)
    _report(1, ok,
            f"1-F = {one_minus_f:.3e}, 1-P_Q = {one_minus_pq:.3e}, "
            f"band [4e-05, 1.6e-04]")


def test_criterion_2_duration_scaling():
    # halved schedule (tau = dt = 10 us, ~50 us window) and quartered
    # (tau = dt = 5.4 us, ~27 us window)
    losses = {}
    for tau, target in ((10.0, 3e-4), (5.4, 1e-3)):
        res = run_full_transfer(apply_axis(strong_params(), "tau_us", tau))
        _log_invariants(res["timeseries"])
        losses[tau] = (1.0 - res["F_after_stirap"], target)
    ok = all(target / 2.0 <= loss <= target * 2.0
             for loss, target in losses.values())
    detail = "; ".join(
        f"tau={tau}: 1-F = {loss:.3e} vs {target:.0e} (factor-2 band)"
        for tau, (loss, target) in losses.items())
    _report(2, ok, detail)


def _mismatch_scan(delta_b_mhz, values):
    base = strong_params(delta_b=TWO_PI * delta_b_mhz)
    spec = ScenarioSpec("full_transfer", base,
                        axis_parameter="mismatch_over_2pi_MHz",
                        axis_values=values)
    return run_scan(spec, workers=WORKERS)


def _width_at(axis, fid, level):
    """Full width of the F >= level region by linear interpolation."""
    above = fid >= level
    if not above.any():
        return 0.0
    lo = axis[0] if above[0] else None
    hi = axis[-1] if above[-1] else None
    for i in range(len(axis) - 1):
        if above[i] != above[i + 1]:
            x = axis[i] + (level - fid[i]) * (axis[i + 1] - axis[i]) / (
                fid[i + 1] - fid[i])
            if not above[i]:
                lo = x
            else:
                hi = x
    return hi - lo


def test_criterion_3_mismatch_sensitivity():
    # +-0.1 MHz effective mismatch at Delta_B/2pi = 100 MHz
    fids = []
    for mm in (-0.1, +0.1):
        res = run_full_transfer(
            apply_axis(strong_params(), "mismatch_over_2pi_MHz", mm))
        _log_invariants(res["timeseries"])
        fids.append(res["F_after_stirap"])
    ok_point = all(abs(f - 0.997) <= 0.002 for f in fids)

    near = _mismatch_scan(100.0, (-1.2, -1.0, -0.8, -0.6, -0.4, 0.0,
                                  0.2, 0.3, 0.4, 0.5))
    far = _mismatch_scan(190.0, (-0.6, -0.5, -0.4, -0.3, -0.2, -0.1, 0.0,
                                 0.05, 0.1, 0.15, 0.2, 0.25))
    w_near = _width_at(near.axis_values, 1.0 - near.one_minus_f, 0.9)
    w_far = _width_at(far.axis_values, 1.0 - far.one_minus_f, 0.9)
    ok_width = 0.0 < w_far < w_near
    _report(3, ok_point and ok_width,
            f"F(-0.1) = {fids[0]:.4f}, F(+0.1) = {fids[1]:.4f} "
            f"(band 0.997 +- 0.002); width(F=0.9): "
            f"{w_far:.2f} MHz @ 190 < {w_near:.2f} MHz @ 100")


def test_criterion_4_linewidth_sensitivity():
    base = apply_axis(strong_params(), "tau_us", 28.0)
    spec = ScenarioSpec("full_transfer", base,
                        axis_parameter="linewidth_HWHM_Hz",
                        axis_values=(0.0, 100.0, 300.0, 1000.0))
    scan = run_scan(spec, workers=WORKERS)
    loss = dict(zip(scan.axis_values, scan.one_minus_f))
    ok_1khz = 2e-2 / 1.5 <= loss[1000.0] <= 2e-2 * 1.5
    ok_zero = loss[0.0] < 1e-4
    ok_mono = bool(np.all(np.diff(scan.one_minus_f) >= 0.0))
    _report(4, ok_1khz and ok_zero and ok_mono,
            f"1-F(1 kHz) = {loss[1000.0]:.3e} (band [1.33e-02, 3e-02]); "
            f"1-F(0) = {loss[0.0]:.3e} < 1e-04; "
            f"monotone nondecreasing = {ok_mono}")


def test_criterion_5_reverse_preparation():
    res = run_reverse_transfer(strong_params(c_switch_off_tau=None))
    _log_invariants(res["timeseries"])
    fid = res["prep_fidelity_to_QS"]
    _report(5, fid >= 1.0 - 1e-6,
            f"prep fidelity to |Q_S> = 1 - {1.0 - fid:.3e} >= 1 - 1e-06")


def test_criterion_6_partial_stirap_superposition():
    params = strong_params(
        omega_c=TWO_PI * 50.0, delta_c=TWO_PI * 10.0,
        tau=28.0, delta_t=28.0, c_switch_off_tau=None,
        t_freeze=-30.0, mode=Mode.EXACT)
    res = run_partial_stirap(params)
    _log_invariants(res["timeseries"])
    min_fid = float(np.min(res["fidelity_trace"]))
    final = res["final_combination_fidelity"]
    ok = min_fid > 1.0 - 1e-4 and (1.0 - final) <= 3.0 * 2e-5
    _report(6, ok,
            f"min <Psi|rho|Psi> = 1 - {1.0 - min_fid:.3e} > 1 - 1e-04; "
            f"final = 1 - {1.0 - final:.3e} (within 3x of 2e-05)")


def test_criterion_7_coupling_strength_ordering():
    taus = (6.0, 10.0, 14.0, 20.0)
    curves = {}
    for label, (wc, dc) in (("strong", (10.0, 100.0)),
                            ("mid", (5.0, 50.0)),
                            ("weak", (1.0, 10.0))):
        base = strong_params(omega_c=TWO_PI * wc, delta_c=TWO_PI * dc)
        spec = ScenarioSpec("full_transfer", base,
                            axis_parameter="tau_us", axis_values=taus)
        curves[label] = run_scan(spec, workers=WORKERS).one_minus_f
    ok_order = bool(np.all(curves["strong"] <= curves["mid"])
                    and np.all(curves["mid"] <= curves["weak"]))

    # raising the Lambda couplings from (200, 20) to (800, 80) MHz never
    # worsens 1-F at the largest tau of the grid
    loss_rabi = {}
    for nu_b in (200.0, 800.0):
        res = run_full_transfer(weak_params(
            omega_b0=TWO_PI * nu_b, omega_r0=TWO_PI * nu_b / 10.0))
        _log_invariants(res["timeseries"])
        loss_rabi[nu_b] = 1.0 - res["F_after_stirap"]
    ok_rabi = loss_rabi[800.0] <= loss_rabi[200.0]
    _report(7, ok_order and ok_rabi,
            f"1-F ordering strong <= mid <= weak at tau = {taus}: {ok_order}; "
            f"1-F(800) = {loss_rabi[800.0]:.3e} <= "
            f"1-F(200) = {loss_rabi[200.0]:.3e} at tau = 20")


def test_criterion_8_property_suite():
    # (a) density-matrix invariants at every sample of every criterion run
    assert _INVARIANT_LOG, "criterion runs must execute first"
    worst = {k: max(s[k] for s in _INVARIANT_LOG)
             for k in ("trace", "hermiticity", "negativity")}
    ok_inv = all(v < 1e-8 for v in worst.values())

    # (b) RK vs expm-oracle cross-check on a 1 us frozen-coupling window
    model = NSchemeModel(
        atom=ATOM,
        laser_b=LaserField("B", TWO_PI * 400.0, TWO_PI * 100.0, 0.01),
        laser_r=LaserField("R", TWO_PI * 40.0, TWO_PI * (-0.25), 0.01),
        laser_c=LaserField("C", TWO_PI * 10.0, TWO_PI * 100.0, 0.01),
    )
    rho0 = np.diag([0.0, 0.0, 1.0, 0.0]).astype(complex)
    envs = (Constant(TWO_PI * 200.0), Constant(TWO_PI * 20.0),
            Constant(TWO_PI * 10.0))
    dev = cross_check(rho0, envs, model, (0.0, 1.0),
                      IntegratorConfig(method="adaptive_rk", sample_dt=0.1),
                      IntegratorConfig(method="expm_oracle", sample_dt=0.1,
                                       expm_step=5e-5))
    ok_cross = dev < 1e-7

    # (c) dressed closed forms vs 2x2 eigensolver over 1000 random draws
    rng = np.random.default_rng(8)
    worst_dressed = 0.0
    for _ in range(1000):
        wc = rng.uniform(0.1, 500.0)
        dc = rng.uniform(1.0, 1500.0) * rng.choice([-1.0, 1.0])
        frame = dressed.dressed_frame(dressed.mixing_weak(wc, dc), dc,
                                      Mode.EXACT)
        h = np.array([[0.0, wc / 2.0], [wc / 2.0, -dc]])
        vals, vecs = np.linalg.eigh(h)
        iq = int(np.argmax(np.abs(vecs[1, :])))
        scale = max(abs(vals[0]), abs(vals[1]))
        worst_dressed = max(
            worst_dressed,
            abs(frame.lambda_q - vals[iq]) / scale,
            abs(frame.lambda_s - vals[1 - iq]) / scale,
            abs(abs(frame.q_s_state[qcore.Q]) - abs(vecs[1, iq])))
    ok_dressed = worst_dressed < 1e-10

    # (d) dephasing coherence-decay rates vs the diagonal-jump closed form
    from nstirap.model import dephasing_operators, dephasing_rate
    gl = (0.7, 1.3, 2.9)
    ops = dephasing_operators(*gl)
    worst_deph = 0.0
    for i in range(4):
        for j in range(4):
            if i == j:
                continue
            rho = np.zeros((4, 4), dtype=complex)
            rho[i, j] = 1.0
            measured = -sum(qcore.dissipator(c, rho) for c in ops)[i, j].real
            expected = dephasing_rate(*gl, i, j)
            if expected:
                worst_deph = max(worst_deph,
                                 abs(measured - expected) / expected)
            else:
                worst_deph = max(worst_deph, abs(measured))
    ok_deph = worst_deph < 1e-9

    # (e) B-only optical pumping empties |S> into |D>
    pump = run_optical_pumping_prep(strong_params(omega_b0=TWO_PI * 40.0))
    ok_pump = pump["final_rho_DD"] > 1.0 - 1e-6

    ok = ok_inv and ok_cross and ok_dressed and ok_deph and ok_pump
    _report(8, ok,
            f"invariants (trace {worst['trace']:.1e}, herm "
            f"{worst['hermiticity']:.1e}, neg {worst['negativity']:.1e}) "
            f"< 1e-08; cross-check {dev:.1e} < 1e-07; dressed oracle "
            f"{worst_dressed:.1e} < 1e-10; dephasing {worst_deph:.1e} "
            f"< 1e-09; pumping rho_DD = {pump['final_rho_DD']:.8f}")
