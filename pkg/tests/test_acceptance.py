"""Acceptance suite: one test per release criterion, at the published tolerances.

Each test prints the measured numbers it judged, so a failure log carries
the evidence.  Run with ``pytest tests/test_acceptance.py -v`` to get one
pass/fail line per criterion.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from tangleroof import convexroof as cr
from tangleroof import experiments as ex
from tangleroof import measures as ms
from tangleroof import oracles as orc
from tangleroof import spinring as sr
from tangleroof.config import SweepConfig
from tangleroof.linalg import eigh, expm_skew

OPTS = ex.VALIDATE_OPTIONS  # 8 restarts, tight enough for every oracle family


@pytest.fixture(scope="module")
def validation():
    start = time.monotonic()
    rows = ex.run_validation(OPTS)
    return rows, time.monotonic() - start


def test_criterion_1_oracle_validation(validation):
    rows, elapsed = validation
    limits = {
        "ghz_w_mixture": 1e-6,
        "isotropic_eof_d2": 1e-6,
        "isotropic_eof_d3": 1e-5,
    }
    for family, worst, _, ok in ex.family_summary(rows):
        print(f"{family}: max_abs_error = {worst:.3e}")
        if family in limits:
            assert worst <= limits[family], f"{family} exceeds {limits[family]:.0e}"
        assert ok
    print(f"validation runtime: {elapsed:.1f} s")
    assert elapsed <= 300.0


def test_criterion_2_finite_temperature_point_values():
    points = [
        (1.0, 1.0, sr.RADIAL, 0.11, 1e-4, 0.98, 0.01),
        (1.0, 1.0, sr.RADIAL, 0.21, 1e-3, 0.92, 0.01),
        (0.0, 1.0, sr.UNIFORM_X, 0.080, 1e-4, 0.98, 0.01),
        (0.0, 1.0, sr.UNIFORM_X, 0.16, 1e-3, 0.89, 0.01),
        (0.9, 1.0, sr.UNIFORM_X, 0.016, 1e-4, 0.90, 0.02),
    ]
    start = time.monotonic()
    for jxy, jz, field, b, t, expected, tol in points:
        rec = ex.compute_sweep_point(jxy, jz, field, b, t, cr.OptimizerOptions())
        print(f"jxy={jxy} {field.kind} b={b} T={t}: tau = {rec.tau:.6f} "
              f"(expected {expected} +- {tol})")
        assert abs(rec.tau - expected) <= tol
    elapsed = time.monotonic() - start
    print(f"point-value runtime: {elapsed:.1f} s")
    assert elapsed <= 600.0


def test_criterion_3_power_laws():
    start = time.monotonic()
    temps = np.logspace(-4, -2, 8)
    results = [
        ex.optimal_field(1.0, 1.0, sr.RADIAL, float(t), (0.02, 0.8), OPTS)
        for t in temps
    ]
    alpha = ex.fit_power_law(temps, [r.b_opt for r in results])
    beta = ex.fit_power_law(temps, [1.0 - r.tau_max for r in results])
    elapsed = time.monotonic() - start
    print(f"b_opt exponent = {alpha.exponent:.4f} (residual {alpha.residual:.4f})")
    print(f"1 - tau_max exponent = {beta.exponent:.4f} (residual {beta.residual:.4f})")
    print(f"power-law runtime: {elapsed:.1f} s")
    assert abs(alpha.exponent - 0.30) <= 0.05
    assert abs(beta.exponent - 0.63) <= 0.05
    assert alpha.residual <= 0.05
    assert beta.residual <= 0.05
    assert elapsed <= 3600.0


def test_criterion_4_ground_state_structure():
    # exact W ground state across the regime, including the optimal field
    opt = sr.w_conditions(1.0, 0.0)
    for b in (0.2, opt.b_opt, 0.8):
        params = sr.SpinRingParams(jxy=1.0, jz=0.0, field=sr.UNIFORM_Z, b=b)
        gs = eigh(sr.build_hamiltonian(params)).eigenvectors[:, 0]
        fid = abs(np.vdot(sr.w_state(), gs)) ** 2
        print(f"W fidelity at b={b}: 1 - {1.0 - fid:.2e}")
        assert fid >= 1.0 - 1e-10

    rep0 = sr.spectrum(sr.build_hamiltonian(sr.SpinRingParams(jxy=1.0, jz=1.0)))
    spread = float(rep0.energies[3] - rep0.energies[0])
    print(f"zero-field ground degeneracy {rep0.ground_degeneracy}, spread {spread:.1e}")
    assert rep0.ground_degeneracy == 4
    assert spread <= 1e-12

    for bj, rel in ((0.05, 0.10), (0.02, 0.03)):
        params = sr.SpinRingParams(jxy=1.0, jz=1.0, field=sr.RADIAL, b=bj)
        rep = sr.spectrum(sr.build_hamiltonian(params))
        predicted = 2.0 * bj**3 / 3.0
        err = abs(rep.splitting_01 - predicted) / predicted
        print(f"splitting at b/J={bj}: rel. deviation from 2(b/J)^3/3 = {err:.3f}")
        assert err <= rel

    assert abs(sr.w_conditions(1.0, 0.0).delta_e_opt - 0.5) <= 1e-12
    assert abs(sr.w_conditions(1.0, -3.0).delta_e_opt - 1.5) <= 1e-12


def test_criterion_5_closed_form_consistency():
    start = time.monotonic()
    worst = 0.0
    for bj in np.arange(0.05, 1.001, 0.05):
        params = sr.SpinRingParams(jxy=1.0, jz=1.0, field=sr.RADIAL, b=float(bj))
        gs = eigh(sr.build_hamiltonian(params)).eigenvectors[:, 0]
        worst = max(worst, abs(ms.tangle_pure(gs)
                               - sr.ground_tangle_closed_form(float(bj))))
    print(f"max |tangle_pure - closed form| over the b/J grid: {worst:.2e}")
    assert worst <= 1e-10

    params = sr.SpinRingParams(jxy=1.0, jz=1.0, field=sr.RADIAL, b=0.5,
                               temperature=1e-6)
    rho = sr.thermal_state(sr.build_hamiltonian(params), params.temperature)
    res = cr.minimize(rho, ms.THREE_TANGLE, cr.OptimizerOptions())
    diff = abs(res.value - sr.ground_tangle_closed_form(0.5))
    elapsed = time.monotonic() - start
    print(f"thermal tau at T=1e-6, b/J=0.5 vs closed form: diff = {diff:.2e}")
    print(f"closed-form runtime: {elapsed:.1f} s")
    assert diff <= 1e-4
    assert elapsed <= 120.0


def test_criterion_6_semiclassical_landscape():
    bj = 0.01
    thetas = np.linspace(0.0, np.pi, 721)
    phis = np.linspace(-np.pi, np.pi, 1441, endpoint=False)
    energy = np.array([[sr.classical_energy(bj, th, ph) for ph in phis]
                       for th in thetas])
    flat = np.argwhere(energy <= energy.min() + 1e-18)
    min_thetas = {round(float(thetas[i]), 6) for i, _ in flat}
    print(f"minima at zenith angles {sorted(min_thetas)}")
    assert min_thetas == {0.0, round(np.pi, 6)}

    barrier_by_phi = energy.max(axis=0) - energy.min()
    local_min = ((barrier_by_phi < np.roll(barrier_by_phi, 1))
                 & (barrier_by_phi <= np.roll(barrier_by_phi, -1)))
    where = phis[local_min]
    expected_phis = np.array([-np.pi / 6 + 2 * np.pi * n / 3 for n in (-1, 0, 1)])
    print(f"lowest-barrier azimuths {np.round(where, 4)}")
    assert len(where) == 3
    assert np.max(np.abs(np.sort(where) - np.sort(expected_phis))) < 0.01

    best = barrier_by_phi.min()
    rel = abs(best - sr.classical_barrier(bj)) / sr.classical_barrier(bj)
    print(f"barrier height rel. deviation from closed form: {rel:.2e}")
    assert rel <= 0.05


def test_criterion_7_property_suites(validation, rng):
    rows, _ = validation
    start = time.monotonic()

    # optimizer never undercuts the known roof values
    undershoot = min(row.value - row.expected for row in rows)
    print(f"worst undershoot vs oracle: {undershoot:.2e}")
    assert undershoot >= -1e-9

    params = sr.SpinRingParams(jxy=1.0, jz=1.0, field=sr.RADIAL, b=0.11,
                               temperature=1e-4)
    rho = sr.thermal_state(sr.build_hamiltonian(params), params.temperature)

    # monotone descent and unitarity preservation along public line searches
    u = cr.random_stiefel(6, 5, r=2).u
    values = []
    drift = 0.0
    for _ in range(10):
        point = cr.StiefelPoint(k=6, r=2, u=u)
        g = cr.gradient(point, rho, ms.THREE_TANGLE)
        assert np.array_equal(g, -g.conj().T)  # bitwise skew-Hermitian
        try:
            t, h = cr.line_search(point, -g, rho, ms.THREE_TANGLE)
        except cr.NoDecreaseError:
            break
        if t == 0.0:
            break
        u = u @ expm_skew(-g, t)
        drift = max(drift, float(np.max(np.abs(u.conj().T @ u - np.eye(6)))))
        values.append(h)
    print(f"descent values: {np.array2string(np.array(values), precision=6)}")
    print(f"max unitarity drift: {drift:.2e}")
    assert len(values) >= 5
    assert np.all(np.diff(values) < 0)
    assert drift <= 1e-10

    # reported decomposition reconstructs rho
    res = cr.minimize(rho, ms.THREE_TANGLE, OPTS)
    recon = np.einsum("n,nd,ne->de", res.decomposition.weights,
                      res.decomposition.states, res.decomposition.states.conj())
    recon_err = float(np.max(np.abs(recon - rho)))
    print(f"decomposition reconstruction error: {recon_err:.2e}")
    assert recon_err <= 1e-10

    # local-unitary invariance of the roof value
    local = np.kron(np.kron(_haar2(rng), _haar2(rng)), _haar2(rng))
    rotated = local @ rho @ local.conj().T
    res_rot = cr.minimize(rotated, ms.THREE_TANGLE, OPTS)
    lu_diff = abs(res_rot.value - res.value)
    print(f"local-unitary value difference: {lu_diff:.2e}")
    assert lu_diff <= 1e-6

    # tangle stays within [0, 1] on random states and on all roof outputs
    batch = rng.standard_normal((500, 8)) + 1j * rng.standard_normal((500, 8))
    batch /= np.linalg.norm(batch, axis=1, keepdims=True)
    taus = ms.tangle_batch(batch)
    assert np.all(taus >= 0.0) and np.all(taus <= 1.0)
    assert all(0.0 <= row.value <= 1.0 + 1e-12 for row in rows
               if row.family in ("ghz_w_mixture", "pure_identity",
                                 "ring_ground_tangle"))

    # adding two more decomposition members does not change the roof
    base = cr.minimize(orc.ghz_w_state(0.9), ms.THREE_TANGLE, OPTS)
    wide = cr.minimize(orc.ghz_w_state(0.9), ms.THREE_TANGLE,
                       cr.OptimizerOptions(restarts=OPTS.restarts,
                                           convergence_tol=OPTS.convergence_tol,
                                           max_iterations=OPTS.max_iterations,
                                           cardinality_offset=6))
    card_diff = abs(base.value - wide.value)
    print(f"cardinality K=R+4 vs K=R+6 difference: {card_diff:.2e}")
    assert card_diff < 1e-7

    # value independent of which spectral basis the factorization picks
    iso = orc.isotropic_state(0.7, 2)
    w, v = eigh(iso)
    mix = np.eye(4, dtype=complex)
    mix[:3, :3] = _haar_n(rng, 3)  # rotate the degenerate triple
    iso_alt = (v @ mix * w) @ (v @ mix).conj().T
    eof = ms.entropy_measure(2, 2)
    basis_diff = abs(cr.minimize(iso, eof, OPTS).value
                     - cr.minimize(iso_alt, eof, OPTS).value)
    print(f"eigenbasis independence difference: {basis_diff:.2e}")
    assert basis_diff <= 1e-6

    # closed-form cross-check of the pure three-tangle
    states = rng.standard_normal((1000, 8)) + 1j * rng.standard_normal((1000, 8))
    states /= np.linalg.norm(states, axis=1, keepdims=True)
    hdet_err = max(abs(ms.tangle_pure(s) - ms.hyperdeterminant_tangle(s))
                   for s in states)
    print(f"tangle vs hyperdeterminant max deviation: {hdet_err:.2e}")
    assert hdet_err <= 1e-10

    # identical seed, identical CSV
    cfg = SweepConfig(b_grid=np.array([0.11, 0.3]), t_grid=np.array([1e-4]),
                      optimizer=OPTS)
    first = [ex.sweep_row(r) for r in ex.iter_sweep(cfg)]
    second = [ex.sweep_row(r) for r in ex.iter_sweep(cfg)]
    assert first == second

    elapsed = time.monotonic() - start
    print(f"property-suite runtime: {elapsed:.1f} s")
    assert elapsed <= 900.0


def _haar2(rng):
    return _haar_n(rng, 2)


def _haar_n(rng, n):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def test_criterion_8_figure_shapes():
    start = time.monotonic()
    b_grid = np.geomspace(0.01, 1.0, 15)
    temps = (1e-4, 1e-3, 1e-2, 5e-2)
    curves = {}
    records = []
    for t in temps:
        taus = []
        for i, b in enumerate(b_grid):
            opts = cr.OptimizerOptions(
                restarts=OPTS.restarts, convergence_tol=OPTS.convergence_tol,
                max_iterations=OPTS.max_iterations, seed=ex.point_seed(0, i))
            rec = ex.compute_sweep_point(1.0, 1.0, sr.RADIAL, float(b), t, opts)
            taus.append(rec.tau)
            records.append(rec)
        curves[t] = np.array(taus)
        print(f"T={t}: tau(b) = {np.array2string(curves[t], precision=4)}")

    # single interior maximum, ignoring optimizer jitter below 5e-3
    jitter = 5e-3
    for t, tau in curves.items():
        peak = int(np.argmax(tau))
        assert 0 < peak < len(tau) - 1, f"maximum at the edge for T={t}"
        rising = np.diff(tau[: peak + 1])
        falling = np.diff(tau[peak:])
        assert np.all(rising > -jitter), f"non-monotone rise at T={t}"
        assert np.all(falling < jitter), f"non-monotone fall at T={t}"
        assert tau[0] < 0.1, f"tau does not vanish for b -> 0 at T={t}"

    # thermal smoothing of the b = 0 jump: the half-maximum region
    # {b: tau >= 0.5 tau_max} shifts to higher fields as T grows, both
    # its onset (the smoothed discontinuity) and its far edge.  Its
    # b-width is NOT monotone in T (measured: it shrinks), so the width
    # itself is only reported, not asserted.
    intervals = [_half_max_interval(b_grid, curves[t]) for t in temps]
    onsets = np.array([lo for lo, _ in intervals])
    offsets = np.array([hi for _, hi in intervals])
    print(f"half-maximum onsets:  {np.round(onsets, 3)}")
    print(f"half-maximum offsets: {np.round(offsets, 3)}")
    print(f"half-maximum widths:  {np.round(offsets - onsets, 3)}")
    assert np.all(np.diff(onsets) > 0)
    assert np.all(np.diff(offsets) > 0)

    # vanishing-tau rows exist and carry the flag through to the CSV row
    low = [r for r in records if r.tau < ex.LOW_TAU_CUTOFF]
    print(f"rows below the {ex.LOW_TAU_CUTOFF:.0e} cutoff: {len(low)}")
    assert low
    assert all(r.low_tau for r in low)
    assert all(ex.sweep_row(r).endswith(",1") for r in low)
    assert all(not r.low_tau for r in records if r.tau >= ex.LOW_TAU_CUTOFF)

    # stronger anisotropy sustains more entanglement at fixed temperature
    tau_max = {}
    for ratio in (0.0, 0.5, 0.9):
        res = ex.optimal_field(ratio, 1.0, sr.UNIFORM_X, 1e-3, (0.005, 0.6), OPTS)
        tau_max[ratio] = res.tau_max
        print(f"ratio {ratio}: tau_max = {res.tau_max:.4f} at b_opt = {res.b_opt:.4f}")
    assert tau_max[0.0] >= tau_max[0.5] >= tau_max[0.9]

    elapsed = time.monotonic() - start
    print(f"figure-shape runtime: {elapsed:.1f} s")
    assert elapsed <= 1800.0


def _half_max_interval(b_grid, tau):
    half = 0.5 * tau.max()
    idx = np.where(tau >= half)[0]
    lo_i, hi_i = idx[0], idx[-1]
    lo = b_grid[lo_i] if lo_i == 0 else np.interp(
        half, [tau[lo_i - 1], tau[lo_i]], [b_grid[lo_i - 1], b_grid[lo_i]])
    hi = b_grid[hi_i] if hi_i == len(tau) - 1 else np.interp(
        half, [tau[hi_i + 1], tau[hi_i]], [b_grid[hi_i + 1], b_grid[hi_i]])
    return float(lo), float(hi)
