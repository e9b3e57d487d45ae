"""Closed-form benchmark values used to validate the roof optimizer.

Two analytically solved families, plus bundled identity cases:

* GHZ/W mixtures rho(p) = p |GHZ><GHZ| + (1-p) |W><W|.  The pure states
  sqrt(p)|GHZ> + e^{i phi} sqrt(1-p)|W> have three-tangle
  |p^2 + (8 sqrt 6/9) e^{3 i phi} sqrt(p (1-p)^3)|, minimized over the
  phase to g(p) = p^2 - (8 sqrt 6/9) sqrt(p (1-p)^3).  The mixed-state
  tangle is the convex hull of g on [0, 1]: zero up to the root
  p0 = 4 * 2^(1/3) / (3 + 4 * 2^(1/3)) of g, the curve g itself up to the
  point p1 where the tangent through (1, 1) touches, then that tangent.

* Isotropic bipartite states rho_F = F |Phi+><Phi+| +
  (1-F) (1 - |Phi+><Phi+|)/(d^2 - 1).  Their entanglement of formation
  is zero for F <= 1/d, then the entropy expression through
  gamma(F) = (sqrt F + sqrt((d-1)(1-F)))^2 / d, and for d >= 3 linear in
  F above 4(d-1)/d^2 (convex-hull roof of the entropy curve).

A randomized decomposition search (brute_force_roof) provides an
optimizer-independent upper bound to confirm each formula is a lower
envelope of achievable decomposition averages.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .convexroof import WEIGHT_FLOOR, _factor_rows, factor_density_matrix
from .linalg import eigh
from .measures import THREE_TANGLE, PureMeasure, entropy_measure
from .spinring import RADIAL, SpinRingParams, build_hamiltonian, ghz_plus, w_state
from .spinring import ground_tangle_closed_form

GHZ_W_THRESHOLD = 4.0 * 2.0 ** (1.0 / 3.0) / (3.0 + 4.0 * 2.0 ** (1.0 / 3.0))

_PHASE_COEF = 8.0 * np.sqrt(6.0) / 9.0


class DomainError(ValueError):
    """Input outside the domain of a closed-form expression."""


@dataclass(frozen=True)
class OracleCase:
    label: str
    state: np.ndarray
    measure: PureMeasure
    expected: float
    tolerance: float


def _mixture_curve(p):
    return p * p - _PHASE_COEF * np.sqrt(p * (1.0 - p) ** 3)


def _mixture_slope(p):
    return 2.0 * p - _PHASE_COEF * (1.0 - 4.0 * p) * np.sqrt(1.0 - p) / (2.0 * np.sqrt(p))


@lru_cache(maxsize=1)
def ghz_w_tangent_point() -> float:
    """p1 where the tangent of the mixture curve passes through (1, 1)."""

    def mismatch(p):
        return _mixture_slope(p) * (1.0 - p) - (1.0 - _mixture_curve(p))

    grid = np.linspace(GHZ_W_THRESHOLD + 1e-9, 1.0 - 1e-7, 400)
    vals = mismatch(grid)
    sign = np.sign(vals)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    lo, hi = grid[flips[0]], grid[flips[0] + 1]
    return float(brentq(mismatch, lo, hi, xtol=1e-15))


def ghz_w_mixture_tangle(p: float) -> float:
    """Mixed three-tangle of p |GHZ><GHZ| + (1-p) |W><W|."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p = {p} outside [0, 1]")
    if p <= GHZ_W_THRESHOLD:
        return 0.0
    p1 = ghz_w_tangent_point()
    if p <= p1:
        return float(_mixture_curve(p))
    g1 = _mixture_curve(p1)
    return float(1.0 - (1.0 - p) * (1.0 - g1) / (1.0 - p1))


def ghz_w_state(p: float) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p = {p} outside [0, 1]")
    g, w = ghz_plus(), w_state()
    return p * np.outer(g, g.conj()) + (1.0 - p) * np.outer(w, w.conj())


def _binary_entropy(x: float) -> float:
    total = 0.0
    for q in (x, 1.0 - x):
        if q > 0.0:
            total -= q * np.log2(q)
    return total


def isotropic_eof(fidelity: float, d: int) -> float:
    """Entanglement of formation of the d x d isotropic state at fidelity F."""
    if d not in (2, 3):
        raise ValueError(f"d = {d} is not supported (need 2 or 3)")
    if not 1.0 / d**2 <= fidelity <= 1.0:
        raise DomainError(f"F = {fidelity} outside [1/d^2, 1] for d = {d}")
    if fidelity <= 1.0 / d:
        return 0.0
    if fidelity <= 4.0 * (d - 1.0) / d**2:
        gamma = (np.sqrt(fidelity) + np.sqrt((d - 1.0) * (1.0 - fidelity))) ** 2 / d
        return float(_binary_entropy(gamma) + (1.0 - gamma) * np.log2(d - 1.0))
    return float(d * np.log2(d - 1.0) / (d - 2.0) * (fidelity - 1.0) + np.log2(d))


def isotropic_state(fidelity: float, d: int) -> np.ndarray:
    """rho_F = F |Phi+><Phi+| + (1-F)(1 - |Phi+><Phi+|)/(d^2 - 1)."""
    if not 1.0 / d**2 <= fidelity <= 1.0:
        raise DomainError(f"F = {fidelity} outside [1/d^2, 1] for d = {d}")
    phi = np.zeros(d * d, dtype=complex)
    phi[:: d + 1] = 1.0 / np.sqrt(d)
    proj = np.outer(phi, phi.conj())
    return fidelity * proj + (1.0 - fidelity) * (np.eye(d * d) - proj) / (d * d - 1.0)


def _ring_ground_state(bj: float) -> np.ndarray:
    params = SpinRingParams(jxy=1.0, jz=1.0, field=RADIAL, b=bj)
    return eigh(build_hamiltonian(params)).eigenvectors[:, 0]


def oracle_suite() -> list[OracleCase]:
    """Validation grid: GHZ/W mixtures, isotropic EOF (d = 2, 3), identities."""
    cases = []
    for p in np.linspace(0.0, 1.0, 11):
        cases.append(
            OracleCase(
                label=f"ghz_w_mixture_p={p:.2f}",
                state=ghz_w_state(p),
                measure=THREE_TANGLE,
                expected=ghz_w_mixture_tangle(p),
                tolerance=1e-6,
            )
        )
    for d, tol in ((2, 1e-6), (3, 1e-5)):
        measure = entropy_measure(d, d)
        for f in np.linspace(1.0 / d**2, 1.0, 9):
            cases.append(
                OracleCase(
                    label=f"isotropic_eof_d={d}_F={f:.4f}",
                    state=isotropic_state(f, d),
                    measure=measure,
                    expected=isotropic_eof(f, d),
                    tolerance=tol,
                )
            )
    ghz, w = ghz_plus(), w_state()
    product = np.zeros(8, dtype=complex)
    product[0] = 1.0
    for label, psi, expected in (
        ("pure_ghz", ghz, 1.0),
        ("pure_w", w, 0.0),
        ("pure_product", product, 0.0),
    ):
        cases.append(
            OracleCase(
                label=label,
                state=np.outer(psi, psi.conj()),
                measure=THREE_TANGLE,
                expected=expected,
                tolerance=1e-8,
            )
        )
    for bj in (0.1, 0.5, 1.0):
        gs = _ring_ground_state(bj)
        cases.append(
            OracleCase(
                label=f"ring_ground_tangle_bj={bj:.2f}",
                state=np.outer(gs, gs.conj()),
                measure=THREE_TANGLE,
                expected=ground_tangle_closed_form(bj),
                tolerance=1e-6,
            )
        )
    return cases


def brute_force_roof(rho, m: PureMeasure, samples: int = 100000, rng=0) -> float:
    """Minimum decomposition average over random unitaries (upper bound).

    Samples are split over cardinalities K = R .. R+3; each Haar K x K
    unitary induces one decomposition of rho.
    """
    factor = factor_density_matrix(rho)
    r = len(factor.eigenvalues)
    brows = _factor_rows(factor)
    rng = np.random.default_rng(rng)
    best = np.inf
    for kk in range(r, r + 4):
        n = max(1, samples // 4)
        z = rng.standard_normal((n, kk, kk)) + 1j * rng.standard_normal((n, kk, kk))
        q, rr = np.linalg.qr(z)
        diag = np.diagonal(rr, axis1=1, axis2=2)
        q = q * (diag / np.abs(diag))[:, None, :]
        tilde = q[:, :, :r] @ brows
        flat = tilde.reshape(-1, brows.shape[1])
        p = np.einsum("nd,nd->n", flat, flat.conj()).real
        terms = np.zeros(p.shape)
        active = p > WEIGHT_FLOOR
        psi = flat[active] / np.sqrt(p[active])[:, None]
        terms[active] = p[active] * m.evaluate_batch(psi)
        best = min(best, float(terms.reshape(n, kk).sum(axis=1).min()))
    return best
