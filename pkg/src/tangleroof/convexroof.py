"""Convex-roof minimization by conjugate gradient over unitary matrices.

A rank-R density matrix rho = sum_i lam_i |v_i><v_i| and a K x K unitary U
(K = R + cardinality_offset) define the pure-state decomposition

    |psi~_j> = sum_{i<=R} U_ji sqrt(lam_i) |v_i>,   p_j = <psi~_j|psi~_j>,

and every decomposition of rho into at most K states arises this way.  The
roof of a pure measure m is approached by minimizing

    h(U) = sum_j p_j m(psi_j)

with geodesic steps U -> U exp(tX), X skew-Hermitian.  The gradient G is
assembled from central finite differences of h with respect to the real
and imaginary parts of the first R columns of U:

    A_jk = sum_i [Re U_ij dh/dRe U_ik + Im U_ij dh/dIm U_ik]
    S_jk = sum_i [Re U_ij dh/dIm U_ik - Im U_ij dh/dRe U_ik]
    G_jk = (A_jk - A_kj)/2 + i (S_jk + S_kj)/2

which is skew-Hermitian by construction and pairs with directions through
d/dt h(U exp(tX))|_0 = Re tr(G^dag X).  Finite-difference probes perturb
one subnormalized state each, so all 4KR of them evaluate in a single
batched measure call; the line search diagonalizes iX once and reuses it
for every trial step.  Each restart is an independent descent from a Haar
random unitary; the reported value is the minimum over restarts and is
always an upper bound on the roof.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import check_density_matrix, eigh
from .measures import PureMeasure

WEIGHT_FLOOR = 1e-14
RANK_RTOL = 1e-12
DRIFT_TOL = 1e-10
GRAD_NORM_TOL = 1e-9
VALUE_FLOOR_SCALE = 1e-13
SMALL_STEPS_TO_CONVERGE = 5


class RankMismatchError(ValueError):
    """Stiefel point rank does not match the density-matrix factor."""


class NoDecreaseError(RuntimeError):
    """Line search found no decrease along the given direction."""


class RhoFactor(NamedTuple):
    """Spectral factor of rho truncated to its numerical rank.

    eigenvalues are descending and positive; eigenvectors holds the
    matching orthonormal columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class OptimizerOptions:
    cardinality_offset: int = 4
    restarts: int = 16
    max_iterations: int = 5000
    gradient_step: float = 1e-5
    convergence_tol: float = 1e-12
    line_search_tol: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.cardinality_offset < 1:
            raise ValueError("cardinality_offset must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.gradient_step > 0:
            raise ValueError("gradient_step must be > 0")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be > 0")
        if not 0 < self.line_search_tol < 1:
            raise ValueError("line_search_tol must be in (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


@dataclass(frozen=True)
class StiefelPoint:
    """K x K unitary of which only the first r columns enter the objective."""

    k: int
    r: int
    u: np.ndarray

    def __post_init__(self):
        if not 1 <= self.r <= self.k:
            raise ValueError(f"need K >= R >= 1, got K = {self.k}, R = {self.r}")
        u = np.asarray(self.u, dtype=complex)
        if u.shape != (self.k, self.k):
            raise ValueError(f"u has shape {u.shape}, expected ({self.k}, {self.k})")
        drift = np.max(np.abs(u.conj().T @ u - np.eye(self.k)))
        if drift > DRIFT_TOL:
            raise ValueError(f"u is not unitary: max |U^dag U - 1| = {drift:.3e}")
        object.__setattr__(self, "u", u)


@dataclass(frozen=True)
class PureDecomposition:
    """Weights p_j and unit-norm states |psi_j> with sum_j p_j psi psi^dag = rho."""

    weights: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < -1e-14) or abs(w.sum() - 1.0) > 1e-8:
            raise ValueError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", np.asarray(self.states, dtype=complex))


@dataclass(frozen=True)
class ConvexRoofResult:
    value: float
    decomposition: PureDecomposition
    restart_values: np.ndarray
    iterations: int
    converged: bool


def factor_density_matrix(rho, rtol: float = RANK_RTOL) -> RhoFactor:
    """Eigendecomposition of rho keeping eigenvalues above rtol * lam_max."""
    rho = check_density_matrix(rho)
    w, v = eigh(rho)
    keep = w > rtol * w[-1]
    return RhoFactor(
        eigenvalues=w[keep][::-1].copy(),
        eigenvectors=v[:, keep][:, ::-1].copy(),
    )


def _factor_rows(factor: RhoFactor) -> np.ndarray:
    """(R, dim) array whose row i is sqrt(lam_i) <.|v_i>."""
    return (factor.eigenvectors * np.sqrt(factor.eigenvalues)).T


def _weighted_terms(tilde: np.ndarray, m: PureMeasure) -> np.ndarray:
    """p_j * m(psi_j) per subnormalized row; rows below WEIGHT_FLOOR give 0."""
    p = np.einsum("nd,nd->n", tilde, tilde.conj()).real
    out = np.zeros(p.shape)
    active = p > WEIGHT_FLOOR
    if np.any(active):
        psi = tilde[active] / np.sqrt(p[active])[:, None]
        out[active] = p[active] * m.evaluate_batch(psi)
    return out


def _re_inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.vdot(a, b).real)


def _haar_unitary(k: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _reunitarize(u: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(u)
    return w @ vh


def random_stiefel(k: int, rng, r: int | None = None) -> StiefelPoint:
    """Haar-random K x K unitary viewed as a Stiefel point of rank r (default k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng(rng)
    return StiefelPoint(k=k, r=k if r is None else r, u=_haar_unitary(k, rng))


def decomposition_from_stiefel(factor: RhoFactor, point: StiefelPoint) -> PureDecomposition:
    """Decomposition {p_j, psi_j} induced by the first R columns of point.u.

    Zero-weight members get an arbitrary unit vector (first basis state).
    """
    _check_rank(point, factor)
    tilde = point.u[:, : point.r] @ _factor_rows(factor)
    return _decomposition_from_rows(tilde)


def _decomposition_from_rows(tilde: np.ndarray) -> PureDecomposition:
    p = np.einsum("nd,nd->n", tilde, tilde.conj()).real
    states = np.zeros_like(tilde)
    active = p > WEIGHT_FLOOR
    states[active] = tilde[active] / np.sqrt(p[active])[:, None]
    states[~active, 0] = 1.0
    return PureDecomposition(weights=np.maximum(p, 0.0), states=states)


def _check_rank(point: StiefelPoint, factor: RhoFactor) -> None:
    r = len(factor.eigenvalues)
    if point.r != r:
        raise RankMismatchError(f"point rank {point.r} != factor rank {r}")


def objective_from_factor(point: StiefelPoint, factor: RhoFactor, m: PureMeasure) -> float:
    """h(U) = sum_j p_j m(psi_j) for an explicit spectral factor of rho."""
    _check_rank(point, factor)
    return float(_weighted_terms(point.u[:, : point.r] @ _factor_rows(factor), m).sum())


def objective(point: StiefelPoint, rho, m: PureMeasure) -> float:
    return objective_from_factor(point, factor_density_matrix(rho), m)


def _gradient_u(u: np.ndarray, brows: np.ndarray, m: PureMeasure, step: float) -> np.ndarray:
    kk = u.shape[0]
    r, dim = brows.shape
    base = u[:, :r] @ brows
    pert = step * brows
    probes = np.empty((4, kk, r, dim), dtype=complex)
    probes[0] = base[:, None, :] + pert[None]
    probes[1] = base[:, None, :] - pert[None]
    probes[2] = base[:, None, :] + 1j * pert[None]
    probes[3] = base[:, None, :] - 1j * pert[None]
    terms = _weighted_terms(probes.reshape(-1, dim), m).reshape(4, kk, r)
    d_re = (terms[0] - terms[1]) / (2.0 * step)
    d_im = (terms[2] - terms[3]) / (2.0 * step)
    a = np.zeros((kk, kk))
    s = np.zeros((kk, kk))
    ur, ui = u.real, u.imag
    a[:, :r] = ur.T @ d_re + ui.T @ d_im
    s[:, :r] = ur.T @ d_im - ui.T @ d_re
    return 0.5 * (a - a.T) + 0.5j * (s + s.T)


def gradient_from_factor(
    point: StiefelPoint, factor: RhoFactor, m: PureMeasure, step: float = 1e-5
) -> np.ndarray:
    """Skew-Hermitian gradient of h at point.u (finite differences of step)."""
    if not step > 0:
        raise ValueError("step must be > 0")
    _check_rank(point, factor)
    return _gradient_u(point.u, _factor_rows(factor), m, step)


def gradient(point: StiefelPoint, rho, m: PureMeasure, step: float = 1e-5) -> np.ndarray:
    return gradient_from_factor(point, factor_density_matrix(rho), m, step)


class _Geodesic:
    """h along t -> U exp(tX), with exp(tX) from one eigendecomposition of iX."""

    def __init__(self, u, x, brows, m):
        lam, v = eigh(1j * x)
        self.lam = lam
        self.v = v
        self.sigma_max = float(np.max(np.abs(lam)))
        self.w_rot = u @ v
        self.c = v.conj().T[:, : brows.shape[0]] @ brows
        self.m = m

    def value(self, t: float) -> float:
        phases = np.exp(-1j * t * self.lam)
        return float(_weighted_terms((self.w_rot * phases) @ self.c, self.m).sum())

    def endpoint(self, t: float) -> np.ndarray:
        phases = np.exp(-1j * t * self.lam)
        return (self.w_rot * phases) @ self.v.conj().T


_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _line_search_u(
    u: np.ndarray,
    x: np.ndarray,
    brows: np.ndarray,
    m: PureMeasure,
    rel_tol: float,
    h0: float,
    t_init: float | None,
):
    """Bracket + golden section along the geodesic; returns (t*, h(t*), geo).

    Raises NoDecreaseError when no strictly smaller value is found; a
    geodesic that is constant to machine precision returns t* = 0 instead.
    """
    geo = _Geodesic(u, x, brows, m)
    if geo.sigma_max == 0.0:
        raise NoDecreaseError("zero direction")
    t_max = np.pi / geo.sigma_max

    t = 0.5 * t_max if t_init is None else float(np.clip(t_init, 0.0, t_max))
    if t == 0.0:
        t = 0.5 * t_max
    ht = geo.value(t)
    flat_tol = 1e-15 * max(1.0, abs(h0))
    seen_change = abs(ht - h0) > flat_tol
    shrinks = 0
    while ht >= h0 and shrinks < 40 and t > 1e-14 * t_max:
        t *= 0.5
        ht = geo.value(t)
        seen_change = seen_change or abs(ht - h0) > flat_tol
        shrinks += 1
    if ht >= h0:
        if not seen_change:
            return 0.0, h0, geo
        raise NoDecreaseError("objective does not decrease along direction")

    lo = 0.0
    hi = min(2.0 * t, t_max)
    hhi = geo.value(hi)
    while hhi < ht and hi < t_max:
        lo, t, ht = t, hi, hhi
        hi = min(2.0 * hi, t_max)
        hhi = geo.value(hi)

    a, b = lo, hi
    width0 = b - a
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = geo.value(x1), geo.value(x2)
    while (b - a) > rel_tol * width0:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = geo.value(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = geo.value(x2)
    h_star, t_star = min((ht, t), (f1, x1), (f2, x2))
    return t_star, h_star, geo


def line_search(
    point: StiefelPoint,
    direction: np.ndarray,
    rho,
    m: PureMeasure,
    line_search_tol: float = 1e-4,
    t_init: float | None = None,
) -> tuple[float, float]:
    """Geodesic minimization of h from point.u along a skew-Hermitian direction."""
    x = np.asarray(direction, dtype=complex)
    if np.max(np.abs(x + x.conj().T)) > 1e-10:
        raise ValueError("direction must be skew-Hermitian")
    factor = factor_density_matrix(rho)
    _check_rank(point, factor)
    brows = _factor_rows(factor)
    h0 = float(_weighted_terms(point.u[:, : point.r] @ brows, m).sum())
    t_star, h_star, _ = _line_search_u(point.u, x, brows, m, line_search_tol, h0, t_init)
    return t_star, h_star


def _cg_descent(
    u0: np.ndarray, brows: np.ndarray, m: PureMeasure, opts: OptimizerOptions
) -> tuple[np.ndarray, float, int, bool]:
    """One restart: CG with Polak-Ribiere-plus updates and periodic resets."""
    kk = u0.shape[0]
    r = brows.shape[0]
    reset_period = kk * kk
    value_floor = VALUE_FLOOR_SCALE * m.upper_bound
    eye = np.eye(kk)

    u = u0
    h = float(_weighted_terms(u[:, :r] @ brows, m).sum())
    g = _gradient_u(u, brows, m, opts.gradient_step)
    x = -g
    since_reset = 0
    warm_t = None
    small = 0
    converged = False
    it = 0
    while it < opts.max_iterations:
        it += 1
        if np.sqrt(_re_inner(g, g)) <= GRAD_NORM_TOL or h <= value_floor:
            converged = True
            break
        if _re_inner(g, x) >= 0.0:
            # not a descent direction: fall back to steepest descent
            x = -g
            since_reset = 0
        try:
            t_star, h_new, geo = _line_search_u(
                u, x, brows, m, opts.line_search_tol, h, warm_t
            )
        except NoDecreaseError:
            if since_reset == 0:
                break
            x = -g
            since_reset = 0
            warm_t = None
            continue
        if t_star == 0.0:
            if since_reset == 0:
                converged = True
                break
            x = -g
            since_reset = 0
            warm_t = None
            continue
        u = geo.endpoint(t_star)
        if np.max(np.abs(u.conj().T @ u - eye)) > DRIFT_TOL:
            u = _reunitarize(u)
            h_new = float(_weighted_terms(u[:, :r] @ brows, m).sum())
        warm_t = t_star
        dh = h - h_new
        h = h_new
        small = small + 1 if dh <= opts.convergence_tol * max(1.0, abs(h)) else 0
        if small >= SMALL_STEPS_TO_CONVERGE:
            converged = True
            break
        g_new = _gradient_u(u, brows, m, opts.gradient_step)
        since_reset += 1
        if since_reset >= reset_period:
            beta = 0.0
        else:
            den = _re_inner(g, g)
            beta = max(0.0, _re_inner(g_new - g, g_new) / den) if den > 0.0 else 0.0
        if beta == 0.0:
            since_reset = 0
            x = -g_new
        else:
            x = -g_new + beta * x
        g = g_new
    # report h recomputed from U so the value matches the decomposition bitwise
    h = float(_weighted_terms(u[:, :r] @ brows, m).sum())
    return u, h, it, converged


def minimize(rho, m: PureMeasure, opts: OptimizerOptions | None = None) -> ConvexRoofResult:
    """Upper bound on the convex roof of m at rho, minimized over restarts."""
    if opts is None:
        opts = OptimizerOptions()
    factor = factor_density_matrix(rho)
    r = len(factor.eigenvalues)
    kk = r + opts.cardinality_offset
    brows = _factor_rows(factor)

    best_u = None
    best_h = np.inf
    best_converged = False
    restart_values = np.empty(opts.restarts)
    total_iterations = 0
    for i, child in enumerate(np.random.SeedSequence(opts.seed).spawn(opts.restarts)):
        rng = np.random.default_rng(child)
        u, h, used, conv = _cg_descent(_haar_unitary(kk, rng), brows, m, opts)
        restart_values[i] = h
        total_iterations += used
        if h < best_h:
            best_u, best_h, best_converged = u, h, conv

    decomposition = _decomposition_from_rows(best_u[:, :r] @ brows)
    return ConvexRoofResult(
        value=max(0.0, best_h),
        decomposition=decomposition,
        restart_values=restart_values,
        iterations=total_iterations,
        converged=best_converged,
    )
