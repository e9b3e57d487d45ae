"""Pure-state entanglement measures and their batched evaluation.

The three-tangle of a three-qubit pure state is
    tau_p = 4 det rho_1 - C^2(rho_12) - C^2(rho_13),
with C the Wootters two-qubit concurrence of the reduced states.  Scalar
entry points evaluate this definition literally through partial traces;
the batched entry points exploit that every reduced state here has rank
at most two, which collapses the concurrence to a closed form (see
tangle_batch).  Both routes are exact and agree to machine precision.

Batched functions assume unit-norm rows and skip validation; they are
the optimizer's inner loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from typing import Callable

import numpy as np

from .linalg import check_density_matrix, check_pure_state, eigh, partial_trace

# sigma_y (x) sigma_y, the two-qubit spin-flip kernel (real in this basis)
_SPIN_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)

BOUNDARY_TOL = 1e-12


class NumericalInconsistencyError(RuntimeError):
    """A quantity left its analytic range by more than rounding noise."""


@dataclass(frozen=True)
class PureMeasure:
    """A pure-state monotone with scalar and batched evaluation routes.

    ``evaluate`` takes one state vector; ``evaluate_batch`` takes an
    (n, dim) array of unit-norm rows.  Fields are module-level callables
    so instances stay picklable for process pools.
    """

    label: str
    evaluate: Callable[[np.ndarray], float]
    evaluate_batch: Callable[[np.ndarray], np.ndarray]
    upper_bound: float


def _clamp_tangle(values: np.ndarray) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if np.any(v < -BOUNDARY_TOL) or np.any(v > 1.0 + BOUNDARY_TOL):
        worst = v[np.argmax(np.abs(v - 0.5))]
        raise NumericalInconsistencyError(
            f"tangle value {worst} outside [0, 1] beyond tolerance {BOUNDARY_TOL}"
        )
    return np.clip(v, 0.0, 1.0)


def concurrence_mixed(rho: np.ndarray) -> float:
    """Wootters concurrence of an arbitrary two-qubit density matrix.

    C = max(0, mu1 - mu2 - mu3 - mu4) with mu_i the decreasing singular
    values of sqrt(rho) . (sigma_y x sigma_y) . sqrt(rho)*; these equal
    the square roots of the eigenvalues of rho rho~.
    """
    rho = check_density_matrix(rho, 4)
    w, v = eigh(rho)
    q = (v * np.sqrt(np.maximum(w, 0.0))) @ v.conj().T
    mu = np.linalg.svd(q @ _SPIN_FLIP @ q.conj(), compute_uv=False)
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def tangle_pure(psi: np.ndarray) -> float:
    """Three-tangle of a three-qubit pure state (literal definition)."""
    psi = check_pure_state(psi, 8)
    rho = np.outer(psi, psi.conj())
    rho1 = partial_trace(rho, (2, 2, 2), (2, 3))
    c12 = concurrence_mixed(partial_trace(rho, (2, 2, 2), (3,)))
    c13 = concurrence_mixed(partial_trace(rho, (2, 2, 2), (2,)))
    det1 = (rho1[0, 0] * rho1[1, 1] - rho1[0, 1] * rho1[1, 0]).real
    return float(_clamp_tangle(4.0 * det1 - c12 * c12 - c13 * c13))


def _rank2_concurrence(z: np.ndarray) -> np.ndarray:
    """Concurrence sigma_1 - sigma_2 of N = Z^T (sigma_y x sigma_y) Z.

    Z is an (n, 4, 2) stack of factors of rank-<=2 two-qubit states
    rho = Z Z^dagger; the nonzero eigenvalues of rho rho~ are the squared
    singular values of the complex symmetric 2x2 matrix N.
    """
    n = np.matmul(z.transpose(0, 2, 1), np.matmul(_SPIN_FLIP, z))
    g = np.abs(n).reshape(-1, 4) ** 2
    g = g.sum(axis=1)
    d = np.abs(n[:, 0, 0] * n[:, 1, 1] - n[:, 0, 1] * n[:, 1, 0])
    disc = np.sqrt(np.maximum(g * g - 4.0 * d * d, 0.0))
    s1 = np.sqrt(0.5 * (g + disc))
    s2 = np.where(s1 > 0.0, d / np.where(s1 > 0.0, s1, 1.0), 0.0)
    return s1 - s2


def tangle_batch(states: np.ndarray) -> np.ndarray:
    """Three-tangle of each row of an (n, 8) array of unit-norm states."""
    t = states.reshape(-1, 2, 2, 2)
    rho1 = np.einsum("nijk,nljk->nil", t, t.conj())
    det1 = (rho1[:, 0, 0] * rho1[:, 1, 1] - rho1[:, 0, 1] * rho1[:, 1, 0]).real
    c12 = _rank2_concurrence(states.reshape(-1, 4, 2))
    c13 = _rank2_concurrence(t.transpose(0, 1, 3, 2).reshape(-1, 4, 2))
    return _clamp_tangle(4.0 * det1 - c12 * c12 - c13 * c13)


def entropy_batch(states: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Entanglement entropy (base-2) of each row under the d1 x d2 split."""
    d1, d2 = dims
    s = np.linalg.svd(states.reshape(-1, d1, d2), compute_uv=False)
    p = s * s
    plogp = np.where(p > 1e-300, p * np.log2(np.where(p > 1e-300, p, 1.0)), 0.0)
    return np.maximum(-plogp.sum(axis=1), 0.0)


def entanglement_entropy(psi: np.ndarray, dims: tuple[int, int]) -> float:
    """Von Neumann entropy of the reduced state across the d1 x d2 cut."""
    d1, d2 = dims
    psi = check_pure_state(psi, d1 * d2)
    return float(entropy_batch(psi[None, :], dims)[0])


def hyperdeterminant_tangle(psi: np.ndarray) -> float:
    """Three-tangle as 4 |d1 - 2 d2 + 4 d3| of the 2x2x2 hyperdeterminant.

    Independent of the reduced-state route; used only for cross-checks.
    """
    a = check_pure_state(psi, 8).reshape(2, 2, 2)
    d1 = (
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
    )
    d2 = (
        a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
        + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1]
    )
    d3 = (
        a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
        + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
    )
    return float(4.0 * np.abs(d1 - 2.0 * d2 + 4.0 * d3))


THREE_TANGLE = PureMeasure(
    label="ThreeTangle",
    evaluate=tangle_pure,
    evaluate_batch=tangle_batch,
    upper_bound=1.0,
)


def entropy_measure(d1: int, d2: int) -> PureMeasure:
    """Entanglement-entropy measure for a fixed d1 x d2 bipartition."""
    return PureMeasure(
        label=f"EntanglementEntropy({d1}x{d2})",
        evaluate=partial(entanglement_entropy, dims=(d1, d2)),
        evaluate_batch=partial(entropy_batch, dims=(d1, d2)),
        upper_bound=float(np.log2(min(d1, d2))),
    )
