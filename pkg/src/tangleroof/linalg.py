"""Dense complex linear algebra for few-qubit problems.

Everything here works on plain complex numpy arrays of dimension a few
dozen at most.  Inputs are validated strictly (Hermiticity, skewness,
dimension bookkeeping) because downstream optimization loops are much
easier to debug when bad matrices are rejected at the boundary.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

MAX_EIGH_DIM = 64
SYMMETRY_TOL = 1e-10


class NotHermitianError(ValueError):
    """Matrix is not Hermitian within tolerance."""


class NotSkewHermitianError(ValueError):
    """Matrix is not skew-Hermitian within tolerance."""


class DimensionMismatchError(ValueError):
    """Subsystem dimensions do not match the matrix shape."""


class NoConvergenceError(RuntimeError):
    """Eigensolver failed to converge."""


class InvalidStateError(ValueError):
    """Density matrix or state vector violates its invariants."""


class EighResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square_complex(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def eigh(m) -> EighResult:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized to (m + m^dag)/2 before decomposition; this
    absorbs the O(1e-16) accumulation error from Hamiltonian assembly.
    Raises NotHermitianError when max|m - m^dag| exceeds 1e-10.
    """
    a = _as_square_complex(m)
    if a.shape[0] > MAX_EIGH_DIM:
        raise DimensionMismatchError(
            f"dimension {a.shape[0]} exceeds supported maximum {MAX_EIGH_DIM}"
        )
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > SYMMETRY_TOL:
        raise NotHermitianError(f"max |m - m^dag| = {dev:.3e} exceeds {SYMMETRY_TOL:.0e}")
    a = 0.5 * (a + a.conj().T)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # extremely rare for Hermitian input
        raise NoConvergenceError(str(exc)) from exc
    return EighResult(w, v)


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry (i*rows_b + k, j*cols_b + l) = a[i,j] b[k,l]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho, dims: Sequence[int], traced: Sequence[int]) -> np.ndarray:
    """Trace out the given subsystems of a multipartite density matrix.

    Subsystems are numbered from 1, with subsystem 1 the most significant
    Kronecker factor.  ``dims`` lists all subsystem dimensions; ``traced``
    is the non-empty set of subsystem indices to remove.  The result acts
    on the remaining subsystems in their original order.
    """
    a = _as_square_complex(rho, "rho")
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionMismatchError(f"invalid subsystem dimensions {dims}")
    n = len(dims)
    if int(np.prod(dims)) != a.shape[0]:
        raise DimensionMismatchError(
            f"prod{dims} = {int(np.prod(dims))} does not match matrix dimension {a.shape[0]}"
        )
    traced_set = set(int(i) for i in traced)
    if not traced_set:
        raise DimensionMismatchError("traced subsystem set is empty")
    if not traced_set.issubset(range(1, n + 1)):
        raise DimensionMismatchError(f"traced indices {sorted(traced_set)} out of range 1..{n}")
    if len(traced_set) == n:
        raise DimensionMismatchError("cannot trace out every subsystem")

    t = a.reshape(dims + dims)
    # einsum with repeated letters on the traced (row, col) axis pairs
    row = [chr(ord("a") + i) for i in range(n)]
    col = [chr(ord("a") + n + i) for i in range(n)]
    for i in sorted(traced_set):
        col[i - 1] = row[i - 1]
    keep = [i for i in range(n) if (i + 1) not in traced_set]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    reduced = np.einsum("".join(row + col) + "->" + "".join(out), t)
    d_keep = int(np.prod([dims[i] for i in keep]))
    return reduced.reshape(d_keep, d_keep)


def expm_skew(x, t: float) -> np.ndarray:
    """exp(t x) for skew-Hermitian x, via eigh of the Hermitian matrix i x.

    Returns V exp(-i t lambda) V^dag, unitary to machine precision.
    """
    a = _as_square_complex(x, "x")
    dev = np.max(np.abs(a + a.conj().T)) if a.size else 0.0
    if dev > SYMMETRY_TOL:
        raise NotSkewHermitianError(f"max |x + x^dag| = {dev:.3e} exceeds {SYMMETRY_TOL:.0e}")
    w, v = eigh(1j * a)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def check_density_matrix(rho, dim: int | None = None) -> np.ndarray:
    """Validate a density matrix and return it as a complex array.

    Requires Hermiticity within 1e-10, unit trace within 1e-10 and all
    eigenvalues >= -1e-10.  Raises InvalidStateError otherwise.
    """
    a = _as_square_complex(rho, "rho")
    if dim is not None and a.shape[0] != dim:
        raise InvalidStateError(f"expected dimension {dim}, got {a.shape[0]}")
    dev = np.max(np.abs(a - a.conj().T))
    if dev > SYMMETRY_TOL:
        raise InvalidStateError(f"not Hermitian: max deviation {dev:.3e}")
    tr = np.trace(a)
    if abs(tr - 1.0) > 1e-10:
        raise InvalidStateError(f"trace = {tr} is not 1 within 1e-10")
    wmin = float(np.min(np.linalg.eigvalsh(0.5 * (a + a.conj().T))))
    if wmin < -1e-10:
        raise InvalidStateError(f"negative eigenvalue {wmin:.3e}")
    return a


def check_pure_state(psi, dim: int | None = None) -> np.ndarray:
    """Validate a unit-norm state vector (tolerance 1e-12 on the norm)."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if dim is not None and v.size != dim:
        raise InvalidStateError(f"expected dimension {dim}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise InvalidStateError("state vector contains non-finite entries")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > 1e-12:
        raise InvalidStateError(f"norm = {nrm!r} is not 1 within 1e-12")
    return v
