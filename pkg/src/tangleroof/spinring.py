"""Three-qubit anisotropic Heisenberg ring in site-dependent magnetic fields.

Model:  H = -Jxy sum_i (Sx_i Sx_{i+1} + Sy_i Sy_{i+1}) - Jz sum_i Sz_i Sz_{i+1}
            - sum_i b_i . S_i,          S_4 = S_1,  S = sigma/2,  hbar = k_B = 1.

All energies (jxy, jz, b, temperature, eigenvalues) share one reference unit.
Basis: computational |s1 s2 s3> with site 1 the most significant bit and
up mapped to bit 0.  The Zeeman sign is chosen so that a field along +z
favors spin-up alignment; with this convention a uniform z field makes the
W state (one flipped spin) the exact ground state for jxy > 0 and
b < jxy - jz.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import eigh, kron

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

DEGENERACY_RTOL = 1e-12


class DomainWarning(UserWarning):
    """Closed-form expression evaluated outside its accuracy regime."""


@dataclass(frozen=True)
class FieldKind:
    """Magnetic field configuration of the three sites.

    ``kind`` is one of "radial", "uniform_z", "uniform_x", "custom";
    "custom" carries its three explicit Zeeman vectors (ignores b).
    """

    kind: str
    vectors: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("radial", "uniform_z", "uniform_x", "custom"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "custom":
            v = np.asarray(self.vectors, dtype=float)
            if v.shape != (3, 3) or not np.all(np.isfinite(v)):
                raise ValueError("custom field needs three finite 3-vectors")
        elif self.vectors is not None:
            raise ValueError(f"field kind {self.kind!r} takes no explicit vectors")


RADIAL = FieldKind("radial")
UNIFORM_Z = FieldKind("uniform_z")
UNIFORM_X = FieldKind("uniform_x")


def custom_field(v1, v2, v3) -> FieldKind:
    return FieldKind("custom", tuple(tuple(float(c) for c in v) for v in (v1, v2, v3)))


@dataclass(frozen=True)
class SpinRingParams:
    """Ring couplings, field configuration and temperature (one unit system)."""

    jxy: float
    jz: float
    field: FieldKind = RADIAL
    b: float = 0.0
    temperature: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.jxy) and np.isfinite(self.jz)):
            raise ValueError("couplings must be finite")
        if not (self.b >= 0.0 and np.isfinite(self.b)):
            raise ValueError(f"b = {self.b} must be >= 0")
        if not (self.temperature >= 0.0 and np.isfinite(self.temperature)):
            raise ValueError(f"temperature = {self.temperature} must be >= 0")


@dataclass(frozen=True)
class SpectrumReport:
    energies: np.ndarray
    ground_degeneracy: int
    splitting_01: float


@dataclass(frozen=True)
class WOptimum:
    """Optimal uniform-z Zeeman energy and the resulting gap in the W regime."""

    b_opt: float
    delta_e_opt: float


def field_vectors(kind: FieldKind, b: float) -> np.ndarray:
    """Three Zeeman vectors (rows), site i at row i-1.

    Radial: in-plane, site i at azimuth 2 pi (i-1)/3, magnitude b; the
    three vectors sum to zero.  Uniform kinds repeat (0,0,b) or (b,0,0).
    """
    if b < 0:
        raise ValueError(f"b = {b} must be >= 0")
    if kind.kind == "radial":
        az = 2.0 * np.pi * np.arange(3) / 3.0
        return b * np.column_stack([np.cos(az), np.sin(az), np.zeros(3)])
    if kind.kind == "uniform_z":
        return np.tile([0.0, 0.0, b], (3, 1))
    if kind.kind == "uniform_x":
        return np.tile([b, 0.0, 0.0], (3, 1))
    return np.asarray(kind.vectors, dtype=float).copy()


def _site_spin_operators() -> list[list[np.ndarray]]:
    """[site][component] spin-1/2 operators on the 8-dim space, site 1 first."""
    half = [0.5 * PAULI_X, 0.5 * PAULI_Y, 0.5 * PAULI_Z]
    ops = []
    for site in range(3):
        site_ops = []
        for s in half:
            factors = [IDENTITY_2, IDENTITY_2, IDENTITY_2]
            factors[site] = s
            site_ops.append(kron(kron(factors[0], factors[1]), factors[2]))
        ops.append(site_ops)
    return ops


_SPIN_OPS = _site_spin_operators()


def build_hamiltonian(params: SpinRingParams) -> np.ndarray:
    """Assemble the 8x8 ring Hamiltonian; Hermitian by construction."""
    s = _SPIN_OPS
    h = np.zeros((8, 8), dtype=complex)
    for i in range(3):
        j = (i + 1) % 3
        h -= params.jxy * (s[i][0] @ s[j][0] + s[i][1] @ s[j][1])
        h -= params.jz * (s[i][2] @ s[j][2])
    vecs = field_vectors(params.field, params.b)
    for i in range(3):
        for c in range(3):
            if vecs[i, c] != 0.0:
                h -= vecs[i, c] * s[i][c]
    return h


def _ground_cluster_size(energies: np.ndarray, rtol: float = DEGENERACY_RTOL) -> int:
    e0 = energies[0]
    tol = rtol * max(1.0, abs(e0))
    return int(np.count_nonzero(energies - e0 <= tol))


def spectrum(h) -> SpectrumReport:
    """Sorted energies, ground degeneracy and gap to the first distinct level."""
    w, _ = eigh(h)
    g = _ground_cluster_size(w)
    split = float(w[g] - w[0]) if g < w.size else 0.0
    return SpectrumReport(energies=w, ground_degeneracy=g, splitting_01=split)


def thermal_state(h, temperature: float) -> np.ndarray:
    """Canonical density matrix exp(-(H - E0)/T)/Z, computed in the eigenbasis.

    At T = 0 the state is the equal-weight mixture over the numerically
    degenerate ground space (relative degeneracy tolerance 1e-12).
    """
    if temperature < 0:
        raise ValueError(f"temperature = {temperature} must be >= 0")
    w, v = eigh(h)
    if temperature == 0.0:
        g = _ground_cluster_size(w)
        weights = np.zeros_like(w)
        weights[:g] = 1.0 / g
    else:
        weights = np.exp(-(w - w[0]) / temperature)
        weights /= weights.sum()
    rho = (v * weights) @ v.conj().T
    return 0.5 * (rho + rho.conj().T)


def w_conditions(jxy: float, jz: float) -> WOptimum | None:
    """Optimal field and gap for the exact-W-ground-state regime.

    Applicable iff jxy > 0 and jxy > jz; returns None otherwise.
    """
    if not (jxy > 0.0 and jxy > jz):
        return None
    b_opt = 0.5 * (jxy - jz)
    delta = 1.5 * jxy if jz < -2.0 * jxy else 0.5 * (jxy - jz)
    return WOptimum(b_opt=b_opt, delta_e_opt=delta)


def classical_energy(bj: float, theta: float, phi: float) -> float:
    """Second-order classical energy surface over the mean spin direction.

    Valid for 0 < bj < 1 (weak-field expansion; emits DomainWarning for
    bj >= 0.5).  The constant coupling-only offset is dropped: only the
    field-dependent variational part is returned,
        -(bj^2/8) (3 + cos 2 theta) + (bj^3/24) sin(3 phi) sin^3 theta.
    """
    if not (0.0 < bj < 1.0):
        raise ValueError(f"bj = {bj} outside the expansion domain (0, 1)")
    if bj >= 0.5:
        warnings.warn(f"bj = {bj} >= 0.5: expansion accuracy degrades", DomainWarning)
    return float(
        -(bj**2 / 8.0) * (3.0 + np.cos(2.0 * theta))
        + (bj**3 / 24.0) * np.sin(3.0 * phi) * np.sin(theta) ** 3
    )


def classical_barrier(bj: float) -> float:
    """Barrier height between the two polar minima along the easiest azimuth."""
    if not (0.0 < bj < 1.0):
        raise ValueError(f"bj = {bj} outside the expansion domain (0, 1)")
    return (bj**2 - bj**3 / 6.0) / 4.0


def ground_tangle_closed_form(bj: float) -> float:
    """Ground-state tangle of the isotropic ring in a radial field b = bj * J.

    Algebraic form (3 - 8 bj)/C + 2/sqrt(C) with C = 9 + 4 bj (4 bj - 3).
    """
    if bj <= 0:
        raise ValueError(f"bj = {bj} must be > 0 (the b = 0 ground state is degenerate)")
    c = 9.0 + 4.0 * bj * (4.0 * bj - 3.0)
    return (3.0 - 8.0 * bj) / c + 2.0 / np.sqrt(c)


def ghz_overlap_leading_order(bj: float) -> float:
    """Second-order overlap of the radial-field ground state with its GHZ limit."""
    if bj <= 0:
        raise ValueError(f"bj = {bj} must be > 0")
    if bj >= 0.5:
        warnings.warn(f"bj = {bj} >= 0.5: expansion accuracy degrades", DomainWarning)
    return 1.0 - bj**2 / 3.0


def ghz_plus() -> np.ndarray:
    """(|up up up> + |down down down>)/sqrt(2)."""
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1.0 / np.sqrt(2.0)
    return v


def ghz_minus() -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[0] = 1.0 / np.sqrt(2.0)
    v[7] = -1.0 / np.sqrt(2.0)
    return v


def w_state() -> np.ndarray:
    """(|up up down> + |up down up> + |down up up>)/sqrt(3)."""
    v = np.zeros(8, dtype=complex)
    v[[1, 2, 4]] = 1.0 / np.sqrt(3.0)
    return v


def w_state_flipped() -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[[3, 5, 6]] = 1.0 / np.sqrt(3.0)
    return v
