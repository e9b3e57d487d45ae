"""Shared fixtures: seeded generators and a few standard states."""

from __future__ import annotations

import numpy as np
import pytest

from tangleroof import spinring as sr


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def random_density_matrix(rng: np.random.Generator, dim: int, rank: int) -> np.ndarray:
    a = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture(scope="session")
def thermal_rank2():
    """Thermal ring state that is numerically rank 2: a GHZ tunnel doublet."""
    params = sr.SpinRingParams(jxy=1.0, jz=1.0, field=sr.RADIAL, b=0.11,
                               temperature=1e-4)
    return sr.thermal_state(sr.build_hamiltonian(params), params.temperature)
