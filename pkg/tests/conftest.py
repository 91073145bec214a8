"""Shared test helpers: seeded random states and unitaries."""

import numpy as np
import pytest


def random_density(rng, dim: int) -> np.ndarray:
    """Random full-rank density matrix (normalized Wishart)."""
    gauss = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    mat = gauss @ gauss.conj().T
    return mat / np.real(np.trace(mat))


def random_unitary(rng, dim: int) -> np.ndarray:
    """Haar-random unitary via QR with phase fixing."""
    gauss = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(gauss)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_pure_density(rng, dim: int) -> np.ndarray:
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    vec /= np.linalg.norm(vec)
    return np.outer(vec, vec.conj())


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
