import numpy as np
import pytest

from eeps import Bipartition, OrbitalSet, SingleParticleState


def random_orthonormal_set(rng: np.random.Generator, L: int, N: int) -> OrbitalSet:
    """Haar-ish orthonormal orbitals from the QR of a random complex matrix."""
    M = rng.standard_normal((L, N)) + 1j * rng.standard_normal((L, N))
    Q, _ = np.linalg.qr(M)
    return OrbitalSet(tuple(SingleParticleState(Q[:, n]) for n in range(N)))


def random_contiguous_cut(rng: np.random.Generator, L: int) -> Bipartition:
    size = int(rng.integers(1, L))
    start = int(rng.integers(0, L - size + 1))
    return Bipartition(L, tuple(range(start, start + size)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
