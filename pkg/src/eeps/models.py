"""Single-particle lattice Hamiltonians and their eigenbases.

Covers the disordered (Anderson) chain, the clean tight-binding chain,
the staggered-potential chain, and the central-site model where one
extra orbital couples uniformly to every chain site.  Hopping t is the
energy unit.  Site indexing starts at 1, so the staggered potential
reads (-mu)^i with i = 1..L and the first site carries -mu.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import NumericalError, SingleParticleState

SYMMETRY_TOL = 1e-12
RESIDUAL_TOL = 1e-8


def derived_seed_sequence(seed: int, task_index: int) -> np.random.SeedSequence:
    """Deterministic per-task RNG stream.

    Realization (or sample) number ``task_index`` of experiment ``seed``
    uses SeedSequence(entropy=seed, spawn_key=(task_index,)); streams
    are independent and reproducible across platforms and thread counts.
    """
    return np.random.SeedSequence(entropy=seed, spawn_key=(task_index,))


@dataclass(frozen=True)
class ChainSpec:
    """Parameters of a 1D chain Hamiltonian.

    potential_kind is one of "zero", "random_uniform" (i.i.d. uniform
    on [-W, W]), or "staggered" ((-mu)^i).  A positive
    central_site_coupling appends an extra orbital coupled to every
    chain site with strength coupling/sqrt(L), enlarging the matrix to
    dimension L+1.
    """

    L: int
    hopping: float = 1.0
    disorder_width: float = 0.0
    boundary: str = "open"
    potential_kind: str = "zero"
    mu: float = 0.0
    central_site_coupling: float = 0.0

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("need L >= 2")
        if self.disorder_width < 0:
            raise ValueError("disorder width must be nonnegative")
        if self.central_site_coupling < 0:
            raise ValueError("central-site coupling must be nonnegative")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.potential_kind not in ("zero", "random_uniform", "staggered"):
            raise ValueError(f"unknown potential {self.potential_kind!r}")

    @property
    def dimension(self) -> int:
        return self.L + 1 if self.central_site_coupling > 0 else self.L


@dataclass(frozen=True)
class EigenBasis:
    """Energies (ascending) and the matching orthonormal eigenstates."""

    energies: np.ndarray = field(repr=False)
    states: tuple[SingleParticleState, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def matrix(self) -> np.ndarray:
        """Rows are eigenstate amplitudes, ordered as energies."""
        return np.array([s.amplitudes for s in self.states])


def disorder_potential(spec: ChainSpec, seed: int) -> np.ndarray:
    """On-site potentials h_i for the chain sites (deterministic in seed)."""
    if spec.potential_kind == "zero":
        return np.zeros(spec.L)
    if spec.potential_kind == "staggered":
        i = np.arange(1, spec.L + 1)
        return (-spec.mu) ** i
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    W = spec.disorder_width
    return rng.uniform(-W, W, size=spec.L)


def build_hamiltonian(spec: ChainSpec, seed: int = 0) -> np.ndarray:
    """Real symmetric single-particle Hamiltonian for the chain spec."""
    L, t = spec.L, spec.hopping
    dim = spec.dimension
    H = np.zeros((dim, dim))
    idx = np.arange(L - 1)
    H[idx, idx + 1] = -t
    H[idx + 1, idx] = -t
    if spec.boundary == "periodic":
        H[0, L - 1] += -t
        H[L - 1, 0] += -t
    H[np.arange(L), np.arange(L)] = disorder_potential(spec, seed)
    if spec.central_site_coupling > 0:
        g = spec.central_site_coupling / np.sqrt(L)
        H[L, :L] = g
        H[:L, L] = g
    return H


def diagonalize(H: np.ndarray) -> EigenBasis:
    """Full dense eigendecomposition of a real symmetric matrix."""
    H = np.asarray(H, dtype=float)
    if np.max(np.abs(H - H.T), initial=0.0) > SYMMETRY_TOL:
        raise ValueError("matrix is not symmetric")
    try:
        energies, vecs = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed on {H.shape[0]}x{H.shape[0]} matrix") from exc
    states = tuple(SingleParticleState(vecs[:, k]) for k in range(vecs.shape[1]))
    return EigenBasis(energies=energies, states=states)


def plane_wave(L: int, m: int) -> SingleParticleState:
    """Momentum eigenstate of the periodic clean chain.

    Amplitudes e^{i k j}/sqrt(L) with k = 2 pi m / L and j = 1..L.
    """
    if not 0 <= m < L:
        raise ValueError(f"momentum index m={m} outside [0, {L})")
    k = 2.0 * np.pi * m / L
    j = np.arange(1, L + 1)
    return SingleParticleState(np.exp(1j * k * j) / np.sqrt(L))
