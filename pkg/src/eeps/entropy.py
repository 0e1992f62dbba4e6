"""Correlation-matrix entanglement entropy for fermionic Slater determinants.

All entropies are reported in bits (logarithm base 2).  A Slater
determinant of N orthonormal single-particle states has entanglement
entropy

    S = -tr[C_A log2 C_A + (1 - C_A) log2 (1 - C_A)]

where C_A is the single-particle correlation matrix restricted to the
sites of subsystem A.  C_A is additive over the excited orbitals, and
each single-orbital contribution is rank one with eigenvalue equal to
the orbital's weight in A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-12
ORTHO_TOL = 1e-10
HERMITIAN_TOL = 1e-12
# Eigenvalues of C_A may leave [0, 1] by machine noise; anything worse
# signals a real error and is rejected instead of clamped away.
EIG_RANGE_TOL = 1e-8


class NumericalError(RuntimeError):
    """Eigensolver failure or an out-of-range spectrum."""


@dataclass(frozen=True)
class Bipartition:
    """Subsystem A of an L-site chain, given as a set of site indices."""

    total_sites: int
    a_sites: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a_sites", tuple(self.a_sites))
        L = self.total_sites
        if L < 2:
            raise ValueError(f"need at least two sites, got L={L}")
        if len(set(self.a_sites)) != len(self.a_sites):
            raise ValueError("a_sites contains duplicate indices")
        if not all(0 <= i < L for i in self.a_sites):
            raise ValueError(f"a_sites must lie in [0, {L})")
        if not 0 < len(self.a_sites) < L:
            raise ValueError("A must be a proper nonempty subset of the sites")

    @property
    def size_a(self) -> int:
        return len(self.a_sites)

    @classmethod
    def half_chain(cls, L: int) -> "Bipartition":
        """First L//2 sites form A."""
        return cls(L, tuple(range(L // 2)))

    def is_contiguous(self) -> bool:
        s = sorted(self.a_sites)
        return s == list(range(s[0], s[0] + len(s)))


@dataclass(frozen=True)
class SingleParticleState:
    """Normalized single-particle wavefunction over L sites."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.ascontiguousarray(self.amplitudes, dtype=complex)
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        if amp.ndim != 1:
            raise ValueError("amplitudes must be a vector")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")

    def __len__(self) -> int:
        return self.amplitudes.shape[0]

    def weight_in(self, part: Bipartition) -> float:
        """Probability lambda of finding the particle in subsystem A."""
        if len(self) != part.total_sites:
            raise ValueError("state length does not match bipartition")
        return float(np.sum(np.abs(self.amplitudes[list(part.a_sites)]) ** 2))


@dataclass(frozen=True)
class OrbitalSet:
    """Ordered orthonormal single-particle states defining a Slater determinant."""

    orbitals: tuple[SingleParticleState, ...]

    def __post_init__(self):
        object.__setattr__(self, "orbitals", tuple(self.orbitals))
        if not self.orbitals:
            raise ValueError("orbital set is empty")
        L = len(self.orbitals[0])
        if any(len(o) != L for o in self.orbitals):
            raise ValueError("orbitals have inconsistent lengths")
        if len(self.orbitals) > L:
            raise ValueError("more orbitals than sites")
        U = self.matrix
        gram = U @ U.conj().T
        if not np.allclose(gram, np.eye(len(self.orbitals)), atol=ORTHO_TOL):
            dev = np.max(np.abs(gram - np.eye(len(self.orbitals))))
            raise ValueError(f"orbitals are not orthonormal: max deviation {dev:.3e}")

    @property
    def matrix(self) -> np.ndarray:
        """N x L matrix whose rows are the orbital amplitudes."""
        return np.array([o.amplitudes for o in self.orbitals])

    def __len__(self) -> int:
        return len(self.orbitals)

    @property
    def sites(self) -> int:
        return len(self.orbitals[0])


@dataclass(frozen=True)
class CorrelationMatrix:
    """Hermitian restriction C_A of the two-point function to subsystem A."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.ascontiguousarray(self.entries, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("correlation matrix must be square")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise ValueError("correlation matrix is not Hermitian")

    def eigenvalues(self) -> np.ndarray:
        """All eigenvalues, real, sorted ascending."""
        try:
            return np.linalg.eigvalsh(self.entries)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                f"eigensolver failed on {self.entries.shape[0]}x{self.entries.shape[1]} "
                f"matrix (trace={np.trace(self.entries):.6g})"
            ) from exc

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def binary_entropy(x: float) -> float:
    """Binary entropy s(x) = -x log2 x - (1-x) log2(1-x), in bits.

    Uses the convention 0 log2 0 = 0.  Inputs outside [0, 1] by more
    than 1e-12 raise a ValueError.
    """
    if x < -NORM_TOL or x > 1.0 + NORM_TOL:
        raise ValueError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def _entropy_of_spectrum(nu: np.ndarray) -> float:
    """Sum of binary entropies over a clamped occupation spectrum."""
    nu = np.clip(nu, 0.0, 1.0)
    inner = nu * (1.0 - nu)
    mask = inner > 0.0
    nu = nu[mask]
    if nu.size == 0:
        return 0.0
    return float(-np.sum(nu * np.log2(nu) + (1.0 - nu) * np.log2(1.0 - nu)))


def _check_occupation_range(nu: np.ndarray, scale: float = 1.0) -> None:
    lo, hi = float(np.min(nu)), float(np.max(nu))
    if lo < -EIG_RANGE_TOL or hi > scale * (1.0 + EIG_RANGE_TOL):
        raise NumericalError(
            f"occupation eigenvalues out of range: min={lo:.3e}, max={hi:.3e}"
        )


def correlation_matrix(orbitals: OrbitalSet, part: Bipartition) -> CorrelationMatrix:
    """Restricted correlation matrix of a Slater determinant.

    (C_A)_{ij} = sum_n U_{ni} U*_{nj} for sites i, j in A, where the
    rows U_n are the orbital amplitudes.  Equals the sum of the rank-1
    single-orbital matrices lambda_n phi_n phi_n^dagger.
    """
    if orbitals.sites != part.total_sites:
        raise ValueError(
            f"orbital length {orbitals.sites} does not match L={part.total_sites}"
        )
    Ua = orbitals.matrix[:, list(part.a_sites)]
    return CorrelationMatrix(Ua.T @ Ua.conj())


def entanglement_entropy(corr: CorrelationMatrix) -> float:
    """EE in bits from the spectrum of C_A."""
    nu = corr.eigenvalues()
    _check_occupation_range(nu)
    return _entropy_of_spectrum(nu)


def single_particle_entropy(state: SingleParticleState, part: Bipartition) -> float:
    """EE of a single excitation: s(lambda) with lambda the weight in A."""
    return binary_entropy(state.weight_in(part))


def slater_entropy(orbitals: OrbitalSet, part: Bipartition) -> float:
    """EE of the Slater determinant of an orbital set.

    Equivalent to entanglement_entropy(correlation_matrix(...)) but
    diagonalizes the smaller of the N x N Gram matrix and the
    L_A x L_A correlation matrix (they share the nonzero spectrum, and
    zero eigenvalues contribute no entropy).
    """
    if orbitals.sites != part.total_sites:
        raise ValueError("orbital length does not match bipartition")
    N, La = len(orbitals), part.size_a
    Ua = orbitals.matrix[:, list(part.a_sites)]
    if N <= La:
        small = Ua @ Ua.conj().T
    else:
        small = Ua.T @ Ua.conj()
    try:
        nu = np.linalg.eigvalsh(small)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("eigensolver failed on reduced Gram matrix") from exc
    _check_occupation_range(nu)
    return _entropy_of_spectrum(nu)
