"""Closed-form EE of two excitations and the plane-wave overlap method.

For two orthonormal orbitals with weights lambda_1 >= lambda_2 in A and
restricted overlap sigma = |phi_1 . phi_2|^2, the joint correlation
matrix has eigenvalues

    nu_1 = lambda_1 + delta/2,   nu_2 = lambda_2 - delta/2,
    delta = sqrt((lambda_1 - lambda_2)^2 + 4 lambda_1 lambda_2 sigma)
            - (lambda_1 - lambda_2),

so the joint EE is s(nu_1) + s(nu_2) <= s(lambda_1) + s(lambda_2).
For N plane waves on the clean periodic chain the nonzero spectrum of
C_A follows from the N x N matrix of sine-ratio overlaps, scaled by
L_A / L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import (
    Bipartition,
    NumericalError,
    SingleParticleState,
    _check_occupation_range,
    _entropy_of_spectrum,
    binary_entropy,
)

PAIR_ORTHO_TOL = 1e-10
# Below this weight (or above 1 minus it) an orbital is absent from one
# subspace, phi is undefined and sigma is taken as 0.
DEGENERATE_TOL = 1e-14


@dataclass(frozen=True)
class PairAnalysis:
    """Erasure bookkeeping for a jointly excited orbital pair.

    lambda1/lambda2 keep the caller's orbital order; nu1 >= nu2 are the
    occupation eigenvalues of the joint correlation matrix.
    """

    lambda1: float
    lambda2: float
    sigma: float
    delta: float
    nu1: float
    nu2: float
    ee_joint: float
    ee_sum: float


@dataclass(frozen=True)
class OverlapMatrix:
    """Real symmetric matrix of restricted plane-wave overlaps."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.ascontiguousarray(self.entries, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("overlap matrix must be square")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("overlap matrix must be symmetric")
        if not np.allclose(np.diag(m), 1.0, atol=1e-12):
            raise ValueError("overlap matrix diagonal must be 1")
        if np.max(np.abs(m)) > 1.0 + 1e-12:
            raise ValueError("overlap entries must lie in [-1, 1]")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def analyze_pair(
    s1: SingleParticleState, s2: SingleParticleState, part: Bipartition
) -> PairAnalysis:
    """Joint-EE analysis of two orthonormal single-particle states."""
    if len(s1) != part.total_sites or len(s2) != part.total_sites:
        raise ValueError("state length does not match bipartition")
    inner = np.vdot(s1.amplitudes, s2.amplitudes)
    if abs(inner) > PAIR_ORTHO_TOL:
        raise ValueError(f"states are not orthogonal: |<1|2>| = {abs(inner):.3e}")

    lam1 = s1.weight_in(part)
    lam2 = s2.weight_in(part)
    idx = list(part.a_sites)

    degenerate = any(
        lam <= DEGENERATE_TOL or lam >= 1.0 - DEGENERATE_TOL for lam in (lam1, lam2)
    )
    if degenerate:
        sigma = 0.0
    else:
        phi1 = s1.amplitudes[idx] / math.sqrt(lam1)
        phi2 = s2.amplitudes[idx] / math.sqrt(lam2)
        sigma = min(abs(np.vdot(phi1, phi2)) ** 2, 1.0)

    hi, lo = max(lam1, lam2), min(lam1, lam2)
    delta = math.sqrt((hi - lo) ** 2 + 4.0 * hi * lo * sigma) - (hi - lo)
    nu1 = hi + delta / 2.0
    nu2 = lo - delta / 2.0
    return PairAnalysis(
        lambda1=lam1,
        lambda2=lam2,
        sigma=sigma,
        delta=delta,
        nu1=nu1,
        nu2=nu2,
        ee_joint=binary_entropy(nu1) + binary_entropy(nu2),
        ee_sum=binary_entropy(lam1) + binary_entropy(lam2),
    )


def pair_with_overlap(
    lam1: float, lam2: float, sigma: float
) -> tuple[SingleParticleState, SingleParticleState, Bipartition]:
    """Orthonormal pair on four sites with prescribed weights and overlap.

    Sites 0, 1 span A.  State 1 lives on (site 0, site 2); state 2 mixes
    in sites 1 and 3 so that its A-restricted overlap with state 1 is
    sigma while the full inner product vanishes.  Raises ValueError if
    (lam1, lam2, sigma) cannot coexist with orthogonality.
    """
    for name, v in (("lam1", lam1), ("lam2", lam2), ("sigma", sigma)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name}={v} outside [0, 1]")
    if not (0.0 < lam1 < 1.0 and 0.0 < lam2 < 1.0):
        raise ValueError("weights must be strictly inside (0, 1)")
    beta_sq = lam1 * lam2 * sigma / ((1.0 - lam1) * (1.0 - lam2))
    if beta_sq > 1.0 + 1e-12:
        raise ValueError("no orthogonal pair realizes these parameters")
    beta = -math.sqrt(min(beta_sq, 1.0))
    s1 = SingleParticleState(
        np.array([math.sqrt(lam1), 0.0, math.sqrt(1.0 - lam1), 0.0], dtype=complex)
    )
    s2 = SingleParticleState(
        np.array(
            [
                math.sqrt(lam2 * sigma),
                math.sqrt(lam2 * (1.0 - sigma)),
                math.sqrt(1.0 - lam2) * beta,
                math.sqrt(1.0 - lam2) * math.sqrt(max(1.0 - beta * beta, 0.0)),
            ],
            dtype=complex,
        )
    )
    return s1, s2, Bipartition(4, (0, 1))


def tb_sigma(n: int, L: int | None = None) -> float:
    """Restricted overlap amplitude of two plane waves n momentum steps apart.

    Half-chain cut.  For finite even L this is the Dirichlet-kernel
    ratio |sin(L_A dk/2) / sin(dk/2)| / L_A with dk = 2 pi n / L; the
    L -> infinity limit (L=None) is 2 |sin(n pi / 2)| / (n pi), which
    vanishes for every even n.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if L is None or L == math.inf:
        if n % 2 == 0:
            return 0.0
        return abs(2.0 * math.sin(n * math.pi / 2.0) / (n * math.pi))
    if L % 2 != 0:
        raise ValueError("finite L must be even for the half-chain cut")
    if not n < L:
        raise ValueError("need n < L")
    num = math.sin(n * math.pi / 2.0)
    den = math.sin(n * math.pi / L)
    return abs(num / den) * 2.0 / L


def tb_two_particle_ee(n: int) -> float:
    """Exact joint half-chain EE of two plane waves, L -> infinity.

    Discrete bands s(1/2 + sigma/2) + s(1/2 - sigma/2); exactly 2 bit
    for even n where the restricted overlap vanishes.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n % 2 == 0:
        return 2.0
    sigma = tb_sigma(n)
    return binary_entropy(0.5 + sigma / 2.0) + binary_entropy(0.5 - sigma / 2.0)


def tb_ee_asymptotic(n: int) -> float:
    """Large-n expansion 2 - (2 / (n pi sqrt(log 2)))^2 of the odd bands."""
    if n < 1:
        raise ValueError("need n >= 1")
    return 2.0 - (2.0 / (n * math.pi * math.sqrt(math.log(2.0)))) ** 2


def overlap_matrix(momenta, L: int, part: Bipartition) -> OverlapMatrix:
    """Sine-ratio overlap matrix O for N plane waves restricted to A.

    O_ml = sin(L_A (k_m - k_l)/2) / (L_A sin((k_m - k_l)/2)) with
    k = 2 pi m / L; the diagonal is the removable-singularity limit 1.
    """
    momenta = list(momenta)
    if len(set(momenta)) != len(momenta):
        raise ValueError("momentum indices must be distinct")
    if not part.is_contiguous():
        raise ValueError("overlap matrix requires a contiguous bipartition")
    if part.total_sites != L:
        raise ValueError("bipartition does not match L")
    La = part.size_a
    k = 2.0 * np.pi * np.asarray(momenta, dtype=float) / L
    dk = k[:, None] - k[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        O = np.sin(La * dk / 2.0) / (La * np.sin(dk / 2.0))
    np.fill_diagonal(O, 1.0)
    return OverlapMatrix(O)


def ee_from_overlap_matrix(O: OverlapMatrix, L_A: int, L: int) -> float:
    """EE in bits from the overlap-matrix spectrum.

    The eigenvalues of O, scaled by L_A / L, are the nonzero occupation
    eigenvalues of the restricted correlation matrix.
    """
    eig = np.linalg.eigvalsh(O.entries)
    scale = L / L_A
    if np.min(eig) < -1e-8 or np.max(eig) > scale * (1.0 + 1e-8):
        raise NumericalError(
            f"overlap eigenvalues out of range [0, {scale:g}]: "
            f"min={np.min(eig):.3e}, max={np.max(eig):.3e}"
        )
    nu = (L_A / L) * eig
    _check_occupation_range(nu)
    return _entropy_of_spectrum(nu)
