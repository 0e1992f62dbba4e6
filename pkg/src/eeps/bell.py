"""Entanglement-erasing partner states and erasure-factor sampling.

The Bell construction pairs every A-site with a B-site:

    |e_{2i}> = (|a_i> + |b_i>)/sqrt(2),  |e_{2i+1}> = (|a_i> - |b_i>)/sqrt(2).

Each state alone carries 1 bit of EE; a pair with the same index erases
it completely, while states from different pairs do not interfere.  For
a random even-N excitation the joint EE equals the number s of
single-occupied pairs, with exactly

    n(s) = 2^s C(L/2, s) C(L/2 - s, (N - s)/2)

subsets realizing each s and <s> = (L - N) N / (L - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .entropy import (
    Bipartition,
    OrbitalSet,
    SingleParticleState,
    _check_occupation_range,
    _entropy_of_spectrum,
    binary_entropy,
)
from .models import derived_seed_sequence


@dataclass(frozen=True)
class BellModel:
    """L/2 Bell pairs spanning an L-site chain (first half is A)."""

    pair_count: int

    def __post_init__(self):
        if self.pair_count < 1:
            raise ValueError("need at least one Bell pair")

    @property
    def total_states(self) -> int:
        return 2 * self.pair_count

    @property
    def bipartition(self) -> Bipartition:
        return Bipartition.half_chain(self.total_states)


@dataclass(frozen=True)
class ErasureEstimate:
    """Ratio of mean joint EE to mean summed single-particle EE."""

    mean_joint_ee: float
    mean_single_sum: float
    ratio: float
    std_error: float


def bell_states(model: BellModel) -> OrbitalSet:
    """All 2 * pair_count Bell states as an orthonormal orbital set."""
    half = model.pair_count
    L = model.total_states
    states = []
    for i in range(half):
        for sign in (1.0, -1.0):
            amp = np.zeros(L, dtype=complex)
            amp[i] = 1.0 / np.sqrt(2.0)
            amp[half + i] = sign / np.sqrt(2.0)
            states.append(SingleParticleState(amp))
    return OrbitalSet(tuple(states))


def bell_count(s: int, N: int, L: int) -> int:
    """Exact number of N-subsets with s single-occupied Bell pairs."""
    if L % 2 != 0:
        raise ValueError("L must be even (whole Bell pairs)")
    if N % 2 != 0 or s % 2 != 0:
        raise ValueError("N and s must be even")
    if not 0 <= N <= L:
        raise ValueError("need 0 <= N <= L")
    if s < 0 or s > min(N, L // 2):
        return 0
    half = L // 2
    return 2**s * math.comb(half, s) * math.comb(half - s, (N - s) // 2)


def bell_expected_s(N: int, L: int) -> Fraction:
    """Exact mean number of single-occupied pairs, (L - N) N / (L - 1)."""
    if L % 2 != 0 or N % 2 != 0:
        raise ValueError("N and L must be even")
    if not 0 <= N <= L:
        raise ValueError("need 0 <= N <= L")
    return Fraction((L - N) * N, L - 1)


def _basis_rows(basis) -> np.ndarray:
    """Amplitude rows of an EigenBasis or OrbitalSet."""
    return basis.matrix


def _slater_entropy_rows(rows: np.ndarray, a_idx: np.ndarray) -> float:
    """EE of the Slater determinant of the given (orthonormal) rows.

    Same Gram-matrix shortcut as slater_entropy, without re-validating
    orthonormality per call.
    """
    Ua = rows[:, a_idx]
    if Ua.shape[0] <= Ua.shape[1]:
        small = Ua @ Ua.conj().T
    else:
        small = Ua.T @ Ua.conj()
    nu = np.linalg.eigvalsh(small)
    _check_occupation_range(nu)
    return _entropy_of_spectrum(nu)


def excitation_moments(
    basis, part: Bipartition, N: int, samples: int, seed: int, start: int = 0
):
    """Accumulated sampling moments for the erasure ratio.

    Returns (n, sum_x, sum_y, sum_xx, sum_yy, sum_xy) where x is the
    joint EE of a uniformly drawn N-subset and y the sum of the single
    EEs of its members.  Sample i uses the RNG stream derived from
    (seed, start + i), so any partition of the sample range over
    workers yields the same totals.
    """
    rows = _basis_rows(basis)
    size = rows.shape[0]
    if not 1 <= N <= size:
        raise ValueError(f"need 1 <= N <= {size}")
    if samples < 1:
        raise ValueError("need at least one sample")
    a_idx = np.asarray(part.a_sites, dtype=int)
    singles = np.array(
        [binary_entropy(float(np.sum(np.abs(rows[n, a_idx]) ** 2))) for n in range(size)]
    )
    sx = sy = sxx = syy = sxy = 0.0
    for i in range(start, start + samples):
        rng = np.random.default_rng(derived_seed_sequence(seed, i))
        chosen = rng.choice(size, size=N, replace=False)
        x = _slater_entropy_rows(rows[chosen], a_idx)
        y = float(np.sum(singles[chosen]))
        sx += x
        sy += y
        sxx += x * x
        syy += y * y
        sxy += x * y
    return (samples, sx, sy, sxx, syy, sxy)


def combine_moments(parts) -> tuple:
    """Merge moment tuples from independent sample batches."""
    totals = [0.0] * 6
    for p in parts:
        for k in range(6):
            totals[k] += p[k]
    totals[0] = int(totals[0])
    return tuple(totals)


def erasure_from_moments(moments) -> ErasureEstimate:
    """Ratio-of-means estimate with a delta-method standard error.

    For r = mean(x)/mean(y),
    var(r) ~ (var(x) - 2 r cov(x, y) + r^2 var(y)) / (n mean(y)^2).
    """
    n, sx, sy, sxx, syy, sxy = moments
    mx, my = sx / n, sy / n
    if my == 0.0:
        raise ValueError("mean single-particle EE is zero; ratio undefined")
    r = mx / my
    if n < 2:
        return ErasureEstimate(mx, my, r, 0.0)
    var_x = max((sxx - n * mx * mx) / (n - 1), 0.0)
    var_y = max((syy - n * my * my) / (n - 1), 0.0)
    cov = (sxy - n * mx * my) / (n - 1)
    var_r = (var_x - 2.0 * r * cov + r * r * var_y) / (n * my * my)
    return ErasureEstimate(mx, my, r, math.sqrt(max(var_r, 0.0)))


def sample_random_excitations(
    basis, part: Bipartition, N: int, samples: int, seed: int
) -> ErasureEstimate:
    """Monte Carlo erasure ratio for uniform random N-fold excitations."""
    return erasure_from_moments(excitation_moments(basis, part, N, samples, seed))


def select_near_cut(basis, part: Bipartition, N: int) -> OrbitalSet:
    """Greedy choice of the N eigenstates peaked nearest the cut.

    Sites are visited nearest-to-cut first, alternating left/right
    (N/2 per side); each site claims the not-yet-chosen eigenstate with
    the largest probability there, ties going to the lowest index.
    """
    if N % 2 != 0 or N < 2:
        raise ValueError("N must be even and positive")
    if not part.is_contiguous() or min(part.a_sites) != 0:
        raise ValueError("near-cut selection expects A = first L_A sites")
    rows = _basis_rows(basis)
    if N > rows.shape[0]:
        raise ValueError("fewer eigenstates than requested particles")
    La = part.size_a
    if La + N // 2 > part.total_sites or N // 2 > La:
        raise ValueError("not enough sites on one side of the cut")
    sites = []
    for d in range(N // 2):
        sites.extend((La - 1 - d, La + d))
    prob = np.abs(rows) ** 2
    chosen: list[int] = []
    taken = np.zeros(rows.shape[0], dtype=bool)
    for site in sites:
        weights = np.where(taken, -1.0, prob[:, site])
        best = int(np.argmax(weights))  # argmax returns the lowest index on ties
        taken[best] = True
        chosen.append(best)
    states = tuple(basis.states[i] for i in chosen) if hasattr(basis, "states") else tuple(
        basis.orbitals[i] for i in chosen
    )
    return OrbitalSet(states)
