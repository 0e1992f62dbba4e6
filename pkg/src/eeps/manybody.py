"""Exact diagonalization of the interacting disordered chain at desk scale.

Spinless fermions with nearest-neighbor hopping, on-site disorder and a
density-density interaction V n_i n_{i+1} on an open chain.  Particle
number is conserved, so everything lives in the C(L, N)-dimensional
occupation sector.  Open-chain nearest-neighbor hops of spinless
fermions carry no sign when configurations are labeled by ascending
site order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .entropy import Bipartition, NumericalError
from .models import ChainSpec, disorder_potential

MAX_SECTOR_SITES = 16
DESK_SCALE_SITES = 14


@dataclass(frozen=True)
class SectorBasis:
    """Occupation basis of the fixed-N sector, as sorted bitmasks."""

    L: int
    N: int
    configs: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, L: int, N: int) -> "SectorBasis":
        if not 1 <= N <= L:
            raise ValueError(f"need 1 <= N <= L, got N={N}, L={L}")
        masks = sorted(sum(1 << s for s in occ) for occ in combinations(range(L), N))
        configs = np.array(masks, dtype=np.int64)
        configs.setflags(write=False)
        return cls(L=L, N=N, configs=configs)

    def __len__(self) -> int:
        return len(self.configs)

    def index_of(self, mask: int) -> int:
        i = int(np.searchsorted(self.configs, mask))
        if i >= len(self.configs) or self.configs[i] != mask:
            raise KeyError(f"configuration {mask:b} not in sector (L={self.L}, N={self.N})")
        return i


@dataclass(frozen=True)
class ManyBodyState:
    """Normalized amplitude vector over a sector basis."""

    basis: SectorBasis
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amp = np.ascontiguousarray(self.amplitudes, dtype=float)
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        if amp.shape != (len(self.basis),):
            raise ValueError("amplitude vector does not match sector dimension")
        if abs(np.linalg.norm(amp) - 1.0) > 1e-10:
            raise ValueError("many-body state is not normalized")


def build_sector_hamiltonian(
    spec: ChainSpec, V: float, N: int, seed: int = 0
) -> np.ndarray:
    """Dense sector Hamiltonian of the interacting open chain.

    Diagonal: sum_i h_i n_i + V sum_i n_i n_{i+1}; off-diagonal -t for
    every adjacent-site hop.  The disorder realization matches the
    single-particle builder for the same (spec, seed).
    """
    if spec.boundary != "open":
        raise ValueError("interacting chain is implemented for open boundaries")
    if spec.central_site_coupling > 0:
        raise ValueError("central site is not supported in the interacting model")
    if spec.L > MAX_SECTOR_SITES:
        raise ValueError(f"sector diagonalization is limited to L <= {MAX_SECTOR_SITES}")
    if spec.L > DESK_SCALE_SITES:
        warnings.warn(
            f"L={spec.L} exceeds the desk scale (L <= {DESK_SCALE_SITES}); "
            f"sector dimension is {math.comb(spec.L, N)}",
            RuntimeWarning,
            stacklevel=2,
        )
    basis = SectorBasis.build(spec.L, N)
    h = disorder_potential(spec, seed)
    t = spec.hopping
    dim = len(basis)
    H = np.zeros((dim, dim))
    for a, mask in enumerate(basis.configs):
        mask = int(mask)
        diag = 0.0
        for i in range(spec.L):
            if mask >> i & 1:
                diag += h[i]
                if i + 1 < spec.L and mask >> (i + 1) & 1:
                    diag += V
        H[a, a] = diag
        for i in range(spec.L - 1):
            # hop i -> i+1; the reverse direction comes from symmetry
            if (mask >> i & 1) and not (mask >> (i + 1) & 1):
                b = basis.index_of(mask ^ (0b11 << i))
                H[a, b] = -t
                H[b, a] = -t
    return H


def cut_adjacent_product_state(basis: SectorBasis, part: Bipartition) -> ManyBodyState:
    """Product state with N/2 particles on each side of the cut."""
    if basis.N % 2 != 0:
        raise ValueError("need an even particle number")
    if not part.is_contiguous() or min(part.a_sites) != 0:
        raise ValueError("expected A = first L_A sites")
    La = part.size_a
    half = basis.N // 2
    if half > La or half > basis.L - La:
        raise ValueError("not enough sites next to the cut")
    sites = range(La - half, La + half)
    mask = sum(1 << s for s in sites)
    amp = np.zeros(len(basis))
    amp[basis.index_of(mask)] = 1.0
    return ManyBodyState(basis=basis, amplitudes=amp)


def select_max_overlap_eigenstate(H: np.ndarray, target: ManyBodyState) -> ManyBodyState:
    """Eigenstate of H with maximal squared overlap with the target.

    Ties resolve to the lower energy (eigenvalues come out ascending).
    """
    if H.shape != (len(target.basis), len(target.basis)):
        raise ValueError("Hamiltonian dimension does not match the state")
    try:
        energies, vecs = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("sector eigensolver failed") from exc
    overlaps = np.abs(vecs.T @ target.amplitudes) ** 2
    best = int(np.argmax(overlaps))
    return ManyBodyState(basis=target.basis, amplitudes=vecs[:, best])


def many_body_ee(state: ManyBodyState, part: Bipartition) -> float:
    """Von Neumann EE (bits) of a sector state across a contiguous cut.

    The amplitude vector is reshaped into a matrix indexed by
    (A-configuration, B-configuration); squared singular values are the
    reduced-density-matrix spectrum.  Works for A at either end of the
    chain (EE is symmetric under A <-> B).
    """
    basis = state.basis
    L = basis.L
    if part.total_sites != L:
        raise ValueError("bipartition does not match the chain length")
    if not part.is_contiguous():
        raise ValueError("need a contiguous bipartition")
    a = sorted(part.a_sites)
    if a[0] == 0:
        La = len(a)
    elif a[-1] == L - 1:
        La = L - len(a)  # compute with the prefix complement
    else:
        raise ValueError("A must touch one end of the chain")

    lo_mask = (1 << La) - 1
    lo = [int(c) & lo_mask for c in basis.configs]
    hi = [int(c) >> La for c in basis.configs]
    lo_index = {m: i for i, m in enumerate(sorted(set(lo)))}
    hi_index = {m: i for i, m in enumerate(sorted(set(hi)))}
    M = np.zeros((len(lo_index), len(hi_index)))
    for amp, ml, mh in zip(state.amplitudes, lo, hi):
        M[lo_index[ml], hi_index[mh]] = amp
    p = np.linalg.svd(M, compute_uv=False) ** 2
    p = p[p > 1e-300]
    return float(-np.sum(p * np.log2(p)) + 0.0)


def slater_determinant_state(basis: SectorBasis, orbital_rows: np.ndarray) -> ManyBodyState:
    """Sector amplitudes of the Slater determinant of N orthonormal orbitals.

    orbital_rows is N x L (real); the amplitude on a configuration with
    occupied sites j_1 < ... < j_N is det(orbital_rows[:, (j_1..j_N)]).
    """
    rows = np.asarray(orbital_rows, dtype=float)
    if rows.shape != (basis.N, basis.L):
        raise ValueError(f"expected {basis.N} x {basis.L} orbital matrix")
    amp = np.empty(len(basis))
    for i, mask in enumerate(basis.configs):
        occ = [s for s in range(basis.L) if int(mask) >> s & 1]
        amp[i] = np.linalg.det(rows[:, occ])
    amp /= np.linalg.norm(amp)
    return ManyBodyState(basis=basis, amplitudes=amp)
