"""Bipartite entanglement entropy of free-fermion states and its erasure.

The package computes the von Neumann entanglement entropy (EE, in bits)
of Slater determinants via the single-particle correlation matrix,
provides closed forms for two plane-wave excitations of the clean
tight-binding chain, constructs entanglement-erasing partner states
(EEPS), and ships a CLI that sweeps disorder ensembles and writes
CSV/SVG output.
"""

__version__ = "0.1.0"

from .entropy import (
    Bipartition,
    CorrelationMatrix,
    OrbitalSet,
    SingleParticleState,
    binary_entropy,
    correlation_matrix,
    entanglement_entropy,
    single_particle_entropy,
    slater_entropy,
)
from .models import ChainSpec, EigenBasis, build_hamiltonian, diagonalize, plane_wave
from .two_particle import (
    OverlapMatrix,
    PairAnalysis,
    analyze_pair,
    ee_from_overlap_matrix,
    overlap_matrix,
    tb_ee_asymptotic,
    tb_sigma,
    tb_two_particle_ee,
)
from .bell import (
    BellModel,
    ErasureEstimate,
    bell_count,
    bell_expected_s,
    bell_states,
    sample_random_excitations,
    select_near_cut,
)
from .manybody import (
    SectorBasis,
    ManyBodyState,
    build_sector_hamiltonian,
    cut_adjacent_product_state,
    many_body_ee,
    select_max_overlap_eigenstate,
    slater_determinant_state,
)

__all__ = [
    "Bipartition",
    "SingleParticleState",
    "OrbitalSet",
    "CorrelationMatrix",
    "binary_entropy",
    "correlation_matrix",
    "entanglement_entropy",
    "single_particle_entropy",
    "slater_entropy",
    "ChainSpec",
    "EigenBasis",
    "build_hamiltonian",
    "diagonalize",
    "plane_wave",
    "PairAnalysis",
    "OverlapMatrix",
    "analyze_pair",
    "tb_sigma",
    "tb_two_particle_ee",
    "tb_ee_asymptotic",
    "overlap_matrix",
    "ee_from_overlap_matrix",
    "BellModel",
    "ErasureEstimate",
    "bell_states",
    "bell_count",
    "bell_expected_s",
    "sample_random_excitations",
    "select_near_cut",
    "SectorBasis",
    "ManyBodyState",
    "build_sector_hamiltonian",
    "cut_adjacent_product_state",
    "select_max_overlap_eigenstate",
    "many_body_ee",
    "slater_determinant_state",
]
