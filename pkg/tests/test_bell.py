import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from eeps import (
    BellModel,
    Bipartition,
    ChainSpec,
    OrbitalSet,
    bell_count,
    bell_expected_s,
    bell_states,
    build_hamiltonian,
    diagonalize,
    sample_random_excitations,
    select_near_cut,
    single_particle_entropy,
    slater_entropy,
)
from eeps.bell import combine_moments, erasure_from_moments, excitation_moments


def count_single_occupied_pairs(chosen) -> int:
    pairs = {}
    for j in chosen:
        pairs[j // 2] = pairs.get(j // 2, 0) + 1
    return sum(1 for v in pairs.values() if v == 1)


class TestBellStates:
    def test_each_state_has_one_bit(self):
        model = BellModel(4)
        states = bell_states(model)
        for s in states.orbitals:
            assert single_particle_entropy(s, model.bipartition) == pytest.approx(1.0, abs=1e-12)

    def test_partner_pair_erases_completely(self):
        model = BellModel(3)
        states = bell_states(model)
        for i in range(3):
            pair = OrbitalSet(states.orbitals[2 * i : 2 * i + 2])
            assert slater_entropy(pair, model.bipartition) < 1e-10

    def test_cross_pair_states_are_additive(self):
        model = BellModel(3)
        states = bell_states(model)
        pair = OrbitalSet((states.orbitals[0], states.orbitals[3]))
        assert slater_entropy(pair, model.bipartition) == pytest.approx(2.0, abs=1e-10)

    def test_joint_ee_counts_single_occupied_pairs(self):
        # brute force over every 4-subset of 8 Bell states
        model = BellModel(4)
        states = bell_states(model)
        for chosen in itertools.combinations(range(8), 4):
            ee = slater_entropy(OrbitalSet([states.orbitals[j] for j in chosen]), model.bipartition)
            assert ee == pytest.approx(count_single_occupied_pairs(chosen), abs=1e-9)


class TestBellCombinatorics:
    def test_enumeration_l4_n2(self):
        assert bell_count(0, 2, 4) == 2
        assert bell_count(2, 2, 4) == 4

    def test_s_beyond_n_gives_zero(self):
        assert bell_count(6, 4, 8) == 0

    def test_parity_violation_raises(self):
        with pytest.raises(ValueError):
            bell_count(1, 2, 4)
        with pytest.raises(ValueError):
            bell_count(0, 3, 8)

    @pytest.mark.parametrize("L", range(2, 22, 2))
    def test_counts_sum_to_binomial(self, L):
        for N in range(2, L + 1, 2):
            total = sum(bell_count(s, N, L) for s in range(0, L // 2 + 1, 2))
            assert total == math.comb(L, N)

    @pytest.mark.parametrize("L", range(2, 22, 2))
    def test_expected_s_matches_exact_sum(self, L):
        for N in range(2, L + 1, 2):
            exact = Fraction(
                sum(s * bell_count(s, N, L) for s in range(0, L // 2 + 1, 2)),
                math.comb(L, N),
            )
            assert bell_expected_s(N, L) == exact
            assert bell_expected_s(N, L) == Fraction((L - N) * N, L - 1)

    def test_full_band_has_no_single_pairs(self):
        assert bell_expected_s(8, 8) == 0

    def test_half_filling_limit(self):
        # <s>/N -> 1/2 at N/L = 1/2, i.e. r_inf = 0.5
        vals = [bell_expected_s(L // 2, L) / (L // 2) for L in (100, 1000, 10000)]
        assert float(vals[-1]) == pytest.approx(0.5, abs=1e-3)
        assert abs(vals[2] - Fraction(1, 2)) < abs(vals[0] - Fraction(1, 2))


class TestSampling:
    def test_single_particle_ratio_is_one(self):
        model = BellModel(3)
        est = sample_random_excitations(bell_states(model), model.bipartition, 1, 50, seed=2)
        assert est.ratio == pytest.approx(1.0, abs=1e-12)
        assert est.std_error == pytest.approx(0.0, abs=1e-12)

    def test_bell_ratio_matches_exhaustive_mean(self):
        # L = 4, N = 2: exact mean ratio (4/3)/2 = 2/3
        model = BellModel(2)
        states = bell_states(model)
        exact = float(bell_expected_s(2, 4)) / 2.0
        assert exact == pytest.approx(2.0 / 3.0, abs=1e-12)
        est = sample_random_excitations(states, model.bipartition, 2, 4000, seed=5)
        assert abs(est.ratio - exact) < 3 * est.std_error + 1e-3

    def test_larger_bell_model_within_three_sigma(self):
        model = BellModel(6)
        est = sample_random_excitations(bell_states(model), model.bipartition, 6, 10000, seed=9)
        exact = float(bell_expected_s(6, 12)) / 6.0
        assert abs(est.ratio - exact) < 3 * est.std_error

    def test_deterministic_in_seed(self):
        model = BellModel(3)
        states = bell_states(model)
        a = sample_random_excitations(states, model.bipartition, 2, 100, seed=3)
        b = sample_random_excitations(states, model.bipartition, 2, 100, seed=3)
        assert a == b

    def test_moments_split_merge_matches_single_batch(self):
        model = BellModel(3)
        states = bell_states(model)
        whole = excitation_moments(states, model.bipartition, 4, 60, seed=8)
        first = excitation_moments(states, model.bipartition, 4, 25, seed=8, start=0)
        second = excitation_moments(states, model.bipartition, 4, 35, seed=8, start=25)
        merged = combine_moments([second, first])
        assert merged[0] == whole[0]
        assert np.allclose(merged[1:], whole[1:], atol=1e-12)

    def test_tight_binding_self_consistency(self):
        # small-sample run sits within 3 sigma of a long fixed-seed run
        L = 256
        basis = diagonalize(build_hamiltonian(ChainSpec(L=L, boundary="periodic")))
        part = Bipartition.half_chain(L)
        ref = sample_random_excitations(basis, part, 128, 2000, seed=123)
        est = sample_random_excitations(basis, part, 128, 200, seed=77)
        spread = math.hypot(3 * est.std_error, 3 * ref.std_error)
        assert abs(est.ratio - ref.ratio) < spread


class TestSelectNearCut:
    def test_diagonal_dominant_limit_selects_site_states(self):
        # t = 0: eigenstates are exact site states, joint EE vanishes
        L, N = 12, 4
        spec = ChainSpec(L=L, hopping=0.0, disorder_width=5.0, potential_kind="random_uniform")
        basis = diagonalize(build_hamiltonian(spec, seed=21))
        part = Bipartition.half_chain(L)
        sel = select_near_cut(basis, part, N)
        peaks = sorted(int(np.argmax(np.abs(s.amplitudes))) for s in sel.orbitals)
        assert peaks == [4, 5, 6, 7]
        assert slater_entropy(sel, part) < 1e-10

    def test_output_is_orthonormal_of_size_n(self):
        spec = ChainSpec(L=32, disorder_width=2.0, potential_kind="random_uniform")
        basis = diagonalize(build_hamiltonian(spec, seed=4))
        sel = select_near_cut(basis, Bipartition.half_chain(32), 6)
        assert len(sel) == 6  # OrbitalSet construction re-checks orthonormality

    def test_subadditivity_strict_under_disorder(self):
        # localized states near the cut overlap, so erasure is strict
        L, N, W = 64, 2, 4.0
        part = Bipartition.half_chain(L)
        strict = 0
        for r in range(50):
            spec = ChainSpec(L=L, disorder_width=W, potential_kind="random_uniform")
            basis = diagonalize(build_hamiltonian(spec, seed=1000 + r))
            sel = select_near_cut(basis, part, N)
            joint = slater_entropy(sel, part)
            singles = sum(single_particle_entropy(s, part) for s in sel.orbitals)
            assert joint <= singles + 1e-9
            if joint < singles - 1e-6:
                strict += 1
        assert strict > 25

    def test_rejects_odd_n(self):
        spec = ChainSpec(L=8)
        basis = diagonalize(build_hamiltonian(spec))
        with pytest.raises(ValueError):
            select_near_cut(basis, Bipartition.half_chain(8), 3)
