from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from alloclab.core import DimensionError, InvalidParameterError, Permutation
from alloclab.functions import FunctionTable, dictator, influence_profile, random_mean_function
from alloclab.unique_games import (
    Edge,
    Labeling,
    UGInstance,
    b_functions,
    decode_labeling,
    decoder_sets,
    planted_instance,
    random_instance,
    satisfaction,
)


def relabel(inst, labeling, sigma):
    """Rename labels by ``sigma`` at every node, conjugating each edge permutation."""
    R = inst.R
    inv = [0] * R
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    edges = tuple(
        Edge(e.a, e.b, Permutation(tuple(sigma[e.perm(inv[i - 1]) - 1] for i in range(1, R + 1))))
        for e in inst.edges
    )
    lab = Labeling(
        tuple(sigma[v - 1] for v in labeling.labels_a),
        tuple(sigma[v - 1] for v in labeling.labels_b),
    )
    return UGInstance(inst.n_a, inst.n_b, R, edges), lab


class TestInstances:
    def test_small_planted(self):
        inst, lab = planted_instance(2, 2, 2, 2, seed=0)
        assert len(inst.edges) == 4
        assert inst.degree_a == 2
        assert satisfaction(inst, lab) == 1

    @given(st.integers(0, 10_000), st.sampled_from([(2, 4, 2), (3, 3, 2), (4, 2, 2), (2, 2, 1)]), st.integers(1, 4))
    def test_planted_biregular_and_satisfied(self, seed, shape, R):
        n_a, n_b, deg_b = shape
        inst, lab = planted_instance(n_a, n_b, deg_b, R, seed)
        assert np.all(np.bincount([e.a for e in inst.edges]) == inst.degree_a)
        assert np.all(np.bincount([e.b for e in inst.edges]) == deg_b)
        assert satisfaction(inst, lab) == 1

    def test_seeds_differ(self):
        first, lab1 = planted_instance(3, 3, 2, 4, seed=1)
        second, lab2 = planted_instance(3, 3, 2, 4, seed=2)
        assert [e.perm for e in first.edges] != [e.perm for e in second.edges]
        assert satisfaction(first, lab1) == satisfaction(second, lab2) == 1

    def test_infeasible_degrees(self):
        with pytest.raises(InvalidParameterError):
            planted_instance(3, 2, 2, 2, seed=0)

    def test_irregular_rejected(self):
        p = Permutation.identity(2)
        with pytest.raises(InvalidParameterError):
            UGInstance(2, 1, 2, (Edge(0, 0, p),))

    def test_json_round_trip(self):
        inst = random_instance(2, 4, 2, 3, seed=7)
        back = UGInstance.from_json(inst.to_json())
        assert back.to_json() == inst.to_json()
        lab = Labeling((1, 2), (3, 1, 1, 2))
        assert Labeling.from_json(lab.to_json(), 2) == lab

    def test_label_range(self):
        inst, _ = planted_instance(2, 2, 2, 2, seed=0)
        with pytest.raises(InvalidParameterError):
            satisfaction(inst, Labeling((1, 3), (1, 1)))
        with pytest.raises(DimensionError):
            satisfaction(inst, Labeling((1,), (1, 1)))

    @given(st.integers(0, 10_000), st.permutations([1, 2, 3]), st.lists(st.integers(1, 3), min_size=6, max_size=6))
    def test_satisfaction_invariant_under_relabeling(self, seed, sigma, labels):
        inst = random_instance(3, 3, 2, 3, seed)
        lab = Labeling(tuple(labels[:3]), tuple(labels[3:]))
        inst2, lab2 = relabel(inst, lab, sigma)
        assert satisfaction(inst2, lab2) == satisfaction(inst, lab)


class TestAveragedFunctions:
    @given(st.integers(0, 10_000))
    def test_mean_is_preserved(self, seed):
        # composing with a permutation of coordinates keeps the mean
        inst = random_instance(2, 2, 2, 2, seed)
        fs = [random_mean_function(2, 2, Fraction(2, 3), seed + k) for k in range(2)]
        for fb in b_functions(inst, fs):
            assert fb.mean() == Fraction(2, 3)

    def test_pointwise_definition(self):
        inst, _ = planted_instance(2, 2, 2, 2, seed=3)
        fs = [random_mean_function(2, 2, Fraction(2, 3), k) for k in range(2)]
        fb = b_functions(inst, fs)
        for b in range(inst.n_b):
            nbrs = inst.edges_at_b(b)
            for x in np.ndindex(3, 3):
                want = sum(fs[e.a]([x[e.perm(i) - 1] for i in range(1, 3)]) for e in nbrs) / len(nbrs)
                assert fb[b](x) == want


class TestDecoder:
    @pytest.mark.parametrize("seed", range(10))
    def test_planted_dictators_recovered(self, seed):
        inst, lab = planted_instance(3, 3, 2, 3, seed)
        fs = [dictator(3, lab.labels_a[a], 2) for a in range(3)]
        decoded = decode_labeling(inst, fs, 2, Fraction(1, 10), seed)
        assert satisfaction(inst, decoded) == 1

    def test_constant_functions(self):
        inst, _ = planted_instance(2, 2, 2, 3, seed=0)
        fs = [FunctionTable.constant(3, 3, Fraction(2, 3))] * 2
        sets = decoder_sets(inst, fs, 2, Fraction(1, 10))
        assert all(not s for s in sets.candidates_a + sets.high_b)
        lab = decode_labeling(inst, fs, 2, Fraction(1, 10), 0)
        assert satisfaction(inst, lab) >= 0

    @given(st.integers(0, 10_000), st.sampled_from([Fraction(1, 10), Fraction(1, 8), Fraction(1, 4)]))
    def test_candidate_sets_small(self, seed, tau):
        d = 2
        inst = random_instance(2, 2, 2, 3, seed)
        fs = [random_mean_function(3, 2, Fraction(2, 3), seed + k) for k in range(2)]
        sets = decoder_sets(inst, fs, d, tau)
        assert all(len(c) <= 2 * d / tau for c in sets.candidates_a)
        for f, c in zip(fs, sets.candidates_a):
            low = influence_profile(f, d).low_degree
            assert c == tuple(i for i in range(1, 4) if low[i - 1] >= tau / 2)
