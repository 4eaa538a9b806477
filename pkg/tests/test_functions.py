import itertools
from fractions import Fraction

import numpy as np
import pytest
from conftest import brute_correlation, brute_efron_stein
from hypothesis import given
from hypothesis import strategies as st

from alloclab.core import DimensionError, InvalidParameterError, Permutation, ResourceLimitError, code_point
from alloclab.distributions import ProductDistribution, make_eta, noisy_eta
from alloclab.functions import (
    FunctionTable,
    average,
    correlation,
    dictator,
    efron_stein,
    influence_profile,
    random_mean_function,
)


@st.composite
def tables(draw, max_R=3, bases=(2, 3)):
    R = draw(st.integers(1, max_R))
    base = draw(st.sampled_from(bases))
    den = draw(st.integers(1, 6))
    nums = draw(st.lists(st.integers(0, den), min_size=base**R, max_size=base**R))
    return FunctionTable(R, base, np.array(nums), den)


class TestFunctionTable:
    def test_dictator_values(self):
        f = dictator(2, 1, 2)
        assert f((0, 2)) == 0 and f((1, 0)) == 1 and f((2, 2)) == 1
        assert f.mean() == Fraction(2, 3)

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            FunctionTable.from_values(1, 2, [0, Fraction(3, 2)])
        with pytest.raises(DimensionError):
            FunctionTable.from_values(2, 2, [0, 1])

    def test_compose_pointwise(self):
        f = random_mean_function(3, 2, Fraction(2, 3), 4)
        pi = Permutation((3, 1, 2))
        g = f.compose(pi)
        for code in range(27):
            x = code_point(code, 3, 3)
            assert g(x) == f(tuple(x[pi(i) - 1] for i in range(1, 4)))

    def test_dictator_composed_moves_coordinate(self):
        # 1{(x o pi)_i > 0} = 1{x_{pi(i)} > 0}
        pi = Permutation((2, 3, 1))
        assert dictator(3, 1, 2).compose(pi) == dictator(3, 2, 2)

    @given(tables())
    def test_json_round_trip(self, f):
        assert FunctionTable.from_json(f.to_json()) == f

    def test_average(self):
        f = average([dictator(2, 1, 2), dictator(2, 2, 2)])
        assert f((1, 0)) == Fraction(1, 2)
        assert f.mean() == Fraction(2, 3)

    def test_random_mean_function_exact_mean(self):
        f = random_mean_function(4, 2, Fraction(2, 3), 11)
        assert f.is_boolean() and f.mean() == Fraction(2, 3)
        with pytest.raises(InvalidParameterError):
            random_mean_function(1, 2, Fraction(1, 2), 0)


class TestEfronStein:
    @given(tables(max_R=2))
    def test_matches_pointwise_definition(self, f):
        dec = efron_stein(f)
        for S in dec.subsets:
            for code in range(f.base**f.R):
                x = code_point(code, f.R, f.base)
                assert dec.value(S, x) == brute_efron_stein(f, S, x)

    @given(tables())
    def test_reconstruction_orthogonality_parseval(self, f):
        dec = efron_stein(f)
        assert dec.reconstruct() == f.values
        subsets = dec.subsets
        for S, T in itertools.combinations(subsets, 2):
            assert dec.inner(S, T) == 0
        second_moment = sum(v * v for v in f.values) / len(f.values)
        assert sum(dec.weight(S) for S in subsets) == second_moment

    def test_component_ignores_coordinates_outside(self):
        f = random_mean_function(3, 2, Fraction(2, 3), 1)
        dec = efron_stein(f)
        comp = dec.component({1, 3})
        for code in range(27):
            x = code_point(code, 3, 3)
            y = (x[0], (x[1] + 1) % 3, x[2])
            assert dec.value({1, 3}, x) == dec.value({1, 3}, y)
            assert comp[code] == dec.value({1, 3}, x)

    def test_empty_set_is_mean(self):
        f = random_mean_function(2, 2, Fraction(1, 3), 2)
        assert efron_stein(f).value(frozenset(), (0, 0)) == Fraction(1, 3)

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            efron_stein(random_mean_function(5, 2, Fraction(2, 3), 0), cap=100)


class TestInfluence:
    def test_dictator_influence(self):
        prof = influence_profile(dictator(3, 2, 2), 1)
        assert prof.influences == (0, Fraction(2, 9), 0)
        assert prof.low_degree == prof.influences

    def test_constant_has_none(self):
        prof = influence_profile(FunctionTable.constant(2, 3, Fraction(1, 2)), 2)
        assert prof.influences == (0, 0)

    @given(tables(), st.integers(1, 3))
    def test_low_degree_budget(self, f, d):
        # sum_i Inf_i^{<=d} <= d Var[f], hence at most d/tau coordinates reach tau
        prof = influence_profile(f, d)
        var = sum(v * v for v in f.values) / len(f.values) - f.mean() ** 2
        assert sum(prof.low_degree) <= d * var
        assert all(lo <= full for lo, full in zip(prof.low_degree, prof.influences))
        for tau in (Fraction(1, 4), Fraction(1, 8), Fraction(1, 20)):
            assert prof.count_at_least(tau) <= d / tau

    def test_full_degree_equals_influence(self):
        f = random_mean_function(3, 2, Fraction(2, 3), 9)
        prof = influence_profile(f, 3)
        assert prof.low_degree == prof.influences

    def test_influence_by_resampling(self):
        # Inf_i(f) = E[Var_{x_i}[f | x_{-i}]], checked directly
        f = random_mean_function(2, 2, Fraction(2, 3), 3)
        prof = influence_profile(f, 2)
        for i in (1, 2):
            total = Fraction(0)
            other = 2 if i == 1 else 1
            for fixed in range(3):
                vals = []
                for v in range(3):
                    x = [0, 0]
                    x[i - 1], x[other - 1] = v, fixed
                    vals.append(f(x))
                m = sum(vals) / 3
                total += sum((v - m) ** 2 for v in vals) / 3
            assert prof.influences[i - 1] == total / 3


class TestCorrelation:
    def test_documented_examples(self):
        p1 = ProductDistribution(make_eta(2), 1)
        ind = FunctionTable.from_indicator(1, 3, [1, 1, 0])
        assert correlation([ind] * 4, p1) == Fraction(2, 9)
        p2 = ProductDistribution(make_eta(2), 2)
        assert correlation([dictator(2, 1, 2)] * 4, p2) == 0
        const = FunctionTable.constant(2, 3, Fraction(2, 3))
        assert correlation([const] * 4, p2) == Fraction(16, 81)

    @given(st.data(), st.integers(1, 2))
    def test_matches_brute_force(self, data, R):
        eps = data.draw(st.sampled_from([0, Fraction(1, 10), Fraction(1, 3)]))
        p = ProductDistribution(noisy_eta(2, eps), R)
        fs = [data.draw(tables(max_R=R, bases=(3,)).filter(lambda f: f.R == R)) for _ in range(4)]
        assert correlation(fs, p) == brute_correlation(fs, p)

    def test_binary_alphabet(self):
        p = ProductDistribution(noisy_eta(1, Fraction(1, 5)), 2)
        fs = [random_mean_function(2, 1, Fraction(1, 2), s) for s in range(3)]
        assert correlation(fs, p) == brute_correlation(fs, p)

    def test_monte_carlo_agrees(self):
        p = ProductDistribution(noisy_eta(2, Fraction(1, 10)), 3)
        f = random_mean_function(3, 2, Fraction(2, 3), 0)
        exact = correlation([f] * 4, p)
        est = correlation([f] * 4, p, monte_carlo=True, samples=200_000, seed=1)
        assert abs(est.estimate - float(exact)) < 5 * est.stderr + 1e-3
        again = correlation([f] * 4, p, monte_carlo=True, samples=200_000, seed=1)
        assert again == est

    def test_shape_checks(self):
        p = ProductDistribution(make_eta(2), 2)
        with pytest.raises(DimensionError):
            correlation([dictator(2, 1, 2)] * 3, p)
        with pytest.raises(DimensionError):
            correlation([dictator(3, 1, 2)] * 4, p)

    def test_cap(self):
        p = ProductDistribution(noisy_eta(2, Fraction(1, 10)), 3)
        with pytest.raises(ResourceLimitError):
            correlation([dictator(3, 1, 2)] * 4, p, cap=10)
