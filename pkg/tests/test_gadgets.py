import itertools
from fractions import Fraction

import pytest

from alloclab.allocation import Allocation, validate_family2
from alloclab.core import DimensionError, InvalidAllocationError, InvalidParameterError, ResourceLimitError
from alloclab.functions import FunctionTable, correlation, dictator, random_mean_function
from alloclab.gadgets import (
    build_dictator_test,
    chi,
    chi_allocation_utilities,
    chi_slot,
    completeness_floor,
    completeness_utilities,
    dictator_large_recipients,
    function_from_allocation,
    mean_constrained_functions,
    soundness_landscape,
    soundness_limit,
    soundness_value,
)

EPS = Fraction(1, 10)


def brute_chi_utilities(inst, i):
    util = [Fraction(0)] * inst.n_agents
    for points, prob in inst.p.iterate_support():
        column = tuple(x[i - 1] for x in points)
        winner = points[chi_slot(column) - 1]
        util[sum(d * inst.base**k for k, d in enumerate(winner))] += prob
    return util


class TestChi:
    def test_examples(self):
        assert chi((1, 0, 2, 0)) == 2
        assert chi((1, 1, 1, 1)) == 0
        assert chi_slot((1, 1, 1, 1)) == 1
        assert chi((0, 1, 1, 1)) == 1

    def test_positive_on_eta_support(self):
        from alloclab.distributions import make_eta

        rows, _ = make_eta(2).support()
        assert all(chi(tuple(r)) > 0 for r in rows)


class TestInstance:
    def test_counts(self):
        inst = build_dictator_test(2, 2, EPS)
        assert inst.n_agents == 9
        assert inst.large_good_count == 6
        assert inst.large_value == 10
        assert build_dictator_test(1, 2, 0).large_value is None

    @pytest.mark.parametrize("kwargs", [dict(R=0, q=2, eps=EPS), dict(R=1, q=3, eps=EPS), dict(R=1, q=2, eps=1)])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameterError):
            build_dictator_test(**kwargs)

    def test_materialized_is_in_family(self):
        inst = build_dictator_test(1, 2, EPS)
        explicit = inst.materialize()
        assert explicit.n_goods == inst.small_good_count + 2
        assert validate_family2(explicit, EPS)
        total = sum(v for g in explicit.goods if not g.is_large for _, v in g.valuations[:1])
        assert total == 1

    def test_materialize_limits(self):
        with pytest.raises(ResourceLimitError):
            build_dictator_test(2, 2, EPS).materialize()


class TestCompleteness:
    def test_single_coordinate_value(self):
        inst = build_dictator_test(1, 2, EPS)
        assert completeness_utilities(inst, 1).values == (Fraction(397, 405),)
        assert completeness_floor(inst) == Fraction(9, 10)

    @pytest.mark.parametrize("R,q", [(1, 2), (2, 2), (1, 1), (2, 1), (1, 4)])
    def test_matches_brute_force(self, R, q):
        inst = build_dictator_test(R, q, Fraction(1, 7))
        for i in range(1, R + 1):
            assert list(chi_allocation_utilities(inst, i).values) == brute_chi_utilities(inst, i)

    @pytest.mark.parametrize("R", [1, 2, 3])
    def test_floor_holds(self, R):
        inst = build_dictator_test(R, 2, EPS)
        for i in range(1, R + 1):
            util = completeness_utilities(inst, i)
            assert len(util.agents) == 3 ** (R - 1)
            assert util.min() >= completeness_floor(inst)
            # every zero-agent receives the same mass by symmetry
            assert len(set(util.values)) == 1

    def test_bad_coordinate(self):
        with pytest.raises(DimensionError):
            completeness_utilities(build_dictator_test(2, 2, EPS), 3)


class TestSoundness:
    def test_limits(self):
        assert soundness_limit(1) == Fraction(7, 8)
        assert soundness_limit(2) == Fraction(65, 81)
        assert soundness_limit(4) == 1 - Fraction(4, 5) ** 6

    def test_dictator_noiseless(self):
        inst = build_dictator_test(2, 2, 0)
        for i in (1, 2):
            assert soundness_value(inst, dictator(2, i, 2)) == 1

    def test_dictator_noisy(self):
        inst = build_dictator_test(2, 2, EPS)
        assert soundness_value(inst, dictator(2, 1, 2)) == 1 - EPS * Fraction(16, 81)

    def test_is_one_minus_correlation(self):
        inst = build_dictator_test(3, 2, EPS)
        f = random_mean_function(3, 2, Fraction(2, 3), 5)
        assert soundness_value(inst, f) == 1 - correlation([f] * 4, inst.p)

    def test_mean_constraint_enforced(self):
        inst = build_dictator_test(1, 2, 0)
        with pytest.raises(InvalidParameterError):
            soundness_value(inst, FunctionTable.from_indicator(1, 3, [1, 0, 0]))
        with pytest.raises(InvalidParameterError):
            soundness_value(inst, FunctionTable.from_values(1, 3, [1, 1, Fraction(0)]).__class__.constant(1, 3, Fraction(2, 3)))

    def test_landscape_sizes(self):
        assert sum(1 for _ in mean_constrained_functions(1, 2)) == 3
        assert sum(1 for _ in mean_constrained_functions(2, 2)) == 84

    def test_landscape_r1(self):
        rows = soundness_landscape(build_dictator_test(1, 2, 0))
        assert len(rows) == 3
        dictators = [r for r in rows if r.is_dictator]
        assert len(dictators) == 1 and dictators[0].value == 1
        assert max(r.value for r in rows if not r.is_dictator) < 1

    def test_landscape_r2_maximizers(self):
        # the zero sets {x1 + x2 = 0} and {x1 + 2 x2 = 0} are lines through the
        # origin just like the dictators' zero sets, so they also reach value 1
        rows = soundness_landscape(build_dictator_test(2, 2, 0))
        best = [r for r in rows if r.value == 1]
        assert len(best) == 4
        assert sum(r.is_dictator for r in best) == 2
        lines = [r for r in best if not r.is_dictator]
        assert all(r.low_degree == (0, 0) for r in lines)


class TestAllocationToFunction:
    def test_dictator_recipients(self):
        inst = build_dictator_test(2, 2, EPS)
        f = function_from_allocation(inst, dictator_large_recipients(inst, 2))
        assert f == dictator(2, 2, 2)

    def test_double_large_good_rejected(self):
        inst = build_dictator_test(1, 2, EPS)
        with pytest.raises(InvalidAllocationError):
            function_from_allocation(inst, [1, 1])

    def test_from_materialized_allocation(self):
        inst = build_dictator_test(1, 2, EPS)
        explicit = inst.materialize()
        assignment = [None] * inst.small_good_count + [1, 2]
        f = function_from_allocation(inst, Allocation(tuple(assignment)))
        assert f == dictator(1, 1, 2)

    def test_all_allocations_of_large_goods(self):
        # every injective placement of the two large goods gives a mean-2/3 function
        inst = build_dictator_test(1, 2, EPS)
        for pair in itertools.permutations(range(3), 2):
            f = function_from_allocation(inst, pair)
            assert f.mean() == Fraction(2, 3)
            assert soundness_value(inst, f) == 1 - correlation([f] * 4, inst.p)

    def test_linear_maximizers_by_brute_force(self):
        # zero sets are the lines x1 + x2 = 0 and x1 + 2 x2 = 0 (mod 3); value
        # confirmed by summing over the explicit support
        from conftest import brute_correlation

        inst = build_dictator_test(2, 2, 0)
        for ones in ((1, 2, 3, 4, 6, 8), (1, 2, 3, 5, 6, 7)):
            f = FunctionTable.from_indicator(2, 3, [1 if c in ones else 0 for c in range(9)])
            assert 1 - brute_correlation([f] * 4, inst.p) == 1
            assert soundness_value(inst, f) == 1
