import itertools
from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def brute_correlation(fs, p):
    """Independent oracle: sum over the explicit support of the product distribution."""
    total = Fraction(0)
    for points, prob in p.iterate_support():
        term = prob
        for f, x in zip(fs, points):
            term *= f(x)
            if term == 0:
                break
        total += term
    return total


def brute_conditional_mean(f, T, x):
    """``E[f | x_T]`` by averaging over every completion of ``x`` outside ``T``."""
    free = [i for i in range(1, f.R + 1) if i not in T]
    total = Fraction(0)
    count = 0
    for fill in itertools.product(range(f.base), repeat=len(free)):
        y = list(x)
        for i, v in zip(free, fill):
            y[i - 1] = v
        total += f(y)
        count += 1
    return total / count


def brute_efron_stein(f, S, x):
    """``f_S(x)`` straight from the inclusion-exclusion definition, pointwise."""
    S = tuple(sorted(S))
    total = Fraction(0)
    for size in range(len(S) + 1):
        for T in itertools.combinations(S, size):
            total += (-1) ** (len(S) - size) * brute_conditional_mean(f, T, x)
    return total


@pytest.fixture
def eps():
    return Fraction(1, 10)


def recursive_optimum(inst, obj):
    """Second, independently written optimum: depth-first over goods, tracking utilities and loads."""
    n = inst.n_agents
    obj = str(getattr(obj, "value", obj))

    def score(util):
        if obj == "nash":
            out = Fraction(1)
            for u in util:
                out *= u
            return out
        if obj == "budgeted":
            return sum(min(u, b) for u, b in zip(util, inst.budgets))
        return sum(util)

    def go(g, util, load):
        if g == len(inst.goods):
            return score(util)
        best = go(g + 1, util, load)
        good = inst.goods[g]
        for a in range(n):
            new_load = load
            if obj == "usw_gap":
                new_load = load[:a] + (load[a] + good.size,) + load[a + 1 :]
                if new_load[a] > inst.capacities[a]:
                    continue
            util2 = util[:a] + (util[a] + good.value(a),) + util[a + 1 :]
            cand = go(g + 1, util2, new_load)
            if cand is not None and (best is None or cand > best):
                best = cand
        return best

    zero = (Fraction(0),) * n
    return go(0, zero, zero)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
