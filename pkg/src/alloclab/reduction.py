"""Unique-games reduction to the equal-group allocation family, its GAP
variant, and the welfare-ratio arithmetic built on top of it.

Agents are pairs ``(a, x)`` flattened to ``a * 3^R + code(x)``. Small goods
are indexed by ``b``, an ordered 4-tuple of edges at ``b`` and a support
element of the noisy product distribution; they are enumerated, never stored.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .allocation import AllocationInstance, Family2Summary, Good
from .constants import GAP_C
from .core import (
    DimensionError,
    InvalidParameterError,
    ResourceLimitError,
    all_points,
    as_fraction,
    permutation_code_map,
)
from .distributions import ProductDistribution, int_dtype_for, noisy_eta
from .functions import FunctionTable, correlation
from .gadgets import UtilityTable, chi_slot
from .unique_games import Labeling, UGInstance, b_functions

Q = 2
BASE = Q + 1
ARITY = Q + 2

DEFAULT_D = 2
DEFAULT_TAU = Fraction(1, 10)
MAX_NEIGHBOR_TUPLES = 64
MAX_REDUCTION_R = 3
MAX_EXPLICIT_GOODS = 20_000


@dataclass(frozen=True, eq=False)
class MetaInstance:
    ug: UGInstance
    eps: Fraction
    d: int
    tau: Fraction
    p: ProductDistribution

    @property
    def R(self) -> int:
        return self.ug.R

    @property
    def delta(self) -> Fraction:
        return self.eps * self.tau**2 / (8 * self.d)

    @property
    def group_size(self) -> int:
        return BASE**self.R

    @property
    def n_agents(self) -> int:
        return self.ug.n_a * self.group_size

    @property
    def large_per_group(self) -> int:
        return Q * BASE ** (self.R - 1)

    @property
    def large_value(self) -> Fraction:
        return 1 / self.eps

    @property
    def dummy_count(self) -> int:
        return math.floor(self.delta * self.ug.n_a) * BASE ** (self.R - 1)

    @property
    def dummy_value(self) -> Fraction:
        return (1 - self.eps) / (self.ug.n_a * BASE ** (self.R - 1))

    @property
    def dummy_total(self) -> Fraction:
        return self.dummy_count * self.dummy_value

    @property
    def neighbor_tuples(self) -> int:
        return self.ug.n_b * self.ug.degree_b**ARITY

    @property
    def small_good_count(self) -> int:
        return self.neighbor_tuples * self.p.support_count()

    @property
    def small_denominator(self) -> int:
        return self.p.denominator * self.neighbor_tuples

    def good_count(self) -> int:
        return self.small_good_count + self.ug.n_a * self.large_per_group + self.dummy_count

    def agent(self, a: int, code: int) -> int:
        return a * self.group_size + code

    def small_goods(self, lead: Optional[Sequence[int]] = None) -> Iterator[tuple]:
        """Enumerate small goods in vectorized chunks.

        Yields ``(b, edges, column, agents, weights)``: ``agents`` has shape
        ``(4, n)``; ``weights`` are numerators over :attr:`small_denominator`;
        ``column`` is the support tuple of coordinate ``lead[b]`` shared by
        the chunk.
        """
        if self.ug.R > MAX_REDUCTION_R or self.neighbor_tuples > MAX_NEIGHBOR_TUPLES:
            raise ResourceLimitError(
                f"reduction enumeration limited to R <= {MAX_REDUCTION_R} and "
                f"|B| deg_B^4 <= {MAX_NEIGHBOR_TUPLES}"
            )
        maps = {id(e): permutation_code_map(e.perm, BASE) for e in self.ug.edges}
        for b in range(self.ug.n_b):
            at_b = self.ug.edges_at_b(b)
            lead_b = 1 if lead is None else lead[b]
            for combo in itertools.product(at_b, repeat=ARITY):
                for column, codes, weights in self.p.chunks(lead=lead_b):
                    agents = np.stack(
                        [e.a * self.group_size + maps[id(e)][codes[j]] for j, e in enumerate(combo)]
                    )
                    yield b, combo, column, agents, weights

    def small_mass(self) -> Fraction:
        total = sum(int(w.sum()) for *_, w in self.small_goods())
        return Fraction(total, self.small_denominator)

    def groups(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(range(a * self.group_size, (a + 1) * self.group_size)) for a in range(self.ug.n_a)
        )

    def small_totals(self) -> list[Fraction]:
        """Each agent's total value for all small goods (a good counts once per agent)."""
        acc = np.zeros(self.n_agents, dtype=int_dtype_for(self.small_denominator))
        for *_, agents, weights in self.small_goods():
            for j in range(ARITY):
                fresh = np.ones(agents.shape[1], dtype=bool)
                for earlier in range(j):
                    fresh &= agents[j] != agents[earlier]
                np.add.at(acc, agents[j][fresh], weights[fresh])
        return [Fraction(int(v), self.small_denominator) for v in acc]

    def family2_summary(self) -> Family2Summary:
        large = []
        for grp in self.groups():
            for _ in range(self.large_per_group):
                large.append({agent: self.large_value for agent in grp})
        totals = [s + self.dummy_total for s in self.small_totals()]
        return Family2Summary(self.groups(), large, totals)

    def to_allocation_instance(self) -> AllocationInstance:
        """Explicit instance; small goods first, then large, then dummy goods."""
        if self.good_count() > MAX_EXPLICIT_GOODS:
            raise ResourceLimitError(f"{self.good_count()} goods exceeds the explicit limit {MAX_EXPLICIT_GOODS}")
        goods = []
        for *_, agents, weights in self.small_goods():
            for col in range(agents.shape[1]):
                value = Fraction(int(weights[col]), self.small_denominator)
                members = sorted({int(v) for v in agents[:, col]})
                goods.append(Good(len(goods), tuple((m, value) for m in members)))
        for grp in self.groups():
            for _ in range(self.large_per_group):
                goods.append(Good(len(goods), tuple((m, self.large_value) for m in grp), is_large=True))
        everyone = range(self.n_agents)
        for _ in range(self.dummy_count):
            goods.append(Good(len(goods), tuple((m, self.dummy_value) for m in everyone)))
        return AllocationInstance(self.n_agents, tuple(goods), groups=self.groups())


def build_meta_instance(ug: UGInstance, eps, d: int = DEFAULT_D, tau=DEFAULT_TAU) -> MetaInstance:
    eps, tau = as_fraction(eps), as_fraction(tau)
    if not 0 < eps < 1:
        raise InvalidParameterError(f"eps = {eps} outside (0, 1)")
    if d < 1 or tau <= 0:
        raise InvalidParameterError("need d >= 1 and tau > 0")
    return MetaInstance(ug, eps, d, tau, ProductDistribution(noisy_eta(Q, eps), ug.R))


def _lex_order(R: int) -> list[int]:
    """Point codes sorted lexicographically by the point tuple."""
    points = all_points(R, BASE)
    return sorted(range(len(points)), key=lambda c: tuple(points[c]))


@dataclass(frozen=True)
class YesAllocation:
    utilities: UtilityTable
    large_holders: frozenset
    small_by_agent: tuple[Fraction, ...]
    goods_by_agent: tuple[int, ...]  # small and dummy goods held
    dummies_used: int

    def nonlarge(self) -> UtilityTable:
        return self.utilities.restrict(a for a in self.utilities.agents if a not in self.large_holders)

    def min_nonlarge(self) -> Fraction:
        return self.nonlarge().min()

    @property
    def small_total(self) -> Fraction:
        return sum(self.small_by_agent, Fraction(0))


def yes_allocation(inst: MetaInstance, labeling: Labeling, a_prime=None) -> YesAllocation:
    """The allocation built from a labeling that satisfies every edge at ``a_prime``.

    Groups in ``a_prime`` hand large goods to ``x`` with ``x_{label(a)} > 0``;
    other groups use lexicographic order and give dummies to the rest. Each
    small good goes to its chi slot on coordinate ``label(b)``.
    """
    ug = inst.ug
    if a_prime is None:
        a_prime = {
            a for a in range(ug.n_a) if all(e.perm(labeling.labels_a[a]) == labeling.labels_b[e.b] for e in ug.edges_at_a(a))
        }
    a_prime = set(a_prime)
    for e in ug.edges:
        if e.a in a_prime and e.perm(labeling.labels_a[e.a]) != labeling.labels_b[e.b]:
            raise InvalidParameterError(f"labeling violates edge ({e.a}, {e.b}) at a node of A'")
    deficient = [a for a in range(ug.n_a) if a not in a_prime]
    per_group_dummies = inst.group_size - inst.large_per_group
    if len(deficient) * per_group_dummies > inst.dummy_count:
        raise InvalidParameterError(
            f"{len(deficient)} unlabeled groups need {len(deficient) * per_group_dummies} dummy goods; "
            f"only {inst.dummy_count} exist"
        )
    points = all_points(inst.R, BASE)
    lex = _lex_order(inst.R)
    large = set()
    dummy_holders = []
    for a in range(ug.n_a):
        if a in a_prime:
            coord = labeling.labels_a[a]
            large.update(inst.agent(a, c) for c in np.flatnonzero(points[:, coord - 1] > 0))
        else:
            large.update(inst.agent(a, c) for c in lex[: inst.large_per_group])
            dummy_holders.extend(inst.agent(a, c) for c in lex[inst.large_per_group :])
    small = np.zeros(inst.n_agents, dtype=int_dtype_for(inst.small_denominator))
    counts = np.zeros(inst.n_agents, dtype=np.int64)
    for _, _, column, agents, weights in inst.small_goods(lead=labeling.labels_b):
        recipients = agents[chi_slot(column) - 1]
        np.add.at(small, recipients, weights)
        np.add.at(counts, recipients, 1)
    small_frac = [Fraction(int(v), inst.small_denominator) for v in small]
    util = []
    for agent in range(inst.n_agents):
        u = small_frac[agent]
        if agent in large:
            u += inst.large_value
        util.append(u)
    for agent in dummy_holders:
        util[agent] += inst.dummy_value
        counts[agent] += 1
    return YesAllocation(
        UtilityTable(tuple(range(inst.n_agents)), tuple(util)),
        frozenset(large),
        tuple(small_frac),
        tuple(int(c) for c in counts),
        len(dummy_holders),
    )


def yes_floor(inst: MetaInstance) -> Fraction:
    """Guaranteed utility of every non-large agent in the YES allocation."""
    return (1 - inst.eps) / (inst.ug.n_a * BASE ** (inst.R - 1))


def _check_group_functions(inst: MetaInstance, fs: Sequence[FunctionTable]) -> None:
    if len(fs) != inst.ug.n_a:
        raise DimensionError("need one function per node of A")
    for f in fs:
        if (f.R, f.base) != (inst.R, BASE):
            raise DimensionError("function shape does not match the instance")
        if not f.is_boolean() or f.mean() != Fraction(Q, BASE):
            raise InvalidParameterError(f"each f_a must be 0/1 with mean {Q}/{BASE}")


def no_case_bound(inst: MetaInstance, fs: Sequence[FunctionTable]) -> Fraction:
    """Exact ceiling on the utility of agents without a large good.

    ``fs[a]`` marks which agents ``(a, x)`` hold a large good. The value is
    ``dummy_total + 1 - E_g[prod_j f_{a_j}(x^j o pi_{a_j, b})]`` with the
    expectation over small goods, summed over every neighbor 4-tuple.
    """
    _check_group_functions(inst, fs)
    if inst.neighbor_tuples > MAX_NEIGHBOR_TUPLES or inst.R > MAX_REDUCTION_R:
        raise ResourceLimitError("instance too large for exact NO-case evaluation")
    composed = {id(e): fs[e.a].compose(e.perm) for e in inst.ug.edges}
    total = Fraction(0)
    for b in range(inst.ug.n_b):
        for combo in itertools.product(inst.ug.edges_at_b(b), repeat=ARITY):
            total += correlation([composed[id(e)] for e in combo], inst.p)
    return inst.dummy_total + 1 - total / inst.neighbor_tuples


def no_case_bound_collapsed(inst: MetaInstance, fs: Sequence[FunctionTable]) -> Fraction:
    """Same ceiling via the averaged functions ``f_b``: ``dummy + 1 - E_b E[prod_j f_b(x^j)]``."""
    _check_group_functions(inst, fs)
    fb = b_functions(inst.ug, fs)
    mean = sum((correlation([f] * ARITY, inst.p) for f in fb), Fraction(0)) / inst.ug.n_b
    return inst.dummy_total + 1 - mean


# --- GAP variant ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GapInstance:
    meta: MetaInstance
    c: Fraction

    @property
    def large_value(self) -> Fraction:
        return self.c / (self.meta.ug.n_a * BASE**self.meta.R)

    @property
    def large_size(self) -> Fraction:
        return Fraction(1)

    @property
    def capacity(self) -> Fraction:
        return Fraction(1)

    @property
    def small_size(self) -> Fraction:
        """Size of every small and dummy good: ``1 / (2m)`` for ``m`` goods in total."""
        return Fraction(1, 2 * self.meta.good_count())


def build_gap_instance(ug: UGInstance, eps, d: int = DEFAULT_D, tau=DEFAULT_TAU, c=GAP_C) -> GapInstance:
    return GapInstance(build_meta_instance(ug, eps, d, tau), as_fraction(c))


def gap_yes_usw(inst: GapInstance) -> Fraction:
    """Welfare guaranteed by the YES allocation: every non-large agent at its floor plus all large goods."""
    meta = inst.meta
    n_nonlarge = meta.ug.n_a * (meta.group_size - meta.large_per_group)
    n_large = meta.ug.n_a * meta.large_per_group
    return yes_floor(meta) * n_nonlarge + inst.large_value * n_large


@dataclass(frozen=True)
class GapYesResult:
    usw: Fraction
    feasible: bool


def gap_yes_allocation(inst: GapInstance, labeling: Labeling) -> GapYesResult:
    """Realized welfare of the YES allocation after stripping small goods from large holders."""
    meta = inst.meta
    yes = yes_allocation(meta, labeling)
    usw = Fraction(0)
    feasible = True
    for agent in range(meta.n_agents):
        if agent in yes.large_holders:
            usw += inst.large_value
            load = inst.large_size
        else:
            usw += yes.utilities.values[agent]
            load = yes.goods_by_agent[agent] * inst.small_size
        feasible &= load <= inst.capacity
    return GapYesResult(usw, feasible)


def quartic_gap(x, c=GAP_C) -> Fraction:
    x = as_fraction(x)
    return x**4 - as_fraction(c) * x


def quartic_stationary_point(c=GAP_C) -> Fraction:
    """Exact root of ``4x^3 = c`` when ``c/4`` is a rational cube."""
    target = as_fraction(c) / 4
    num = round(target.numerator ** (1 / 3))
    den = round(target.denominator ** (1 / 3))
    root = Fraction(num, den)
    if root**3 != target:
        raise InvalidParameterError(f"{target} is not a rational cube")
    return root


def quartic_grid_minimum(c=GAP_C, step=Fraction(1, 1000), extra_denominators=(3,)) -> tuple[Fraction, Fraction]:
    """Exact minimum of ``x^4 - c x`` over a rational grid on ``[0, 1]``.

    The grid holds the multiples of ``step`` plus the multiples of
    ``1/k`` for each ``k`` in ``extra_denominators``.
    """
    step = as_fraction(step)
    grid = {k * step for k in range(int(1 / step) + 1)}
    for k in extra_denominators:
        grid.update(Fraction(j, k) for j in range(k + 1))
    best = min(grid, key=lambda x: (quartic_gap(x, c), x))
    return best, quartic_gap(best, c)


def gap_no_bound(eps) -> Fraction:
    """``(1 + 4 eps) + 48/81``: NO-case welfare ceiling before the final relaxation."""
    eps = as_fraction(eps)
    return 1 + 4 * eps - quartic_gap(quartic_stationary_point())


# --- ratio arithmetic ----------------------------------------------------


@dataclass
class BoundReport:
    eps: Fraction
    values: dict[str, Fraction] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    decimals: dict[str, float] = field(default_factory=dict)

    def all_pass(self) -> bool:
        return all(self.checks.values())


def theorem_ratios(eps) -> BoundReport:
    """YES/NO welfare, their ratio, and each inequality of the three ratio chains, exactly.

    Nash welfare is handled through cubes normalised by
    ``(1/eps)^2 (3/n)``, so every quantity stays rational.
    """
    eps = as_fraction(eps)
    if not 0 < eps <= Fraction(1, 100):
        raise InvalidParameterError("eps must lie in (0, 1/100]")
    s = Fraction(65, 81)
    rep = BoundReport(eps)
    v, chk, dec = rep.values, rep.checks, rep.decimals

    v["nash_yes_cubed"] = 1 - eps
    v["nash_no_cubed"] = s * (1 + 5 * eps) ** 3
    v["nash_ratio_cubed"] = v["nash_yes_cubed"] / v["nash_no_cubed"]
    chk["nash_small_sum_relaxation"] = s + 3 * eps <= s * (1 + 5 * eps)
    chk["nash_large_holder_relaxation"] = 1 / eps + 1 + eps <= (1 / eps) * (1 + 5 * eps)
    chk["nash_chain_cubed"] = v["nash_ratio_cubed"] >= (1 / s) * (1 - eps) ** 3 * (1 - 10 * eps) ** 3
    # r (1 - eps)(1 - 10 eps) >= r - 20 eps  <=>  r <= 20 / (11 - 10 eps), with r^3 = 81/65
    chk["nash_final_linearization"] = 1 / s <= (20 / (11 - 10 * eps)) ** 3
    nash_limit = float(1 / s) ** (1 / 3)
    dec["nash"] = float(v["nash_ratio_cubed"]) ** (1 / 3)
    dec["nash_lower"] = nash_limit - 20 * float(eps)

    v["budget_yes"] = 3 * (1 - eps)
    v["budget_no"] = 2 * (1 - eps) + s + 3 * eps
    v["budget_ratio"] = v["budget_yes"] / v["budget_no"]
    chk["budget_no_closed_form"] = v["budget_no"] == Fraction(227, 81) + eps
    chk["budget_chain_square"] = v["budget_ratio"] >= Fraction(243, 227) * (1 - eps) ** 2
    chk["budget_final_linearization"] = Fraction(243, 227) * (1 - eps) ** 2 >= Fraction(243, 227) - 4 * eps
    dec["budget"] = float(v["budget_ratio"])
    dec["budget_lower"] = float(Fraction(243, 227) - 4 * eps)

    v["gap_yes"] = Fraction(145, 81) - eps
    v["gap_no"] = Fraction(129, 81) + 5 * eps
    v["gap_ratio"] = v["gap_yes"] / v["gap_no"]
    chk["gap_no_relaxation"] = gap_no_bound(eps) <= v["gap_no"]
    chk["gap_chain_first"] = v["gap_ratio"] >= Fraction(145, 129) * (1 - 5 * eps) - eps
    chk["gap_final_linearization"] = Fraction(145, 129) * (1 - 5 * eps) - eps >= Fraction(145, 129) - 11 * eps
    dec["gap"] = float(v["gap_ratio"])
    dec["gap_lower"] = float(Fraction(145, 129) - 11 * eps)
    return rep


@dataclass(frozen=True)
class LimitRatios:
    q: int
    soundness: Fraction
    nash_power: Fraction  # ratio ** (q + 1)
    budget: Fraction
    gap: Fraction
    gap_c: Fraction

    @property
    def nash(self) -> float:
        return float(self.nash_power) ** (1 / (self.q + 1))


def limit_ratios(q: int) -> LimitRatios:
    """Hardness ratios as eps -> 0 for the dictator test over ``{0..q}``.

    A ``q/(q+1)`` share of agents hold large goods. The GAP value scale is
    ``c = (q+2) (q/(q+1))^(q+1)``, which puts the maximiser of
    ``c x - x^(q+2)`` at ``x = q/(q+1)``.
    """
    m = Fraction(q, q + 1)
    s = 1 - m ** (q + 2)
    c = (q + 2) * m ** (q + 1)
    gap_no = 1 + c * m - m ** (q + 2)
    return LimitRatios(
        q=q,
        soundness=s,
        nash_power=1 / s,
        budget=(q + 1) / (q + s),
        gap=(1 + c * m) / gap_no,
        gap_c=c,
    )
