"""The allocation dictator test: one agent per point of ``{0..q}^R``, small
goods weighted by the noisy product distribution, and ``q (q+1)^(R-1)``
large goods. Small goods stay implicit unless explicitly materialized."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .allocation import Allocation, AllocationInstance, Good
from .core import (
    DimensionError,
    InvalidAllocationError,
    InvalidParameterError,
    ResourceLimitError,
    all_points,
    as_fraction,
    is_prime,
)
from .distributions import ProductDistribution, int_dtype_for, noisy_eta
from .functions import FunctionTable, correlation, influence_profile


def chi(w: Sequence[int]) -> int:
    """1-based position of the first zero in ``w``, or 0 when there is none."""
    for pos, v in enumerate(w, start=1):
        if v == 0:
            return pos
    return 0


def chi_slot(w: Sequence[int]) -> int:
    """Receiving slot under the chi rule: ``chi(w)``, falling back to slot 1."""
    return chi(w) or 1


@dataclass(frozen=True)
class UtilityTable:
    """Exact utilities for a set of agents, keyed by agent index."""

    agents: tuple[int, ...]
    values: tuple[Fraction, ...]

    def as_dict(self) -> dict[int, Fraction]:
        return dict(zip(self.agents, self.values))

    def min(self) -> Fraction:
        return min(self.values)

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def restrict(self, agents) -> "UtilityTable":
        keep = set(agents)
        pairs = [(a, v) for a, v in zip(self.agents, self.values) if a in keep]
        return UtilityTable(tuple(a for a, _ in pairs), tuple(v for _, v in pairs))


@dataclass(frozen=True, eq=False)
class DictatorTestInstance:
    R: int
    q: int
    eps: Fraction
    p: ProductDistribution

    @property
    def base(self) -> int:
        return self.q + 1

    @property
    def n_agents(self) -> int:
        return self.base**self.R

    @property
    def large_good_count(self) -> int:
        return self.q * self.base ** (self.R - 1)

    @property
    def large_value(self) -> Optional[Fraction]:
        return None if self.eps == 0 else 1 / self.eps

    @property
    def small_good_count(self) -> int:
        return self.p.support_count()

    def agents_with(self, i: int, digit_positive: bool) -> np.ndarray:
        digits = all_points(self.R, self.base)[:, i - 1]
        return np.flatnonzero(digits > 0 if digit_positive else digits == 0)

    def materialize(self) -> AllocationInstance:
        """Explicit instance; only for ``R == 1`` and ``q <= 2``."""
        if self.R != 1 or self.q > 2 or self.eps == 0:
            raise ResourceLimitError("explicit dictator-test instances are limited to R = 1, q <= 2, eps > 0")
        goods = []
        for points, prob in self.p.iterate_support():
            agents = sorted({point[0] for point in points})
            goods.append(Good(len(goods), tuple((a, prob) for a in agents)))
        for _ in range(self.large_good_count):
            goods.append(Good(len(goods), tuple((a, self.large_value) for a in range(self.n_agents)), is_large=True))
        return AllocationInstance(self.n_agents, tuple(goods), groups=(tuple(range(self.n_agents)),))


def build_dictator_test(R: int, q: int, eps) -> DictatorTestInstance:
    """Dictator-test instance over ``{0..q}^R``.

    ``eps`` must lie in ``[0, 1)``; ``eps == 0`` gives the noiseless toy
    variant (no large-good value) used for exhaustive soundness landscapes.
    """
    eps = as_fraction(eps)
    if R < 1:
        raise InvalidParameterError("R must be positive")
    if q < 1 or not is_prime(q + 1):
        raise InvalidParameterError(f"q + 1 = {q + 1} must be prime")
    if not 0 <= eps < 1:
        raise InvalidParameterError(f"eps = {eps} outside [0, 1)")
    return DictatorTestInstance(R, q, eps, ProductDistribution(noisy_eta(q, eps), R))


def chi_allocation_utilities(inst: DictatorTestInstance, i: int, cap: Optional[int] = None) -> UtilityTable:
    """Small-good utility of every agent when each good goes to its chi slot on coordinate ``i``."""
    if not 1 <= i <= inst.R:
        raise DimensionError(f"coordinate {i} outside 1..{inst.R}")
    p = inst.p
    acc = np.zeros(inst.n_agents, dtype=int_dtype_for(p.denominator))
    for column, codes, weights in p.chunks(lead=i, cap=cap):
        np.add.at(acc, codes[chi_slot(column) - 1], weights)
    return UtilityTable(tuple(range(inst.n_agents)), tuple(Fraction(int(v), p.denominator) for v in acc))


def completeness_utilities(inst: DictatorTestInstance, i: int, cap: Optional[int] = None) -> UtilityTable:
    """Utilities of the agents with ``x_i = 0`` under the chi allocation."""
    return chi_allocation_utilities(inst, i, cap).restrict(int(a) for a in inst.agents_with(i, False))


def completeness_floor(inst: DictatorTestInstance) -> Fraction:
    """The guaranteed per-agent utility ``(1 - eps) / (q+1)^(R-1)``."""
    return (1 - inst.eps) / inst.base ** (inst.R - 1)


def soundness_limit(q: int) -> Fraction:
    """``1 - (q/(q+1))^(q+2)``: small-good mass left to non-large agents by a random-like function."""
    return 1 - Fraction(q, q + 1) ** (q + 2)


def soundness_value(inst: DictatorTestInstance, f: FunctionTable, cap: Optional[int] = None) -> Fraction:
    """``1 - E[prod_j f(x^j)]``: the most small-good mass agents without a large good can hold.

    ``f`` must be 0/1 valued with mean ``q/(q+1)``, i.e. encode an
    allocation that hands out every large good, one per agent.
    """
    if (f.R, f.base) != (inst.R, inst.base):
        raise DimensionError("function does not match the instance")
    if not f.is_boolean() or f.mean() != Fraction(inst.q, inst.base):
        raise InvalidParameterError(f"f must be 0/1 with mean {inst.q}/{inst.base}")
    return 1 - correlation([f] * inst.p.k, inst.p, cap=cap)


def function_from_allocation(inst: DictatorTestInstance, alloc) -> FunctionTable:
    """Indicator of agents holding a large good.

    ``alloc`` is either a sequence of recipients (agent or ``None``), one
    per large good, or an :class:`Allocation` of the materialized instance.
    """
    if isinstance(alloc, Allocation):
        recipients = alloc.assignment[-inst.large_good_count:] if inst.large_good_count else ()
        if len(alloc.assignment) != inst.small_good_count + inst.large_good_count:
            raise DimensionError("allocation does not match the materialized instance")
    else:
        recipients = tuple(alloc)
        if len(recipients) != inst.large_good_count:
            raise DimensionError(f"expected {inst.large_good_count} large-good recipients")
    ones = np.zeros(inst.n_agents, dtype=np.int64)
    for agent in recipients:
        if agent is None:
            continue
        if not 0 <= agent < inst.n_agents:
            raise DimensionError(f"unknown agent {agent}")
        if ones[agent]:
            raise InvalidAllocationError(f"agent {agent} holds two large goods")
        ones[agent] = 1
    return FunctionTable.from_indicator(inst.R, inst.base, ones)


def dictator_large_recipients(inst: DictatorTestInstance, i: int) -> list[int]:
    """Large goods to the agents with ``x_i > 0``, in agent order."""
    return [int(a) for a in inst.agents_with(i, True)]


def mean_constrained_functions(R: int, q: int):
    """Every 0/1 function on ``{0..q}^R`` with exactly ``q (q+1)^(R-1)`` ones."""
    base = q + 1
    size = base**R
    count = q * base ** (R - 1)
    if math.comb(size, count) > 10**6:
        raise ResourceLimitError(f"{math.comb(size, count)} functions is too many to enumerate")
    for ones in itertools.combinations(range(size), count):
        table = np.zeros(size, dtype=np.int64)
        table[list(ones)] = 1
        yield FunctionTable.from_indicator(R, base, table)


@dataclass(frozen=True)
class LandscapeRow:
    ones: tuple[int, ...]
    value: Fraction
    low_degree: tuple[Fraction, ...]
    is_dictator: bool


def soundness_landscape(inst: DictatorTestInstance, d: int = 1) -> list[LandscapeRow]:
    """Soundness value and degree-``d`` influences of every mean-constrained function."""
    dictators = {
        tuple(dictator_large_recipients(inst, i)) for i in range(1, inst.R + 1)
    }
    rows = []
    for f in mean_constrained_functions(inst.R, inst.q):
        ones = tuple(int(c) for c in np.flatnonzero(f.numerators))
        rows.append(
            LandscapeRow(ones, soundness_value(inst, f), influence_profile(f, d).low_degree, ones in dictators)
        )
    return rows
