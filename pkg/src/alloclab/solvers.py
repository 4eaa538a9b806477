"""Exhaustive welfare maximization over every assignment of goods, for small
explicit instances. Deliberately naive: it is the reference the rest of the
package is checked against."""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .allocation import Allocation, AllocationInstance, Objective, _require_fields, validate_family2
from .core import InvalidParameterError, ResourceLimitError

DEFAULT_SOLVER_CAP = 10**7
NOBODY = None


@dataclass
class SolveResult:
    best_allocation: Optional[Allocation]
    best_value: Optional[Fraction]
    explored: int
    optima: list[Allocation] = field(default_factory=list)

    def to_json(self) -> dict:
        from .core import format_rational

        return {
            "best_allocation": None if self.best_allocation is None else self.best_allocation.to_json(),
            "best_value": None if self.best_value is None else format_rational(self.best_value),
            "explored": self.explored,
            "optima": len(self.optima),
        }


def _choices(n_agents: int) -> tuple:
    # nobody sorts before every agent in the lexicographic order
    return (NOBODY,) + tuple(range(n_agents))


def _scan(inst: AllocationInstance, obj: Objective, first: Optional[int], collect: bool):
    """Best assignment among those that give good 0 to ``first`` (all, if there are no goods)."""
    n, m = inst.n_agents, inst.n_goods
    value = [[g.value(a) for a in range(n)] for g in inst.goods]
    sizes = [g.size for g in inst.goods]
    choices = _choices(n)
    heads = [()] if m == 0 else [(first,)]
    best_value, best, optima, explored = None, None, [], 0
    for head in heads:
        for tail in itertools.product(choices, repeat=max(m - 1, 0)):
            assignment = head + tail
            explored += 1
            util = [Fraction(0)] * n
            load = [Fraction(0)] * n if obj is Objective.USW_GAP else None
            for g, agent in enumerate(assignment):
                if agent is not None:
                    util[agent] += value[g][agent]
                    if load is not None:
                        load[agent] += sizes[g]
            if obj is Objective.NASH:
                score = Fraction(1)
                for u in util:
                    score *= u
            elif obj is Objective.BUDGETED:
                score = sum((min(u, b) for u, b in zip(util, inst.budgets)), Fraction(0))
            else:
                if any(l > c for l, c in zip(load, inst.capacities)):
                    continue
                score = sum(util, Fraction(0))
            if best_value is None or score > best_value:
                best_value, best = score, assignment
                optima = [assignment] if collect else []
            elif collect and score == best_value:
                optima.append(assignment)
    return best_value, best, optima, explored


def solve_exact(
    inst: AllocationInstance,
    obj,
    cap: int = DEFAULT_SOLVER_CAP,
    collect_optima: bool = False,
    workers: int = 1,
) -> SolveResult:
    """Maximize ``obj`` by scanning all ``(n+1)^m`` assignments.

    Ties go to the first assignment in lexicographic order, with "nobody"
    ranked before agent 0. With ``workers > 1`` the scan is split by the
    first good's recipient and the partial results are merged in that same
    order, so the answer does not depend on the worker count.
    """
    obj = Objective(obj)
    _require_fields(inst, obj)
    size = (inst.n_agents + 1) ** inst.n_goods
    if size > cap:
        raise ResourceLimitError(f"{size} assignments exceeds the solver cap {cap}")
    if workers < 1:
        raise InvalidParameterError("workers must be positive")
    firsts = _choices(inst.n_agents) if inst.n_goods else (NOBODY,)
    args = [(inst, obj, first, collect_optima) for first in firsts]
    if workers == 1:
        parts = [_scan(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan, *zip(*args)))
    best_value, best, optima, explored = None, None, [], 0
    for value, assignment, opt, count in parts:
        explored += count
        if value is None:
            continue
        if best_value is None or value > best_value:
            best_value, best, optima = value, assignment, list(opt)
        elif value == best_value:
            optima.extend(opt)
    return SolveResult(
        None if best is None else Allocation(tuple(best)),
        best_value,
        explored,
        [Allocation(tuple(a)) for a in optima],
    )


def large_good_counts(inst: AllocationInstance, alloc: Allocation) -> list[int]:
    counts = [0] * inst.n_agents
    for g, agent in zip(inst.goods, alloc.assignment):
        if agent is not None and g.is_large and g.value(agent) > 0:
            counts[agent] += 1
    return counts


def check_single_large_good_property(inst: AllocationInstance, obj=Objective.NASH, cap: int = DEFAULT_SOLVER_CAP) -> bool:
    """True iff every optimal allocation gives each agent at most one large good.

    ``eps`` is read off the large-good value ``1/eps``; the instance must
    pass the equal-group family check.
    """
    large_values = {v for g in inst.goods if g.is_large for _, v in g.valuations if v > 0}
    if len(large_values) != 1:
        raise InvalidParameterError("large goods must share a single positive value 1/eps")
    eps = 1 / large_values.pop()
    check = validate_family2(inst, eps)
    if not check:
        raise InvalidParameterError(f"instance is outside the equal-group family: {check.clause} ({check.detail})")
    result = solve_exact(inst, obj, cap=cap, collect_optima=True)
    return all(max(large_good_counts(inst, a), default=0) <= 1 for a in result.optima)
