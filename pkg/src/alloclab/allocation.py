"""Indivisible-good allocation instances, welfare objectives and the
equal-group family check used by the hardness gadgets."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .core import (
    DimensionError,
    InvalidParameterError,
    as_fraction,
    format_rational,
    parse_rational,
)


class Objective(str, enum.Enum):
    NASH = "nash"
    BUDGETED = "budgeted"
    USW_GAP = "usw_gap"


@dataclass(frozen=True)
class Good:
    id: int
    valuations: tuple[tuple[int, Fraction], ...]
    size: Optional[Fraction] = None
    is_large: bool = False

    def value(self, agent: int) -> Fraction:
        for a, v in self.valuations:
            if a == agent:
                return v
        return Fraction(0)


@dataclass(frozen=True)
class AllocationInstance:
    n_agents: int
    goods: tuple[Good, ...]
    budgets: Optional[tuple[Fraction, ...]] = None
    capacities: Optional[tuple[Fraction, ...]] = None
    groups: Optional[tuple[tuple[int, ...], ...]] = None

    def __post_init__(self):
        goods = []
        for g in self.goods:
            vals = tuple((int(a), as_fraction(v)) for a, v in g.valuations)
            for a, v in vals:
                if not 0 <= a < self.n_agents:
                    raise DimensionError(f"good {g.id} names unknown agent {a}")
                if v < 0:
                    raise InvalidParameterError(f"good {g.id} has negative value for agent {a}")
            if len({a for a, _ in vals}) != len(vals):
                raise InvalidParameterError(f"good {g.id} lists an agent twice")
            size = None if g.size is None else as_fraction(g.size)
            goods.append(Good(g.id, vals, size, bool(g.is_large)))
        object.__setattr__(self, "goods", tuple(goods))
        for name in ("budgets", "capacities"):
            seq = getattr(self, name)
            if seq is not None:
                if len(seq) != self.n_agents:
                    raise DimensionError(f"{name} must list one entry per agent")
                object.__setattr__(self, name, tuple(as_fraction(v) for v in seq))
        if any(g.size is not None for g in goods) and self.capacities is None:
            raise InvalidParameterError("good sizes require agent capacities")
        if self.groups is not None:
            object.__setattr__(self, "groups", tuple(tuple(int(a) for a in grp) for grp in self.groups))

    @property
    def n_goods(self) -> int:
        return len(self.goods)

    def family2_summary(self) -> "Family2Summary":
        nonlarge = [Fraction(0)] * self.n_agents
        large = []
        for g in self.goods:
            if g.is_large:
                large.append(dict(g.valuations))
            else:
                for a, v in g.valuations:
                    nonlarge[a] += v
        return Family2Summary(self.groups, large, nonlarge)

    def to_json(self) -> dict:
        doc: dict = {"n_agents": self.n_agents, "goods": []}
        for g in self.goods:
            entry: dict = {"id": g.id, "vals": [[a, format_rational(v)] for a, v in g.valuations]}
            if g.size is not None:
                entry["size"] = format_rational(g.size)
            if g.is_large:
                entry["is_large"] = True
            doc["goods"].append(entry)
        if self.budgets is not None:
            doc["budgets"] = [format_rational(b) for b in self.budgets]
        if self.capacities is not None:
            doc["capacities"] = [format_rational(c) for c in self.capacities]
        if self.groups is not None:
            doc["groups"] = [list(grp) for grp in self.groups]
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "AllocationInstance":
        goods = tuple(
            Good(
                int(e["id"]),
                tuple((int(a), parse_rational(v)) for a, v in e["vals"]),
                parse_rational(e["size"]) if "size" in e else None,
                bool(e.get("is_large", False)),
            )
            for e in doc["goods"]
        )

        def rationals(key):
            return tuple(parse_rational(v) for v in doc[key]) if key in doc else None

        groups = tuple(tuple(grp) for grp in doc["groups"]) if "groups" in doc else None
        return cls(int(doc["n_agents"]), goods, rationals("budgets"), rationals("capacities"), groups)


@dataclass(frozen=True)
class Allocation:
    """``assignment[g]`` is the agent receiving good ``g`` or ``None``."""

    assignment: tuple[Optional[int], ...]

    def to_json(self) -> dict:
        return {"assignment": list(self.assignment)}

    @classmethod
    def from_json(cls, doc: Mapping) -> "Allocation":
        return cls(tuple(None if a is None else int(a) for a in doc["assignment"]))


def _check_allocation(inst: AllocationInstance, alloc: Allocation) -> None:
    if len(alloc.assignment) != inst.n_goods:
        raise DimensionError(f"allocation covers {len(alloc.assignment)} goods, instance has {inst.n_goods}")
    for a in alloc.assignment:
        if a is not None and not 0 <= a < inst.n_agents:
            raise DimensionError(f"unknown agent {a}")


def utilities(inst: AllocationInstance, alloc: Allocation) -> list[Fraction]:
    _check_allocation(inst, alloc)
    util = [Fraction(0)] * inst.n_agents
    for g, agent in zip(inst.goods, alloc.assignment):
        if agent is not None:
            util[agent] += g.value(agent)
    return util


def _require_fields(inst: AllocationInstance, obj: Objective) -> None:
    if obj is Objective.BUDGETED and inst.budgets is None:
        raise InvalidParameterError("budgeted welfare needs agent budgets")
    if obj is Objective.USW_GAP and (inst.capacities is None or any(g.size is None for g in inst.goods)):
        raise InvalidParameterError("GAP welfare needs capacities and a size for every good")


def evaluate_welfare(inst: AllocationInstance, alloc: Allocation, obj) -> Optional[Fraction]:
    """Objective value of ``alloc``; ``None`` marks a GAP capacity violation.

    Nash welfare is reported as the product of utilities (no n-th root) so
    that comparisons stay exact.
    """
    obj = Objective(obj)
    _require_fields(inst, obj)
    util = utilities(inst, alloc)
    if obj is Objective.NASH:
        product = Fraction(1)
        for u in util:
            product *= u
        return product
    if obj is Objective.BUDGETED:
        return sum((min(u, b) for u, b in zip(util, inst.budgets)), Fraction(0))
    load = [Fraction(0)] * inst.n_agents
    for g, agent in zip(inst.goods, alloc.assignment):
        if agent is not None:
            load[agent] += g.size
    if any(l > c for l, c in zip(load, inst.capacities)):
        return None
    return sum(util, Fraction(0))


def nash_log_mean(inst: AllocationInstance, alloc: Allocation) -> float:
    """Floating log of the geometric mean, for display only."""
    util = utilities(inst, alloc)
    if any(u == 0 for u in util):
        return float("-inf")
    return float(np.mean([np.log(float(u)) for u in util]))


@dataclass
class Family2Summary:
    """What the family check needs: groups, large-good valuations and per-agent non-large totals."""

    groups: Optional[Sequence[Sequence[int]]]
    large_goods: list[dict[int, Fraction]]
    nonlarge_totals: list[Fraction]


@dataclass(frozen=True)
class Family2Check:
    ok: bool
    clause: Optional[str] = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def validate_family2(inst, eps) -> Family2Check:
    """Check membership in the equal-group family.

    Agents split into equal groups; each group ``N_k`` owns ``2|N_k|/3``
    large goods worth ``1/eps`` to its members and 0 to everyone else; every
    agent values all non-large goods at most ``1 + eps`` in total. ``inst``
    is anything with a ``family2_summary()`` method.
    """
    eps = as_fraction(eps)
    s = inst.family2_summary()
    if not s.groups:
        return Family2Check(False, "groups", "no agent groups given")
    sizes = {len(g) for g in s.groups}
    if len(sizes) != 1:
        return Family2Check(False, "equal groups", f"group sizes {sorted(sizes)}")
    owner = {a: k for k, grp in enumerate(s.groups) for a in grp}
    per_group = [0] * len(s.groups)
    for idx, vals in enumerate(s.large_goods):
        positive = {a for a, v in vals.items() if v > 0}
        groups_hit = {owner.get(a) for a in positive}
        if len(groups_hit) != 1 or None in groups_hit:
            return Family2Check(False, "large good value", f"large good {idx} is not owned by exactly one group")
        k = groups_hit.pop()
        if positive != set(s.groups[k]) or any(vals[a] != 1 / eps for a in positive):
            return Family2Check(False, "large good value", f"large good {idx} is not worth 1/eps to all of group {k}")
        per_group[k] += 1
    for k, grp in enumerate(s.groups):
        if 3 * per_group[k] != 2 * len(grp):
            return Family2Check(False, "large good count", f"group {k} has {per_group[k]} large goods for {len(grp)} agents")
    for a, total in enumerate(s.nonlarge_totals):
        if total > 1 + eps:
            return Family2Check(False, "non-large value", f"agent {a} values non-large goods at {total}")
    return Family2Check(True)


def random_instance(n_agents: int, n_goods: int, rng_seed: int, denominators: int = 4) -> AllocationInstance:
    """Small random instance carrying budgets, capacities and sizes, for oracle cross-checks."""
    rng = np.random.default_rng(rng_seed)
    goods = []
    for g in range(n_goods):
        vals = tuple(
            (a, Fraction(int(rng.integers(1, 2 * denominators + 1)), denominators))
            for a in range(n_agents)
            if rng.random() < 0.7
        )
        size = Fraction(int(rng.integers(1, denominators + 1)), denominators)
        goods.append(Good(g, vals, size))
    budgets = tuple(Fraction(int(rng.integers(1, 3 * denominators)), denominators) for _ in range(n_agents))
    capacities = tuple(Fraction(int(rng.integers(1, 2 * denominators)), denominators) for _ in range(n_agents))
    return AllocationInstance(n_agents, tuple(goods), budgets, capacities)


def random_family2_instance(
    eps, rng_seed: int, n_groups: int = 1, group_size: int = 3, n_small: int = 3
) -> AllocationInstance:
    """A tiny instance from the equal-group family with random small goods.

    Each small good is valued by a random nonempty set of agents; each
    agent's non-large total is scaled to at most 1.
    """
    eps = as_fraction(eps)
    if group_size % 3:
        raise InvalidParameterError("group size must be a multiple of 3")
    rng = np.random.default_rng(rng_seed)
    n = n_groups * group_size
    groups = tuple(tuple(range(k * group_size, (k + 1) * group_size)) for k in range(n_groups))
    raw = []
    for _ in range(n_small):
        agents = [a for a in range(n) if rng.random() < 0.6] or [int(rng.integers(n))]
        raw.append({a: int(rng.integers(1, 6)) for a in agents})
    totals = [sum(vals.get(a, 0) for vals in raw) for a in range(n)]
    scale = max(max(totals), 1)
    goods = []
    for vals in raw:
        goods.append(Good(len(goods), tuple((a, Fraction(v, scale)) for a, v in sorted(vals.items()))))
    for grp in groups:
        for _ in range(2 * group_size // 3):
            goods.append(Good(len(goods), tuple((a, 1 / eps) for a in grp), is_large=True))
    return AllocationInstance(n, tuple(goods), groups=groups)
