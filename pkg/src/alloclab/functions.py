"""Functions ``{0..q}^R -> [0, 1]``, Efron-Stein decompositions and influences.

Tables are stored as integer numerators over one common denominator and
reshaped with Fortran order, so tensor axis ``i`` is coordinate ``i + 1``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .core import (
    DimensionError,
    InvalidParameterError,
    Permutation,
    ResourceLimitError,
    as_fraction,
    format_rational,
    parse_rational,
    permutation_code_map,
    point_code,
)
from .distributions import ProductDistribution, int_dtype_for

DEFAULT_DECOMPOSITION_CAP = 2**8 * 3**8


@dataclass(frozen=True, eq=False)
class FunctionTable:
    R: int
    base: int
    numerators: np.ndarray
    denominator: int = 1

    def __post_init__(self):
        nums = [int(v) for v in np.asarray(self.numerators).ravel()]
        if len(nums) != self.base**self.R:
            raise DimensionError(f"expected {self.base ** self.R} values, got {len(nums)}")
        if self.denominator <= 0:
            raise InvalidParameterError("denominator must be positive")
        if any(v < 0 or v > self.denominator for v in nums):
            raise InvalidParameterError("function values must lie in [0, 1]")
        g = math.gcd(self.denominator, *nums)
        arr = np.array([v // g for v in nums], dtype=int_dtype_for(self.denominator))
        arr.setflags(write=False)
        object.__setattr__(self, "numerators", arr)
        object.__setattr__(self, "denominator", self.denominator // g)

    @classmethod
    def from_values(cls, R: int, base: int, values: Sequence) -> "FunctionTable":
        fracs = [as_fraction(v) for v in values]
        den = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
        return cls(R, base, np.array([f.numerator * (den // f.denominator) for f in fracs], dtype=object), den)

    @classmethod
    def from_indicator(cls, R: int, base: int, ones) -> "FunctionTable":
        return cls(R, base, np.asarray(ones, dtype=np.int64), 1)

    @classmethod
    def constant(cls, R: int, base: int, value) -> "FunctionTable":
        return cls.from_values(R, base, [as_fraction(value)] * base**R)

    @property
    def q(self) -> int:
        return self.base - 1

    @property
    def values(self) -> list[Fraction]:
        return [Fraction(int(v), self.denominator) for v in self.numerators]

    def __call__(self, x) -> Fraction:
        return Fraction(int(self.numerators[point_code(x, self.base)]), self.denominator)

    def __eq__(self, other):
        return (
            isinstance(other, FunctionTable)
            and (self.R, self.base, self.denominator) == (other.R, other.base, other.denominator)
            and bool(np.all(self.numerators == other.numerators))
        )

    def __hash__(self):
        return hash((self.R, self.base, self.denominator, tuple(int(v) for v in self.numerators)))

    def tensor(self) -> np.ndarray:
        return np.asarray(self.numerators).reshape((self.base,) * self.R, order="F")

    def is_boolean(self) -> bool:
        return self.denominator == 1

    def mean(self) -> Fraction:
        return Fraction(sum(int(v) for v in self.numerators), self.denominator * self.base**self.R)

    def compose(self, pi: Permutation) -> "FunctionTable":
        """The table of ``x -> f(x o pi)``."""
        if pi.R != self.R:
            raise DimensionError(f"permutation on {pi.R} labels for a function of {self.R} coordinates")
        return FunctionTable(self.R, self.base, np.asarray(self.numerators)[permutation_code_map(pi, self.base)], self.denominator)

    def to_json(self) -> dict:
        return {"R": self.R, "q": self.q, "values": [format_rational(v) for v in self.values]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "FunctionTable":
        return cls.from_values(int(doc["R"]), int(doc["q"]) + 1, [parse_rational(v) for v in doc["values"]])


def average(tables: Sequence[FunctionTable]) -> FunctionTable:
    """Pointwise mean of equally shaped tables, exact."""
    first = tables[0]
    den = math.lcm(*(t.denominator for t in tables))
    total = sum(np.asarray(t.numerators, dtype=object) * (den // t.denominator) for t in tables)
    return FunctionTable(first.R, first.base, total, den * len(tables))


def dictator(R: int, i: int, q: int) -> FunctionTable:
    """``x -> 1{x_i > 0}``."""
    if not 1 <= i <= R:
        raise DimensionError(f"coordinate {i} outside 1..{R}")
    base = q + 1
    codes = np.arange(base**R)
    return FunctionTable.from_indicator(R, base, ((codes // base ** (i - 1)) % base > 0).astype(np.int64))


def random_mean_function(R: int, q: int, target_mean, rng_seed: int) -> FunctionTable:
    """A {0,1} function with exactly ``target_mean * (q+1)^R`` ones at random positions."""
    target_mean = as_fraction(target_mean)
    size = (q + 1) ** R
    count = target_mean * size
    if count.denominator != 1 or not 0 <= count <= size:
        raise InvalidParameterError(f"mean {target_mean} is not achievable on {size} points")
    rng = np.random.default_rng(rng_seed)
    ones = np.zeros(size, dtype=np.int64)
    ones[rng.choice(size, size=int(count), replace=False)] = 1
    return FunctionTable.from_indicator(R, q + 1, ones)


def _expand(arr: np.ndarray, have: tuple[int, ...], want: tuple[int, ...]) -> np.ndarray:
    """Insert singleton axes so an array over coordinates ``have`` broadcasts over ``want``."""
    shape = [arr.shape[have.index(c)] if c in have else 1 for c in want]
    return arr.reshape(shape)


class EfronSteinDecomposition:
    """``f = sum_S f_S`` with ``f_S`` depending only on ``S`` and mean-zero along ``S``.

    Each component is kept as an integer array over its own coordinates
    (sorted, 1-based) with the shared denominator :attr:`scale`, so the
    dependence property holds by construction.
    """

    def __init__(self, f: FunctionTable, components: dict[frozenset, np.ndarray], scale: int):
        self.f = f
        self.components = components
        self.scale = scale

    @property
    def subsets(self):
        return list(self.components)

    def _coords(self, S) -> tuple[int, ...]:
        return tuple(sorted(S))

    def value(self, S, x) -> Fraction:
        arr = self.components[frozenset(S)]
        return Fraction(int(arr[tuple(x[c - 1] for c in self._coords(S))]), self.scale)

    def component(self, S) -> list[Fraction]:
        """Full table of ``f_S`` in point-code order."""
        full = self._full(frozenset(S))
        return [Fraction(int(v), self.scale) for v in full.ravel(order="F")]

    def _full(self, S: frozenset) -> np.ndarray:
        want = tuple(range(1, self.f.R + 1))
        arr = _expand(self.components[S], self._coords(S), want)
        return np.broadcast_to(arr, (self.f.base,) * self.f.R)

    def weight(self, S) -> Fraction:
        """``E_x[f_S(x)^2]``."""
        arr = self.components[frozenset(S)]
        total = sum(int(v) ** 2 for v in arr.ravel())
        return Fraction(total, self.f.base ** len(S) * self.scale**2)

    def inner(self, S, T) -> Fraction:
        """``E_x[f_S(x) f_T(x)]``."""
        a, b = self._full(frozenset(S)), self._full(frozenset(T))
        total = sum(int(u) * int(v) for u, v in zip(a.ravel(), b.ravel()))
        return Fraction(total, self.f.base**self.f.R * self.scale**2)

    def reconstruct(self) -> list[Fraction]:
        total = sum(self._full(S).astype(object) for S in self.components)
        return [Fraction(int(v), self.scale) for v in np.asarray(total).ravel(order="F")]

    def verify(self) -> None:
        """Check the conditional-mean-zero property exactly.

        Summing ``f_S`` over any single coordinate in ``S`` must give zero;
        this is equivalent to ``E[f_S | x_T] = 0`` for every ``T`` missing
        part of ``S``.
        """
        for S, arr in self.components.items():
            for axis in range(len(S)):
                if np.any(arr.sum(axis=axis) != 0):
                    raise AssertionError(f"component {sorted(S)} is not mean-zero along its coordinates")


def efron_stein(f: FunctionTable, cap: int = DEFAULT_DECOMPOSITION_CAP) -> EfronSteinDecomposition:
    """Exact decomposition via ``f_S = sum_{T <= S} (-1)^{|S - T|} E[f | x_T]``."""
    work = 2**f.R * f.base**f.R
    if work > cap:
        raise ResourceLimitError(f"decomposition needs {work} operations (cap {cap})")
    b, R = f.base, f.R
    scale = f.denominator * b**R
    dtype = int_dtype_for(2**R * scale)
    F = f.tensor().astype(dtype)
    coords = tuple(range(1, R + 1))
    # E[f | x_T] * scale is an integer array over the coordinates of T
    cond = {}
    for size in range(R + 1):
        for T in itertools.combinations(coords, size):
            drop = tuple(c - 1 for c in coords if c not in T)
            cond[T] = (F.sum(axis=drop) if drop else F) * b**size
    components = {}
    for size in range(R + 1):
        for S in itertools.combinations(coords, size):
            acc = np.zeros((b,) * size, dtype=dtype)
            for tsize in range(size + 1):
                sign = -1 if (size - tsize) % 2 else 1
                for T in itertools.combinations(S, tsize):
                    acc = acc + sign * _expand(cond[T], T, S)
            components[frozenset(S)] = acc
    decomposition = EfronSteinDecomposition(f, components, scale)
    decomposition.verify()
    return decomposition


@dataclass(frozen=True)
class InfluenceProfile:
    d: int
    influences: tuple[Fraction, ...]
    low_degree: tuple[Fraction, ...]

    def count_at_least(self, tau) -> int:
        tau = as_fraction(tau)
        return sum(1 for v in self.low_degree if v >= tau)

    def max_low_degree(self) -> Fraction:
        return max(self.low_degree)


def influence_profile(f: FunctionTable, d: int, cap: int = DEFAULT_DECOMPOSITION_CAP) -> InfluenceProfile:
    if d < 1:
        raise InvalidParameterError("degree bound d must be at least 1")
    dec = efron_stein(f, cap)
    total = [Fraction(0)] * f.R
    low = [Fraction(0)] * f.R
    for S in dec.subsets:
        if not S:
            continue
        w = dec.weight(S)
        for i in S:
            total[i - 1] += w
            if len(S) <= d:
                low[i - 1] += w
    return InfluenceProfile(d, tuple(total), tuple(low))


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    samples: int
    seed: int
    stderr: float


def _check_family(fs: Sequence[FunctionTable], p: ProductDistribution) -> None:
    if len(fs) != p.k:
        raise DimensionError(f"{len(fs)} functions for a {p.k}-point distribution")
    for f in fs:
        if (f.R, f.base) != (p.R, p.base):
            raise DimensionError("functions and distribution disagree on R or alphabet")


def correlation(
    fs: Sequence[FunctionTable],
    p: ProductDistribution,
    *,
    monte_carlo: bool = False,
    samples: int = 100_000,
    seed: int = 0,
    cap: int | None = None,
):
    """``E[prod_j f_j(x^j)]`` with ``(x^1, ..., x^k) ~ p``.

    Exact mode returns a Fraction and refuses inputs beyond ``cap``;
    ``monte_carlo=True`` returns a :class:`MonteCarloEstimate` instead.
    """
    _check_family(fs, p)
    if monte_carlo:
        return _correlation_monte_carlo(fs, p, samples, seed)
    p.check_cap(cap)
    return _correlation_contract(fs, p)


def _correlation_contract(fs: Sequence[FunctionTable], p: ProductDistribution) -> Fraction:
    # Absorb one factor tensor per coordinate into f_1, then contract the
    # remaining slots one function at a time.
    k, R = p.k, p.R
    bound = p.denominator
    for f in fs:
        bound *= max(1, int(max(f.numerators)))
    dtype = int_dtype_for(bound)
    W = p.factor.tensor().astype(dtype)
    T = fs[0].tensor().astype(dtype)
    for _ in range(R):
        T = np.tensordot(T, W, axes=([0], [0]))
    for j in range(1, k):
        stride = k - j
        T = np.tensordot(T, fs[j].tensor().astype(dtype), axes=([i * stride for i in range(R)], list(range(R))))
    den = p.denominator
    for f in fs:
        den *= f.denominator
    return Fraction(int(T), den)


def _correlation_monte_carlo(fs, p, samples, seed) -> MonteCarloEstimate:
    draws = p.sample(seed, size=samples)
    weights = p.base ** np.arange(p.R)
    codes = draws @ weights
    prod = np.ones(samples)
    for j, f in enumerate(fs):
        prod *= np.asarray(f.numerators, dtype=float)[codes[:, j]] / f.denominator
    return MonteCarloEstimate(float(prod.mean()), samples, seed, float(prod.std(ddof=1) / math.sqrt(samples)))
