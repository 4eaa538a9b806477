"""Tuple distributions over ``{0..q}^k`` and their coordinate-wise products.

A :class:`TupleDistribution` keeps nonnegative integer weights over a common
denominator, so every probability is exact while bulk sums stay in numpy.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .core import (
    InvalidParameterError,
    ResourceLimitError,
    all_points,
    as_fraction,
    format_rational,
    is_prime,
    parse_rational,
    point_code,
)

DEFAULT_ENUMERATION_CAP = 81**4

_INT64_SAFE = 2**62


def int_dtype_for(bound: int):
    """int64 when every intermediate stays below ``bound``, else Python ints."""
    return np.int64 if bound < _INT64_SAFE else object


@dataclass(frozen=True, eq=False)
class TupleDistribution:
    arity: int
    base: int
    weights: np.ndarray
    denominator: int

    def __post_init__(self):
        w = np.asarray(self.weights)
        if w.shape != (self.base**self.arity,):
            raise InvalidParameterError(
                f"expected {self.base ** self.arity} weights, got shape {w.shape}"
            )
        if np.any(w < 0):
            raise InvalidParameterError("negative probability")
        total = int(sum(int(v) for v in w))
        if total != self.denominator:
            raise InvalidParameterError(f"weights sum to {total}, not {self.denominator}")
        g = math.gcd(self.denominator, *(int(v) for v in w))
        w = np.array([int(v) // g for v in w], dtype=int_dtype_for(self.denominator))
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "denominator", self.denominator // g)

    @classmethod
    def from_probabilities(cls, arity: int, base: int, probs: Mapping[tuple, object]):
        """Build from a sparse ``{tuple: probability}`` mapping."""
        fracs = {tuple(t): as_fraction(p) for t, p in probs.items()}
        den = math.lcm(*(f.denominator for f in fracs.values())) if fracs else 1
        weights = [0] * base**arity
        for t, f in fracs.items():
            if len(t) != arity:
                raise InvalidParameterError(f"tuple {t} has arity {len(t)}, expected {arity}")
            weights[point_code(t, base)] += f.numerator * (den // f.denominator)
        return cls(arity, base, np.array(weights, dtype=object), den)

    @property
    def q(self) -> int:
        return self.base - 1

    def tuples(self) -> np.ndarray:
        """Digit matrix; row ``c`` is the tuple with code ``c``."""
        return all_points(self.arity, self.base)

    def prob(self, w) -> Fraction:
        return Fraction(int(self.weights[point_code(w, self.base)]), self.denominator)

    def table(self) -> list[Fraction]:
        return [Fraction(int(v), self.denominator) for v in self.weights]

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """Nonzero tuples (digit rows) and their integer weights."""
        nz = np.flatnonzero(self.weights)
        return self.tuples()[nz], np.asarray(self.weights)[nz]

    def tensor(self) -> np.ndarray:
        """Weights reshaped so that axis ``j`` is slot ``j + 1``."""
        return np.asarray(self.weights).reshape((self.base,) * self.arity, order="F")

    def to_json(self) -> dict:
        rows, weights = self.support()
        return {
            "q": self.q,
            "arity": self.arity,
            "entries": [
                {"tuple": [int(d) for d in row], "prob": format_rational(Fraction(int(w), self.denominator))}
                for row, w in zip(rows, weights)
            ],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "TupleDistribution":
        probs = {tuple(e["tuple"]): parse_rational(e["prob"]) for e in doc["entries"]}
        return cls.from_probabilities(int(doc["arity"]), int(doc["q"]) + 1, probs)


def make_eta(q: int) -> TupleDistribution:
    """Uniform distribution on ``(a, b, a+b, a+2b, ..., a+qb) mod (q+1)``."""
    if q < 1 or not is_prime(q + 1):
        raise InvalidParameterError(f"q + 1 = {q + 1} must be prime")
    base = q + 1
    weights = np.zeros(base ** (q + 2), dtype=np.int64)
    for a, b in itertools.product(range(base), repeat=2):
        w = (a, b) + tuple((a + m * b) % base for m in range(1, q + 1))
        weights[point_code(w, base)] += 1
    return TupleDistribution(q + 2, base, weights, base * base)


def uniform(arity: int, base: int) -> TupleDistribution:
    return TupleDistribution(arity, base, np.ones(base**arity, dtype=np.int64), base**arity)


def add_noise(d: TupleDistribution, eps) -> TupleDistribution:
    """Pointwise mixture ``(1 - eps) d + eps * uniform``."""
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise InvalidParameterError(f"noise level {eps} outside (0, 1)")
    r, s = eps.numerator, eps.denominator
    size = d.base**d.arity
    weights = [(s - r) * int(v) * size + r * d.denominator for v in d.weights]
    return TupleDistribution(d.arity, d.base, np.array(weights, dtype=object), s * d.denominator * size)


def noisy_eta(q: int, eps) -> TupleDistribution:
    """``make_eta(q)`` mixed with uniform noise; ``eps == 0`` returns it unchanged."""
    eps = as_fraction(eps)
    eta = make_eta(q)
    return eta if eps == 0 else add_noise(eta, eps)


@dataclass(frozen=True)
class DistributionReport:
    balanced: bool
    pairwise_independent: bool
    min_probability: Fraction
    prob_some_zero: Fraction


def _marginal_is_uniform(tensor: np.ndarray, keep: tuple[int, ...], denominator: int) -> bool:
    drop = tuple(ax for ax in range(tensor.ndim) if ax not in keep)
    marginal = tensor.sum(axis=drop) if drop else tensor
    cells = tensor.shape[0] ** len(keep)
    return denominator % cells == 0 and bool(np.all(marginal == denominator // cells))


def analyze(d: TupleDistribution) -> DistributionReport:
    t = d.tensor()
    balanced = all(_marginal_is_uniform(t, (i,), d.denominator) for i in range(d.arity))
    pairwise = all(
        _marginal_is_uniform(t, pair, d.denominator)
        for pair in itertools.combinations(range(d.arity), 2)
    )
    has_zero = np.any(d.tuples() == 0, axis=1)
    zero_mass = sum(int(v) for v in np.asarray(d.weights)[has_zero])
    return DistributionReport(
        balanced=balanced,
        pairwise_independent=pairwise,
        min_probability=Fraction(int(min(d.weights)), d.denominator),
        prob_some_zero=Fraction(zero_mass, d.denominator),
    )


@dataclass(frozen=True, eq=False)
class ProductDistribution:
    """``factor`` applied independently to each of ``R`` coordinates.

    A draw is ``k = factor.arity`` points of length ``R``; the column of
    coordinate ``i`` across the ``k`` points is distributed as ``factor``.
    The joint table is never built.
    """

    factor: TupleDistribution
    R: int

    def __post_init__(self):
        if self.R < 1:
            raise InvalidParameterError("R must be positive")

    @property
    def k(self) -> int:
        return self.factor.arity

    @property
    def base(self) -> int:
        return self.factor.base

    @property
    def denominator(self) -> int:
        """Common denominator of every joint probability."""
        return self.factor.denominator**self.R

    def support_count(self) -> int:
        return int(np.count_nonzero(self.factor.weights)) ** self.R

    def check_cap(self, cap: int | None) -> None:
        cap = DEFAULT_ENUMERATION_CAP if cap is None else cap
        if self.support_count() > cap:
            raise ResourceLimitError(
                f"exact enumeration needs {self.support_count()} leaves (cap {cap}); "
                "use Monte Carlo mode instead"
            )

    def chunks(self, lead: int = 1, cap: int | None = None):
        """Vectorized exact enumeration of the support.

        Yields ``(column, codes, weights)`` once per support tuple ``column``
        of coordinate ``lead``. ``codes`` has shape ``(k, n)`` and holds the
        point codes of the ``k`` points; ``weights`` are integer numerators
        over :attr:`denominator`.
        """
        if not 1 <= lead <= self.R:
            raise InvalidParameterError(f"lead coordinate {lead} outside 1..{self.R}")
        self.check_cap(cap)
        rows, sup_w = self.factor.support()
        dtype = int_dtype_for(self.denominator)
        sup_w = sup_w.astype(dtype)
        others = [i for i in range(1, self.R + 1) if i != lead]
        grid = all_points(len(others), len(sup_w)) if others else np.zeros((1, 0), dtype=np.int64)
        rest_codes = np.zeros((self.k, len(grid)), dtype=np.int64)
        rest_w = np.ones(len(grid), dtype=dtype)
        for m, coord in enumerate(others):
            rest_codes += rows[grid[:, m]].T * self.base ** (coord - 1)
            rest_w = rest_w * sup_w[grid[:, m]]
        lead_scale = self.base ** (lead - 1)
        for row, w in zip(rows, sup_w):
            yield tuple(int(v) for v in row), rest_codes + row[:, None] * lead_scale, rest_w * w

    def iterate_support(self, cap: int | None = None) -> Iterator[tuple[tuple[tuple[int, ...], ...], Fraction]]:
        """Stream every support element as ``(points, probability)``."""
        self.check_cap(cap)
        rows, sup_w = self.factor.support()
        den = self.denominator
        for combo in itertools.product(range(len(sup_w)), repeat=self.R):
            weight = 1
            for idx in combo:
                weight *= int(sup_w[idx])
            points = tuple(tuple(int(rows[idx][j]) for idx in combo) for j in range(self.k))
            yield points, Fraction(weight, den)

    def sample(self, rng_seed: int, size: int | None = None):
        """Draw from the product distribution, exactly and reproducibly.

        With ``size=None`` returns ``k`` points as tuples; otherwise a digit
        array of shape ``(size, k, R)``.
        """
        rng = np.random.default_rng(rng_seed)
        rows, sup_w = self.factor.support()
        cumulative = np.cumsum([int(v) for v in sup_w])
        n = 1 if size is None else size
        draws = rng.integers(0, self.factor.denominator, size=(n, self.R))
        idx = np.searchsorted(cumulative, draws, side="right")
        out = np.transpose(rows[idx], (0, 2, 1))
        if size is None:
            return tuple(tuple(int(d) for d in point) for point in out[0])
        return out


def sample_product(p: ProductDistribution, rng_seed: int, size: int | None = None):
    return p.sample(rng_seed, size)


def iterate_support(p: ProductDistribution, cap: int | None = None):
    return p.iterate_support(cap)
