"""Exact arithmetic, points and permutations shared across the package.

Every probability, valuation and welfare in this package is a
:class:`fractions.Fraction`. Points of ``{0, ..., q}^R`` are plain tuples of
digits; coordinates and labels are 1-based (``1..R``) while digits are 0-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Fraction",
    "AllocLabError",
    "DimensionError",
    "InvalidParameterError",
    "ResourceLimitError",
    "InvalidAllocationError",
    "as_fraction",
    "format_rational",
    "parse_rational",
    "is_prime",
    "Permutation",
    "compose_with_permutation",
    "point_code",
    "code_point",
    "all_points",
    "permutation_code_map",
    "common_denominator",
]


class AllocLabError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(AllocLabError, ValueError):
    pass


class InvalidParameterError(AllocLabError, ValueError):
    pass


class ResourceLimitError(AllocLabError, RuntimeError):
    """An exact computation would exceed its configured enumeration cap."""


class InvalidAllocationError(AllocLabError, ValueError):
    pass


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and ``"num/den"`` strings to a Fraction.

    Floats are rejected: silently converting them would defeat exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidParameterError("booleans are not rationals")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return parse_rational(value)
    raise InvalidParameterError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value) -> str:
    """Canonical ``"num/den"`` form; integers keep the ``/1``."""
    value = as_fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameterError(f"malformed rational {text!r}") from exc


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
    return den


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{1, ..., R}`` stored as the tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise InvalidParameterError(f"{images} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, R: int) -> "Permutation":
        return cls(tuple(range(1, R + 1)))

    @classmethod
    def cyclic_shift(cls, R: int, source: int, target: int) -> "Permutation":
        """The rotation of ``1..R`` that sends ``source`` to ``target``."""
        shift = target - source
        return cls(tuple((i - 1 + shift) % R + 1 for i in range(1, R + 1)))

    @classmethod
    def random(cls, R: int, rng: np.random.Generator) -> "Permutation":
        return cls(tuple(int(i) + 1 for i in rng.permutation(R)))

    @property
    def R(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.R
        for i, image in enumerate(self.images, start=1):
            inv[image - 1] = i
        return Permutation(tuple(inv))

    def then(self, other: "Permutation") -> "Permutation":
        """The map ``i -> other(self(i))``."""
        return Permutation(tuple(other(self(i)) for i in range(1, self.R + 1)))


def compose_with_permutation(x: Sequence[int], pi: Permutation) -> tuple[int, ...]:
    """Return ``x o pi = (x_{pi(1)}, ..., x_{pi(R)})``."""
    if len(x) != pi.R:
        raise DimensionError(f"point of length {len(x)} vs permutation on {pi.R} labels")
    return tuple(x[pi(i) - 1] for i in range(1, pi.R + 1))


def point_code(x: Sequence[int], base: int) -> int:
    """Dense index ``sum_i x_i base^(i-1)``; coordinate 1 is least significant."""
    code = 0
    for digit in reversed(x):
        if not 0 <= digit < base:
            raise DimensionError(f"digit {digit} outside alphabet of size {base}")
        code = code * base + digit
    return code


def code_point(code: int, R: int, base: int) -> tuple[int, ...]:
    if not 0 <= code < base**R:
        raise DimensionError(f"code {code} outside [0, {base}^{R})")
    digits = []
    for _ in range(R):
        code, digit = divmod(code, base)
        digits.append(digit)
    return tuple(digits)


def all_points(R: int, base: int) -> np.ndarray:
    """Digit matrix of shape ``(base^R, R)``; row ``c`` is the point with code ``c``."""
    codes = np.arange(base**R)
    return (codes[:, None] // base ** np.arange(R)[None, :]) % base


def permutation_code_map(pi: Permutation, base: int) -> np.ndarray:
    """Array ``m`` with ``m[code(x)] == code(x o pi)`` for every point ``x``."""
    digits = all_points(pi.R, base)
    permuted = digits[:, [pi(i) - 1 for i in range(1, pi.R + 1)]]
    return permuted @ (base ** np.arange(pi.R))
