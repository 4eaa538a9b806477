"""Bipartite unique-games instances, labelings, planted generators and the
influence-based labeling decoder."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .core import DimensionError, InvalidParameterError, Permutation, as_fraction
from .functions import FunctionTable, average, influence_profile


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    perm: Permutation  # pi_{a,b}; pi_{b,a} is its inverse


@dataclass(frozen=True)
class Labeling:
    labels_a: tuple[int, ...]
    labels_b: tuple[int, ...]

    def to_json(self) -> dict:
        return {"labels": list(self.labels_a) + list(self.labels_b)}

    @classmethod
    def from_json(cls, doc: Mapping, n_a: int) -> "Labeling":
        labels = [int(v) for v in doc["labels"]]
        return cls(tuple(labels[:n_a]), tuple(labels[n_a:]))


@dataclass(frozen=True, eq=False)
class UGInstance:
    n_a: int
    n_b: int
    R: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        for e in self.edges:
            if not (0 <= e.a < self.n_a and 0 <= e.b < self.n_b):
                raise DimensionError(f"edge ({e.a}, {e.b}) names an unknown node")
            if e.perm.R != self.R:
                raise DimensionError("edge permutation has the wrong label count")
        deg_a = np.bincount([e.a for e in self.edges], minlength=self.n_a)
        deg_b = np.bincount([e.b for e in self.edges], minlength=self.n_b)
        if len(set(deg_a)) > 1 or len(set(deg_b)) > 1:
            raise InvalidParameterError("unique-games graph must be left and right regular")

    @property
    def degree_a(self) -> int:
        return len(self.edges) // self.n_a

    @property
    def degree_b(self) -> int:
        return len(self.edges) // self.n_b

    def edges_at_b(self, b: int) -> list[Edge]:
        return [e for e in self.edges if e.b == b]

    def edges_at_a(self, a: int) -> list[Edge]:
        return [e for e in self.edges if e.a == a]

    def to_json(self) -> dict:
        return {
            "R": self.R,
            "A": self.n_a,
            "B": self.n_b,
            "edges": [{"a": e.a, "b": e.b, "perm": list(e.perm.images)} for e in self.edges],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "UGInstance":
        edges = tuple(Edge(int(e["a"]), int(e["b"]), Permutation(tuple(e["perm"]))) for e in doc["edges"])
        return cls(int(doc["A"]), int(doc["B"]), int(doc["R"]), edges)


def satisfaction(inst: UGInstance, labeling: Labeling) -> Fraction:
    """Fraction of edges with ``pi_{a,b}(label(a)) == label(b)``."""
    if len(labeling.labels_a) != inst.n_a or len(labeling.labels_b) != inst.n_b:
        raise DimensionError("labeling does not cover every node")
    for label in labeling.labels_a + labeling.labels_b:
        if not 1 <= label <= inst.R:
            raise InvalidParameterError(f"label {label} outside 1..{inst.R}")
    good = sum(1 for e in inst.edges if e.perm(labeling.labels_a[e.a]) == labeling.labels_b[e.b])
    return Fraction(good, len(inst.edges))


def _biregular_edges(n_a: int, n_b: int, degree_b: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if (n_b * degree_b) % n_a:
        raise InvalidParameterError(f"|B| * deg_B = {n_b * degree_b} is not divisible by |A| = {n_a}")
    degree_a = n_b * degree_b // n_a
    if degree_a > n_b or degree_b > n_a or degree_b < 1:
        raise InvalidParameterError("degrees incompatible with a simple bipartite graph")
    # edge e joins a = e // deg_A with b = e mod |B|; relabel both sides at random
    relabel_a = rng.permutation(n_a)
    relabel_b = rng.permutation(n_b)
    return [(int(relabel_a[e // degree_a]), int(relabel_b[e % n_b])) for e in range(n_a * degree_a)]


def random_instance(n_a: int, n_b: int, degree_b: int, R: int, seed: int) -> UGInstance:
    """Biregular graph with independent uniformly random edge permutations."""
    rng = np.random.default_rng(seed)
    pairs = _biregular_edges(n_a, n_b, degree_b, rng)
    return UGInstance(n_a, n_b, R, tuple(Edge(a, b, Permutation.random(R, rng)) for a, b in pairs))


def planted_instance(n_a: int, n_b: int, degree_b: int, R: int, seed: int) -> tuple[UGInstance, Labeling]:
    """Biregular instance together with a labeling that satisfies every edge."""
    rng = np.random.default_rng(seed)
    pairs = _biregular_edges(n_a, n_b, degree_b, rng)
    labeling = Labeling(
        tuple(int(v) + 1 for v in rng.integers(0, R, n_a)),
        tuple(int(v) + 1 for v in rng.integers(0, R, n_b)),
    )
    edges = []
    for a, b in pairs:
        images = list(Permutation.random(R, rng).images)
        src, dst = labeling.labels_a[a], labeling.labels_b[b]
        j = images.index(dst)
        images[src - 1], images[j] = images[j], images[src - 1]
        edges.append(Edge(a, b, Permutation(tuple(images))))
    return UGInstance(n_a, n_b, R, tuple(edges)), labeling


def b_functions(inst: UGInstance, fs: Sequence[FunctionTable]) -> list[FunctionTable]:
    """``f_b(x) = E_{a ~ Nbd(b)} f_a(x o pi_{a,b})`` for every ``b``."""
    if len(fs) != inst.n_a:
        raise DimensionError("need one function per node of A")
    return [average([fs[e.a].compose(e.perm) for e in inst.edges_at_b(b)]) for b in range(inst.n_b)]


@dataclass(frozen=True)
class DecoderSets:
    high_b: tuple[tuple[int, ...], ...]  # coordinates with degree-d influence above tau
    candidates_a: tuple[tuple[int, ...], ...]  # coordinates with degree-d influence at least tau/2
    f_b: tuple[FunctionTable, ...]


def decoder_sets(inst: UGInstance, fs: Sequence[FunctionTable], d: int, tau) -> DecoderSets:
    tau = as_fraction(tau)
    fb = b_functions(inst, fs)
    high_b = []
    for f in fb:
        low = influence_profile(f, d).low_degree
        high_b.append(tuple(i for i, v in enumerate(low, start=1) if v > tau))
    cand = []
    for f in fs:
        low = influence_profile(f, d).low_degree
        cand.append(tuple(i for i, v in enumerate(low, start=1) if v >= tau / 2))
    return DecoderSets(tuple(high_b), tuple(cand), tuple(fb))


def decode_labeling(inst: UGInstance, fs: Sequence[FunctionTable], d: int, tau, seed: int) -> Labeling:
    """Labeling read off from influential coordinates.

    Each ``b`` takes the smallest coordinate whose degree-``d`` influence
    in ``f_b`` exceeds ``tau``; each ``a`` draws uniformly from its
    coordinates with influence at least ``tau/2``. Empty sets fall back to
    label 1.
    """
    sets = decoder_sets(inst, fs, d, tau)
    rng = np.random.default_rng(seed)
    labels_b = tuple(s[0] if s else 1 for s in sets.high_b)
    labels_a = tuple(int(rng.choice(s)) if s else 1 for s in sets.candidates_a)
    return Labeling(labels_a, labels_b)
