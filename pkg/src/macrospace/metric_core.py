"""Finite metric spaces with exact rational distances.

Distances are stored as an integer numerator matrix over one shared
denominator, so every threshold test ``d(x, y) <= eps`` is an exact integer
comparison (``num <= floor(eps * denom)``) and can be vectorised with numpy.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import (
    AsymmetricMatrix,
    BudgetExceeded,
    InputError,
    NonzeroDiagonal,
    TriangleViolation,
    UnknownPoint,
    ZeroDistanceDistinctPoints,
)

DEFAULT_POINT_BUDGET = 4096
_INT64_SAFE = 2**61


def as_distance(value) -> Fraction:
    """Coerce ``value`` to an exact non-negative :class:`Fraction`.

    Accepts ints, Fractions, ``"p/q"`` or decimal strings, and floats (read
    through their shortest decimal repr, so ``0.1`` becomes ``1/10``).
    """
    if isinstance(value, Fraction):
        out = value
    elif isinstance(value, (bool, np.bool_)):
        raise InputError(f"not a distance: {value!r}")
    elif isinstance(value, (int, np.integer)):
        out = Fraction(int(value))
    elif isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise InputError(f"distance must be finite, got {value!r}")
        out = Fraction(repr(float(value)))
    elif isinstance(value, str):
        try:
            out = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational string {value!r}") from exc
    else:
        raise InputError(f"not a distance: {value!r}")
    if out < 0:
        raise InputError(f"distance must be non-negative, got {out}")
    return out


def format_distance(value: Fraction):
    """JSON form: an int when integral, else ``"p/q"`` in lowest terms."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def _label_json(label):
    """Label as a JSON-friendly value for error details."""
    if isinstance(label, tuple):
        return [_label_json(v) for v in label]
    if isinstance(label, (str, int, float)) and not isinstance(label, bool):
        return label
    return repr(label)


def _int_array(rows) -> np.ndarray:
    peak = max((abs(v) for row in rows for v in row), default=0)
    dtype = np.int64 if peak < _INT64_SAFE else object
    arr = np.array(rows, dtype=dtype)
    if arr.ndim != 2:
        arr = arr.reshape(len(rows), -1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labeled points with an exact distance matrix.

    ``numerators[i, j] / denominator`` is the distance between points ``i``
    and ``j``.  The constructor only checks shapes; use :func:`validate_metric`
    for the full metric axioms.
    """

    labels: tuple
    numerators: np.ndarray = field(repr=False)
    denominator: int = 1

    def __post_init__(self):
        n = len(self.labels)
        if self.numerators.shape != (n, n):
            raise InputError(
                f"matrix shape {self.numerators.shape} does not match {n} labels"
            )
        if len(set(self.labels)) != n:
            raise InputError("point labels must be unique")
        if self.denominator <= 0:
            raise InputError("denominator must be positive")

    @classmethod
    def from_matrix(cls, labels: Sequence[Hashable], matrix) -> "FiniteMetricSpace":
        """Build from any matrix of distance-like entries (no axiom checks)."""
        rows = [[as_distance(v) for v in row] for row in matrix]
        n = len(labels)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise InputError(f"matrix must be {n}x{n}")
        denom = reduce(math.lcm, (v.denominator for row in rows for v in row), 1)
        nums = [[v.numerator * (denom // v.denominator) for v in row] for row in rows]
        g = reduce(math.gcd, (v for row in nums for v in row), denom)
        if g > 1:
            nums = [[v // g for v in row] for row in nums]
            denom //= g
        return cls(tuple(labels), _int_array(nums), denom)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.denominator == other.denominator
            and np.array_equal(self.numerators, other.numerators)
        )

    def __hash__(self):
        return hash((self.labels, self.denominator))

    @cached_property
    def _index(self) -> dict:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownPoint(f"unknown point {label!r}", point=_label_json(label)) from None

    def check_index(self, i) -> int:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < self.size:
            raise UnknownPoint(f"point index {i!r} out of range", point=_label_json(i))
        return int(i)

    def d(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.numerators[i, j]), self.denominator)

    @property
    def dist(self) -> list[list[Fraction]]:
        return [
            [Fraction(int(v), self.denominator) for v in row] for row in self.numerators
        ]

    def threshold(self, eps) -> int:
        """Largest numerator ``m`` with ``m / denominator <= eps``."""
        return math.floor(as_distance(eps) * self.denominator)

    def within(self, eps) -> np.ndarray:
        """Boolean matrix of ``d(i, j) <= eps``."""
        return np.asarray(self.numerators <= self.threshold(eps), dtype=bool)

    def diameter(self, indices: Iterable[int] | None = None) -> Fraction:
        if indices is None:
            sub = self.numerators
        else:
            idx = list(indices)
            if not idx:
                return Fraction(0)
            sub = self.numerators[np.ix_(idx, idx)]
        if sub.size == 0:
            return Fraction(0)
        return Fraction(int(sub.max()), self.denominator)

    def distance_values(self) -> list[Fraction]:
        """Sorted distinct positive distances."""
        vals = sorted({int(v) for v in np.unique(self.numerators) if v > 0})
        return [Fraction(v, self.denominator) for v in vals]

    def subspace(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        """Restriction to ``indices`` (in the given order)."""
        idx = [self.check_index(i) for i in indices]
        sub = self.numerators[np.ix_(idx, idx)] if idx else np.zeros((0, 0), np.int64)
        rows = [[int(v) for v in row] for row in sub]
        return FiniteMetricSpace.from_matrix(
            [self.labels[i] for i in idx],
            [[Fraction(v, self.denominator) for v in row] for row in rows],
        )

    @cached_property
    def ultrametric(self) -> bool:
        return _strong_triangle_holds(self.numerators)


def _strong_triangle_holds(num: np.ndarray) -> bool:
    for k in range(num.shape[0]):
        via = np.maximum(num[:, k][:, None], num[k, :][None, :])
        if (num > via).any():
            return False
    return True


def validate_metric(labels: Sequence[Hashable], matrix) -> FiniteMetricSpace:
    """Return the space if ``matrix`` is a metric on ``labels``; raise otherwise.

    Each error names the witnessing points.
    """
    space = FiniteMetricSpace.from_matrix(labels, matrix)
    num = space.numerators
    lab = space.labels
    n = space.size
    for i in range(n):
        if num[i, i] != 0:
            raise NonzeroDiagonal(
                f"d({lab[i]!r}, {lab[i]!r}) = {space.d(i, i)} != 0", points=[_label_json(lab[i])]
            )
    asym = np.argwhere(num != num.T)
    if len(asym):
        i, j = (int(v) for v in asym[0])
        raise AsymmetricMatrix(
            f"d({lab[i]!r}, {lab[j]!r}) = {space.d(i, j)} but "
            f"d({lab[j]!r}, {lab[i]!r}) = {space.d(j, i)}",
            points=[_label_json(lab[i]), _label_json(lab[j])],
        )
    zero = np.argwhere((num == 0) & ~np.eye(n, dtype=bool))
    if len(zero):
        i, j = (int(v) for v in zero[0])
        raise ZeroDistanceDistinctPoints(
            f"distinct points {lab[i]!r} and {lab[j]!r} at distance 0",
            points=[_label_json(lab[i]), _label_json(lab[j])],
        )
    for y in range(n):
        via = num[:, y][:, None] + num[y, :][None, :]
        bad = np.argwhere(num > via)
        if len(bad):
            x, z = (int(v) for v in bad[0])
            raise TriangleViolation(
                f"d({lab[x]!r}, {lab[z]!r}) = {space.d(x, z)} > "
                f"d({lab[x]!r}, {lab[y]!r}) + d({lab[y]!r}, {lab[z]!r}) = "
                f"{space.d(x, y) + space.d(y, z)}",
                points=[_label_json(lab[x]), _label_json(lab[y]), _label_json(lab[z])],
            )
    return space


@dataclass(frozen=True)
class KappaSpec:
    """Truncation of the coproduct of ``alphabet_size`` copies to ``depth`` coordinates.

    ``level_values[i - 1]`` is the distance between points whose largest
    differing coordinate is ``i``; the default ``1, 2, ..., depth`` gives the
    max-differing-index ultrametric.
    """

    alphabet_size: int
    depth: int
    level_values: tuple = None

    def __post_init__(self):
        if int(self.alphabet_size) < 1:
            raise InputError("alphabet_size must be >= 1")
        if int(self.depth) < 1:
            raise InputError("depth must be >= 1")
        levels = self.level_values
        if levels is None:
            levels = range(1, int(self.depth) + 1)
        levels = tuple(as_distance(v) for v in levels)
        if len(levels) != self.depth:
            raise InputError(f"need {self.depth} level values, got {len(levels)}")
        if levels[0] <= 0 or any(a >= b for a, b in zip(levels, levels[1:])):
            raise InputError("level values must be positive and strictly increasing")
        object.__setattr__(self, "level_values", levels)


def gen_kappa_space(spec: KappaSpec, point_budget: int = DEFAULT_POINT_BUDGET) -> FiniteMetricSpace:
    """All length-``depth`` words over ``{0..k-1}``, labeled by tuples.

    ``d(x, y) = level_values[j - 1]`` where ``j`` is the largest (1-based)
    coordinate in which ``x`` and ``y`` differ.
    """
    k, n = int(spec.alphabet_size), int(spec.depth)
    count = k**n
    if count > point_budget:
        raise BudgetExceeded(
            f"{k}^{n} = {count} points exceeds budget {point_budget}",
            points=count,
            budget=point_budget,
        )
    labels = list(itertools.product(range(k), repeat=n))
    denom = reduce(math.lcm, (v.denominator for v in spec.level_values), 1)
    level_num = np.array(
        [0] + [int(v * denom) for v in spec.level_values],
        dtype=np.int64 if max(int(v * denom) for v in spec.level_values) < _INT64_SAFE else object,
    )
    coords = np.array(labels, dtype=np.int64).reshape(count, n)
    differ = coords[:, None, :] != coords[None, :, :]
    # 1-based index of the last differing coordinate, 0 when equal
    last = np.where(differ.any(axis=2), n - np.argmax(differ[:, :, ::-1], axis=2), 0)
    num = level_num[last]
    g = reduce(math.gcd, (int(v) for v in level_num), denom)
    if g > 1:
        num = num // g
        denom //= g
    num.setflags(write=False)
    return FiniteMetricSpace(tuple(labels), num, denom)


def line_space(points: Sequence, labels: Sequence | None = None) -> FiniteMetricSpace:
    """Points on the real line with ``d(x, y) = |x - y|``."""
    vals = [as_distance(abs(p)) * (1 if p >= 0 else -1) for p in points]
    if labels is None:
        labels = [p if isinstance(p, (int, str)) else str(p) for p in points]
    return FiniteMetricSpace.from_matrix(labels, [[abs(a - b) for b in vals] for a in vals])


def is_ultrametric(space: FiniteMetricSpace) -> bool:
    """``d(x, z) <= max(d(x, y), d(y, z))`` for all triples."""
    return space.ultrametric


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class ScalePartition:
    """The cover of a space by its ``scale``-connected components.

    Blocks are sorted tuples of point indices, ordered by their smallest
    member.
    """

    scale: Fraction
    blocks: tuple
    mesh: Fraction

    @cached_property
    def block_of(self) -> tuple:
        out = [0] * sum(len(b) for b in self.blocks)
        for bi, block in enumerate(self.blocks):
            for p in block:
                out[p] = bi
        return tuple(out)

    def __len__(self):
        return len(self.blocks)


def epsilon_components(space: FiniteMetricSpace, eps) -> ScalePartition:
    """Classes of the ``eps``-chain relation (edges ``d <= eps``)."""
    eps = as_distance(eps)
    n = space.size
    dsu = DisjointSet(n)
    ii, jj = np.nonzero(np.triu(space.within(eps), 1))
    for a, b in zip(ii.tolist(), jj.tolist()):
        dsu.union(a, b)
    groups: dict[int, list[int]] = {}
    for p in range(n):
        groups.setdefault(dsu.find(p), []).append(p)
    blocks = tuple(sorted((tuple(g) for g in groups.values()), key=lambda b: b[0]))
    mesh = max((space.diameter(b) for b in blocks), default=Fraction(0))
    return ScalePartition(eps, blocks, mesh)


def mesh_profile(space: FiniteMetricSpace, scales: Sequence) -> list[tuple[Fraction, Fraction, int]]:
    """``(eps, mesh, block_count)`` for each scale."""
    scales = [as_distance(s) for s in scales]
    if any(a > b for a, b in zip(scales, scales[1:])):
        raise InputError("scales must be sorted ascending")
    out = []
    for eps in scales:
        part = epsilon_components(space, eps)
        out.append((eps, part.mesh, len(part.blocks)))
    return out


def ball(space: FiniteMetricSpace, center: int, eps) -> frozenset[int]:
    """Closed ball ``{y : d(center, y) <= eps}`` as a set of point indices."""
    c = space.check_index(center)
    row = space.numerators[c]
    return frozenset(np.nonzero(np.asarray(row <= space.threshold(eps), dtype=bool))[0].tolist())


def is_macro_connected_at(space: FiniteMetricSpace, eps) -> bool:
    return len(epsilon_components(space, eps).blocks) == 1


@dataclass(frozen=True)
class HomogeneityVerdict:
    kind: str  # "homogeneous" | "witness_pair" | "budget_exhausted"
    pair: tuple | None = None
    nodes_explored: int = 0

    @property
    def homogeneous(self) -> bool:
        return self.kind == "homogeneous"


def isometric_homogeneity_probe(space: FiniteMetricSpace, budget: int = 100_000) -> HomogeneityVerdict:
    """Search for self-isometries moving a base point onto every other point.

    The isometry group acts transitively iff the orbit of one point is the
    whole space, so only pairs ``(x0, y)`` are searched, where ``x0`` is the
    first point in search order.  The witness pair uses point indices.
    """
    n = space.size
    if n <= 1:
        return HomogeneityVerdict("homogeneous")
    num = space.numerators
    profile = [tuple(sorted(int(v) for v in num[i])) for i in range(n)]
    by_label = _sortable(space.labels)
    order = sorted(range(n), key=lambda i: (profile[i], space.labels[i] if by_label else i))
    x0 = order[0]
    explored = 0
    reached = {x0}
    found: list[list[int]] = []

    def extend(assign: list[int], used: set, depth: int) -> bool:
        nonlocal explored
        if depth == n:
            return True
        src = order[depth]
        for tgt in range(n):
            if tgt in used or profile[tgt] != profile[src]:
                continue
            explored += 1
            if explored > budget:
                raise _Exhausted
            if all(num[src, order[t]] == num[tgt, assign[order[t]]] for t in range(depth)):
                assign[src] = tgt
                used.add(tgt)
                if extend(assign, used, depth + 1):
                    return True
                used.discard(tgt)
                assign[src] = -1
        return False

    try:
        for y in order[1:]:
            if y in reached:
                continue
            if profile[y] != profile[x0]:
                return HomogeneityVerdict("witness_pair", _pair(x0, y), explored)
            assign = [-1] * n
            assign[x0] = y
            if not extend(assign, {y}, 1):
                return HomogeneityVerdict("witness_pair", _pair(x0, y), explored)
            found.append(assign)
            # close the orbit under the isometries found so far
            frontier = list(reached | {y})
            reached.add(y)
            while frontier:
                p = frontier.pop()
                for iso in found:
                    q = iso[p]
                    if q not in reached:
                        reached.add(q)
                        frontier.append(q)
    except _Exhausted:
        return HomogeneityVerdict("budget_exhausted", None, explored)
    return HomogeneityVerdict("homogeneous", None, explored)


def _pair(a: int, b: int) -> tuple:
    # no isometry maps a to b iff none maps b to a
    return (min(a, b), max(a, b))


class _Exhausted(Exception):
    pass


def _sortable(labels) -> bool:
    try:
        sorted(labels)
    except TypeError:
        return False
    return True
