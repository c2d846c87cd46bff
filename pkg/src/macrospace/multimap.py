"""Multi-maps (relations between finite metric spaces) and their oscillation."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyRelation, InputError, SpaceMismatch
from .metric_core import FiniteMetricSpace, as_distance


@dataclass(frozen=True, eq=False)
class MultiMap:
    """A relation ``pairs`` between ``source`` and ``target`` point indices."""

    source: FiniteMetricSpace
    target: FiniteMetricSpace
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((int(a), int(b)) for a, b in self.pairs)
        for a, b in pairs:
            if not (0 <= a < self.source.size and 0 <= b < self.target.size):
                raise InputError(f"pair ({a}, {b}) outside the spaces")
        object.__setattr__(self, "pairs", pairs)

    def __eq__(self, other):
        if not isinstance(other, MultiMap):
            return NotImplemented
        return self.pairs == other.pairs and self.source == other.source and self.target == other.target

    def __hash__(self):
        return hash(self.pairs)

    @classmethod
    def from_function(cls, source, target, f: Sequence[int] | Mapping[int, int]) -> "MultiMap":
        items = f.items() if isinstance(f, Mapping) else enumerate(f)
        return cls(source, target, frozenset(items))

    @classmethod
    def identity(cls, space: FiniteMetricSpace) -> "MultiMap":
        return cls(space, space, frozenset((i, i) for i in range(space.size)))

    @cached_property
    def images(self) -> tuple:
        out = [[] for _ in range(self.source.size)]
        for a, b in sorted(self.pairs):
            out[a].append(b)
        return tuple(tuple(v) for v in out)

    def image(self, points: Iterable[int]) -> frozenset:
        return frozenset(b for a in points for b in self.images[a])

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    @property
    def is_total(self) -> bool:
        return all(self.images)

    @property
    def is_surjective(self) -> bool:
        return len({b for _, b in self.pairs}) == self.target.size

    @property
    def is_single_valued(self) -> bool:
        return all(len(v) <= 1 for v in self.images)

    @property
    def is_injective(self) -> bool:
        return invert(self).is_single_valued

    @property
    def is_bijective(self) -> bool:
        return self.is_total and self.is_single_valued and self.is_surjective and self.is_injective

    def as_function(self) -> tuple:
        if not (self.is_total and self.is_single_valued):
            raise InputError("relation is not a total function")
        return tuple(v[0] for v in self.images)


def invert(phi: MultiMap) -> MultiMap:
    return MultiMap(phi.target, phi.source, frozenset((b, a) for a, b in phi.pairs))


def compose(phi: MultiMap, psi: MultiMap) -> MultiMap:
    """``psi`` after ``phi``."""
    if phi.target != psi.source:
        raise SpaceMismatch("target of the first map must be the source of the second")
    out = frozenset((a, c) for a, b in phi.pairs for c in psi.images[b])
    return MultiMap(phi.source, psi.target, out)


@dataclass(frozen=True)
class OscillationTable:
    """Exact oscillation values at the listed scales (no interpolation)."""

    entries: tuple  # ((delta, omega), ...)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def at(self, delta) -> Fraction:
        delta = as_distance(delta)
        for d, w in self.entries:
            if d == delta:
                return w
        raise KeyError(delta)

    @property
    def scales(self) -> tuple:
        return tuple(d for d, _ in self.entries)

    @property
    def values(self) -> tuple:
        return tuple(w for _, w in self.entries)


def pair_image_diameters(phi: MultiMap) -> np.ndarray:
    """``M[a, b]`` = numerator of ``diam(phi(a) | phi(b))`` over the target denominator."""
    n = phi.source.size
    tnum = phi.target.numerators
    if all(len(v) == 1 for v in phi.images):
        f = [v[0] for v in phi.images]
        return tnum[np.ix_(f, f)]
    imgs = [np.array(v, dtype=np.int64) for v in phi.images]
    out = np.zeros((n, n), dtype=tnum.dtype)
    own = [int(tnum[np.ix_(v, v)].max()) if len(v) else 0 for v in imgs]
    for a in range(n):
        if not len(imgs[a]):
            for b in range(n):
                out[a, b] = own[b]
            continue
        for b in range(a, n):
            if not len(imgs[b]):
                out[a, b] = out[b, a] = own[a]
                continue
            cross = int(tnum[np.ix_(imgs[a], imgs[b])].max())
            out[a, b] = out[b, a] = max(own[a], own[b], cross)
    return out


def oscillation(phi: MultiMap, scales: Sequence) -> OscillationTable:
    """``sup diam(phi(A))`` over ``A`` with ``diam(A) <= delta``, for each scale.

    The diameter of ``phi(A)`` is attained by two image points, coming from
    two points of ``A`` that form a subset of diameter ``<= delta`` on their
    own, so it suffices to maximise over pairs ``(a, b)`` with
    ``d(a, b) <= delta``.
    """
    if not phi.pairs:
        raise EmptyRelation("oscillation of an empty relation")
    diam = pair_image_diameters(phi)
    entries = []
    for delta in (as_distance(s) for s in scales):
        mask = phi.source.within(delta)
        best = int(diam[mask].max()) if mask.any() else 0
        entries.append((delta, Fraction(best, phi.target.denominator)))
    return OscillationTable(tuple(entries))


@dataclass(frozen=True)
class EquivalenceCheck:
    is_total: bool
    is_surjective: bool
    forward: OscillationTable
    backward: OscillationTable
    within_bound: bool | None

    @property
    def is_equivalence(self) -> bool:
        return self.is_total and self.is_surjective


def check_equivalence(
    phi: MultiMap,
    scales: Sequence,
    bound: Mapping | Callable | None = None,
) -> EquivalenceCheck:
    """Totality, surjectivity and both oscillation tables at ``scales``.

    ``bound`` is a modulus, either a mapping ``scale -> value`` or a callable;
    ``within_bound`` is ``None`` when no bound is given.
    """
    fwd = oscillation(phi, scales)
    bwd = oscillation(invert(phi), scales)
    within = None
    if bound is not None:
        if callable(bound):
            modulus = lambda d: as_distance(bound(d))  # noqa: E731
        else:
            table = {as_distance(k): as_distance(v) for k, v in bound.items()}
            modulus = lambda d: table[d]  # noqa: E731
        try:
            within = all(w <= modulus(d) for d, w in fwd) and all(w <= modulus(d) for d, w in bwd)
        except KeyError as exc:
            raise InputError(f"bound has no value at scale {exc.args[0]}") from None
    return EquivalenceCheck(phi.is_total, phi.is_surjective, fwd, bwd, within)
