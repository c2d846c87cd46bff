"""Tower morphisms: validation, constructive embeddings/isomorphisms, boundary maps."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DegreeConditionViolated,
    InputError,
    InvalidMorphism,
    LevelMapNotSurjective,
    NotPruned,
)
from .multimap import MultiMap
from .towers import Tower, boundary_space, degrees, is_pruned


@dataclass(frozen=True, eq=False)
class TowerMorphism:
    """``node_map[l][j]``: position on target level ``level_map[l]`` of source node ``(l, j)``."""

    source: Tower
    target: Tower
    node_map: tuple
    level_map: tuple

    def __post_init__(self):
        object.__setattr__(self, "node_map", tuple(tuple(int(v) for v in lv) for lv in self.node_map))
        object.__setattr__(self, "level_map", tuple(int(v) for v in self.level_map))

    def __call__(self, node: tuple) -> tuple:
        level, pos = node
        return self.level_map[level], self.node_map[level][pos]

    @property
    def is_injective(self) -> bool:
        return all(len(set(lv)) == len(lv) for lv in self.node_map)

    @property
    def is_bijective(self) -> bool:
        return (
            self.is_injective
            and sorted(self.level_map) == list(range(self.target.n_levels))
            and all(len(lv) == self.target.level_size(self.level_map[l]) for l, lv in enumerate(self.node_map))
        )


@dataclass(frozen=True)
class MorphismCheck:
    valid: bool
    reason: str = ""
    witness: tuple | None = None

    def __bool__(self):
        return self.valid


def validate_morphism(m: TowerMorphism) -> MorphismCheck:
    """Check that ``m`` is monotone and level-preserving.

    The level map must be strictly increasing (hence injective), and going
    up one source level must agree with going up the corresponding target
    levels: ``m(parent(x))`` is the ancestor of ``m(x)``.
    """
    S, T, f = m.source, m.target, m.level_map
    if len(f) != S.n_levels:
        return MorphismCheck(False, "level map must cover every source level", (len(f), S.n_levels))
    for l, t in enumerate(f):
        if not 0 <= t < T.n_levels:
            return MorphismCheck(False, "level map leaves the target", (l, t))
    for l in range(len(f) - 1):
        if f[l] == f[l + 1]:
            return MorphismCheck(False, "level map not injective", (l, l + 1))
        if f[l] > f[l + 1]:
            return MorphismCheck(False, "level map not monotone", (l, l + 1))
    if len(m.node_map) != S.n_levels:
        return MorphismCheck(False, "node map must cover every source level", None)
    for l, lv in enumerate(m.node_map):
        if len(lv) != S.level_size(l):
            return MorphismCheck(False, "node map must cover every source node", (l,))
        for j, t in enumerate(lv):
            if not 0 <= t < T.level_size(f[l]):
                return MorphismCheck(False, "node image out of range", (l, j))
    for l in range(S.top):
        for j, p in enumerate(S.parent[l]):
            up = T.ancestor(f[l], m.node_map[l][j], f[l + 1])
            if up != m.node_map[l + 1][p]:
                return MorphismCheck(False, "parent-incompatible node", (l, j))
    return MorphismCheck(True)


def _check_level_map(S: Tower, T: Tower, f: Sequence[int]) -> tuple:
    f = tuple(int(v) for v in f)
    if len(f) != S.n_levels:
        raise InputError("level map must have one entry per source level")
    if any(not 0 <= t < T.n_levels for t in f):
        raise InputError("level map leaves the target tower")
    if any(a >= b for a, b in zip(f, f[1:])):
        raise InputError("level map must be strictly increasing")
    return f


def _assign(S: Tower, T: Tower, f: tuple) -> TowerMorphism:
    node_map = [[-1] * S.level_size(l) for l in range(S.n_levels)]
    top_targets = list(range(T.level_size(f[S.top])))
    for j in range(S.level_size(S.top)):
        node_map[S.top][j] = top_targets[j]
    for l in range(S.top, 0, -1):
        for j in range(S.level_size(l)):
            kids = sorted(S.children[l][j])
            slots = sorted(T.descendants(f[l], node_map[l][j], f[l - 1]))
            for kid, slot in zip(kids, slots):
                node_map[l - 1][kid] = slot
    return TowerMorphism(S, T, tuple(tuple(lv) for lv in node_map), f)


def build_embedding(S: Tower, T: Tower, f: Sequence[int]) -> TowerMorphism:
    """Injective monotone level-preserving map ``S -> T`` over the level map ``f``.

    Built top-down: top nodes go to the first nodes of target level
    ``f(top)``, then the children of each mapped node are matched, in id
    order, to the descendants of its image on level ``f(l - 1)``.  This
    succeeds whenever every source node has at most as many children as
    every target node has descendants at the matching levels.
    """
    if not is_pruned(S) or not is_pruned(T):
        raise NotPruned("both towers must be pruned")
    f = _check_level_map(S, T, f)
    if S.level_size(S.top) > T.level_size(f[S.top]):
        raise DegreeConditionViolated(
            f"{S.level_size(S.top)} source roots but {T.level_size(f[S.top])} target nodes on level {f[S.top]}",
            level=S.top,
        )
    for lam in range(S.top):
        _, s_max = degrees(S, lam, lam + 1)
        t_min, _ = degrees(T, f[lam], f[lam + 1])
        if s_max > t_min:
            raise DegreeConditionViolated(
                f"level {lam}: source Deg {s_max} > target deg {t_min}",
                level=lam,
                source_max=s_max,
                target_min=t_min,
            )
    return _assign(S, T, f)


def build_isomorphism(S: Tower, T: Tower, f: Sequence[int] | None = None) -> TowerMorphism:
    """Bijective tower morphism; needs equal, homogeneous-compatible degrees."""
    if not is_pruned(S) or not is_pruned(T):
        raise NotPruned("both towers must be pruned")
    if f is None:
        f = tuple(range(S.n_levels))
    f = _check_level_map(S, T, f)
    if sorted(f) != list(range(T.n_levels)):
        raise LevelMapNotSurjective("level map must hit every target level", levels=list(f))
    if S.level_size(S.top) != T.level_size(T.top):
        raise DegreeConditionViolated(
            f"{S.level_size(S.top)} source roots vs {T.level_size(T.top)} target roots", level=S.top
        )
    for lam in range(S.top):
        s_min, s_max = degrees(S, lam, lam + 1)
        t_min, t_max = degrees(T, f[lam], f[lam + 1])
        if s_max > t_min or s_min < t_max:
            raise DegreeConditionViolated(
                f"level {lam}: source degrees [{s_min}, {s_max}] vs target [{t_min}, {t_max}]",
                level=lam,
                source=[s_min, s_max],
                target=[t_min, t_max],
            )
    return _assign(S, T, f)


def inverse_morphism(m: TowerMorphism) -> TowerMorphism:
    if not m.is_bijective:
        raise InvalidMorphism("only bijective morphisms can be inverted")
    inv_levels = [0] * m.target.n_levels
    for l, t in enumerate(m.level_map):
        inv_levels[t] = l
    node_map = []
    for t in range(m.target.n_levels):
        l = inv_levels[t]
        back = [0] * m.target.level_size(t)
        for j, img in enumerate(m.node_map[l]):
            back[img] = j
        node_map.append(tuple(back))
    return TowerMorphism(m.target, m.source, tuple(node_map), tuple(inv_levels))


def boundary_multimap(m: TowerMorphism) -> MultiMap:
    """Branch ``beta`` to every target branch containing the image chain of ``beta``.

    Branches of pruned towers are identified with bottom nodes, and a target
    branch contains the image chain iff its bottom node lies below the image
    of the source bottom node.
    """
    check = validate_morphism(m)
    if not check:
        raise InvalidMorphism(check.reason, witness=list(check.witness or ()))
    S, T = m.source, m.target
    src, dst = boundary_space(S), boundary_space(T)
    pairs = frozenset(
        (b, t)
        for b in range(S.level_size(0))
        for t in T.descendants(m.level_map[0], m.node_map[0][b], 0)
    )
    return MultiMap(src, dst, pairs)
