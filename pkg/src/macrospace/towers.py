"""Graded towers: canonical towers of a space, boundaries, degrees and subtowers.

A tower is stored level by level, bottom first.  ``parent[l][j]`` is the
position, on level ``l + 1``, of the unique node directly above node ``j`` of
level ``l``.  Meets and order intervals are recovered by walking parents.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    BadLevelPair,
    EmptyLevelSet,
    InputError,
    NotDirected,
    NotPruned,
    TopLevelDropped,
    TowerMismatch,
)
from .metric_core import FiniteMetricSpace, as_distance, epsilon_components, format_distance
from .multimap import MultiMap


@dataclass(frozen=True)
class Tower:
    level_values: tuple
    nodes: tuple
    parent: tuple

    def __post_init__(self):
        values = tuple(as_distance(v) for v in self.level_values)
        object.__setattr__(self, "level_values", values)
        object.__setattr__(self, "nodes", tuple(tuple(level) for level in self.nodes))
        object.__setattr__(self, "parent", tuple(tuple(int(p) for p in lv) for lv in self.parent))
        if not values:
            raise EmptyLevelSet("a tower needs at least one level")
        if any(a >= b for a, b in zip(values, values[1:])):
            raise InputError("level values must be strictly increasing")
        if len(self.nodes) != len(values):
            raise InputError("one node list per level required")
        if any(not level for level in self.nodes):
            raise InputError("every level needs at least one node")
        if len(self.parent) != len(values) - 1:
            raise InputError("one parent map per non-top level required")
        for l, pmap in enumerate(self.parent):
            if len(pmap) != len(self.nodes[l]):
                raise InputError(f"parent map of level {l} must cover all its nodes")
            if any(not 0 <= p < len(self.nodes[l + 1]) for p in pmap):
                raise InputError(f"parent index out of range on level {l}")

    @property
    def n_levels(self) -> int:
        return len(self.level_values)

    @property
    def top(self) -> int:
        return self.n_levels - 1

    def level_size(self, level: int) -> int:
        return len(self.nodes[level])

    @property
    def is_directed(self) -> bool:
        return len(self.nodes[-1]) == 1

    @cached_property
    def children(self) -> tuple:
        """``children[l][j]``: positions on level ``l - 1`` below node ``j`` of level ``l``."""
        out = [tuple(() for _ in self.nodes[0])]
        for l in range(1, self.n_levels):
            kids = [[] for _ in self.nodes[l]]
            for j, p in enumerate(self.parent[l - 1]):
                kids[p].append(j)
            out.append(tuple(tuple(k) for k in kids))
        return tuple(out)

    def ancestor(self, level: int, pos: int, target_level: int) -> int:
        for l in range(level, target_level):
            pos = self.parent[l][pos]
        return pos

    def ancestors_map(self, level: int, target_level: int) -> tuple:
        """Ancestor on ``target_level`` of every node of ``level``."""
        out = list(range(self.level_size(level)))
        for l in range(level, target_level):
            pmap = self.parent[l]
            out = [pmap[p] for p in out]
        return tuple(out)

    def descendants(self, level: int, pos: int, target_level: int) -> list[int]:
        frontier = [pos]
        for l in range(level, target_level, -1):
            frontier = [c for p in frontier for c in self.children[l][p]]
        return frontier

    def meet(self, a: tuple, b: tuple) -> tuple:
        """Smallest common upper bound of nodes ``(level, pos)``."""
        (la, pa), (lb, pb) = a, b
        while la < lb:
            pa, la = self.parent[la][pa], la + 1
        while lb < la:
            pb, lb = self.parent[lb][pb], lb + 1
        while pa != pb:
            if la == self.top:
                raise NotDirected("nodes have no common upper bound")
            pa, pb, la = self.parent[la][pa], self.parent[la][pb], la + 1
        return la, pa

    def branches(self) -> list[tuple]:
        """Maximal chains, each as ``(start_level, positions bottom to top)``."""
        out = []
        for l in range(self.n_levels):
            for j in range(self.level_size(l)):
                if l == 0 or not self.children[l][j]:
                    chain = [j]
                    for m in range(l, self.top):
                        chain.append(self.parent[m][chain[-1]])
                    out.append((l, tuple(chain)))
        return out

    def to_json(self) -> dict:
        return {
            "levels": [format_distance(v) for v in self.level_values],
            "nodes": [[_json_id(n) for n in level] for level in self.nodes],
            "parent": [list(p) for p in self.parent],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Tower":
        try:
            return cls(
                tuple(as_distance(v) for v in data["levels"]),
                tuple(tuple(_load_id(n) for n in level) for level in data["nodes"]),
                tuple(tuple(p) for p in data["parent"]),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed tower JSON: {exc}") from exc

    def to_dot(self, name: str = "tower") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for l, level in enumerate(self.nodes):
            value = format_distance(self.level_values[l])
            members = " ".join(f'"n{l}_{j}"' for j in range(len(level)))
            lines.append(f"  {{ rank=same; {members} }}")
            for j, node in enumerate(level):
                label = _dot_escape(f"{_short_id(node)} @ {value}")
                lines.append(f'  "n{l}_{j}" [label="{label}"];')
        for l, pmap in enumerate(self.parent):
            for j, p in enumerate(pmap):
                lines.append(f'  "n{l}_{j}" -> "n{l + 1}_{p}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _json_id(node):
    if isinstance(node, tuple):
        return [_json_id(n) for n in node]
    return node


def _load_id(node):
    if isinstance(node, list):
        return tuple(_load_id(n) for n in node)
    return node


def _short_id(node) -> str:
    if isinstance(node, tuple):
        return "{" + ",".join(_short_id(n) for n in node) + "}"
    return str(node)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def canonical_tower(space: FiniteMetricSpace, levels: Sequence) -> Tower:
    """Tower of ``lambda``-components for each ``lambda`` in ``levels``.

    Node ids are the components as sorted tuples of point indices; parents
    are the including components one level up.
    """
    levels = [as_distance(v) for v in levels]
    if not levels:
        raise EmptyLevelSet("level set must be nonempty")
    if any(a >= b for a, b in zip(levels, levels[1:])):
        raise InputError("level set must be strictly increasing")
    parts = [epsilon_components(space, lam) for lam in levels]
    nodes = tuple(part.blocks for part in parts)
    parent = tuple(
        tuple(upper.block_of[block[0]] for block in lower.blocks)
        for lower, upper in zip(parts, parts[1:])
    )
    return Tower(tuple(levels), nodes, parent)


def is_pruned(tower: Tower) -> bool:
    """Every node above the bottom level has at least one child."""
    return all(all(kids) for kids in tower.children[1:])


def is_homogeneous(tower: Tower) -> bool:
    """All nodes of each level have the same number of children."""
    return all(len({len(k) for k in kids}) == 1 for kids in tower.children[1:])


def degrees(tower: Tower, lam: int, l: int) -> tuple[int, int]:
    """``(min, max)`` over level-``l`` nodes of their number of level-``lam`` descendants."""
    if not (0 <= lam < l < tower.n_levels):
        raise BadLevelPair(f"need 0 <= lam < l < {tower.n_levels}, got ({lam}, {l})", lam=lam, l=l)
    counts = [0] * tower.level_size(l)
    for a in tower.ancestors_map(lam, l):
        counts[a] += 1
    return min(counts), max(counts)


def level_subtower(tower: Tower, kept: Sequence[int]) -> Tower:
    """Keep only the levels in ``kept``; parents compose across dropped levels."""
    kept = sorted(set(int(k) for k in kept))
    if not kept:
        raise InputError("kept level set must be nonempty")
    if any(not 0 <= k < tower.n_levels for k in kept):
        raise InputError("kept level index out of range")
    if kept[-1] != tower.top:
        raise TopLevelDropped("the top level must be kept", top=tower.top)
    return Tower(
        tuple(tower.level_values[k] for k in kept),
        tuple(tower.nodes[k] for k in kept),
        tuple(tower.ancestors_map(a, b) for a, b in zip(kept, kept[1:])),
    )


def bottom_ancestors(tower: Tower) -> np.ndarray:
    """``anc[l, b]``: ancestor on level ``l`` of bottom node ``b``."""
    rows = [list(range(tower.level_size(0)))]
    for l in range(tower.top):
        pmap = tower.parent[l]
        rows.append([pmap[p] for p in rows[-1]])
    return np.array(rows, dtype=np.int64).reshape(tower.n_levels, tower.level_size(0))


def boundary_space(tower: Tower) -> FiniteMetricSpace:
    """Branches (one per bottom node) with ``rho`` = level value of their meet.

    Points are labeled by bottom node ids, in bottom-level order.
    """
    if not is_pruned(tower):
        raise NotPruned("boundary_space needs a pruned tower")
    if not tower.is_directed:
        raise NotDirected(
            f"top level has {tower.level_size(tower.top)} nodes; branches need a common root"
        )
    anc = bottom_ancestors(tower)
    m = anc.shape[1]
    meet_level = np.full((m, m), tower.top, dtype=np.int64)
    for l in range(tower.top, -1, -1):
        same = anc[l][:, None] == anc[l][None, :]
        meet_level[same] = l
    values = [Fraction(0)] + list(tower.level_values)
    # a branch meets itself at its bottom node, which is distance 0
    rank = meet_level + 1
    np.fill_diagonal(rank, 0)
    matrix = [[values[r] for r in row] for row in rank.tolist()]
    return FiniteMetricSpace.from_matrix(tower.nodes[0], matrix)


def canonical_map(space: FiniteMetricSpace, tower: Tower) -> MultiMap:
    """Point ``x`` to the branch of its components, as a map into ``boundary_space``."""
    expected = canonical_tower(space, tower.level_values)
    if expected.nodes != tower.nodes or expected.parent != tower.parent:
        raise TowerMismatch("tower is not the canonical tower of this space at its levels")
    target = boundary_space(tower)
    bottom = {p: j for j, block in enumerate(tower.nodes[0]) for p in block}
    return MultiMap(space, target, frozenset((x, bottom[x]) for x in range(space.size)))
