"""Ball capacities: cover numbers, capacity profiles and the geometry classifier.

A set has diameter ``<= delta`` exactly when it is a clique of the threshold
graph ``d <= delta``, so the least number of such sets covering ``A`` is the
clique cover number of that graph restricted to ``A``.  In an ultrametric
space the closed ``delta``-balls partition the space and every clique lies in
one of them, so the answer is the number of ``delta``-components meeting
``A``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import EmptySubset, InputError
from .metric_core import FiniteMetricSpace, as_distance, ball, epsilon_components

DEFAULT_EFFORT = 200_000
EFFORT_ENV = "MACROSPACE_EFFORT"
GRID_POLICY = "realized distances plus doubles; delta below final diameter; epsilon above delta"


def default_effort() -> int:
    """Search budget (branch-and-bound nodes), overridable via ``MACROSPACE_EFFORT``."""
    raw = os.environ.get(EFFORT_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise InputError(f"{EFFORT_ENV} must be an integer, got {raw!r}") from None
        if value <= 0:
            raise InputError(f"{EFFORT_ENV} must be positive")
        return value
    return DEFAULT_EFFORT


@dataclass(frozen=True)
class CoverNumber:
    lower: int
    upper: int
    exact: bool

    def __post_init__(self):
        if not 1 <= self.lower <= self.upper:
            raise ValueError(f"bad bracket [{self.lower}, {self.upper}]")
        if self.exact and self.lower != self.upper:
            raise ValueError("exact cover number needs lower == upper")

    @property
    def value(self) -> int:
        if not self.exact:
            raise ValueError("cover number is only bracketed")
        return self.lower


@dataclass(frozen=True)
class CapacityProfile:
    """``cov`` (min over centers) and ``Cov`` (max over centers) at one scale pair."""

    delta: Fraction
    epsilon: Fraction
    min_over_centers: CoverNumber
    max_over_centers: CoverNumber

    @property
    def exact(self) -> bool:
        return self.min_over_centers.exact and self.max_over_centers.exact


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise _OutOfBudget


class _OutOfBudget(Exception):
    pass


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def greedy_clique_cover(adj: Sequence[int]) -> list[int]:
    """Cliques (as bitmasks) covering all vertices; an upper bound."""
    uncovered = (1 << len(adj)) - 1
    cliques = []
    while uncovered:
        v = min(_bits(uncovered), key=lambda u: (adj[u] & uncovered).bit_count())
        clique = 1 << v
        cand = adj[v] & uncovered
        while cand:
            u = max(_bits(cand), key=lambda w: (adj[w] & cand).bit_count())
            clique |= 1 << u
            cand &= adj[u]
        uncovered &= ~clique
        cliques.append(clique)
    return cliques


def greedy_independent_set(adj: Sequence[int]) -> list[int]:
    """Pairwise non-adjacent vertices, min-degree first; a lower bound."""
    remaining = (1 << len(adj)) - 1
    chosen = []
    while remaining:
        v = min(_bits(remaining), key=lambda u: (adj[u] & remaining).bit_count())
        chosen.append(v)
        remaining &= ~(adj[v] | (1 << v))
    return chosen


def _cover_component(adj: list[int], budget: _Budget) -> tuple[int, int, bool]:
    m = len(adj)
    best = len(greedy_clique_cover(adj))
    indep = greedy_independent_set(adj)
    lb = len(indep)
    if lb == best:
        return lb, best, True

    full = (1 << m) - 1
    # independent vertices necessarily sit in distinct cliques
    cliques = [1 << v for v in indep]
    start = sum(1 << v for v in indep)

    def search(assigned: int):
        nonlocal best
        if len(cliques) >= best:
            return
        if assigned == full:
            best = len(cliques)
            return
        budget.spend()
        pick, pick_opts = -1, None
        for v in _bits(full & ~assigned):
            opts = [ci for ci, c in enumerate(cliques) if c & ~adj[v] == 0]
            if pick_opts is None or len(opts) < len(pick_opts):
                pick, pick_opts = v, opts
                if not opts:
                    break
        bit = 1 << pick
        for ci in pick_opts:
            cliques[ci] |= bit
            search(assigned | bit)
            cliques[ci] ^= bit
            if best == lb:
                return
        if len(cliques) + 1 < best:
            cliques.append(bit)
            search(assigned | bit)
            cliques.pop()

    try:
        search(start)
    except _OutOfBudget:
        return lb, best, False
    return best, best, True


def clique_cover_number(adjacency: np.ndarray, effort_budget: int | None = None) -> CoverNumber:
    """Minimum clique cover of a graph given by a boolean adjacency matrix.

    Connected components are solved independently; each runs a branch and
    bound seeded with a greedy cover (upper bound) and a greedy independent
    set (lower bound).  When the shared node budget runs out the result is the
    summed bracket with ``exact=False``.
    """
    adjacency = np.asarray(adjacency, dtype=bool)
    m = adjacency.shape[0]
    if m == 0:
        raise EmptySubset("cannot cover an empty set")
    budget = _Budget(default_effort() if effort_budget is None else effort_budget)
    nbr = [0] * m
    for i, j in zip(*np.nonzero(adjacency)):
        if i != j:
            nbr[i] |= 1 << int(j)
    seen = 0
    lower = upper = 0
    exact = True
    for root in range(m):
        if seen >> root & 1:
            continue
        comp = 1 << root
        frontier = comp
        while frontier:
            grow = 0
            for v in _bits(frontier):
                grow |= nbr[v]
            frontier = grow & ~comp
            comp |= grow
        seen |= comp
        verts = list(_bits(comp))
        local = {v: i for i, v in enumerate(verts)}
        adj = [sum(1 << local[u] for u in _bits(nbr[v])) for v in verts]
        lo, hi, ok = _cover_component(adj, budget) if budget.left > 0 else (
            len(greedy_independent_set(adj)),
            len(greedy_clique_cover(adj)),
            False,
        )
        if lo == hi:
            ok = True
        lower += lo
        upper += hi
        exact &= ok
    return CoverNumber(lower, upper, exact)


def min_cover_number(
    space: FiniteMetricSpace,
    subset: Iterable[int],
    delta,
    effort_budget: int | None = None,
    method: str = "auto",
) -> CoverNumber:
    """Least number of sets of diameter ``<= delta`` covering ``subset``.

    ``method`` is ``"auto"`` (component count on ultrametric spaces, clique
    cover otherwise), ``"ultrametric"`` or ``"clique"``.
    """
    idx = sorted({space.check_index(i) for i in subset})
    if not idx:
        raise EmptySubset("subset must be nonempty")
    delta = as_distance(delta)
    if method not in ("auto", "ultrametric", "clique"):
        raise InputError(f"unknown method {method!r}")
    if method == "ultrametric" or (method == "auto" and space.ultrametric):
        if not space.ultrametric:
            raise InputError("ultrametric path requested on a non-ultrametric space")
        block_of = epsilon_components(space, delta).block_of
        count = len({block_of[i] for i in idx})
        return CoverNumber(count, count, True)
    sub = space.within(delta)[np.ix_(idx, idx)]
    return clique_cover_number(sub, effort_budget)


def _fold(numbers: list[CoverNumber], pick) -> CoverNumber:
    lower = pick(c.lower for c in numbers)
    upper = pick(c.upper for c in numbers)
    exact = all(c.exact for c in numbers) or lower == upper
    return CoverNumber(lower, upper, exact)


def cov_profile(
    space: FiniteMetricSpace,
    delta,
    epsilon,
    effort_budget: int | None = None,
    method: str = "auto",
) -> CapacityProfile:
    """Min and max over all centers of the cover number of the ``epsilon``-ball."""
    delta, epsilon = as_distance(delta), as_distance(epsilon)
    if space.size == 0:
        raise EmptySubset("empty space")
    if method not in ("auto", "ultrametric", "clique"):
        raise InputError(f"unknown method {method!r}")
    if method == "ultrametric" and not space.ultrametric:
        raise InputError("ultrametric path requested on a non-ultrametric space")
    use_ultra = method == "ultrametric" or (method == "auto" and space.ultrametric)
    block_of = epsilon_components(space, delta).block_of if use_ultra else None
    memo: dict[frozenset, CoverNumber] = {}
    numbers = []
    for x in range(space.size):
        b = ball(space, x, epsilon)
        if b not in memo:
            if use_ultra:
                count = len({block_of[i] for i in b})
                memo[b] = CoverNumber(count, count, True)
            else:
                memo[b] = min_cover_number(space, b, delta, effort_budget, method="clique")
        numbers.append(memo[b])
    return CapacityProfile(delta, epsilon, _fold(numbers, min), _fold(numbers, max))


@dataclass(frozen=True)
class GeometryVerdict:
    """Finite-scale evidence for one case of the singleton / Cantor / Baire trichotomy.

    ``threshold_k`` stands in for the first infinite cardinal: a cover
    number ``>= threshold_k`` counts as "infinite".
    """

    kind: str  # bounded_evidence | unbounded_evidence | isolated_balls_evidence | inconclusive
    label: str  # singleton_type | cantor_type | baire_type | inconclusive
    witness_scales: tuple
    threshold_k: int
    diameters: tuple = ()
    grid_policy: str = GRID_POLICY
    exhausted: bool = False

    def to_dict(self) -> dict:
        from .metric_core import format_distance
        from .serialize import profile_to_dict

        return {
            "verdict": self.kind,
            "label": self.label,
            "threshold_k": self.threshold_k,
            "diameters": [format_distance(d) for d in self.diameters],
            "grid_policy": self.grid_policy,
            "budget_exhausted": self.exhausted,
            "witnesses": [profile_to_dict(p, member=n) for n, p in self.witness_scales],
        }


def classify_geometry(
    family: Callable[[int], FiniteMetricSpace] | Sequence[FiniteMetricSpace],
    depths: Sequence[int] | None = None,
    threshold_k: int = 4,
    scale_grid: Sequence | None = None,
    effort_budget: int | None = None,
) -> GeometryVerdict:
    """Label an indexed family of spaces as singleton-, Cantor- or Baire-like.

    ``family`` is either a callable evaluated at each of ``depths`` or an
    explicit sequence of spaces.  Diameters that never exceed twice the first
    one mark a bounded family (``singleton_type``).  Otherwise every ``delta``
    in the grid below the last diameter is tested against every larger
    ``epsilon`` in every member:

    * some ``delta`` with ``cov = 1`` throughout: ``isolated_balls_evidence``;
    * every ``delta`` reaching ``cov >= threshold_k``: ``unbounded_evidence``,
      labeled ``baire_type``;
    * some ``delta`` with ``Cov < threshold_k`` throughout:
      ``bounded_evidence``, labeled ``cantor_type``.

    Witness entries are ``(member_index, CapacityProfile)``.
    """
    if threshold_k < 2:
        raise InputError("threshold_k must be >= 2")
    if callable(family):
        if not depths:
            raise InputError("a callable family needs depths")
        members = [family(n) for n in depths]
    else:
        members = list(family)
    if not members:
        raise InputError("empty family")
    if any(b.size < a.size for a, b in zip(members, members[1:])):
        raise InputError("family members must have non-decreasing size")

    diams = tuple(m.diameter() for m in members)
    if all(d <= 2 * diams[0] for d in diams):
        last = members[-1]
        top = diams[-1]
        prof = cov_profile(last, top, top, effort_budget)
        return GeometryVerdict(
            "bounded_evidence", "singleton_type", ((len(members) - 1, prof),), threshold_k, diams
        )

    if scale_grid is None:
        values = sorted({v for m in members for v in m.distance_values()})
        grid = sorted(set(values) | {2 * v for v in values})
    else:
        grid = sorted({as_distance(s) for s in scale_grid})
    deltas = [g for g in grid if g < diams[-1]]
    if not deltas:
        return GeometryVerdict("inconclusive", "inconclusive", (), threshold_k, diams)

    exhausted = False
    isolated, unbounded, bounded = [], {}, []
    table = {}
    for delta in deltas:
        profiles = []
        for mi, (member, diam) in enumerate(zip(members, diams)):
            # balls stop growing at the member's diameter
            eps_list = sorted({min(e, diam) for e in grid if e > delta} | {diam})
            for eps in (e for e in eps_list if e > delta):
                prof = cov_profile(member, delta, eps, effort_budget)
                exhausted |= not prof.exact
                profiles.append((mi, prof))
        table[delta] = profiles
        if not profiles:
            continue
        if all(p.min_over_centers.upper == 1 for _, p in profiles):
            isolated.append(delta)
        hit = next((w for w in profiles if w[1].min_over_centers.lower >= threshold_k), None)
        if hit is not None:
            unbounded[delta] = hit
        if all(p.max_over_centers.upper < threshold_k for _, p in profiles):
            bounded.append(delta)

    if exhausted:
        partial = tuple(w for d in deltas for w in table[d] if not w[1].exact)
        return GeometryVerdict("inconclusive", "inconclusive", partial, threshold_k, diams, exhausted=True)
    tested = [d for d in deltas if table[d]]
    if isolated:
        return GeometryVerdict(
            "isolated_balls_evidence", "inconclusive", tuple(table[isolated[0]]), threshold_k, diams,
            exhausted=exhausted,
        )
    if tested and len(unbounded) == len(tested):
        witnesses = tuple(unbounded[d] for d in tested)
        return GeometryVerdict("unbounded_evidence", "baire_type", witnesses, threshold_k, diams, exhausted=exhausted)
    if bounded:
        return GeometryVerdict(
            "bounded_evidence", "cantor_type", tuple(table[bounded[0]]), threshold_k, diams,
            exhausted=exhausted,
        )
    return GeometryVerdict("inconclusive", "inconclusive", (), threshold_k, diams, exhausted=exhausted)
