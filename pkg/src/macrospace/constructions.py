"""Certified constructions: Baire equivalence, Baire embedding, surjection.

Each construction returns a certificate holding the multi-map together with
everything needed to re-check it (spaces, schedules, oscillation tables).
``verify_certificate`` re-validates a serialized certificate without
re-running any search.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .covers import cov_profile
from .errors import (
    CertificateError,
    EmptyTarget,
    InputError,
    InsufficientCapacity,
    MacroConnectedSource,
    NotHomogeneousAtSchedule,
    SeparationShortfall,
)
from .metric_core import (
    FiniteMetricSpace,
    KappaSpec,
    as_distance,
    ball,
    epsilon_components,
    format_distance,
    gen_kappa_space,
)
from .morphisms import TowerMorphism, boundary_multimap, build_isomorphism, validate_morphism
from .multimap import MultiMap, OscillationTable, compose, invert, oscillation
from .serialize import (
    FORMAT_VERSION,
    schedule_to_json,
    space_from_json,
    space_to_json,
    table_from_json,
    table_to_json,
)
from .towers import canonical_map, canonical_tower, degrees


@dataclass(frozen=True)
class ScaleSchedule:
    values: tuple
    kind: str  # "level_schedule" | "separation_schedule"
    gap_ok: tuple = ()

    def __post_init__(self):
        values = tuple(as_distance(v) for v in self.values)
        if any(a >= b for a, b in zip(values, values[1:])):
            raise InputError("schedule must be strictly increasing")
        object.__setattr__(self, "values", values)
        if self.kind == "separation_schedule" and not self.gap_ok:
            gaps = tuple(6 * a < b for a, b in zip(values, values[1:]))
            object.__setattr__(self, "gap_ok", gaps)


def _capacity_reached(space, delta, eps, width_k, effort_budget) -> bool:
    return cov_profile(space, delta, eps, effort_budget).min_over_centers.lower >= width_k


def _smallest_attaining(space, delta, candidates, width_k, effort_budget):
    """Smallest candidate ``eps`` with ``cov_delta^eps >= width_k`` (monotone in ``eps``)."""
    if not candidates:
        return None
    ok = lambda i: _capacity_reached(space, delta, candidates[i], width_k, effort_budget)  # noqa: E731
    # gallop to bracket the first success, then bisect
    lo, hi, step = -1, 0, 1
    while not ok(hi):
        if hi == len(candidates) - 1:
            return None
        lo, hi = hi, min(hi + step, len(candidates) - 1)
        step *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return candidates[hi]


def find_level_schedule(
    space: FiniteMetricSpace,
    width_k: int,
    depth: int,
    effort_budget: int | None = None,
    gap=0,
) -> ScaleSchedule:
    """Scales ``d_1 < ... < d_depth`` with ``cov_{d_(i-1)}^{d_i} >= width_k``.

    ``d_1`` is the smallest positive distance (1 for a one-point space); each
    later scale is the smallest realized distance above ``d_(i-1) + gap``
    reaching the capacity.  Failure at the ``i``-th condition (``d_i`` to
    ``d_(i+1)``) raises ``InsufficientCapacity`` with ``step=i``, which is
    also the deepest achievable depth.
    """
    if width_k < 1 or depth < 1:
        raise InputError("width_k and depth must be >= 1")
    gap = as_distance(gap)
    vals = space.distance_values()
    sched = [vals[0] if vals else Fraction(1)]
    for step in range(1, depth):
        cands = [v for v in vals if v > sched[-1] + gap]
        nxt = _smallest_attaining(space, sched[-1], cands, width_k, effort_budget)
        if nxt is None:
            raise InsufficientCapacity(
                f"no scale above {sched[-1]} reaches capacity {width_k} (achieved depth {step})",
                step=step,
                achieved_depth=step,
                width_k=width_k,
            )
        sched.append(nxt)
    return ScaleSchedule(tuple(sched), "level_schedule")


def _tower_levels(schedule: ScaleSchedule) -> tuple:
    # a bottom level at scale 0 makes the canonical map injective
    return (Fraction(0),) + schedule.values


@dataclass(frozen=True, eq=False)
class EquivalenceCertificate:
    multimap: MultiMap
    schedule: ScaleSchedule
    tower_iso: TowerMorphism
    oscillation_fwd: OscillationTable
    oscillation_bwd: OscillationTable
    width_k: int
    depth: int
    mesh_ok: tuple = ()

    kind = "baire_equivalence"

    def to_json(self) -> dict:
        return {
            "format": FORMAT_VERSION,
            "kind": self.kind,
            "width_k": self.width_k,
            "depth": self.depth,
            "schedule": schedule_to_json(self.schedule.values),
            "source": space_to_json(self.multimap.source),
            "target": space_to_json(self.multimap.target),
            "multimap": {"pairs": [list(p) for p in self.multimap.sorted_pairs()]},
            "tower_iso": {
                "level_map": list(self.tower_iso.level_map),
                "node_map": [list(lv) for lv in self.tower_iso.node_map],
            },
            "oscillation_fwd": table_to_json(self.oscillation_fwd),
            "oscillation_bwd": table_to_json(self.oscillation_bwd),
            "mesh_ok": list(self.mesh_ok),
        }


def baire_equivalence(
    space: FiniteMetricSpace,
    width_k: int,
    depth: int,
    effort_budget: int | None = None,
) -> EquivalenceCertificate:
    """Equivalence of ``space`` with the truncated ``width_k``-ary macro-space.

    The canonical tower of ``space`` at ``0`` plus the level schedule must be
    homogeneous with every degree exactly ``width_k``; it is then matched to
    the canonical tower of ``gen_kappa_space(width_k, depth, schedule)`` and
    the isomorphism is pushed down to the points through both canonical maps.
    """
    schedule = find_level_schedule(space, width_k, depth, effort_budget)
    levels = _tower_levels(schedule)
    source_tower = canonical_tower(space, levels)
    for lam in range(source_tower.top):
        lo, hi = degrees(source_tower, lam, lam + 1)
        if lo != width_k or hi != width_k:
            raise NotHomogeneousAtSchedule(
                f"degrees [{lo}, {hi}] between scales {levels[lam]} and {levels[lam + 1]}, need {width_k}",
                level=lam,
                degrees=[lo, hi],
                width_k=width_k,
            )
    roots = source_tower.level_size(source_tower.top)
    if roots != 1:
        raise NotHomogeneousAtSchedule(
            f"{roots} components at the top scale {levels[-1]}", level=source_tower.top, roots=roots
        )
    target = gen_kappa_space(KappaSpec(width_k, depth, schedule.values))
    target_tower = canonical_tower(target, levels)
    iso = build_isomorphism(source_tower, target_tower)
    phi = compose(
        compose(canonical_map(space, source_tower), boundary_multimap(iso)),
        invert(canonical_map(target, target_tower)),
    )
    mesh_ok = tuple(epsilon_components(space, v).mesh <= v for v in schedule.values)
    return EquivalenceCertificate(
        phi,
        schedule,
        iso,
        oscillation(phi, levels),
        oscillation(invert(phi), levels),
        width_k,
        depth,
        mesh_ok,
    )


@dataclass(frozen=True, eq=False)
class EmbeddingCertificate:
    multimap: MultiMap  # graph of the embedding, source = truncated macro-space
    schedule: ScaleSchedule
    width_k: int
    depth: int
    base_point: int
    separation: tuple  # ((index j, floor, three_eps, measured min distance), ...)
    radius: Fraction
    max_distance: Fraction
    scales: tuple
    oscillation_fwd: OscillationTable
    oscillation_bwd: OscillationTable

    kind = "baire_embedding"

    @property
    def injective(self) -> bool:
        return self.multimap.is_injective

    def to_json(self) -> dict:
        return {
            "format": FORMAT_VERSION,
            "kind": self.kind,
            "width_k": self.width_k,
            "depth": self.depth,
            "base_point": self.base_point,
            "schedule": schedule_to_json(self.schedule.values),
            "source": space_to_json(self.multimap.source),
            "target": space_to_json(self.multimap.target),
            "multimap": {"pairs": [list(p) for p in self.multimap.sorted_pairs()]},
            "separation": [
                {
                    "index": j,
                    "floor": format_distance(floor),
                    "three_eps": format_distance(three),
                    "min_distance": format_distance(dmin),
                }
                for j, floor, three, dmin in self.separation
            ],
            "containment": {"radius": format_distance(self.radius), "max_distance": format_distance(self.max_distance)},
            "scales": schedule_to_json(self.scales),
            "oscillation_fwd": table_to_json(self.oscillation_fwd),
            "oscillation_bwd": table_to_json(self.oscillation_bwd),
        }


def _separation_floors(eps: Sequence[Fraction], depth: int) -> list[tuple]:
    """``(j, 3 eps_j - 2 sum_{i<j} eps_(i+1), 3 eps_j)`` for ``j = 1..depth``."""
    out = []
    for j in range(1, depth + 1):
        three = 3 * eps[j - 1]
        out.append((j, three - 2 * sum(eps[1:j], Fraction(0)), three))
    return out


def _embedding_measurements(source: FiniteMetricSpace, target: FiniteMetricSpace, g, base: int, eps, depth):
    words = source.labels
    floors = _separation_floors(eps, depth)
    mins = {j: None for j, _, _ in floors}
    for a in range(len(words)):
        for b in range(a + 1, len(words)):
            j = max(i + 1 for i in range(depth) if words[a][i] != words[b][i])
            dist = target.d(g[a], g[b])
            if mins[j] is None or dist < mins[j]:
                mins[j] = dist
    separation = tuple(
        (j, floor, three, mins[j] if mins[j] is not None else Fraction(0)) for j, floor, three in floors
    )
    radius = sum(eps[1 : depth + 1], Fraction(0))
    max_distance = max((target.d(p, base) for p in g), default=Fraction(0))
    return separation, radius, max_distance


def _embedding_scales(source: FiniteMetricSpace, eps) -> tuple:
    return tuple(sorted({Fraction(0)} | set(source.distance_values()) | set(eps)))


def embed_baire(
    space: FiniteMetricSpace,
    width_k: int,
    depth: int,
    base_point: int = 0,
    effort_budget: int | None = None,
) -> EmbeddingCertificate:
    """Injective map from ``width_k``-ary words of length ``depth`` into ``space``.

    Scales ``e_1 < ... < e_(depth+1)`` satisfy ``cov_{6 e_i}^{e_(i+1)} >=
    width_k``.  Around each center ``x`` a ``3 e_i``-separated set of
    ``width_k`` points inside the ``e_(i+1)``-ball, starting with ``x``, is
    picked greedily; the word ``(s, i)`` is sent to the image of ``s`` under
    the map rooted at the ``i``-th point chosen around ``x``.
    """
    if width_k < 2 and depth > 0:
        raise InputError("width_k must be >= 2")
    if depth < 0:
        raise InputError("depth must be >= 0")
    base = space.check_index(base_point)
    if depth == 0:
        source = FiniteMetricSpace.from_matrix([()], [[0]])
        phi = MultiMap(source, space, frozenset({(0, base)}))
        scales = (Fraction(0),)
        return EmbeddingCertificate(
            phi, ScaleSchedule((), "separation_schedule"), width_k, 0, base, (), Fraction(0), Fraction(0),
            scales, oscillation(phi, scales), oscillation(invert(phi), scales),
        )

    vals = space.distance_values()
    if not vals:
        raise InsufficientCapacity("space has a single point", step=1, achieved_depth=0, width_k=width_k)
    eps = [vals[0]]
    for step in range(1, depth + 1):
        cands = [v for v in vals if v > eps[-1]]
        nxt = _smallest_attaining(space, 6 * eps[-1], cands, width_k, effort_budget)
        if nxt is None:
            raise InsufficientCapacity(
                f"no scale above {eps[-1]} has cov at {6 * eps[-1]} >= {width_k} (achieved depth {step - 1})",
                step=step,
                achieved_depth=step - 1,
                width_k=width_k,
            )
        eps.append(nxt)

    chosen: dict[tuple[int, int], list[int]] = {}

    def separated(i: int, x: int) -> list[int]:
        key = (i, x)
        if key not in chosen:
            floor = _ceil_threshold(space, 3 * eps[i - 1])
            picks = [x]
            for p in sorted(ball(space, x, eps[i])):
                if len(picks) == width_k:
                    break
                if all(space.numerators[p, q] >= floor for q in picks):
                    picks.append(p)
            if len(picks) < width_k:
                raise SeparationShortfall(
                    f"only {len(picks)} {3 * eps[i - 1]}-separated points near {space.labels[x]!r}",
                    point=x,
                    index=i,
                    found=len(picks),
                )
            chosen[key] = picks
        return chosen[key]

    def g(x: int, n: int, word: tuple) -> int:
        while n:
            x = separated(n, x)[word[n - 1]]
            n -= 1
        return x

    source = gen_kappa_space(KappaSpec(width_k, depth))
    images = [g(base, depth, w) for w in source.labels]
    phi = MultiMap.from_function(source, space, images)
    separation, radius, max_distance = _embedding_measurements(source, space, images, base, eps, depth)
    scales = _embedding_scales(source, eps)
    return EmbeddingCertificate(
        phi,
        ScaleSchedule(tuple(eps), "separation_schedule"),
        width_k,
        depth,
        base,
        separation,
        radius,
        max_distance,
        scales,
        oscillation(phi, scales),
        oscillation(invert(phi), scales),
    )


def _ceil_threshold(space: FiniteMetricSpace, value) -> int:
    """Smallest numerator ``m`` with ``m / denominator >= value``."""
    value = as_distance(value) * space.denominator
    return -((-value.numerator) // value.denominator)


@dataclass(frozen=True, eq=False)
class SurjectionCertificate:
    multimap: MultiMap
    psi: tuple  # psi[x] = n, meaning x goes to n**2
    chain: tuple
    chain_scales: tuple
    radius: Fraction
    scales: tuple
    oscillation_fwd: OscillationTable
    oscillation_psi: OscillationTable

    kind = "surjection"

    @property
    def psi_map(self) -> MultiMap:
        return MultiMap.from_function(self.multimap.source, squares_space(max(self.psi)), [n - 1 for n in self.psi])

    def to_json(self) -> dict:
        return {
            "format": FORMAT_VERSION,
            "kind": self.kind,
            "base_point": self.chain[0],
            "source": space_to_json(self.multimap.source),
            "target": space_to_json(self.multimap.target),
            "multimap": {"pairs": [list(p) for p in self.multimap.sorted_pairs()]},
            "psi": list(self.psi),
            "chain": list(self.chain),
            "chain_scales": schedule_to_json(self.chain_scales),
            "radius": format_distance(self.radius),
            "scales": schedule_to_json(self.scales),
            "oscillation_fwd": table_to_json(self.oscillation_fwd),
            "oscillation_psi": table_to_json(self.oscillation_psi),
        }


def squares_space(count: int) -> FiniteMetricSpace:
    """``{1, 4, ..., count**2}`` with the distance of the real line."""
    sq = [n * n for n in range(1, count + 1)]
    return FiniteMetricSpace.from_matrix(sq, [[abs(a - b) for b in sq] for a in sq])


def _escape_chain(source: FiniteMetricSpace, base: int, m: int) -> tuple[list[int], list[Fraction]]:
    vals = source.distance_values() or [Fraction(0)]
    chain, scales = [base], []
    while True:
        i = len(chain)
        eps = max(vals[min(i, len(vals)) - 1], source.d(chain[-1], base))
        scales.append(eps)
        if len(chain) >= m:
            break
        part = epsilon_components(source, eps)
        comp = set(part.blocks[part.block_of[base]])
        outside = [p for p in range(source.size) if p not in comp]
        if not outside:
            break
        chain.append(outside[0])
    return chain, scales


def _psi_from_chain(source: FiniteMetricSpace, base: int, scales: Sequence[Fraction]) -> list[int]:
    psi = [len(scales)] * source.size
    for n in range(len(scales), 0, -1):
        part = epsilon_components(source, scales[n - 1])
        for p in part.blocks[part.block_of[base]]:
            psi[p] = n
    return psi


def _target_blocks(target: FiniteMetricSpace, count: int, radius) -> list[frozenset]:
    m = target.size
    blocks = [ball(target, n, radius) for n in range(count)]
    # with a short chain the last index absorbs the remaining dense points
    blocks[-1] = frozenset().union(*(ball(target, n, radius) for n in range(count - 1, m)))
    return blocks


def surjection_onto(
    source: FiniteMetricSpace,
    target: FiniteMetricSpace,
    base_point: int = 0,
) -> SurjectionCertificate:
    """Surjective multi-map ``source => target`` through the squares ``{1, 4, 9, ...}``.

    An escape chain ``x_1 = base, x_2, ...`` is built with ``x_(i+1)`` outside
    the ``e_i``-component of the base, ``e_i = max(s_i, d(x_i, base))`` and
    ``s_i`` the ``i``-th realized distance.  Each point goes to ``n**2`` for
    the first ``n`` whose component captures it, and ``n**2`` goes to the ball
    of radius half the smallest target distance around the ``n``-th target
    point.
    """
    if target.size == 0:
        raise EmptyTarget("target space is empty")
    base = source.check_index(base_point)
    m = target.size
    chain, chain_scales = _escape_chain(source, base, m)
    if m >= 2 and len(chain) == 1:
        raise MacroConnectedSource("source has no escape point from the base component")
    psi = _psi_from_chain(source, base, chain_scales)
    tvals = target.distance_values()
    radius = tvals[0] / 2 if tvals else Fraction(0)
    blocks = _target_blocks(target, len(chain), radius)
    pairs = frozenset((x, y) for x in range(source.size) for y in blocks[psi[x] - 1])
    phi = MultiMap(source, target, pairs)
    scales = (Fraction(0),) + tuple(source.distance_values())
    psi_map = MultiMap.from_function(source, squares_space(len(chain)), [n - 1 for n in psi])
    return SurjectionCertificate(
        phi,
        tuple(psi),
        tuple(chain),
        tuple(chain_scales),
        radius,
        scales,
        oscillation(phi, scales),
        oscillation(psi_map, scales),
    )


# --- verification -----------------------------------------------------------


@dataclass
class VerificationReport:
    kind: str
    checks: list = field(default_factory=list)

    def ok(self, name: str):
        self.checks.append(name)


def _require(cond: bool, code: str, message: str, **detail):
    if not cond:
        raise CertificateError(code, message, **detail)


def _load_pairs(data, source, target) -> MultiMap:
    try:
        pairs = frozenset((int(a), int(b)) for a, b in data["multimap"]["pairs"])
        return MultiMap(source, target, pairs)
    except (KeyError, TypeError, ValueError, InputError) as exc:
        raise CertificateError("MalformedCertificate", f"bad multimap: {exc}") from exc


def _load_schedule(raw) -> tuple:
    try:
        values = tuple(as_distance(v) for v in raw)
    except (TypeError, InputError) as exc:
        raise CertificateError("ScheduleViolated", f"bad schedule: {exc}") from exc
    _require(all(a < b for a, b in zip(values, values[1:])), "ScheduleViolated", "schedule not increasing")
    return values


def _check_table(recorded_raw, phi: MultiMap, scales, name: str, report: VerificationReport):
    try:
        recorded = table_from_json(recorded_raw)
    except InputError as exc:
        raise CertificateError("OscillationMismatch", f"{name}: {exc}") from exc
    _require(recorded.scales == tuple(scales), "ScheduleViolated", f"{name} scales differ from the schedule")
    fresh = oscillation(phi, scales)
    _require(
        fresh.entries == recorded.entries,
        "OscillationMismatch",
        f"{name} does not match the recomputed table",
        recorded=table_to_json(recorded),
        recomputed=table_to_json(fresh),
    )
    report.ok(name)


def _verify_equivalence(data, source, target, phi, report):
    k, depth = int(data["width_k"]), int(data["depth"])
    values = _load_schedule(data["schedule"])
    _require(len(values) == depth, "ScheduleViolated", "schedule length differs from depth")
    levels = (Fraction(0),) + values
    _check_table(data["oscillation_fwd"], phi, levels, "oscillation_fwd", report)
    _check_table(data["oscillation_bwd"], invert(phi), levels, "oscillation_bwd", report)
    _require(
        target == gen_kappa_space(KappaSpec(k, depth, values)),
        "TargetMismatch",
        "target is not the truncated macro-space at the schedule",
    )
    report.ok("target")
    for a, b in zip(levels[1:], levels[2:]):
        _require(
            cov_profile(source, a, b).min_over_centers.lower >= k,
            "ScheduleViolated",
            f"capacity below {k} between {a} and {b}",
        )
    report.ok("capacity")
    s_tower, t_tower = canonical_tower(source, levels), canonical_tower(target, levels)
    for lam in range(s_tower.top):
        _require(degrees(s_tower, lam, lam + 1) == (k, k), "DegreeMismatch", f"level {lam} degrees differ from {k}")
    report.ok("degrees")
    raw_iso = data["tower_iso"]
    try:
        iso = TowerMorphism(s_tower, t_tower, tuple(map(tuple, raw_iso["node_map"])), tuple(raw_iso["level_map"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError("MalformedCertificate", f"bad tower_iso: {exc}") from exc
    check = validate_morphism(iso)
    _require(bool(check), "InvalidMorphism", check.reason)
    _require(iso.is_bijective, "InvalidMorphism", "tower map is not bijective")
    expected = compose(
        compose(canonical_map(source, s_tower), boundary_multimap(iso)),
        invert(canonical_map(target, t_tower)),
    )
    _require(expected.pairs == phi.pairs, "CompositionMismatch", "multimap is not induced by the tower isomorphism")
    report.ok("composition")
    mesh_ok = [epsilon_components(source, v).mesh <= v for v in values]
    _require(list(data["mesh_ok"]) == mesh_ok, "ScheduleViolated", "mesh record differs from recomputation")
    report.ok("mesh")


def _verify_embedding(data, source, target, phi, report):
    k, depth = int(data["width_k"]), int(data["depth"])
    base = int(data["base_point"])
    _require(phi.is_single_valued, "InjectivityViolated", "embedding is multi-valued")
    _require(phi.is_injective, "InjectivityViolated", "embedding is not injective")
    report.ok("injective")
    if depth == 0:
        _require(phi.pairs == frozenset({(0, base)}), "CompositionMismatch", "depth-0 map must hit the base point")
        return
    _require(source == gen_kappa_space(KappaSpec(k, depth)), "SourceMismatch", "source is not the word space")
    eps = _load_schedule(data["schedule"])
    _require(len(eps) == depth + 1, "ScheduleViolated", "need depth + 1 scales")
    for a, b in zip(eps, eps[1:]):
        _require(
            cov_profile(target, 6 * a, b).min_over_centers.lower >= k,
            "ScheduleViolated",
            f"cov at {6 * a} of {b}-balls below {k}",
        )
    report.ok("capacity")
    g = phi.as_function()
    _require(g[0] == base, "CompositionMismatch", "the zero word must go to the base point")
    separation, radius, max_distance = _embedding_measurements(source, target, g, base, eps, depth)
    recorded = [
        (int(s["index"]), as_distance(s["floor"]), as_distance(s["three_eps"]), as_distance(s["min_distance"]))
        for s in data["separation"]
    ]
    _require(recorded == list(separation), "SeparationViolated", "separation record differs from recomputation")
    _require(all(dmin >= floor for _, floor, _, dmin in separation), "SeparationViolated", "separation floor broken")
    report.ok("separation")
    cont = data["containment"]
    _require(
        as_distance(cont["radius"]) == radius and as_distance(cont["max_distance"]) == max_distance,
        "ContainmentViolated",
        "containment record differs from recomputation",
    )
    _require(max_distance <= radius, "ContainmentViolated", "image leaves the containment ball")
    report.ok("containment")
    scales = _embedding_scales(source, eps)
    _require(_load_schedule(data["scales"]) == scales, "ScheduleViolated", "scales differ from the schedule")
    _check_table(data["oscillation_fwd"], phi, scales, "oscillation_fwd", report)
    _check_table(data["oscillation_bwd"], invert(phi), scales, "oscillation_bwd", report)


def _verify_surjection(data, source, target, phi, report):
    base = int(data["base_point"])
    psi = [int(n) for n in data["psi"]]
    chain_scales = _load_schedule(data["chain_scales"])
    chain, fresh_scales = _escape_chain(source, source.check_index(base), target.size)
    _require(
        [int(c) for c in data["chain"]] == chain and chain_scales == tuple(fresh_scales),
        "CompositionMismatch",
        "escape chain differs from its rule",
    )
    _require(len(psi) == source.size, "CompositionMismatch", "psi must list every source point")
    _require(psi == _psi_from_chain(source, base, chain_scales), "CompositionMismatch", "psi differs from its rule")
    count = len(chain_scales)
    _require(sorted(set(psi)) == list(range(1, count + 1)), "SurjectivityViolated", "psi misses a square")
    radius = as_distance(data["radius"])
    tvals = target.distance_values()
    _require(radius == (tvals[0] / 2 if tvals else 0), "CompositionMismatch", "radius differs from its rule")
    blocks = _target_blocks(target, count, radius)
    expected = frozenset((x, y) for x in range(source.size) for y in blocks[psi[x] - 1])
    _require(expected == phi.pairs, "CompositionMismatch", "multimap differs from the composed map")
    report.ok("composition")
    scales = (Fraction(0),) + tuple(source.distance_values())
    _require(_load_schedule(data["scales"]) == scales, "ScheduleViolated", "scales differ from source distances")
    _check_table(data["oscillation_fwd"], phi, scales, "oscillation_fwd", report)
    psi_map = MultiMap.from_function(source, squares_space(count), [n - 1 for n in psi])
    _check_table(data["oscillation_psi"], psi_map, scales, "oscillation_psi", report)


def verify_certificate(data: dict) -> VerificationReport:
    """Re-check a serialized certificate; raise ``CertificateError`` on any defect."""
    if not isinstance(data, dict) or data.get("format") != FORMAT_VERSION:
        raise CertificateError("MalformedCertificate", "not a certificate document")
    kind = data.get("kind")
    report = VerificationReport(kind)
    try:
        source = space_from_json(data["source"])
        target = space_from_json(data["target"])
    except (KeyError, InputError) as exc:
        raise CertificateError("MalformedCertificate", f"bad embedded space: {exc}") from exc
    phi = _load_pairs(data, source, target)
    if kind in ("baire_equivalence", "surjection"):
        _require(phi.is_surjective, "SurjectivityViolated", "some target point has no preimage")
        report.ok("surjective")
    _require(phi.is_total, "TotalityViolated", "some source point has no image")
    report.ok("total")
    try:
        if kind == "baire_equivalence":
            _verify_equivalence(data, source, target, phi, report)
        elif kind == "baire_embedding":
            _verify_embedding(data, source, target, phi, report)
        elif kind == "surjection":
            _verify_surjection(data, source, target, phi, report)
        else:
            raise CertificateError("MalformedCertificate", f"unknown certificate kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError("MalformedCertificate", f"missing or bad field: {exc}") from exc
    except InputError as exc:
        raise CertificateError("MalformedCertificate", str(exc)) from exc
    return report
