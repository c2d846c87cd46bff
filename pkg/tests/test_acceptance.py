"""Acceptance criteria, one test each, with their time limits.

Each test prints ``[PASS]`` or ``[FAIL]`` with the elapsed time; the lines are
repeated in the terminal summary.  Run alone with
``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""
import json
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES, as_fractions, to_space
from macrospace import (
    KappaSpec,
    MultiMap,
    ball,
    baire_equivalence,
    boundary_multimap,
    boundary_space,
    build_isomorphism,
    canonical_tower,
    classify_geometry,
    compose,
    cov_profile,
    degrees,
    embed_baire,
    epsilon_components,
    gen_kappa_space,
    line_space,
    oscillation,
    surjection_onto,
    validate_morphism,
    verify_certificate,
)
from macrospace.serialize import dumps
import oracles


@contextmanager
def criterion(name: str, limit_s: float):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit_s, f"{name}: {elapsed:.2f} s exceeds {limit_s} s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        line = f"[{status}] {name} ({elapsed:.2f} s, limit {limit_s} s)"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_ultrametric_components_equal_balls():
    r = random.Random(101)
    with criterion("ultrametric components equal balls (200 spaces)", 5):
        for _ in range(200):
            s = to_space(oracles.random_ultrametric(r, r.randint(1, 32), 5))
            for eps in s.distance_values():
                part = epsilon_components(s, eps)
                for x in range(s.size):
                    assert frozenset(part.blocks[part.block_of[x]]) == ball(s, x, eps)


def test_degree_cover_duality():
    r = random.Random(202)
    with criterion("degree-cover duality (100 towers)", 30):
        for _ in range(100):
            s = to_space(oracles.random_ultrametric(r, r.randint(1, 32), r.randint(1, 5)))
            tower = canonical_tower(s, s.distance_values() or [1])
            b = boundary_space(tower)
            for l in range(tower.n_levels):
                for lam in range(l):
                    p = cov_profile(b, tower.level_values[lam], tower.level_values[l])
                    assert p.exact
                    assert degrees(tower, lam, l) == (p.min_over_centers.value, p.max_over_centers.value)


def test_capacity_law_on_generators():
    with criterion("capacity law k^(j-i) on word spaces", 10):
        for k in (2, 3):
            for n in (1, 2, 3):
                s = gen_kappa_space(KappaSpec(k, n))
                _, dist = oracles.kappa_distances(k, n)
                for i in range(1, n + 1):
                    for j in range(i + 1, n + 1):
                        want = k ** (j - i)
                        for method in ("ultrametric", "clique"):
                            p = cov_profile(s, i, j, method=method)
                            assert p.exact
                            assert p.min_over_centers.value == p.max_over_centers.value == want
                        # brute-force partition search on one ball (all balls are isometric)
                        assert oracles.cover_number(dist, oracles.ball(dist, 0, Fraction(j)), Fraction(i)) == want


def test_isomorphism_of_independent_copies():
    with criterion("tower isomorphism between two ternary copies", 1):
        first = gen_kappa_space(KappaSpec(3, 3))
        perm = list(range(27))
        random.Random(303).shuffle(perm)
        # same words, listed in another order and relabeled by position
        second = to_space(as_fractions(gen_kappa_space(KappaSpec(3, 3)).subspace(perm)))
        levels = [0, 1, 2, 3]
        s, t = canonical_tower(first, levels), canonical_tower(second, levels)
        iso = build_isomorphism(s, t)
        assert validate_morphism(iso) and iso.is_bijective
        phi = boundary_multimap(iso)
        assert phi.is_bijective
        assert oracles.is_isometry(phi.sorted_pairs(), as_fractions(phi.source), as_fractions(phi.target))


def test_equivalence_certificate():
    with criterion("equivalence certificate on the ternary word space", 1):
        space = gen_kappa_space(KappaSpec(3, 3))
        cert = baire_equivalence(space, 3, 3)
        phi = cert.multimap
        assert phi.is_bijective
        assert phi.target == gen_kappa_space(KappaSpec(3, 3))
        assert oracles.is_isometry(phi.sorted_pairs(), as_fractions(space), as_fractions(phi.target))
        text = dumps(cert.to_json())
        assert dumps(json.loads(text)) == text
        verify_certificate(json.loads(text))


def test_embedding_certificate():
    with criterion("separated embedding into the scheduled ternary space", 1):
        space = gen_kappa_space(KappaSpec(3, 3, (7, 49, 343)))
        cert = embed_baire(space, 3, 2)
        words = cert.multimap.source.labels
        g = cert.multimap.as_function()
        dist = as_fractions(space)
        assert len(words) == 9 and len(set(g)) == 9
        # recompute every recorded figure from the raw distance table
        eps = cert.schedule.values
        for j, floor, three, dmin in cert.separation:
            assert three == 3 * eps[j - 1]
            assert floor == 3 * eps[j - 1] - 2 * sum(eps[1:j], Fraction(0))
            pairs = [
                dist[g[a]][g[b]]
                for a in range(9)
                for b in range(a + 1, 9)
                if max(i + 1 for i in range(2) if words[a][i] != words[b][i]) == j
            ]
            assert min(pairs) == dmin >= three >= floor
        assert cert.radius == sum(eps[1:], Fraction(0))
        assert max(dist[p][g[0]] for p in g) == cert.max_distance <= cert.radius
        verify_certificate(json.loads(dumps(cert.to_json())))


def test_surjection_certificate():
    r = random.Random(404)
    with criterion("surjection from a 4-point line onto a random 3-point space", 1):
        source = line_space([7, 49, 343, 2401])
        target = to_space(oracles.random_metric(r, 3, 20))
        cert = surjection_onto(source, target)
        phi = cert.multimap
        assert phi.is_total and phi.is_surjective
        scales = [Fraction(0)] + source.distance_values()
        table = oscillation(phi, scales)
        assert table == cert.oscillation_fwd
        for delta, w in table:
            assert w == oracles.exhaustive_oscillation(phi.pairs, as_fractions(source), as_fractions(target), delta)
            assert w <= target.diameter()
        verify_certificate(json.loads(dumps(cert.to_json())))


def test_classifier_trichotomy():
    with criterion("classifier trichotomy on three families", 60):
        depths = [1, 2, 3, 4]
        single = line_space([0])
        labels = [
            classify_geometry(lambda n: gen_kappa_space(KappaSpec(2, n)), depths, threshold_k=4).label,
            classify_geometry(lambda n: gen_kappa_space(KappaSpec(n, n)), depths, threshold_k=4).label,
            classify_geometry(lambda n: single, depths, threshold_k=4).label,
        ]
        assert labels == ["cantor_type", "baire_type", "singleton_type"]


def test_oscillation_laws():
    r = random.Random(505)
    with criterion("oscillation laws on 100 random multi-maps", 30):
        done = 0
        while done < 100:
            a, b, c = (to_space(oracles.random_metric(r, r.randint(1, 10), 12)) for _ in range(3))
            phi = MultiMap(a, b, frozenset((x, y) for x in range(a.size) for y in range(b.size) if r.random() < 0.3))
            psi = MultiMap(b, c, frozenset((x, y) for x in range(b.size) for y in range(c.size) if r.random() < 0.3))
            both = compose(phi, psi)
            if not (phi.pairs and psi.pairs and both.pairs):
                continue
            scales = [Fraction(0)] + a.distance_values()
            fwd = oscillation(phi, scales)
            for delta, w in fwd:
                assert w == oracles.exhaustive_oscillation(phi.pairs, as_fractions(a), as_fractions(b), delta)
            for (delta, w), (_, inner) in zip(oscillation(both, scales), fwd):
                assert w <= oscillation(psi, [inner]).values[0]
            done += 1


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
