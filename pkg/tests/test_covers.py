import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import as_fractions, to_space
from macrospace import (
    KappaSpec,
    ball,
    classify_geometry,
    cov_profile,
    gen_kappa_space,
    line_space,
    min_cover_number,
)
from macrospace.covers import (
    EFFORT_ENV,
    clique_cover_number,
    default_effort,
    greedy_clique_cover,
    greedy_independent_set,
)
from macrospace.errors import EmptySubset, InputError
import oracles


class TestMinCover:
    def test_unit_line(self, unit_line):
        c = min_cover_number(unit_line(4), range(4), 1)
        assert (c.lower, c.upper, c.exact) == (2, 2, True)

    def test_binary_ball(self):
        s = gen_kappa_space(KappaSpec(2, 3))
        b = ball(s, s.index((0, 0, 0)), 2)
        for method in ("auto", "clique", "ultrametric"):
            assert min_cover_number(s, b, 1, method=method).value == 2
        assert oracles.cover_number(as_fractions(s), b, 1) == 2

    def test_delta_at_least_diameter(self, rng):
        s = to_space(oracles.random_metric(rng, 8))
        sub = [0, 3, 5, 6]
        assert min_cover_number(s, sub, s.diameter(sub)).value == 1

    def test_empty_subset(self, unit_line):
        with pytest.raises(EmptySubset):
            min_cover_number(unit_line(3), [], 1)

    def test_ultrametric_path_refuses_general_space(self, unit_line):
        with pytest.raises(InputError):
            min_cover_number(unit_line(3), [0, 1], 1, method="ultrametric")
        with pytest.raises(InputError):
            cov_profile(unit_line(3), 1, 2, method="ultrametric")

    def test_budget_bracket(self):
        # 5-cycle complement style graph where greedy bounds differ
        r = random.Random(3)
        s = to_space(oracles.random_metric(r, 14, max_weight=6))
        c = min_cover_number(s, range(14), 3, effort_budget=0)
        assert c.lower <= oracles.cover_number(as_fractions(s), range(14), Fraction(3)) <= c.upper

    def test_effort_env(self, monkeypatch):
        monkeypatch.setenv(EFFORT_ENV, "17")
        assert default_effort() == 17
        monkeypatch.delenv(EFFORT_ENV)
        assert default_effort() > 0


class TestCliqueCover:
    def test_greedy_bounds_sandwich(self):
        r = random.Random(11)
        for _ in range(30):
            n = r.randint(1, 9)
            dist = oracles.random_metric(r, n, 6)
            delta = Fraction(r.randint(1, 6))
            adj = [sum(1 << j for j in range(n) if j != i and dist[i][j] <= delta) for i in range(n)]
            exact = oracles.cover_number(dist, range(n), delta)
            assert len(greedy_independent_set(adj)) <= exact <= len(greedy_clique_cover(adj))

    def test_cycle_five(self):
        # C5: independent sets give 2, greedy cover gives 3, true value 3
        adj = np.zeros((5, 5), dtype=bool)
        for i in range(5):
            adj[i, (i + 1) % 5] = adj[(i + 1) % 5, i] = True
        c = clique_cover_number(adj)
        assert (c.lower, c.upper, c.exact) == (3, 3, True)


class TestProfiles:
    def test_binary_and_ternary(self):
        p = cov_profile(gen_kappa_space(KappaSpec(2, 3)), 1, 2)
        assert (p.min_over_centers.value, p.max_over_centers.value) == (2, 2)
        p = cov_profile(gen_kappa_space(KappaSpec(3, 2)), 1, 2)
        assert (p.min_over_centers.value, p.max_over_centers.value) == (3, 3)

    def test_delta_equals_eps_in_ultrametric(self, rng):
        s = to_space(oracles.random_ultrametric(rng, 12))
        for v in s.distance_values():
            p = cov_profile(s, v, v)
            assert p.min_over_centers.value == p.max_over_centers.value == 1

    def test_against_oracle_on_general_spaces(self):
        r = random.Random(7)
        for _ in range(25):
            dist = oracles.random_metric(r, r.randint(2, 8), 7)
            s = to_space(dist)
            vals = s.distance_values()
            d, e = sorted(r.sample(vals, 2)) if len(vals) > 1 else (vals[0], vals[0])
            p = cov_profile(s, d, e)
            assert p.exact
            assert (p.min_over_centers.value, p.max_over_centers.value) == oracles.capacity(dist, d, e)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 9))
def test_cover_paths_agree_on_ultrametrics(seed, n):
    r = random.Random(seed)
    dist = oracles.random_ultrametric(r, n, 4)
    s = to_space(dist)
    for delta in [0] + s.distance_values():
        fast = min_cover_number(s, range(n), delta, method="ultrametric").value
        slow = min_cover_number(s, range(n), delta, method="clique").value
        assert fast == slow == oracles.cover_number(dist, range(n), Fraction(delta))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 8))
def test_cover_monotone_in_delta(seed, n):
    s = to_space(oracles.random_metric(random.Random(seed), n))
    counts = [min_cover_number(s, range(n), d).value for d in [0] + s.distance_values()]
    assert counts == sorted(counts, reverse=True)
    assert counts[0] == n and counts[-1] == 1


class TestClassifier:
    def test_trichotomy(self):
        assert classify_geometry(lambda n: gen_kappa_space(KappaSpec(2, n)), [1, 2, 3, 4]).label == "cantor_type"
        assert classify_geometry(lambda n: gen_kappa_space(KappaSpec(n, n)), [1, 2, 3, 4]).label == "baire_type"
        single = line_space([0])
        v = classify_geometry(lambda n: single, [1, 2, 3, 4])
        assert (v.kind, v.label) == ("bounded_evidence", "singleton_type")

    def test_exhausted_is_inconclusive(self):
        # cyclic distance on 5 points: at scale 1 the graph is a 5-cycle, whose
        # greedy bounds (2 and 3) only meet after search
        def cycle(scale):
            d = [[scale * min(abs(i - j), 5 - abs(i - j)) for j in range(5)] for i in range(5)]
            return to_space(d)

        v = classify_geometry([cycle(1), cycle(3)], effort_budget=0)
        assert (v.label, v.exhausted) == ("inconclusive", True)
        assert all(not p.exact for _, p in v.witness_scales)
        assert classify_geometry([cycle(1), cycle(3)]).exhausted is False

    def test_rejects(self):
        with pytest.raises(InputError):
            classify_geometry([], threshold_k=4)
        with pytest.raises(InputError):
            classify_geometry([line_space([0])], threshold_k=1)

    def test_verdict_serializes(self):
        import json

        v = classify_geometry(lambda n: gen_kappa_space(KappaSpec(2, n)), [1, 2, 3])
        doc = v.to_dict()
        json.dumps(doc)
        assert doc["label"] == "cantor_type" and doc["witnesses"]
