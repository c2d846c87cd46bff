"""Brute-force reference implementations, independent of the package code.

Everything here works on plain lists of ``Fraction`` distances and uses the
most literal algorithm available, so agreement with the package is evidence
rather than tautology.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations


def chain_closure_components(dist, eps):
    """Components of the ``d <= eps`` relation via Warshall transitive closure."""
    n = len(dist)
    reach = [[dist[i][j] <= eps for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    blocks = {tuple(j for j in range(n) if reach[i][j]) for i in range(n)}
    return sorted(blocks)


def diameter(dist, pts):
    return max((dist[a][b] for a in pts for b in pts), default=Fraction(0))


def ball(dist, center, eps):
    return frozenset(j for j in range(len(dist)) if dist[center][j] <= eps)


def cover_number(dist, subset, delta):
    """Smallest number of blocks of diameter ``<= delta`` partitioning ``subset``.

    A cover by sets of diameter ``<= delta`` can always be shrunk to a
    partition, so this equals the cover number.
    """
    pts = sorted(subset)
    for c in range(1, len(pts) + 1):
        blocks: list[list[int]] = []

        def place(i):
            if i == len(pts):
                return True
            p = pts[i]
            for b in blocks:
                if all(dist[p][q] <= delta for q in b):
                    b.append(p)
                    if place(i + 1):
                        return True
                    b.pop()
            if len(blocks) < c:
                blocks.append([p])
                if place(i + 1):
                    return True
                blocks.pop()
            return False

        if place(0):
            return c
    return 0


def capacity(dist, delta, eps):
    """``(min, max)`` over centers of the cover number of the ``eps``-ball."""
    vals = [cover_number(dist, ball(dist, x, eps), delta) for x in range(len(dist))]
    return min(vals), max(vals)


def exhaustive_oscillation(pairs, sdist, tdist, delta):
    """Max image diameter over every nonempty source subset of diameter ``<= delta``."""
    n = len(sdist)
    images = [[b for a, b in pairs if a == x] for x in range(n)]
    best = Fraction(0)
    for r in range(1, n + 1):
        for A in combinations(range(n), r):
            if diameter(sdist, A) > delta:
                continue
            img = sorted({b for a in A for b in images[a]})
            best = max(best, diameter(tdist, img))
    return best


def kappa_distances(k, n, levels=None):
    """Word space ``{0..k-1}^n``: distance is the level of the last differing coordinate."""
    from itertools import product

    levels = levels or list(range(1, n + 1))
    words = list(product(range(k), repeat=n))
    def d(u, v):
        diff = [i for i in range(n) if u[i] != v[i]]
        return Fraction(levels[diff[-1]]) if diff else Fraction(0)
    return words, [[d(u, v) for v in words] for u in words]


def random_ultrametric(rng: random.Random, n: int, n_levels: int = 5):
    """Nested random merges; the distance is the first level joining two points."""
    levels = sorted(rng.sample(range(1, 60), n_levels))
    block = list(range(n))
    dist = [[Fraction(0)] * n for _ in range(n)]
    for step, lv in enumerate(levels):
        ids = sorted(set(block))
        rng.shuffle(ids)
        groups = {}
        # the last level joins everything, so all distances come from ``levels``
        n_groups = 1 if step == n_levels - 1 else rng.randint(1, max(1, len(ids)))
        for i, b in enumerate(ids):
            groups[b] = i % n_groups if i < n_groups else rng.randrange(n_groups)
        new_block = [groups[b] for b in block]
        for i in range(n):
            for j in range(n):
                if i != j and dist[i][j] == 0 and new_block[i] == new_block[j]:
                    dist[i][j] = Fraction(lv)
        block = new_block
    return dist


def random_metric(rng: random.Random, n: int, max_weight: int = 9):
    """Shortest-path closure of random positive integer weights (always a metric)."""
    w = [[Fraction(0)] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        w[i][j] = w[j][i] = Fraction(rng.randint(1, max_weight))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if w[i][k] + w[k][j] < w[i][j]:
                    w[i][j] = w[i][k] + w[k][j]
    return w


def is_isometry(pairs, sdist, tdist):
    f = dict(pairs)
    return all(tdist[f[a]][f[b]] == sdist[a][b] for a in f for b in f)
