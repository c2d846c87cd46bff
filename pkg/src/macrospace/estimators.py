"""scikit-learn style wrappers around the core routines.

Inputs are precomputed distance matrices (square, symmetric, zero diagonal);
they are validated once in ``fit`` and converted to exact rationals.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .covers import cov_profile
from .errors import InputError
from .metric_core import FiniteMetricSpace, as_distance, epsilon_components, validate_metric
from .towers import canonical_tower


def check_space(X, labels=None) -> FiniteMetricSpace:
    """Coerce ``X`` (a space or a square distance matrix) to a validated space."""
    if isinstance(X, FiniteMetricSpace):
        return X
    if isinstance(X, np.ndarray) and X.dtype.kind == "f" and not np.all(np.isfinite(X)):
        raise InputError("distance matrix contains NaN or infinity")
    rows = X.tolist() if isinstance(X, np.ndarray) else [list(r) for r in X]
    if not rows or any(len(r) != len(rows) for r in rows):
        raise InputError("distance matrix must be square and nonempty")
    if labels is None:
        labels = list(range(len(rows)))
    elif len(labels) != len(rows):
        raise InputError("one label per row is required")
    return validate_metric(labels, rows)


def check_scales(scales) -> tuple:
    values = tuple(as_distance(s) for s in np.atleast_1d(np.asarray(scales, dtype=object)))
    if not values:
        raise InputError("at least one scale is required")
    if any(a >= b for a, b in zip(values, values[1:])):
        raise InputError("scales must be strictly increasing")
    return values


class ScaleComponents(ClusterMixin, BaseEstimator):
    """Cluster points into the components of the ``scale``-chain relation.

    Two points share a label iff a chain of steps of length at most
    ``scale`` joins them.  Labels are numbered by smallest member.
    """

    def __init__(self, scale=1):
        self.scale = scale

    def fit(self, X, y=None):
        space = check_space(X)
        partition = epsilon_components(space, as_distance(self.scale))
        labels = np.empty(space.size, dtype=np.int64)
        for k, block in enumerate(partition.blocks):
            labels[list(block)] = k
        self.space_ = space
        self.labels_ = labels
        self.n_clusters_ = len(partition.blocks)
        self.mesh_ = partition.mesh
        return self


class CanonicalTowerTransformer(TransformerMixin, BaseEstimator):
    """Encode each point by its component index at every level.

    ``transform`` returns an ``(n_points, n_levels)`` integer array; column
    ``l`` is the node position on tower level ``l``.  Two rows agree from
    column ``l`` on iff the points are joined at scale ``levels[l]``.
    """

    def __init__(self, levels=(1, 2, 3)):
        self.levels = levels

    def fit(self, X, y=None):
        space = check_space(X)
        self.space_ = space
        self.tower_ = canonical_tower(space, check_scales(self.levels))
        return self

    def transform(self, X):
        check_is_fitted(self, "tower_")
        if check_space(X) != self.space_:
            raise InputError("transform only encodes the fitted space")
        tower = self.tower_
        bottom_of = {p: j for j, node in enumerate(tower.nodes[0]) for p in node}
        out = np.empty((self.space_.size, tower.n_levels), dtype=np.int64)
        for p in range(self.space_.size):
            pos = bottom_of[p]
            for l in range(tower.n_levels):
                out[p, l] = pos
                if l < tower.top:
                    pos = tower.parent[l][pos]
        return out


class CapacityProfiler(BaseEstimator):
    """Min/max cover numbers of ``delta``-sets needed for ``epsilon``-balls.

    ``profiles_`` maps each scale pair ``(delta, epsilon)`` with
    ``delta < epsilon`` from ``scales`` to a capacity profile.
    """

    def __init__(self, scales=(1, 2), effort_budget=None):
        self.scales = scales
        self.effort_budget = effort_budget

    def fit(self, X, y=None):
        space = check_space(X)
        scales = check_scales(self.scales)
        self.profiles_ = {
            (d, e): cov_profile(space, d, e, self.effort_budget)
            for i, d in enumerate(scales)
            for e in scales[i + 1 :]
        }
        self.exact_ = all(p.exact for p in self.profiles_.values())
        return self

    def predict(self, X=None):
        """Rows ``(cov_min, cov_max)`` in ``profiles_`` order (upper bounds if inexact)."""
        check_is_fitted(self, "profiles_")
        return np.array(
            [[p.min_over_centers.upper, p.max_over_centers.upper] for p in self.profiles_.values()],
            dtype=np.int64,
        )
