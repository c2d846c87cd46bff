"""JSON formats for spaces, multi-maps and capacity profiles.

Space file: ``{"labels": [...], "dist": [[num or "p/q", ...], ...]}`` or a
generator spec ``{"kappa": {"k": .., "n": .., "levels": [..]}}``.  Tuple
labels are written as JSON arrays and read back as tuples.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import InputError
from .metric_core import (
    FiniteMetricSpace,
    KappaSpec,
    as_distance,
    format_distance,
    gen_kappa_space,
    validate_metric,
)
from .multimap import MultiMap, OscillationTable

FORMAT_VERSION = "macrospace/1"


def _dump_label(label):
    if isinstance(label, tuple):
        return [_dump_label(v) for v in label]
    return label


def _load_label(label):
    if isinstance(label, list):
        return tuple(_load_label(v) for v in label)
    return label


def space_to_json(space: FiniteMetricSpace) -> dict:
    return {
        "labels": [_dump_label(l) for l in space.labels],
        "dist": [[format_distance(Fraction(int(v), space.denominator)) for v in row] for row in space.numerators],
    }


def space_from_json(data) -> FiniteMetricSpace:
    """Parse and validate a space document (explicit matrix or kappa generator)."""
    if not isinstance(data, dict):
        raise InputError("space document must be a JSON object")
    if "kappa" in data:
        spec = data["kappa"]
        try:
            kspec = KappaSpec(int(spec["k"]), int(spec["n"]), spec.get("levels"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed kappa spec: {exc}") from exc
        return gen_kappa_space(kspec)
    try:
        labels = [_load_label(l) for l in data["labels"]]
        matrix = data["dist"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"space document needs 'labels' and 'dist': {exc}") from exc
    if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
        raise InputError("'dist' must be a list of rows")
    return validate_metric(labels, matrix)


def read_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def load_space(path) -> FiniteMetricSpace:
    return space_from_json(read_json(path))


def dumps(data) -> str:
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def multimap_to_json(phi: MultiMap) -> dict:
    return {"pairs": [list(p) for p in phi.sorted_pairs()]}


def multimap_from_json(data, source: FiniteMetricSpace, target: FiniteMetricSpace) -> MultiMap:
    try:
        pairs = frozenset((int(a), int(b)) for a, b in data["pairs"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed multimap: {exc}") from exc
    return MultiMap(source, target, pairs)


def table_to_json(table: OscillationTable) -> list:
    return [[format_distance(d), format_distance(w)] for d, w in table]


def table_from_json(rows) -> OscillationTable:
    try:
        return OscillationTable(tuple((as_distance(d), as_distance(w)) for d, w in rows))
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed oscillation table: {exc}") from exc


def schedule_to_json(values) -> list:
    return [format_distance(v) for v in values]


def profile_to_dict(profile, member=None) -> dict:
    out = {
        "delta": format_distance(profile.delta),
        "epsilon": format_distance(profile.epsilon),
        "cov_min_lower": profile.min_over_centers.lower,
        "cov_min_upper": profile.min_over_centers.upper,
        "cov_max_lower": profile.max_over_centers.lower,
        "cov_max_upper": profile.max_over_centers.upper,
        "exact": profile.exact,
    }
    if member is not None:
        out["member"] = member
    return out
