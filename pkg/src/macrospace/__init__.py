"""Coarse geometry of finite metric spaces at desk scale.

Component towers, ball-capacity profiles, tower isomorphisms and certified
equivalence/embedding/surjection constructions onto truncated macro-spaces.
"""
from .constructions import (
    ScaleSchedule,
    baire_equivalence,
    embed_baire,
    find_level_schedule,
    surjection_onto,
    verify_certificate,
)
from .covers import (
    CapacityProfile,
    CoverNumber,
    GeometryVerdict,
    classify_geometry,
    cov_profile,
    min_cover_number,
)
from .metric_core import (
    FiniteMetricSpace,
    KappaSpec,
    ScalePartition,
    ball,
    epsilon_components,
    gen_kappa_space,
    is_macro_connected_at,
    is_ultrametric,
    isometric_homogeneity_probe,
    line_space,
    mesh_profile,
    validate_metric,
)
from .morphisms import (
    TowerMorphism,
    boundary_multimap,
    build_embedding,
    build_isomorphism,
    validate_morphism,
)
from .multimap import MultiMap, OscillationTable, check_equivalence, compose, invert, oscillation
from .towers import (
    Tower,
    boundary_space,
    canonical_map,
    canonical_tower,
    degrees,
    is_homogeneous,
    is_pruned,
    level_subtower,
)

__version__ = "0.1.0"
