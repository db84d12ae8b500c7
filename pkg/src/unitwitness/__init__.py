"""Exact finite witness sets showing that unit-distance preserving maps
from the plane into C^2 preserve a dense family of distances."""

from .tower import (QQ, ComplexTowerElement, Tower, TowerElement, adjoin_sqrt,
                    approximate, gaussian, sign, try_sqrt)
from .witness import (DistanceWord, WitnessSet, build_between, build_canonical,
                      from_kl, value)
from .verifier import AffineMap, VerificationReport, check_map, generate_isometry, theorem_consistency
from .density import ApproximationResult, approximate_distance, witness_for_target

__all__ = [
    "QQ", "Tower", "TowerElement", "ComplexTowerElement", "adjoin_sqrt", "approximate",
    "gaussian", "sign", "try_sqrt", "DistanceWord", "WitnessSet", "build_between",
    "build_canonical", "from_kl", "value", "AffineMap", "VerificationReport", "check_map",
    "generate_isometry", "theorem_consistency", "ApproximationResult",
    "approximate_distance", "witness_for_target",
]
