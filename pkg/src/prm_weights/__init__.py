"""prm-weights package.

Minimum and next-to-minimal weights of affine and projective Reed-Muller codes, predicted and verified.
"""

from __future__ import annotations

from prm_weights.codes import CodeSpec, Family, encode, exhaustive_low_weights, randomized_low_weight_search
from prm_weights.exceptions import PrmWeightsError
from prm_weights.gf import FieldSpec, field_of_order, make_field
from prm_weights.poly import Polynomial, parse_polynomial
from prm_weights.weights import WeightPrediction, w1_prm, w1_rm, w2_prm, w2_rm

__all__: list[str] = [
    "CodeSpec",
    "Family",
    "FieldSpec",
    "Polynomial",
    "PrmWeightsError",
    "WeightPrediction",
    "encode",
    "exhaustive_low_weights",
    "field_of_order",
    "make_field",
    "parse_polynomial",
    "randomized_low_weight_search",
    "w1_prm",
    "w1_rm",
    "w2_prm",
    "w2_rm",
]
