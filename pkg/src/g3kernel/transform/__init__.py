"""Proof transformations: weakening, substitution, inversion, separation and
elimination of structural rules."""

from .base import (
    Fresh, InvariantError, TransformError, substitute_derivation, weaken, weaken_by, weaken_to,
)
from .core import NotInvertible, atomic_core, invert
from .equality import decompose_repl, eq_contract, eq_cut
from .separation import separate, separate_cutcs, separate_r_inference
from .structural import (
    CoreNormalizer, EqualityNormalizer, InitialNormalizer, NormalizerError, RNormalizer,
    default_normalizer, eliminate_structural, expand_structural, identity_derivation,
)

__all__ = [
    "Fresh", "InvariantError", "TransformError", "substitute_derivation", "weaken",
    "weaken_by", "weaken_to", "NotInvertible", "atomic_core", "invert", "decompose_repl",
    "eq_contract", "eq_cut", "separate", "separate_cutcs", "separate_r_inference",
    "CoreNormalizer", "EqualityNormalizer", "InitialNormalizer", "NormalizerError",
    "RNormalizer", "default_normalizer", "eliminate_structural", "expand_structural",
    "identity_derivation",
]
