"""Exact symbolic checks of the Drinfeld realization of quantum affine algebras.

Modules: scalar (coefficient field), cartan (affine Cartan data), epsseq
(ε-sequences), freealg (free algebra and q-brackets), drinfeld (generators
and relations), reduce (normal ordering with certificates), isomap
(Chevalley images and their goals), replay (derivation scripts), cli.
"""
from .cartan import AffineType, affine_cartan
from .drinfeld import DrinfeldAlgebra, Folding, TwistedAlgebra
from .epsseq import builtin_sequence, validate_sequence
from .freealg import Element, bracket, nested_bracket
from .isomap import certify_goals, chevalley_images, twisted_images
from .reduce import ReductionConfig, Reducer, certify_zero
from .replay import bundled_corpus, replay
from .scalar import Scalar, parse_scalar

__all__ = ["AffineType", "affine_cartan", "DrinfeldAlgebra", "TwistedAlgebra", "Folding",
           "builtin_sequence", "validate_sequence", "Element", "bracket", "nested_bracket",
           "certify_goals", "chevalley_images", "twisted_images", "ReductionConfig", "Reducer",
           "certify_zero", "bundled_corpus", "replay", "Scalar", "parse_scalar"]
