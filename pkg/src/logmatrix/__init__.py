"""p-adic logarithmic matrices of Wach-module families and signed decompositions."""

__version__ = "0.1.0"

from .padics import HeckeRootPair, PadicContext, PadicScalar, hecke_roots, make_context
from .series1 import GrowthReport, SeriesOneVar, norm_profile
from .special_series import CharacterPoint, eval_at_character
from .wach import LogMatrixPackage, build_package, verify_log_matrix
from .decompose import AdmissiblePair, SignedPair, decompose_pair, recompose
from .twovar import SignedQuadruple, TwoVarSeries, decompose_two_stage, recompose_quadruple
from .estimator import SignedDecomposer

__all__ = [
    "__version__", "PadicContext", "PadicScalar", "HeckeRootPair", "hecke_roots", "make_context",
    "SeriesOneVar", "GrowthReport", "norm_profile", "CharacterPoint", "eval_at_character",
    "LogMatrixPackage", "build_package", "verify_log_matrix", "AdmissiblePair", "SignedPair",
    "decompose_pair", "recompose", "SignedQuadruple", "TwoVarSeries", "decompose_two_stage",
    "recompose_quadruple", "SignedDecomposer",
]
