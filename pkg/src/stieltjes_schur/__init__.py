"""Exact Schur-type algorithm for alpha-Stieltjes non-negative definite matrix sequences."""

from .builders import MatSeq
from .matrix import CMatrix, Definiteness, GaussRational, pinv, psd_check, subspace_tests

__all__ = ["CMatrix", "Definiteness", "GaussRational", "MatSeq", "pinv", "psd_check",
           "subspace_tests"]
