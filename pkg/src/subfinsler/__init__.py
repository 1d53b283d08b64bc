"""Abnormal extremals of left-invariant sub-Finsler quasimetrics on four-dimensional Lie groups."""

from .catalog import AlgebraFamily, build_algebra, catalog_k, family
from .lie_core import StructureConstants, Subspace, check_jacobi, generates

__all__ = [
    "AlgebraFamily", "StructureConstants", "Subspace", "build_algebra", "catalog_k",
    "check_jacobi", "family", "generates",
]
