"""Exact workbench for volume rigidity matroids of simplicial complexes."""

from .complex import (
    SimplicialComplex,
    build_example_41,
    complete_complex,
    delete_vertex,
    from_facets,
    link,
    restriction,
)
from .generic_rank import RankConfig, RankReport, generic_rank_B, generic_rank_C, generic_rank_R
from .linalg import RationalMatrix, rank_exact, rank_modp
from .matrices import build_B, build_C, build_L_D_P, build_R

__all__ = [
    "SimplicialComplex",
    "build_example_41",
    "complete_complex",
    "delete_vertex",
    "from_facets",
    "link",
    "restriction",
    "RankConfig",
    "RankReport",
    "generic_rank_B",
    "generic_rank_C",
    "generic_rank_R",
    "RationalMatrix",
    "rank_exact",
    "rank_modp",
    "build_B",
    "build_C",
    "build_L_D_P",
    "build_R",
]
__version__ = "0.1.0"
