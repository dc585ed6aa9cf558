"""Exact Hopf-Galois computations for matrix-algebra embeddings in Bratteli diagrams."""

from .brat import BratteliLevel, analyze, decompose, parse_level, render_level
from .bundles import (
    back_map,
    build,
    build_case1,
    build_case2,
    build_case3,
    closed_form_connection,
    theorem1_connection,
    trivialization_Mn,
    verify_strong_connection,
)
from .calculus import calculus_report, classify_m2, matrix_calculus
from .exactnum import CycNum, root_of_unity
from .galois import SubalgebraInclusion, galois_verdict
from .hopf import FiniteAbelianGroup, FnHopfAlgebra
from .multimatrix import MultiMatrixAlgebra

__version__ = "0.1.0"
