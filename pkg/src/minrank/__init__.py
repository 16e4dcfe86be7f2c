"""Minors modeling of MinRank over prime fields, with solving-degree measurement."""

from .bounds import (
    BoundReport,
    ProblemClass,
    a_invariant,
    bound_degd,
    bound_linear,
    bound_main,
    bound_report,
    bound_square,
    classify,
    krull_dim,
    regularity,
)
from .field import FieldElement, FieldPrime
from .gbengine import (
    EngineAbort,
    GroebnerBasis,
    SolvingDegreeReport,
    buchberger,
    is_zero_dimensional,
    macaulay_step,
    reduce,
    solving_degree,
)
from .multipoly import Polynomial, degrevlex_cmp, parse_polynomial
from .polymatrix import (
    DegreeMatrix,
    MinorsSystem,
    MinRankInstance,
    PolyMatrix,
    check_homogenization_commutes,
    degree_matrix_from_offsets,
    homogenize_matrix,
    minor_determinant,
    minors,
    random_instance,
    validate_degree_matrix,
)

__version__ = "0.1.0"
