"""Exact computations with compatible O-operators on associative algebras.

Everything is basis-indexed and exact over the rationals: structure
constants, operators and cochains are numpy object arrays of ``int`` and
``Fraction`` entries.  See the README for the tensor conventions.
"""

from .algebra import (
    Algebra,
    Bimodule,
    CompatibleAlgebra,
    CompatibleBimodule,
    adjoint_bimodule,
    check_associative,
    check_bimodule,
    check_compatible_associative,
    check_compatible_bimodule,
    coadjoint_bimodule,
    diagonal_algebra,
    dual_numbers,
    ground_field,
)
from .cochains import (
    Context,
    MixedMap,
    MMap,
    TupleCochain,
    derived_bracket,
    gerstenhaber,
    lifted_bracket,
    theta,
)
from .cohomology import (
    CAssComplex,
    OComplex,
    PairComplex,
    check_square_zero,
    coboundary_matrix,
    cohomology,
    cohomology_dim,
    delta_cass,
    delta_pair,
    delta_T,
)
from .linalg import ContainmentError, Matrix, kernel_basis, rank, solve
from .linfty import COAComplex, LInftyElement, mc_defect, structure_element, twisted_differential
from .operators import (
    LinOp,
    OperatorPair,
    aybe_check,
    compatible_aybe_check,
    induced_compatible_algebra,
    induced_compatible_bimodule,
    is_compatible_pair,
    is_ooperator,
    nijenhuis_check,
    rb_from_tensor,
    sharp,
)
from .report import CheckReport, Defect, DomainError
from .tensors import ShapeError, parse_scalar

__version__ = "0.1.0"

__all__ = [
    "adjoint_bimodule",
    "Algebra",
    "aybe_check",
    "Bimodule",
    "CAssComplex",
    "check_associative",
    "check_bimodule",
    "check_compatible_associative",
    "check_compatible_bimodule",
    "check_square_zero",
    "CheckReport",
    "COAComplex",
    "coadjoint_bimodule",
    "coboundary_matrix",
    "cohomology",
    "cohomology_dim",
    "compatible_aybe_check",
    "CompatibleAlgebra",
    "CompatibleBimodule",
    "ContainmentError",
    "Context",
    "Defect",
    "delta_cass",
    "delta_pair",
    "delta_T",
    "derived_bracket",
    "diagonal_algebra",
    "DomainError",
    "dual_numbers",
    "gerstenhaber",
    "ground_field",
    "induced_compatible_algebra",
    "induced_compatible_bimodule",
    "is_compatible_pair",
    "is_ooperator",
    "kernel_basis",
    "lifted_bracket",
    "LInftyElement",
    "LinOp",
    "Matrix",
    "mc_defect",
    "MixedMap",
    "MMap",
    "nijenhuis_check",
    "OComplex",
    "OperatorPair",
    "PairComplex",
    "parse_scalar",
    "rank",
    "rb_from_tensor",
    "ShapeError",
    "sharp",
    "solve",
    "structure_element",
    "theta",
    "TupleCochain",
    "twisted_differential",
]
