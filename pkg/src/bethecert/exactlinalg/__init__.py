"""Exact scalars, matrices, rational operator matrices and span certificates."""

from .scalars import GaussQ, ONE, ZERO, I, as_gq, parse_scalar, format_scalar, pythagorean_unit
from .poly import Poly, poly_gcd, poly_lcm
from .matrix import (
    Matrix,
    rank,
    rref,
    nullspace,
    solve,
    charpoly,
    squarefree_charpoly_certificate,
    commutator,
    random_gaussian_rational,
)
from .ratop import RatOpMatrix, ratop_mul, ratop_inverse, RatOpInversionError
from .spans import (
    EchelonBasis,
    Subspace,
    OperatorSpan,
    KrylovResult,
    krylov_span,
    span_equal,
    algebra_closure,
    principal_angles,
    restrict_operator,
    DependentBasisError,
)
