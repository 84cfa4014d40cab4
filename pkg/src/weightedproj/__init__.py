"""Projections, least squares and generalized inverses under PSD seminorms."""

from ._validation import InputError, PreconditionError
from .numkernel import (
    BlockDecomposition,
    PsdOperator,
    Subspace,
    ToleranceConfig,
    assemble_from_blocks,
    block_decompose,
    column_space,
    null_space,
    orthogonal_projector,
    pseudo_inverse,
    psd_sqrt,
    rank_factorization,
    reduced_solution,
    seminorm,
    subspace_ominus,
)
from .projections import (
    AffineOperatorFamily,
    CheckReport,
    classify_operator,
    compatibility_certificate,
    distinguished_projection,
    invertible_case_projection,
    kernel_intersection,
    minimality_report,
    projection_family,
    weighted_projection_family,
)
from .splines import AffineVectorFamily, spline_set, weighted_distance
from .winverse import (
    InverseKind,
    a1a2_inverse,
    a_inverse_family,
    a_lss_solve,
    inverse_check,
    restricted_a_inverse,
    weighted_generalized_inverse,
)

__version__ = "0.1.0"
