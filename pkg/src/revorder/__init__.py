"""Pseudoinverses of matrix products and the reverse-order law pinv(AB) = pinv(B) pinv(A)."""
from ._accel import backend
from .errors import (
    AmbientMismatch,
    BlockShapeMismatch,
    DimensionMismatch,
    EmptySubspace,
    MatrixFormatError,
    NotOrthonormal,
    NotUnitary,
    PlanInfeasible,
    RevorderError,
    RolNotSatisfied,
)
from .geninv import InverseClass, penrose_conditions, pinv, pinv_oracle, rank_factorization
from .matcore import adjoint, as_matrix, read_matrix, write_matrix
from .rolkit import (
    ConstructionPlan,
    RolReport,
    aligned_svds,
    block_form_check,
    classify_123_124,
    classify_pair,
    construct_pair_12,
    construct_pair_123,
    construct_pair_124,
    construct_partner,
    construct_partner_left,
    derived_rols_check,
    full_report,
    greville_check,
    rol_and_twelve,
    rol_residual,
    twelve_way_suite,
)
from .subgeo import Subspace, intersect, null_basis, principal_angles, range_basis
from .svdkit import SvdFactors, compute_svd, random_unitary, reparametrize_svd, svdvals

__version__ = "0.1.0"
