"""Exact tuple ranks, congruence normal forms and orbit-closure witnesses."""

from .errors import CongruenceError
from .field import FieldConfig, FieldElem, field_arith, sample, sqrt
from .free_subspace import FreeSubspace, find_free_subspace, find_free_vector, quotient_tuple
from .laurent import LaurentPoly, eval_at_zero, is_unit, laurent_arith
from .matrix import (
    LaurentMatrix,
    Matrix,
    SymKind,
    basis_completion,
    congruence_apply,
    det,
    inverse,
    kernel,
    rank,
    solve,
    sym_skew_decompose,
)
from .normal_form import (
    BlockPattern,
    block_normal_form,
    closure_scaling_curve,
    rank_r_zero_corner_witness,
    skew_canonical,
    symmetric_canonical,
)
from .tuple_rank import MatrixTuple, RankCertificate, minimal_truncation, rank_at, tuple_rank, tuple_rank_exhaustive
from .witness import (
    ConfigPoint,
    TargetCorner,
    VerificationReport,
    WitnessCurve,
    phi_parametrize,
    required_rank,
    verify_witness,
    witness_full,
    witness_sym,
)

__all__ = [name for name in dir() if not name.startswith("_")]
