"""Inner multipliers on truncated Hardy spaces over the polydisc, and checks of
the invariant-subspace characterizations they satisfy."""

from .space import (
    BoxTruncation,
    HardyVector,
    InteriorMask,
    SpaceMismatchError,
    enumerate_basis,
    inner_product,
    interior_mask,
    tensor_join,
    tensor_split,
)
from .inner import (
    DECREASING,
    INCREASING,
    InnerFunction1D,
    InnerFunctionProd,
    InnerSeq,
    divides,
    validate_inner_sequence,
)
from .operators import (
    DEFAULT_TOL,
    TAU_RANK,
    LinOp,
    Subspace,
    TruncationError,
    compress_shift,
    is_doubly_commuting,
    is_invariant,
    mult_op,
    orthonormalize,
    principal_subspace,
    shift_op,
    wandering_generator,
)
from .multipliers import (
    FamilyError,
    ProjectionFamily,
    ThetaMultiplier,
    build_theta,
    check_isometry,
    family_from_frames,
    family_from_inner_chain,
    family_from_partition,
    head_space,
    range_subspace,
    tail_space,
)
from .verify import (
    RudinSpec,
    Scenario,
    Thm41Spec,
    Verdict,
    build_rudin,
    check_lemma31,
    check_remark_k,
    check_thm32a,
    check_thm32b,
    check_thm33,
    check_thm41,
    find_eta_monomial,
    run_check,
)
from .harness import gallery, generate, parse_scenario, run_data, run_file

__version__ = "0.1.0"
