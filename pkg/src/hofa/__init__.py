"""Finite higher-order Fourier analysis on products of cyclic groups."""

from .cube import (
    Automorphism,
    FaceAction,
    apply_face_action,
    commutator_check,
    cube_membership,
    spider_map,
    tilde_U,
)
from .decomposition import (
    DecompositionResult,
    fourier_truncate,
    matching_pursuit,
    relative_gram_schmidt,
)
from .functions import (
    GroupFunction,
    conditional_expectation,
    delta,
    fourier,
    inner,
    inverse_fourier,
    norm,
    shift,
)
from .gowers import (
    MultiFunction,
    gowers_U,
    octahedral_norm,
    quasirandom_test,
    slice_at,
    slice_span_dim,
    sum_lift,
)
from .groups import (
    Coset,
    FiniteAbelianGroup,
    GroupMismatchError,
    SizeCapError,
    linear_character,
    make_group,
    subgroup_cosets,
    sum_map,
)
from .kernels import (
    Kernel,
    adjoint,
    ck_membership,
    compose,
    hs_inner,
    pair_kernel,
    planted_phase_recovery,
    spectral_decomposition,
)
from .partitions import (
    Partition,
    coset_projection,
    independence_check,
    join,
    relative_orthonormal_check,
    weak_orthogonality_check,
)
from .phases import (
    PolynomialPhase,
    correlation_spectrum,
    dual_representatives,
    enumerate_phases,
    phase_delta,
    phase_eval,
    precocycle_check,
)

__version__ = "0.1.0"

__all__ = [
    "Automorphism",
    "Coset",
    "DecompositionResult",
    "FaceAction",
    "FiniteAbelianGroup",
    "GroupFunction",
    "GroupMismatchError",
    "Kernel",
    "MultiFunction",
    "Partition",
    "PolynomialPhase",
    "SizeCapError",
    "adjoint",
    "apply_face_action",
    "ck_membership",
    "commutator_check",
    "compose",
    "conditional_expectation",
    "correlation_spectrum",
    "coset_projection",
    "cube_membership",
    "delta",
    "dual_representatives",
    "enumerate_phases",
    "fourier",
    "fourier_truncate",
    "gowers_U",
    "hs_inner",
    "independence_check",
    "inner",
    "inverse_fourier",
    "join",
    "linear_character",
    "make_group",
    "matching_pursuit",
    "norm",
    "octahedral_norm",
    "pair_kernel",
    "phase_delta",
    "phase_eval",
    "planted_phase_recovery",
    "precocycle_check",
    "quasirandom_test",
    "relative_gram_schmidt",
    "relative_orthonormal_check",
    "shift",
    "slice_at",
    "slice_span_dim",
    "spectral_decomposition",
    "spider_map",
    "subgroup_cosets",
    "sum_lift",
    "sum_map",
    "tilde_U",
    "weak_orthogonality_check",
]
