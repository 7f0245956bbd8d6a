"""Workbench for quantum weighted projective spaces, lens spaces and real analogues.

Exact layer: *-algebra presentations with normal forms over Q(q), graded
structure and resolution-of-identity certificates, and integer K-theory.
Numerical layer: truncated Hilbert-space representations with residual,
sector, eigenvalue and Fredholm-trace checks.
"""

from qwp.scalar import BigRational, PoleError, QScalar, qscalar_arith, qscalar_eval
from qwp.star_algebra import (
    AlgebraElement,
    AlgebraPresentation,
    InvalidGeneratorError,
    Monomial,
    ParameterError,
    adjoint,
    defining_relations,
    make_named_element,
    normalize,
    z,
    z_star,
)
from qwp.grading import (
    INHOMOGENEOUS,
    AnsatzExhaustionError,
    GradingSpec,
    ResolutionOfIdentity,
    TowerSpec,
    bezout_lens_resolution,
    check_strong_grading,
    compose_resolutions,
    compose_tower_resolutions,
    degree,
    homogeneous_components,
    verify_resolution,
    weighted_resolution,
)
from qwp.ktheory import (
    FGAbelianGroup,
    IntMatrix,
    LensDescriptor,
    SixTermInput,
    determinantal_invariants,
    group_ops,
    gysin_matrix,
    lens_k_groups,
    phi_matrix,
    real_teardrop_k,
    six_term_k_groups,
    smith_normal_form,
    teardrop_k_groups,
)
from qwp.representations import (
    FredholmModule,
    RepSpec,
    TruncatedOperator,
    TruncatedSpace,
    apply_element,
    eigenvalue_distinctness,
    fredholm_trace,
    quotient_consistency,
    relation_residual,
    rep_generator,
    sector_split_check,
)
from qwp.parsing import ParseError, parse_expression, parse_scalar
from qwp.cli import RunConfig, SpaceDescriptor, report_schema, run_command

__all__ = [
    "BigRational",
    "PoleError",
    "QScalar",
    "qscalar_arith",
    "qscalar_eval",
    "AlgebraElement",
    "AlgebraPresentation",
    "InvalidGeneratorError",
    "Monomial",
    "ParameterError",
    "adjoint",
    "defining_relations",
    "make_named_element",
    "normalize",
    "z",
    "z_star",
    "INHOMOGENEOUS",
    "AnsatzExhaustionError",
    "GradingSpec",
    "ResolutionOfIdentity",
    "TowerSpec",
    "bezout_lens_resolution",
    "check_strong_grading",
    "compose_resolutions",
    "compose_tower_resolutions",
    "degree",
    "homogeneous_components",
    "verify_resolution",
    "weighted_resolution",
    "FGAbelianGroup",
    "IntMatrix",
    "LensDescriptor",
    "SixTermInput",
    "determinantal_invariants",
    "group_ops",
    "gysin_matrix",
    "lens_k_groups",
    "phi_matrix",
    "real_teardrop_k",
    "six_term_k_groups",
    "smith_normal_form",
    "teardrop_k_groups",
    "FredholmModule",
    "RepSpec",
    "TruncatedOperator",
    "TruncatedSpace",
    "apply_element",
    "eigenvalue_distinctness",
    "fredholm_trace",
    "quotient_consistency",
    "relation_residual",
    "rep_generator",
    "sector_split_check",
    "ParseError",
    "parse_expression",
    "parse_scalar",
    "RunConfig",
    "SpaceDescriptor",
    "report_schema",
    "run_command",
]

__version__ = "0.1.0"
