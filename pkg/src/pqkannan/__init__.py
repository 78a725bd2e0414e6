"""Partial quasi-metric spaces, p-Kannan mappings and their fixed points."""

__version__ = "0.1.0"

from .axioms import (
    check_axioms,
    check_derived_lemma,
    check_partial_metric,
    check_symmetrization_invariants,
    classify_structure,
)
from .completeness import (
    CounterexampleMap,
    SequenceSpec,
    audit_counterexample,
    build_counterexample_map,
    classify_sequence,
    probe_completeness,
)
from .kannan import (
    ExampleMap,
    FunctionMap,
    KannanConstant,
    TableMap,
    check_kannan,
    check_lemma2,
    estimate_lambda,
    load_mapping,
    named_map,
)
from .oracle import (
    enumerate_self_maps,
    exhaustive_kannan_audit,
    min_kannan_constant,
    random_spaces,
    random_valid_finite_space,
)
from .reports import VerificationReport
from .sampling import CheckStrategy
from .solver import iterate, rate_bound_check, uniqueness_probe, verify_fixed_point
from .spaces import (
    AnalyticSpace,
    FiniteSpace,
    Interval,
    ball_contains,
    builtin_space,
    conjugate,
    eval_distance,
    load_finite_space,
    symmetrize,
)
