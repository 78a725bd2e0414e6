from fractions import Fraction

import pytest

from pqkannan.axioms import (
    LOPSIDED,
    PARTIAL_METRIC,
    PARTIAL_QUASI_METRIC,
    QUASI_METRIC,
    check_axioms,
    check_derived_lemma,
    check_partial_metric,
    check_symmetrization_invariants,
    classify_structure,
)
from pqkannan.errors import PreconditionError, StrategyError
from pqkannan.sampling import CheckStrategy
from pqkannan.spaces import FiniteSpace, builtin_space, symmetrize

EXACT = CheckStrategy.exhaustive(slack=0)


def test_example_is_lopsided(example):
    rep = check_axioms(example)
    assert rep["1a"].passed and rep["2"].passed and rep["3"].passed
    assert not rep["1b"].passed
    assert classify_structure(example).label == LOPSIDED


def test_1b_witness_is_genuine(example):
    # p(y, y) <= p(x, y) fails at x=1, y=3
    assert example.distance(3, 3) > example.distance(1, 3)


def test_plus_of_example_is_partial_metric(example):
    assert check_partial_metric(symmetrize(example)).passed


def test_derived_lemma_precondition(example):
    with pytest.raises(PreconditionError) as info:
        check_derived_lemma(example)
    assert "1b" in str(info.value)


def test_invariants_hold_on_builtins():
    for name in ("paper_example", "paper_example_punctured"):
        s = builtin_space(name)
        assert check_symmetrization_invariants(s, CheckStrategy.sampled(slack=0)).passed


def test_classification_labels():
    assert classify_structure(FiniteSpace.from_matrix([[0, 1], [2, 0]]), EXACT).label == QUASI_METRIC
    assert classify_structure(FiniteSpace.from_matrix([[1, 2], [2, 1]]), EXACT).label == PARTIAL_METRIC
    pq = FiniteSpace.from_matrix([[1, 2], [3, 1]])
    assert classify_structure(pq, EXACT).label == PARTIAL_QUASI_METRIC


def test_separation_failure():
    s = FiniteSpace.from_matrix([[0, 0], [0, 0]])
    rep = check_axioms(s, EXACT)
    assert not rep["3"].passed
    assert rep["3"].worst.points == (0, 1)


def test_triangle_failure_witness():
    s = FiniteSpace.from_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    rep = check_axioms(s, EXACT)
    assert not rep["2"].passed
    assert rep["2"].worst.points == (0, 1, 2)


def test_exhaustive_needs_finite(example):
    with pytest.raises(StrategyError):
        check_axioms(example, EXACT)


def test_report_json_shape(two_point):
    d = check_axioms(two_point, EXACT).to_dict()
    assert {r["axiom"] for r in d["results"]} == {"1a", "1b", "2", "3"}
    assert all(set(r) >= {"axiom", "pass", "violations", "worst", "checks"} for r in d["results"])


def test_lemma_consistency_on_random_spaces(small_spaces):
    for s in small_spaces:
        assert check_axioms(s, EXACT).passed
        assert check_derived_lemma(s, EXACT).passed
        assert check_symmetrization_invariants(s, EXACT).passed


def test_determinism(example):
    a = check_axioms(example, CheckStrategy.sampled(2000, seed=3)).to_json()
    b = check_axioms(example, CheckStrategy.sampled(2000, seed=3)).to_json()
    assert a == b


@pytest.mark.parametrize("axiom", ["1a", "1b", "2"])
def test_monotone_slack(example, axiom):
    counts = [
        check_axioms(example, CheckStrategy.sampled(2000, seed=5, slack=s))[axiom].violations
        for s in (0.0, 1e-6, 1.0, 1e3)
    ]
    assert counts == sorted(counts, reverse=True)


def test_exact_arithmetic_on_fractions():
    s = FiniteSpace.from_matrix([[Fraction(1, 3), Fraction(1, 3)], [Fraction(2, 3), Fraction(1, 3)]])
    assert check_axioms(s, EXACT).passed
