import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqkannan.errors import DependencyError, KannanConstantError, MappingError, SpaceParseError
from pqkannan.kannan import (
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
from pqkannan.oracle import enumerate_self_maps, min_kannan_constant
from pqkannan.sampling import CheckStrategy

EXACT = CheckStrategy.exhaustive(slack=0)


def test_example_estimate(example):
    est = estimate_lambda(example, ExampleMap(), CheckStrategy.sampled(100_000))
    assert est.feasible and est.is_kannan
    assert est.lambda_hat <= 2 / 15 + 1e-9
    assert est.checks == 200_000


def test_example_check(example):
    assert check_kannan(example, ExampleMap(), 0.1334).passed
    assert check_kannan(example, ExampleMap(), Fraction(2, 15)).passed


def test_too_small_constant_fails(example):
    rep = check_kannan(example, ExampleMap(), 0.1, CheckStrategy.sampled(20_000))
    assert not rep.passed
    w = rep["kannan"].worst
    assert w.lhs > w.rhs


@pytest.mark.parametrize("bad", [0.25, -0.01, 1.0, math.nan, math.inf, "x", True])
def test_constant_range(bad):
    with pytest.raises(KannanConstantError):
        KannanConstant(bad)


def test_constant_rate():
    c = KannanConstant(Fraction(2, 15))
    assert c.gamma == Fraction(4, 15)
    assert c.rate == Fraction(4, 11)


def test_identity_is_infeasible(two_point):
    est = estimate_lambda(two_point, TableMap([0, 1]), EXACT)
    assert not est.feasible and not est.is_kannan
    assert est.lambda_hat == math.inf


def test_identity_ratio_on_example_is_large(example):
    est = estimate_lambda(example, FunctionMap(lambda x: x), CheckStrategy.sampled(20_000))
    assert est.lambda_hat > 0.25


def test_swap_map(two_point):
    est = estimate_lambda(two_point, TableMap([1, 0]), EXACT)
    assert est.lambda_hat == Fraction(2, 3)
    assert est.lambda_hat == min_kannan_constant(two_point, TableMap([1, 0])).lambda_min


def test_map_leaving_space(punctured):
    with pytest.raises(MappingError) as info:
        ExampleMap().apply(punctured, np.array([2.0, 0.5]))
    assert info.value.witness == (0.5, 0.0)
    strat = CheckStrategy.sampled(1000, upper_cap=1.0)
    with pytest.raises(MappingError):
        check_kannan(punctured, ExampleMap(), 0.2, strat)


def test_table_validation(two_point):
    with pytest.raises(MappingError):
        check_kannan(two_point, TableMap([0, 2]), 0.1, EXACT)
    with pytest.raises(MappingError):
        check_kannan(two_point, TableMap([0]), 0.1, EXACT)
    with pytest.raises(SpaceParseError):
        load_mapping('{"table": [0, "a"]}')
    assert load_mapping('{"table": [1, 1]}').table == (1, 1)


def test_named_maps():
    assert named_map("example_map").name == "example_map"
    with pytest.raises(LookupError):
        named_map("missing")


def test_lemma2_dependency(two_point):
    with pytest.raises(DependencyError):
        check_lemma2(two_point, TableMap([1, 0]), 0.2, EXACT)


def test_lemma2_example(example):
    rep = check_lemma2(example, ExampleMap(), Fraction(2, 15))
    assert rep.passed


def test_lemma2_implication_on_random_spaces(small_spaces):
    for s in small_spaces:
        for m in enumerate_self_maps(s):
            b = min_kannan_constant(s, m)
            if b.is_kannan:
                assert check_lemma2(s, m, b.lambda_min, EXACT).passed


def test_oracle_checker_agreement(small_spaces):
    for s in small_spaces:
        for m in enumerate_self_maps(s):
            b = min_kannan_constant(s, m)
            est = estimate_lambda(s, m, EXACT)
            assert est.feasible == b.feasible
            if b.feasible:
                assert est.lambda_hat == b.lambda_min
            if b.is_kannan:
                assert check_kannan(s, m, b.lambda_min, EXACT).passed


@settings(max_examples=25, deadline=None)
@given(st.floats(0.134, 0.2499))
def test_kannan_monotone(lam):
    from pqkannan.spaces import builtin_space

    assert check_kannan(builtin_space("paper_example"), ExampleMap(), lam, CheckStrategy.sampled(2000)).passed


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_estimator_soundness(seed):
    from pqkannan.spaces import builtin_space

    s = builtin_space("paper_example")
    strat = CheckStrategy.sampled(2000, seed=seed)
    est = estimate_lambda(s, ExampleMap(), strat)
    assert check_kannan(s, ExampleMap(), min(est.lambda_hat + 1e-12, 0.2499), strat).passed


def test_estimate_deterministic(example):
    a = estimate_lambda(example, ExampleMap(), CheckStrategy.sampled(5000, seed=9))
    b = estimate_lambda(example, ExampleMap(), CheckStrategy.sampled(5000, seed=9))
    assert a == b
