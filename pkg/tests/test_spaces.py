import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqkannan.errors import DomainError, SpaceParseError, UnknownNameError
from pqkannan.spaces import (
    FiniteSpace,
    ball_contains,
    builtin_space,
    conjugate,
    eval_distance,
    finite_space_document,
    load_finite_space,
    read_finite_space,
    symmetrize,
)

nonneg = st.floats(0, 1e6, allow_nan=False)


def test_example_values(example):
    assert eval_distance(example, 3, 1) == 5
    assert eval_distance(example, 1, 3) == 1
    assert eval_distance(conjugate(example), 3, 1) == 1
    assert eval_distance(symmetrize(example), 3, 1) == 6
    assert eval_distance(symmetrize(example), 2, 2) == 4


def test_domain_checks(example, punctured):
    with pytest.raises(DomainError):
        eval_distance(example, -1, 0)
    with pytest.raises(DomainError):
        eval_distance(punctured, 0, 1)
    assert eval_distance(punctured, 0.5, 0.25) == 0.75


def test_ball(example):
    assert ball_contains(example, 1, 0.5, 0.7)
    assert not ball_contains(example, 1, 0.5, 0.4)
    with pytest.raises(ValueError):
        ball_contains(example, 1, 0, 1)


def test_unknown_builtin():
    with pytest.raises(UnknownNameError):
        builtin_space("nope")


def test_annotations(example, punctured):
    assert example.annotations["p_sequentially_complete"] is True
    assert punctured.annotations["p_sequentially_complete"] is False


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ({"points": ["a", "b"], "matrix": [[0, 1], [2]]}, "not square"),
        ({"points": ["a", "b"], "matrix": [[0, -1], [2, 0]]}, "negative"),
        ({"points": ["a", "b"], "matrix": [[0, "a"], [2, 0]]}, None),
        ({"points": ["a"], "matrix": [[0, 1], [2, 0]]}, None),
        ({"matrix": [[0]]}, "missing"),
        ("{not json", None),
    ],
)
def test_load_rejects(doc, fragment):
    with pytest.raises(SpaceParseError, match=fragment):
        load_finite_space(doc)


def test_roundtrip(tmp_path, two_point):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(finite_space_document(two_point)))
    again = read_finite_space(path)
    assert np.array_equal(again.matrix, two_point.matrix)
    assert eval_distance(again, 1, 0) == 2


def test_finite_conjugate_is_transpose(two_point):
    assert np.array_equal(conjugate(two_point).matrix, two_point.matrix.T)
    assert np.array_equal(symmetrize(two_point).matrix, two_point.matrix + two_point.matrix.T)


@given(nonneg, nonneg)
def test_involution(x, y):
    s = builtin_space("paper_example")
    assert eval_distance(conjugate(conjugate(s)), x, y) == eval_distance(s, x, y)


@given(nonneg, nonneg)
def test_plus_symmetry(x, y):
    s = symmetrize(builtin_space("paper_example"))
    assert eval_distance(s, x, y) == eval_distance(s, y, x)


@given(nonneg, st.floats(1e-6, 1e3))
def test_ball_reflexive_when_radius_positive(x, r):
    assert ball_contains(builtin_space("paper_example"), x, r, x)


@given(nonneg)
def test_self_distance_doubles(x):
    s = builtin_space("paper_example")
    assert eval_distance(symmetrize(s), x, x) == 2 * eval_distance(s, x, x)


def test_finite_contains(two_point):
    assert two_point.contains(1)
    assert not two_point.contains(2)
    with pytest.raises(DomainError):
        eval_distance(two_point, 0, 5)
