"""Point universes with a (possibly asymmetric) distance function.

Two kinds of space exist. A :class:`FiniteSpace` is an ``n x n`` matrix of
non-negative reals whose points are referenced by index. An
:class:`AnalyticSpace` is a closed-form distance on a real interval whose
points are plain floats.

Every space exposes a vectorised ``distance(x, y)`` (floats, numpy
broadcasting) and ``exact_distance(x, y)``. For finite spaces the latter
returns :class:`fractions.Fraction` values built from the stored inputs, so
inequality checks can be made without rounding; for analytic spaces it is the
same as ``distance``.
"""

from __future__ import annotations

import json
import math
import numbers
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import DomainError, SpaceParseError, UnknownNameError

__all__ = [
    "Interval",
    "Space",
    "FiniteSpace",
    "AnalyticSpace",
    "eval_distance",
    "conjugate",
    "symmetrize",
    "ball_contains",
    "load_finite_space",
    "read_finite_space",
    "finite_space_document",
    "builtin_space",
    "BUILTIN_SPACES",
]


@dataclass(frozen=True)
class Interval:
    lower: float = 0.0
    upper: float = math.inf
    lower_open: bool = False
    upper_open: bool = True

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"empty interval: lower={self.lower}, upper={self.upper}")
        if math.isinf(self.lower) and not self.lower_open:
            raise ValueError("an infinite endpoint must be open")
        if math.isinf(self.upper) and not self.upper_open:
            raise ValueError("an infinite endpoint must be open")

    def contains(self, x):
        """Vectorised membership test; accepts scalars or arrays."""
        x = np.asarray(x, dtype=float)
        ok = np.isfinite(x)
        ok &= (x > self.lower) if self.lower_open else (x >= self.lower)
        ok &= (x < self.upper) if self.upper_open else (x <= self.upper)
        return ok

    def sampling_bounds(self, margin=1e-9, upper_cap=1e6):
        """Return the ``[lo, hi]`` range used to draw sample points."""
        lo = self.lower + margin if self.lower_open else self.lower
        hi = min(self.upper, upper_cap)
        if hi == self.upper and self.upper_open:
            hi = hi - margin
        if math.isinf(lo):
            lo = -upper_cap
        if not lo < hi:
            raise ValueError(f"cannot sample {self}: empty range [{lo}, {hi}]")
        return lo, hi

    def __str__(self):
        left = "(" if self.lower_open else "["
        right = ")" if self.upper_open else "]"
        return f"{left}{_fmt(self.lower)}, {_fmt(self.upper)}{right}"


def _fmt(v):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(float(v)) if v != int(v) else str(int(v))


class Space:
    """Common surface of finite and analytic spaces."""

    kind: str = ""
    label: str = ""
    # ground-truth facts known about a built-in space, e.g. completeness
    annotations: dict

    def distance(self, x, y):
        raise NotImplementedError

    def exact_distance(self, x, y):
        raise NotImplementedError

    def contains(self, x):
        """Vectorised membership test of point references."""
        raise NotImplementedError

    def check_point(self, x):
        if not bool(np.all(self.contains(x))):
            raise DomainError(f"point {x!r} is not in the universe of {self.label!r}")
        return x

    def __call__(self, x, y):
        return eval_distance(self, x, y)

    def __repr__(self):
        return f"<{type(self).__name__} {self.label!r}>"


class FiniteSpace(Space):
    kind = "finite"

    def __init__(self, points, matrix, label="finite", annotations=None):
        exact = np.array(
            [[_exact_value(v) for v in row] for row in matrix], dtype=object
        )
        n = len(points)
        if exact.shape != (n, n):
            raise ValueError(f"matrix shape {exact.shape} does not match {n} points")
        self.points = tuple(points)
        self.label = label
        self.annotations = dict(annotations or {})
        self._exact = exact
        self._exact.setflags(write=False)
        self.matrix = np.array([[float(v) for v in row] for row in exact], dtype=float)
        self.matrix.setflags(write=False)

    @classmethod
    def from_matrix(cls, matrix, label="finite", annotations=None):
        """Build a space with default point labels ``p0, p1, ...``."""
        n = len(matrix)
        return cls([f"p{i}" for i in range(n)], matrix, label, annotations)

    @property
    def size(self):
        return len(self.points)

    def __len__(self):
        return self.size

    @property
    def exact_matrix(self):
        return self._exact

    def distance(self, x, y):
        return self.matrix[x, y]

    def exact_distance(self, x, y):
        return self._exact[x, y]

    def contains(self, x):
        arr = np.asarray(x)
        if arr.dtype.kind not in "iu":
            return np.zeros(arr.shape, dtype=bool)
        return (arr >= 0) & (arr < self.size)


def _exact_value(v):
    if isinstance(v, bool) or not isinstance(v, numbers.Real):
        raise TypeError(f"distance entries must be real numbers, got {v!r}")
    if isinstance(v, Fraction):
        return v
    if isinstance(v, numbers.Integral):
        return Fraction(int(v))
    fv = float(v)
    if not math.isfinite(fv):
        raise ValueError(f"distance entries must be finite, got {v!r}")
    return Fraction(fv)


class AnalyticSpace(Space):
    kind = "analytic"

    def __init__(
        self,
        func: Callable,
        domain: Interval,
        label: str = "analytic",
        annotations=None,
    ):
        self.func = func
        self.domain = domain
        self.label = label
        self.annotations = dict(annotations or {})

    def distance(self, x, y):
        return self.func(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    exact_distance = distance

    def contains(self, x):
        arr = np.asarray(x)
        if arr.dtype == bool or arr.dtype.kind not in "iuf":
            return np.zeros(arr.shape, dtype=bool)
        return self.domain.contains(arr)


def eval_distance(space: Space, x, y) -> float:
    """Return ``p(x, y)`` after validating both points and the value."""
    space.check_point(x)
    space.check_point(y)
    value = float(space.distance(x, y))
    if not (math.isfinite(value) and value >= 0):
        raise DomainError(
            f"distance {value!r} at ({x!r}, {y!r}) in {space.label!r} is not in [0, inf)"
        )
    return value


def conjugate(space: Space) -> Space:
    """The reversed distance ``(x, y) -> p(y, x)``."""
    label = f"{space.label}^-1"
    if isinstance(space, FiniteSpace):
        return FiniteSpace(space.points, space.exact_matrix.T, label)
    func = space.func
    return AnalyticSpace(lambda x, y: func(y, x), space.domain, label)


def symmetrize(space: Space) -> Space:
    """The symmetrised distance ``(x, y) -> p(x, y) + p(y, x)``."""
    label = f"{space.label}^+"
    if isinstance(space, FiniteSpace):
        m = space.exact_matrix
        return FiniteSpace(space.points, m + m.T, label)
    func = space.func
    return AnalyticSpace(lambda x, y: func(x, y) + func(y, x), space.domain, label)


def ball_contains(space: Space, center, radius: float, candidate) -> bool:
    """Membership of ``candidate`` in the open ball of ``radius`` around ``center``.

    The ball is ``{y : p(center, y) < radius + p(center, center)}``.
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius!r}")
    return eval_distance(space, center, candidate) < radius + eval_distance(
        space, center, center
    )


def load_finite_space(document, label="finite") -> FiniteSpace:
    """Parse a finite-space document.

    ``document`` is JSON text or an already-decoded mapping of the form
    ``{"points": [str, ...], "matrix": [[number, ...], ...]}``.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpaceParseError(f"invalid JSON: {exc}") from None
    if not isinstance(document, Mapping):
        raise SpaceParseError("document must be an object with 'points' and 'matrix'")
    missing = [k for k in ("points", "matrix") if k not in document]
    if missing:
        raise SpaceParseError(f"missing key(s): {', '.join(missing)}")
    points, matrix = document["points"], document["matrix"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise SpaceParseError("'points' must be a list of strings")
    if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
        raise SpaceParseError("'matrix' must be a list of rows")
    n = len(matrix)
    if n == 0:
        raise SpaceParseError("matrix is empty")
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise SpaceParseError(f"matrix not square (row {i} has {len(row)} entries, expected {n})")
    if len(points) != n:
        raise SpaceParseError(f"{len(points)} points but matrix side is {n}")
    for i, row in enumerate(matrix):
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SpaceParseError(f"non-numeric distance at ({i},{j}): {v!r}")
            if math.isnan(v):
                raise SpaceParseError(f"NaN distance at ({i},{j})")
            if math.isinf(v):
                raise SpaceParseError(f"infinite distance at ({i},{j})")
            if v < 0:
                raise SpaceParseError(f"negative distance at ({i},{j})")
    label = document.get("label", label)
    return FiniteSpace(points, matrix, label=str(label))


def read_finite_space(path) -> FiniteSpace:
    path = Path(path)
    return load_finite_space(path.read_text(), label=path.stem)


def finite_space_document(space: FiniteSpace) -> dict:
    def plain(v):
        return int(v) if v.denominator == 1 else float(v)

    return {
        "points": list(space.points),
        "matrix": [[plain(v) for v in row] for row in space.exact_matrix],
    }


def _example_distance(x, y):
    return np.maximum(x - y, 0.0) + x


def _paper_example():
    return AnalyticSpace(
        _example_distance,
        Interval(0.0, math.inf, lower_open=False, upper_open=True),
        label="paper_example",
        annotations={
            "p_sequentially_complete": True,
            "left_p_sequentially_complete": True,
        },
    )


def _paper_example_punctured():
    return AnalyticSpace(
        _example_distance,
        Interval(0.0, math.inf, lower_open=True, upper_open=True),
        label="paper_example_punctured",
        annotations={
            "p_sequentially_complete": False,
            "left_p_sequentially_complete": False,
        },
    )


BUILTIN_SPACES = {
    "paper_example": _paper_example,
    "paper_example_punctured": _paper_example_punctured,
}


def builtin_space(name: str) -> AnalyticSpace:
    """Return a fresh instance of a named built-in space.

    ``paper_example`` is ``p(x, y) = max(x - y, 0) + x`` on ``[0, inf)``;
    ``paper_example_punctured`` is the same formula on ``(0, inf)``.
    """
    try:
        factory = BUILTIN_SPACES[name]
    except KeyError:
        raise UnknownNameError("space", name, BUILTIN_SPACES) from None
    return factory()
