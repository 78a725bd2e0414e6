"""Self-maps, the p-Kannan contraction condition and its consequences.

A map ``T`` is p-Kannan with constant ``lam`` in ``[0, 1/4)`` when

    p(Tx, Ty) <= lam * (p(x, Tx) + p(y, Ty))

for every pair of points. Checks run on pair sets closed under reversal, so
everything derived from the condition pairwise (the symmetrised bound with
``2 * lam``) holds on the same set.
"""

from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .axioms import arithmetic
from .errors import (
    DependencyError,
    KannanConstantError,
    MappingError,
    SpaceParseError,
    UnknownNameError,
)
from .reports import VerificationReport, inequality
from .sampling import CheckStrategy, symmetric_pairs
from .spaces import FiniteSpace, Space

KANNAN_BOUND = Fraction(1, 4)


class Mapping:
    """A self-map on a space, vectorised over numpy arrays of points."""

    kind = "named"
    name = "map"

    def __call__(self, x):
        raise NotImplementedError

    def check_total(self, space: Space):
        pass

    def apply(self, space: Space, x):
        """Images of ``x``; raises :class:`MappingError` if one leaves the space."""
        self.check_total(space)
        x = np.asarray(x)
        tx = np.asarray(self(x))
        inside = np.asarray(space.contains(tx))
        if not inside.all():
            i = int(np.flatnonzero(~inside.ravel())[0])
            bad_x, bad_tx = x.ravel()[i].item(), tx.ravel()[i].item()
            raise MappingError(
                f"map {self.name!r} sends {bad_x!r} to {bad_tx!r}, outside {space.label!r}",
                witness=(bad_x, bad_tx),
            )
        return tx

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r}>"


class TableMap(Mapping):
    kind = "table"

    def __init__(self, table, name=None):
        self.table = tuple(int(t) for t in table)
        self._arr = np.asarray(self.table, dtype=np.int64)
        self.name = name or f"table{list(self.table)}"

    def __call__(self, x):
        return self._arr[x]

    def __eq__(self, other):
        return isinstance(other, TableMap) and other.table == self.table

    def __hash__(self):
        return hash(self.table)

    def fixed_points(self):
        return [i for i, t in enumerate(self.table) if t == i]

    def check_total(self, space):
        if not isinstance(space, FiniteSpace):
            raise MappingError(f"table map {self.name!r} needs a finite space")
        if len(self.table) != space.size:
            raise MappingError(
                f"table has {len(self.table)} entries but {space.label!r} has {space.size} points"
            )
        for i, t in enumerate(self.table):
            if not 0 <= t < space.size:
                raise MappingError(f"table sends {i} to {t}, outside the space", witness=(i, t))

    def to_document(self):
        return {"table": list(self.table)}


class ExampleMap(Mapping):
    """``T x = 0`` on ``[0, 1]`` and ``T x = x / 8`` beyond."""

    name = "example_map"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 1.0, 0.0, x / 8.0)


class FunctionMap(Mapping):
    """Wrap an arbitrary callable; it is vectorised with ``np.vectorize`` if needed."""

    def __init__(self, func: Callable, name="function", vectorized=True):
        self.func = func if vectorized else np.vectorize(func, otypes=[float])
        self.name = name

    def __call__(self, x):
        return self.func(x)


def load_mapping(document) -> TableMap:
    """Parse ``{"table": [index, ...]}`` (JSON text or a mapping)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpaceParseError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict) or "table" not in document:
        raise SpaceParseError("mapping document must be an object with a 'table' key")
    table = document["table"]
    if not isinstance(table, list) or not all(
        isinstance(t, int) and not isinstance(t, bool) for t in table
    ):
        raise SpaceParseError("'table' must be a list of integer indices")
    return TableMap(table, name=document.get("name"))


def read_mapping(path) -> TableMap:
    path = Path(path)
    m = load_mapping(path.read_text())
    if m.name.startswith("table["):
        m.name = path.stem
    return m


def _counterexample_map():
    from .completeness import build_counterexample_map
    from .spaces import builtin_space

    return build_counterexample_map(builtin_space("paper_example_punctured"))


MAP_REGISTRY = {
    "example_map": ExampleMap,
    "counterexample_map": _counterexample_map,
}


def named_map(name: str) -> Mapping:
    try:
        factory = MAP_REGISTRY[name]
    except KeyError:
        raise UnknownNameError("map", name, MAP_REGISTRY) from None
    return factory()


@dataclass(frozen=True)
class KannanConstant:
    value: float | Fraction

    def __post_init__(self):
        v = self.value
        if isinstance(v, bool) or not isinstance(v, numbers.Real):
            raise KannanConstantError(f"constant must be a real number, got {v!r}")
        if not (math.isfinite(float(v)) and 0 <= v < KANNAN_BOUND):
            raise KannanConstantError(f"constant must lie in [0, 1/4), got {v!r}")

    @property
    def gamma(self):
        """Kannan constant of the map on the symmetrised space."""
        return 2 * self.value

    @property
    def rate(self):
        """Per-step contraction factor of successive ``p+`` displacements."""
        g = self.gamma
        return g / (1 - g)

    def __float__(self):
        return float(self.value)


def as_constant(constant) -> KannanConstant:
    return constant if isinstance(constant, KannanConstant) else KannanConstant(constant)


def _lam(space, constant):
    v = constant.value
    return Fraction(v) if isinstance(space, FiniteSpace) else float(v)


def _terms(space, mapping, strategy):
    strategy = CheckStrategy.default_for(space) if strategy is None else strategy
    strategy.validate_for(space)
    x, y = symmetric_pairs(space, strategy)
    tx, ty = mapping.apply(space, x), mapping.apply(space, y)
    p, slack = arithmetic(space, strategy.slack)
    return strategy, p, slack, x, y, tx, ty


def check_kannan(space: Space, mapping: Mapping, constant, strategy: CheckStrategy | None = None) -> VerificationReport:
    """Check the p-Kannan inequality for ``constant`` on all checked pairs."""
    constant = as_constant(constant)
    strategy, p, slack, x, y, tx, ty = _terms(space, mapping, strategy)
    lam = _lam(space, constant)
    result = inequality(
        "kannan", (x, y), p(tx, ty), lam * (p(x, tx) + p(y, ty)), slack
    )
    return VerificationReport(
        f"p-Kannan condition [{space.label}, {mapping.name}]",
        [result],
        details={"lambda": float(lam)},
    )


@dataclass(frozen=True)
class LambdaEstimate:
    lambda_hat: float | Fraction
    witness: tuple | None
    feasible: bool
    checks: int

    @property
    def is_kannan(self):
        return self.feasible and self.lambda_hat < KANNAN_BOUND

    def to_dict(self):
        return {
            "lambda_hat": float(self.lambda_hat),
            "witness": None if self.witness is None else list(self.witness),
            "feasible": self.feasible,
            "checks": self.checks,
            "is_kannan": self.is_kannan,
        }


def _plain(v):
    return int(v) if isinstance(v, (int, np.integer)) else float(v)


def estimate_lambda(space: Space, mapping: Mapping, strategy: CheckStrategy | None = None) -> LambdaEstimate:
    """Largest ratio ``p(Tx, Ty) / (p(x, Tx) + p(y, Ty))`` over the checked pairs.

    Pairs where both sides are within slack of zero are skipped. A pair
    with a vanishing denominator but a positive numerator makes the map
    infeasible: no constant satisfies the inequality there.
    """
    strategy, p, slack, x, y, tx, ty = _terms(space, mapping, strategy)
    num = np.asarray(p(tx, ty))
    den = np.asarray(p(x, tx) + p(y, ty))
    checks = int(num.size)
    small_den = np.asarray(den <= slack).astype(bool)
    bad = small_den & np.asarray(num > slack).astype(bool)
    if bad.any():
        idx = np.flatnonzero(bad)
        i = min(idx, key=lambda k: (_plain(x[k]), _plain(y[k])))
        return LambdaEstimate(math.inf, (_plain(x[i]), _plain(y[i])), False, checks)
    keep = np.flatnonzero(~small_den)
    if keep.size == 0:
        zero = Fraction(0) if isinstance(space, FiniteSpace) else 0.0
        return LambdaEstimate(zero, None, True, checks)
    ratio = num[keep] / den[keep]
    best = max(ratio)
    if not isinstance(space, FiniteSpace):
        best = float(best)
    ties = keep[np.asarray(ratio == best).astype(bool)]
    i = min(ties, key=lambda k: (_plain(x[k]), _plain(y[k])))
    return LambdaEstimate(best, (_plain(x[i]), _plain(y[i])), True, checks)


def check_lemma2(space: Space, mapping: Mapping, constant, strategy: CheckStrategy | None = None) -> VerificationReport:
    """Check the consequences of the p-Kannan condition on the same pairs.

    ``lemma2a``: ``p+(Tx, Ty) <= 2 lam (p(x, Tx) + p(y, Ty))``
    ``lemma2b``: ``p+(Tx, Ty) <= gamma (p+(x, Tx) + p+(y, Ty))`` with ``gamma = 2 lam``
    """
    constant = as_constant(constant)
    base = check_kannan(space, mapping, constant, strategy)
    if not base.passed:
        w = base["kannan"].worst
        raise DependencyError(
            f"{mapping.name!r} fails the p-Kannan check with lambda={float(constant)} "
            f"at {w.points}",
            report=base,
        )
    strategy, p, slack, x, y, tx, ty = _terms(space, mapping, strategy)
    lam = _lam(space, constant)
    gamma = 2 * lam
    pxt, pyt = p(x, tx), p(y, ty)
    plus_img = p(tx, ty) + p(ty, tx)
    plus_x = pxt + p(tx, x)
    plus_y = pyt + p(ty, y)
    results = [
        inequality("lemma2a", (x, y), plus_img, 2 * lam * (pxt + pyt), slack),
        inequality("lemma2b", (x, y), plus_img, gamma * (plus_x + plus_y), slack),
    ]
    return VerificationReport(
        f"Kannan consequences [{space.label}, {mapping.name}]",
        results,
        details={"lambda": float(lam), "gamma": float(gamma)},
    )
