"""Axiom checks for (partial) (quasi-)metrics and structure classification.

Finite spaces are checked in exact rational arithmetic on the stored
matrix entries; analytic spaces in double precision. In both cases an
inequality ``lhs <= rhs`` is accepted when ``lhs <= rhs + slack`` and an
equality when ``|lhs - rhs| <= slack``.

Axiom ids used in reports:

``1a``  p(x, x) <= p(x, y)
``1b``  p(x, x) <= p(y, x)
``2``   p(x, z) + p(y, y) <= p(x, y) + p(y, z)
``3``   x != y  implies  not (p(x, x) = p(x, y) and p(y, y) = p(y, x))

and, for partial metrics, ``pm1`` to ``pm4``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionError
from .reports import CheckResult, VerificationReport, inequality, summarize
from .sampling import CheckStrategy, point_tuples
from .spaces import FiniteSpace, Space, conjugate, symmetrize

QUASI_METRIC = "quasi-metric"
PARTIAL_QUASI_METRIC = "partial quasi-metric"
PARTIAL_METRIC = "partial metric"
LOPSIDED = "lopsided partial quasi-metric"
INVALID = "invalid"


def arithmetic(space: Space, slack):
    """Distance function and slack in the arithmetic used for ``space``."""
    if isinstance(space, FiniteSpace):
        return space.exact_distance, Fraction(slack)
    return space.distance, float(slack)


def _strategy(space, strategy):
    strategy = CheckStrategy.default_for(space) if strategy is None else strategy
    strategy.validate_for(space)
    return strategy


def _separation(axiom, x, y, gaps, slack):
    # x == y trivially satisfies the axiom; only distinct pairs can violate it
    distinct = np.asarray(x != y)
    gap = gaps[0]
    for g in gaps[1:]:
        gap = np.maximum(gap, g)
    violated = distinct & np.asarray(gap <= slack).astype(bool)
    return summarize(axiom, (x, y), violated, gap, np.full(gap.shape, slack), slack - gap)


def check_axioms(space: Space, strategy: CheckStrategy | None = None) -> VerificationReport:
    """Check axioms (1a), (1b), (2) and (3) of a partial quasi-metric."""
    strategy = _strategy(space, strategy)
    p, slack = arithmetic(space, strategy.slack)
    x, y = point_tuples(space, strategy, 2)
    tx, ty, tz = point_tuples(space, strategy, 3)
    pxx, pyy, pxy, pyx = p(x, x), p(y, y), p(x, y), p(y, x)
    results = [
        inequality("1a", (x, y), pxx, pxy, slack),
        inequality("1b", (x, y), pxx, pyx, slack),
        inequality(
            "2",
            (tx, ty, tz),
            p(tx, tz) + p(ty, ty),
            p(tx, ty) + p(ty, tz),
            slack,
        ),
        _separation("3", x, y, (abs(pxx - pxy), abs(pyy - pyx)), slack),
    ]
    return VerificationReport(f"partial quasi-metric axioms [{space.label}]", results)


def check_partial_metric(space: Space, strategy: CheckStrategy | None = None) -> VerificationReport:
    """Check axioms (pm1) to (pm4) of a partial metric."""
    strategy = _strategy(space, strategy)
    p, slack = arithmetic(space, strategy.slack)
    x, y = point_tuples(space, strategy, 2)
    tx, ty, tz = point_tuples(space, strategy, 3)
    pxx, pyy, pxy, pyx = p(x, x), p(y, y), p(x, y), p(y, x)
    asym = abs(pxy - pyx)
    results = [
        _separation("pm1", x, y, (abs(pxx - pxy), abs(pxy - pyy)), slack),
        inequality("pm2", (x, y), pxx, pxy, slack),
        inequality("pm3", (x, y), asym, np.zeros_like(asym), slack),
        inequality(
            "pm4",
            (tx, ty, tz),
            p(tx, ty) + p(tz, tz),
            p(tx, tz) + p(tz, ty),
            slack,
        ),
    ]
    return VerificationReport(f"partial metric axioms [{space.label}]", results)


@dataclass(frozen=True)
class Classification:
    label: str
    symmetric: bool
    zero_self_distances: bool
    report: VerificationReport

    def __str__(self):
        return self.label


def classify_structure(space: Space, strategy: CheckStrategy | None = None) -> Classification:
    """Name the most specific structure the checks support.

    Zero self-distances take precedence over symmetry, so a metric is
    reported as a quasi-metric.
    """
    strategy = _strategy(space, strategy)
    report = check_axioms(space, strategy)
    p, slack = arithmetic(space, strategy.slack)
    x, y = point_tuples(space, strategy, 2)
    symmetric = bool(np.all(np.asarray(abs(p(x, y) - p(y, x)) <= slack).astype(bool)))
    zero_self = bool(np.all(np.asarray(p(x, x) <= slack).astype(bool)))

    ok = {r.axiom: r.passed for r in report.results}
    if not (ok["1a"] and ok["2"] and ok["3"]):
        label = INVALID
    elif not ok["1b"]:
        label = LOPSIDED
    elif zero_self:
        label = QUASI_METRIC
    elif symmetric:
        label = PARTIAL_METRIC
    else:
        label = PARTIAL_QUASI_METRIC
    return Classification(label, symmetric, zero_self, report)


def check_derived_lemma(space: Space, strategy: CheckStrategy | None = None) -> VerificationReport:
    """Check that the conjugate is a partial quasi-metric and ``p+`` a partial metric.

    Raises :class:`PreconditionError` if ``space`` itself fails
    :func:`check_axioms`.
    """
    strategy = _strategy(space, strategy)
    base = check_axioms(space, strategy)
    if not base.passed:
        failed = ", ".join(r.axiom for r in base.failures)
        raise PreconditionError(
            f"{space.label!r} is not a partial quasi-metric (fails {failed})", report=base
        )
    report = VerificationReport(f"derived spaces [{space.label}]")
    report.extend(check_axioms(conjugate(space), strategy), prefix="conjugate:")
    report.extend(check_partial_metric(symmetrize(space), strategy), prefix="symmetrized:")
    return report


def check_symmetrization_invariants(space: Space, strategy: CheckStrategy | None = None) -> VerificationReport:
    """Exact checks, no slack: ``p <= p+`` and ``p+(x, y) == p+(y, x)``."""
    strategy = _strategy(space, strategy)
    plus = symmetrize(space)
    p, _ = arithmetic(space, 0)
    q, _ = arithmetic(plus, 0)
    x, y = point_tuples(space, strategy, 2)
    qxy, qyx = q(x, y), q(y, x)
    violated = np.asarray(qxy != qyx).astype(bool)
    diff = np.asarray(abs(qxy - qyx))
    results = [
        inequality("domination", (x, y), p(x, y), qxy, 0),
        summarize("plus_symmetry", (x, y), violated, qxy, qyx, diff),
    ]
    return VerificationReport(f"symmetrization invariants [{space.label}]", results)


__all__ = [
    "check_axioms",
    "check_partial_metric",
    "classify_structure",
    "check_derived_lemma",
    "check_symmetrization_invariants",
    "Classification",
    "CheckResult",
    "QUASI_METRIC",
    "PARTIAL_QUASI_METRIC",
    "PARTIAL_METRIC",
    "LOPSIDED",
    "INVALID",
]
