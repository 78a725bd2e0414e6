"""Picard iteration for fixed points of self-maps.

The orbit ``x_{n+1} = T x_n`` is followed until the symmetrised step
``p+(x_n, x_{n+1})`` drops below the tolerance. The returned point is then
checked against the fixed-point contract: ``p+(z, Tz) <= tol`` and
``p(z, z) <= tol``.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import NonConvergenceError
from .kannan import Mapping, as_constant
from .spaces import FiniteSpace, Space

TOLERANCE = 1e-12
MAX_ITER = 10**6

TOLERANCE_REACHED = "tolerance"
MAX_ITER_REACHED = "max_iter"
EXACT_FIXED_POINT = "exact_fixed_point"


@dataclass(frozen=True)
class Step:
    n: int
    point: float | int
    step_displacement: float
    self_distance: float


@dataclass
class IterationTrace:
    steps: list[Step] = field(default_factory=list)
    terminated_by: str = ""

    def __len__(self):
        return len(self.steps)

    @property
    def points(self):
        return [s.point for s in self.steps]

    @property
    def displacements(self):
        return np.array([s.step_displacement for s in self.steps], dtype=float)

    def rows(self):
        return [(s.n, s.point, s.step_displacement, s.self_distance) for s in self.steps]

    def write_csv(self, stream):
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(("iter", "point", "step_p_plus", "self_p"))
        for row in self.rows():
            w.writerow(tuple(repr(v) if isinstance(v, float) else v for v in row))

    def to_csv(self):
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


@dataclass(frozen=True)
class FixedPointResult:
    point: float | int
    residual: float
    self_distance: float
    iterations: int
    terminated_by: str

    def to_dict(self):
        return {
            "point": self.point,
            "residual": self.residual,
            "self_distance": self.self_distance,
            "iterations": self.iterations,
            "terminated_by": self.terminated_by,
        }


def _scalar(v):
    v = np.asarray(v).item()
    return v


def _stepper(space: Space, mapping: Mapping):
    mapping.check_total(space)
    p = space.distance

    def step(x):
        tx = _scalar(mapping(np.asarray(x)))
        if not bool(space.contains(tx)):
            raise NonConvergenceError(
                f"orbit left {space.label!r}: {mapping.name!r} sends {x!r} to {tx!r}"
            )
        return tx

    def plus(x, y):
        return float(p(x, y)) + float(p(y, x))

    def self_p(x):
        return float(p(x, x))

    return step, plus, self_p


def _coerce_point(space, x):
    space.check_point(x)
    return int(x) if isinstance(space, FiniteSpace) else float(x)


def iterate(
    space: Space,
    mapping: Mapping,
    start,
    tolerance: float = TOLERANCE,
    max_iter: int = MAX_ITER,
) -> tuple[IterationTrace, FixedPointResult]:
    """Run Picard iteration from ``start``.

    Stops when ``p+(x_n, x_{n+1}) <= tolerance`` or when ``T x_n == x_n``
    exactly, and returns ``x_{n+1}``. Raises :class:`NonConvergenceError`
    (carrying the trace) if ``max_iter`` steps are exhausted or the final
    point fails the fixed-point contract.
    """
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    if int(max_iter) < 1:
        raise ValueError(f"max_iter must be positive, got {max_iter!r}")
    x = _coerce_point(space, start)
    step, plus, self_p = _stepper(space, mapping)
    trace = IterationTrace()
    for n in range(int(max_iter)):
        tx = step(x)
        disp = plus(x, tx)
        trace.steps.append(Step(n, x, disp, self_p(x)))
        if tx == x:
            trace.terminated_by = EXACT_FIXED_POINT
            break
        if disp <= tolerance:
            trace.terminated_by = TOLERANCE_REACHED
            break
        x = tx
    else:
        trace.terminated_by = MAX_ITER_REACHED
        raise NonConvergenceError(
            f"no convergence from {start!r} within {max_iter} iterations "
            f"(last step p+ = {trace.steps[-1].step_displacement:.6g})",
            trace,
        )
    z = tx
    result = FixedPointResult(
        z, plus(z, step(z)), self_p(z), len(trace.steps), trace.terminated_by
    )
    if result.residual > tolerance or result.self_distance > tolerance:
        raise NonConvergenceError(
            f"orbit from {start!r} stopped at {z!r} but p+(z, Tz) = {result.residual:.6g} "
            f"and p(z, z) = {result.self_distance:.6g} exceed the tolerance",
            trace,
        )
    return trace, result


def verify_fixed_point(space: Space, mapping: Mapping, z, tolerance: float = TOLERANCE) -> bool:
    """True iff ``p+(z, Tz) <= tolerance`` and ``p(z, z) <= tolerance``."""
    z = _coerce_point(space, z)
    tz = _scalar(mapping.apply(space, np.asarray(z)))
    p = space.distance
    residual = float(p(z, tz)) + float(p(tz, z))
    return residual <= tolerance and float(p(z, z)) <= tolerance


@dataclass
class UniquenessReport:
    passed: bool
    results: list = field(default_factory=list)
    failed_start: object = None
    message: str = ""
    max_spread: float = 0.0

    def to_dict(self):
        return {
            "pass": self.passed,
            "fixed_points": [
                {"start": s, "point": None if r is None else r.point} for s, r in self.results
            ],
            "failed_start": self.failed_start,
            "max_spread": self.max_spread,
            "message": self.message,
        }


def uniqueness_probe(
    space: Space,
    mapping: Mapping,
    starts,
    tolerance: float = TOLERANCE,
    max_iter: int = MAX_ITER,
) -> UniquenessReport:
    """Iterate from every start; pass iff all converge to one point under ``p+``."""
    starts = list(starts)
    if not starts:
        raise ValueError("starts must be nonempty")
    results = []
    for s in starts:
        try:
            _, res = iterate(space, mapping, s, tolerance, max_iter)
        except NonConvergenceError as exc:
            results.append((s, None))
            return UniquenessReport(False, results, s, str(exc))
        results.append((s, res))
    _, plus, _ = _stepper(space, mapping)
    spread = 0.0
    worst = None
    for (s1, r1), (s2, r2) in itertools.combinations(results, 2):
        d = plus(r1.point, r2.point)
        if d > spread:
            spread, worst = d, s2
    if spread > tolerance:
        return UniquenessReport(
            False,
            results,
            worst,
            f"distinct limits: p+ spread {spread:.6g} exceeds {tolerance:.3g}",
            spread,
        )
    return UniquenessReport(True, results, None, "all starts reach the same point", spread)


def rate_bound_check(trace: IterationTrace, constant, slack: float = 0.0) -> bool:
    """Check ``d_{n+1} <= r d_n + slack`` for consecutive step displacements.

    ``r = gamma / (1 - gamma)`` with ``gamma = 2 * constant``.
    """
    if len(trace.steps) < 2:
        raise ValueError("rate check needs a trace with at least two steps")
    r = float(as_constant(constant).rate)
    d = trace.displacements
    return bool(np.all(d[1:] <= r * d[:-1] + slack))


def trace_summary(result: FixedPointResult) -> dict:
    return result.to_dict()
