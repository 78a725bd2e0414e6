"""Verification reports and the helpers that turn check arrays into them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Witness:
    points: tuple
    lhs: float
    rhs: float
    deficit: float

    def to_dict(self):
        return {
            "points": list(self.points),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "deficit": self.deficit,
        }


@dataclass(frozen=True)
class CheckResult:
    axiom: str
    passed: bool
    violations: int
    checks: int
    worst: Witness | None = None

    def to_dict(self):
        return {
            "axiom": self.axiom,
            "pass": self.passed,
            "violations": self.violations,
            "worst": None if self.worst is None else self.worst.to_dict(),
            "checks": self.checks,
        }


@dataclass
class VerificationReport:
    title: str
    results: list[CheckResult] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    @property
    def failures(self):
        return [r for r in self.results if not r.passed]

    def __getitem__(self, axiom):
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    def __contains__(self, axiom):
        return any(r.axiom == axiom for r in self.results)

    def extend(self, other: "VerificationReport", prefix=""):
        for r in other.results:
            self.results.append(
                CheckResult(prefix + r.axiom, r.passed, r.violations, r.checks, r.worst)
            )
        return self

    def to_dict(self):
        out = {
            "title": self.title,
            "pass": self.passed,
            "results": [r.to_dict() for r in self.results],
        }
        if self.details:
            out["details"] = self.details
        return out

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, default=_json_default)

    def summary_lines(self):
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for r in self.results:
            line = f"  {r.axiom:<28} {'pass' if r.passed else 'FAIL'}  " \
                   f"{r.violations}/{r.checks} violations"
            if r.worst is not None:
                w = r.worst
                line += f"  worst {w.points}: lhs={w.lhs:.6g} rhs={w.rhs:.6g}"
            lines.append(line)
        for k, v in self.details.items():
            lines.append(f"  {k}: {v}")
        return lines


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    try:
        return float(obj)
    except (TypeError, ValueError):
        return str(obj)


def _plain(v):
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    return float(v)


def summarize(axiom, points, violated, lhs, rhs, deficit):
    """Aggregate elementwise check results into a :class:`CheckResult`.

    ``points`` is a tuple of aligned point arrays; the other arguments are
    aligned arrays (float or object dtype). The worst witness is the violation
    with the largest deficit, ties broken by the lexicographically smallest
    point tuple, so the result does not depend on evaluation order.
    """
    violated = np.asarray(violated).astype(bool)
    checks = int(violated.size)
    idx = np.flatnonzero(violated)
    if idx.size == 0:
        return CheckResult(axiom, True, 0, checks, None)
    lhs, rhs, deficit = (np.asarray(a) for a in (lhs, rhs, deficit))

    def key(i):
        return (-deficit[i], tuple(_plain(p[i]) for p in points))

    best = min(idx, key=key)
    worst = Witness(
        tuple(_plain(p[best]) for p in points),
        float(lhs[best]),
        float(rhs[best]),
        float(deficit[best]),
    )
    return CheckResult(axiom, False, int(idx.size), checks, worst)


def inequality(axiom, points, lhs, rhs, slack):
    """Check ``lhs <= rhs + slack`` elementwise."""
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    return summarize(axiom, points, lhs > rhs + slack, lhs, rhs, lhs - rhs)


def strict_inequality(axiom, points, lhs, rhs):
    """Check ``lhs < rhs`` elementwise, no slack."""
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    return summarize(axiom, points, lhs >= rhs, lhs, rhs, lhs - rhs)

