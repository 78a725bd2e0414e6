"""Brute-force ground truth on small finite spaces.

Every self-map of an ``n``-point space is enumerated, its least Kannan
constant is computed exactly from the stored matrix entries, and each
map with constant below 1/4 is checked for a unique fixed point of zero
self-distance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .axioms import check_axioms
from .errors import PreconditionError, SizeError
from .kannan import KANNAN_BOUND, TableMap
from .sampling import CheckStrategy
from .spaces import FiniteSpace

MAX_POINTS = 8
_CHUNK = 1 << 16


def _require_finite(space, cap):
    if not isinstance(space, FiniteSpace):
        raise TypeError(f"{space.label!r} is not a finite space")
    if space.size > cap:
        raise SizeError(f"{space.size} points exceeds the enumeration cap of {cap}")


def enumerate_self_maps(space: FiniteSpace, cap: int = MAX_POINTS):
    """Yield all ``n**n`` table maps in lexicographic order."""
    _require_finite(space, cap)
    n = space.size
    for table in itertools.product(range(n), repeat=n):
        yield TableMap(table)


@dataclass(frozen=True)
class KannanBound:
    lambda_min: Fraction | None
    witness: tuple | None

    @property
    def feasible(self):
        return self.lambda_min is not None

    @property
    def is_kannan(self):
        return self.feasible and self.lambda_min < KANNAN_BOUND


def min_kannan_constant(space: FiniteSpace, mapping: TableMap) -> KannanBound:
    """Exact least constant for the p-Kannan inequality over all ordered pairs.

    ``0/0`` pairs contribute 0. Returns ``lambda_min=None`` (infeasible)
    with the offending pair if some pair has a positive left side and a
    zero right-side sum.
    """
    mapping.check_total(space)
    m = space.exact_matrix
    t = mapping.table
    n = space.size
    best, arg = Fraction(0), None
    for x in range(n):
        for y in range(n):
            num = m[t[x], t[y]]
            den = m[x, t[x]] + m[y, t[y]]
            if den == 0:
                if num > 0:
                    return KannanBound(None, (x, y))
                continue
            r = num / den
            if arg is None or r > best:
                best, arg = r, (x, y)
    return KannanBound(best, arg)


def _tables(n, start, stop):
    idx = np.arange(start, stop, dtype=np.int64)
    powers = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % n


def _screen(matrix, tables):
    """Float upper screen of the least constant for a block of maps."""
    n = matrix.shape[0]
    num = matrix[tables[:, :, None], tables[:, None, :]]
    d = matrix[np.arange(n)[None, :], tables]
    den = d[:, :, None] + d[:, None, :]
    infeasible = ((num > 0) & (den == 0)).any(axis=(1, 2))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    lam = ratio.max(axis=(1, 2))
    return ~infeasible & (lam < 0.25 + 1e-9)


@dataclass
class FiniteAudit:
    space: FiniteSpace
    maps_total: int
    kannan_maps: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def n(self):
        return self.space.size

    @property
    def kannan_count(self):
        return len(self.kannan_maps)

    @property
    def passed(self):
        return not self.violations

    def to_dict(self):
        return {
            "n": self.n,
            "maps_total": self.maps_total,
            "kannan_count": self.kannan_count,
            "violations": self.violations,
        }


def exhaustive_kannan_audit(space: FiniteSpace, cap: int = MAX_POINTS, slack=0) -> FiniteAudit:
    """Check every exact p-Kannan map for a unique zero-self-distance fixed point.

    ``kannan_maps`` holds ``(table, lambda_min)`` pairs in lexicographic
    order of the table. ``violations`` should always come back empty.
    """
    _require_finite(space, cap)
    axioms = check_axioms(space, CheckStrategy.exhaustive(slack=slack))
    if not axioms.passed:
        failed = ", ".join(r.axiom for r in axioms.failures)
        raise PreconditionError(
            f"{space.label!r} is not a partial quasi-metric (fails {failed})", report=axioms
        )
    n = space.size
    total = n**n
    audit = FiniteAudit(space, total)
    m = space.exact_matrix
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        tables = _tables(n, start, stop)
        for row in tables[_screen(space.matrix, tables)]:
            mapping = TableMap(row.tolist())
            bound = min_kannan_constant(space, mapping)
            if not bound.is_kannan:
                continue
            audit.kannan_maps.append((mapping.table, bound.lambda_min))
            fixed = mapping.fixed_points()
            if len(fixed) != 1 or m[fixed[0], fixed[0]] != 0:
                audit.violations.append(
                    {
                        "table": list(mapping.table),
                        "lambda_min": str(bound.lambda_min),
                        "fixed_points": fixed,
                        "self_distances": [str(m[z, z]) for z in fixed],
                    }
                )
    return audit


def _integer_candidate(n, rng):
    diag = rng.choice([0, 0, 1, 2], size=n)
    mat = np.maximum(diag[:, None], diag[None, :]) + rng.integers(0, 4, size=(n, n))
    np.fill_diagonal(mat, diag)
    return mat


def _multiscale_candidate(n, rng):
    # p(i, j) = max(v_i, v_j) + c * max(v_i - v_j, 0) on spread-out values v
    levels = np.array([0, 0, 0, 1, 2, 3, 4, 8, 16, 32, 64, 128, 256, 512])
    v = rng.choice(levels, size=n, replace=False)
    c = int(rng.integers(0, 2))
    return np.maximum(v[:, None], v[None, :]) + c * np.maximum(v[:, None] - v[None, :], 0)


def random_valid_finite_space(n: int, rng, max_tries: int = 10_000, label=None, family=None) -> FiniteSpace:
    """Rejection-sample an ``n``-point partial quasi-metric with integer entries.

    ``family="integer"`` draws self-distances from ``{0, 0, 1, 2}`` and
    off-diagonal entries at least the larger adjacent self-distance.
    ``family="multiscale"`` uses ``max(v_i, v_j) + c * max(v_i - v_j, 0)`` on
    values spread over several orders of magnitude; such spaces carry
    non-constant Kannan maps. With ``family=None`` each try picks one at
    random. Candidates failing an exact exhaustive axiom check are discarded.
    """
    if n < 1:
        raise ValueError("n must be positive")
    makers = {"integer": _integer_candidate, "multiscale": _multiscale_candidate}
    if family is not None and family not in makers:
        raise ValueError(f"unknown family {family!r}")
    for _ in range(max_tries):
        fam = family or ("integer", "multiscale")[int(rng.integers(0, 2))]
        mat = makers[fam](n, rng)
        space = FiniteSpace.from_matrix(mat.tolist(), label=label or f"random{n}")
        if check_axioms(space, CheckStrategy.exhaustive(slack=0)).passed:
            return space
    raise RuntimeError(f"no valid {n}-point space found in {max_tries} tries")


def random_spaces(count: int, seed: int = 42, max_n: int = 5, min_n: int = 2):
    """``count`` reproducible random valid spaces with sizes in ``[min_n, max_n]``."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        out.append(random_valid_finite_space(n, rng, label=f"random{i}-n{n}"))
    return out
