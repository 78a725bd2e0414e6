"""Cauchy and convergence verdicts for sequences, completeness probes, and
the fixed-point-free Kannan map on an incomplete space.

All verdicts here are numerical: a sequence is judged on the last quarter
of a finite horizon, and convergence is only ever asserted or denied
relative to an explicit list of candidate limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import ConstructionError, DomainError
from .kannan import Mapping, check_kannan
from .reports import VerificationReport, strict_inequality, summarize
from .sampling import CheckStrategy, rng_for, sample_points
from .spaces import AnalyticSpace, Space

HORIZON = 256
MIN_HORIZON = 16
TAIL_FRACTION = 0.25
THRESHOLD_FRACTION = Fraction(1, 8)
COUNTEREXAMPLE_LAMBDA = Fraction(1, 8)

P_SEQUENTIAL = "p_sequential"
LEFT_P_SEQUENTIAL = "left_p_sequential"
SMYTH = "smyth"


@dataclass(frozen=True)
class SequenceSpec:
    """A sequence ``n -> x_n`` (``n >= 1``) evaluated up to ``horizon``.

    ``generator`` must accept an integer numpy array of indices.
    """

    generator: Callable
    horizon: int = HORIZON
    name: str = "sequence"

    def __post_init__(self):
        if int(self.horizon) < 1:
            raise ValueError(f"horizon must be positive, got {self.horizon}")

    def __call__(self, n):
        return self.generator(np.asarray(n))

    def terms(self, horizon=None):
        h = self.horizon if horizon is None else int(horizon)
        return np.asarray(self.generator(np.arange(1, h + 1)))

    def with_horizon(self, horizon):
        return replace(self, horizon=int(horizon))

    @classmethod
    def geometric(cls, ratio=0.5, horizon=HORIZON):
        ratio = float(ratio)
        return cls(lambda n: ratio ** np.asarray(n, dtype=float), horizon, f"geometric({ratio:g})")

    @classmethod
    def harmonic(cls, horizon=HORIZON):
        return cls(lambda n: 1.0 / np.asarray(n, dtype=float), horizon, "harmonic")

    @classmethod
    def approach_one(cls, horizon=HORIZON):
        """``x_n = n / (n + 1)``."""
        return cls(lambda n: np.asarray(n, dtype=float) / (np.asarray(n) + 1.0), horizon, "n/(n+1)")

    @classmethod
    def constant(cls, value, horizon=HORIZON):
        def gen(n):
            return np.full(np.shape(n), value)

        return cls(gen, horizon, f"constant({value!r})")

    @classmethod
    def from_values(cls, values, name="values"):
        arr = np.asarray(values)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("values must be a nonempty flat list")
        return cls(lambda n: arr[np.asarray(n) - 1], arr.size, name)


def default_family(horizon=HORIZON):
    return [
        SequenceSpec.geometric(0.5, horizon),
        SequenceSpec.harmonic(horizon),
        SequenceSpec.approach_one(horizon),
    ]


def default_candidates(space: Space):
    """Candidate limits for a built-in analytic space.

    The lowest sampleable point of the domain plus a few fixed values.
    """
    if not isinstance(space, AnalyticSpace):
        raise ValueError("default candidates exist only for analytic spaces; pass them explicitly")
    lo, _ = space.domain.sampling_bounds()
    cands = [lo] + [v for v in (0.1, 0.5, 1.0, 2.0) if v != lo]
    return [c for c in cands if bool(space.contains(c))]


@dataclass(frozen=True)
class SequenceClassification:
    sequence: str
    horizon: int
    tolerance: float
    left_p_cauchy: bool
    left_p_limit: float
    tau_p_plus_cauchy: bool
    tau_p_plus_limit: float
    plus_limit_zero: bool
    tau_p_convergent_to: object = None
    tau_p_plus_convergent_to: object = None
    # auxiliary: the double limit of p(x_n, x_m) over strictly increasing n < m
    forward_cauchy: bool = False
    forward_limit: float = math.nan

    @property
    def coherent(self):
        """Cauchy in ``p+`` with limit zero must imply left p-Cauchy."""
        return not (self.tau_p_plus_cauchy and self.plus_limit_zero) or self.left_p_cauchy

    def to_dict(self):
        return {
            "sequence": self.sequence,
            "horizon": self.horizon,
            "tolerance": self.tolerance,
            "left_p_cauchy": {"value": self.left_p_cauchy, "limit": self.left_p_limit},
            "tau_p_plus_cauchy": {
                "value": self.tau_p_plus_cauchy,
                "limit": self.tau_p_plus_limit,
                "limit_zero": self.plus_limit_zero,
            },
            "tau_p_convergent_to": self.tau_p_convergent_to,
            "tau_p_plus_convergent_to": self.tau_p_plus_convergent_to,
            "forward_cauchy": {"value": self.forward_cauchy, "limit": self.forward_limit},
        }


def _tail_stats(values):
    lo, hi = float(np.min(values)), float(np.max(values))
    return hi - lo, (hi + lo) / 2, hi


def _sequence_terms(space, seq, horizon):
    xs = seq.terms(horizon)
    inside = np.asarray(space.contains(xs))
    if not inside.all():
        n = int(np.flatnonzero(~inside)[0]) + 1
        raise DomainError(
            f"term {n} of {seq.name!r} ({xs[n - 1]!r}) is not in {space.label!r}"
        )
    return xs


def classify_sequence(
    space: Space,
    seq: SequenceSpec,
    candidates=(),
    tolerance: float = 1e-12,
    horizon: int | None = None,
) -> SequenceClassification:
    """Classify ``seq`` by the behaviour of its tail window.

    A double limit is judged to exist when the spread (max - min) of the
    relevant distances over all index pairs in the last quarter of the
    horizon is within ``tolerance``. A candidate ``c`` is a limit when
    ``|p(c, x_n) - p(c, c)| <= tolerance`` (resp. with ``p+``) on the tail.
    """
    h = seq.horizon if horizon is None else int(horizon)
    if h < MIN_HORIZON:
        raise ValueError(f"horizon must be at least {MIN_HORIZON}, got {h}")
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    candidates = list(candidates)
    for c in candidates:
        space.check_point(c)
    xs = _sequence_terms(space, seq, h)
    tail = xs[h - int(h * TAIL_FRACTION):]
    p = space.distance
    P = np.asarray(p(tail[:, None], tail[None, :]), dtype=float)
    plus = P + P.T
    k = tail.size

    left_spread, left_lim, _ = _tail_stats(P[np.triu_indices(k)])
    fwd_spread, fwd_lim, _ = _tail_stats(P[np.triu_indices(k, 1)])
    plus_spread, plus_lim, plus_max = _tail_stats(plus)

    to_p = to_plus = None
    for c in candidates:
        pc = float(p(c, c))
        if to_p is None and np.all(np.abs(np.asarray(p(c, tail), dtype=float) - pc) <= tolerance):
            to_p = c
        plus_tail = np.asarray(p(tail, c), dtype=float) + np.asarray(p(c, tail), dtype=float)
        if to_plus is None and np.all(np.abs(plus_tail - 2 * pc) <= tolerance):
            to_plus = c

    return SequenceClassification(
        sequence=seq.name,
        horizon=h,
        tolerance=tolerance,
        left_p_cauchy=left_spread <= tolerance,
        left_p_limit=left_lim,
        tau_p_plus_cauchy=plus_spread <= tolerance,
        tau_p_plus_limit=plus_lim,
        plus_limit_zero=plus_max <= tolerance,
        tau_p_convergent_to=to_p,
        tau_p_plus_convergent_to=to_plus,
        forward_cauchy=fwd_spread <= tolerance,
        forward_limit=fwd_lim,
    )


@dataclass
class CompletenessProbe:
    space: str
    candidates: list
    classifications: list[SequenceClassification]
    counterexamples: dict
    candidates_insufficient: bool
    note: str = (
        "evidence only: verdicts hold at the tested horizon and relative to the "
        "listed candidate limits; they are not proofs"
    )

    def found(self, notion):
        return self.counterexamples[notion] is not None

    @property
    def passed(self):
        return not any(v is not None for v in self.counterexamples.values())

    def to_dict(self):
        return {
            "space": self.space,
            "candidates": self.candidates,
            "candidates_insufficient": self.candidates_insufficient,
            "counterexamples": {
                k: ("no counterexample found" if v is None else v)
                for k, v in self.counterexamples.items()
            },
            "sequences": [c.to_dict() for c in self.classifications],
            "note": self.note,
        }


def probe_completeness(
    space: Space,
    seqs=None,
    candidates=None,
    tolerance: float = 1e-12,
) -> CompletenessProbe:
    """Look for sequences that are Cauchy but have no limit among ``candidates``.

    ``p_sequential``: Cauchy in ``p+`` but not ``tau(p)``-convergent.
    ``left_p_sequential``: left p-Cauchy but not ``tau(p)``-convergent.
    ``smyth``: left p-Cauchy but not ``tau(p+)``-convergent.
    """
    seqs = default_family() if seqs is None else list(seqs)
    if not seqs:
        raise ValueError("sequence family must be nonempty")
    candidates = default_candidates(space) if candidates is None else list(candidates)
    found = {P_SEQUENTIAL: None, LEFT_P_SEQUENTIAL: None, SMYTH: None}
    classes = []
    for seq in seqs:
        c = classify_sequence(space, seq, candidates, tolerance)
        classes.append(c)
        if found[P_SEQUENTIAL] is None and c.tau_p_plus_cauchy and c.tau_p_convergent_to is None:
            found[P_SEQUENTIAL] = seq.name
        if found[LEFT_P_SEQUENTIAL] is None and c.left_p_cauchy and c.tau_p_convergent_to is None:
            found[LEFT_P_SEQUENTIAL] = seq.name
        if found[SMYTH] is None and c.left_p_cauchy and c.tau_p_plus_convergent_to is None:
            found[SMYTH] = seq.name
    return CompletenessProbe(space.label, candidates, classes, found, len(candidates) == 0)


def _halving_set_distance(x):
    """``inf_n p(x, 2**-n)`` for ``p(x, y) = max(x - y, 0) + x`` on ``(0, inf)``."""
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0.5, x, 2.0 * x - 0.5)


class CounterexampleMap(Mapping):
    """``T x = x_{n(x)}`` for a Cauchy sequence without a ``tau(p)``-limit.

    ``n(x)`` is the smallest ``N >= n_x`` with
    ``bound_coef * bound_ratio**N < threshold_fraction * p(x, C_x)``, where
    ``bound_coef * bound_ratio**N`` bounds ``p+(x_n, x_m)`` for ``n, m >= N``
    and ``n_x`` is the index from which ``p(x, x_n) > 0`` (scanned up to the
    sequence horizon). ``offset`` shifts ``n(x)``; it exists to build
    deliberately broken maps.
    """

    def __init__(
        self,
        space: Space,
        sequence: SequenceSpec,
        set_distance: Callable,
        threshold_fraction=THRESHOLD_FRACTION,
        bound_coef=4.0,
        bound_ratio=0.5,
        offset=0,
        name="counterexample_map",
    ):
        self.space = space
        self.sequence = sequence
        self.set_distance = set_distance
        self.threshold_fraction = threshold_fraction
        self.bound_coef = float(bound_coef)
        self.bound_ratio = float(bound_ratio)
        self.offset = int(offset)
        self.name = name if offset == 0 else f"{name}[offset {offset:+d}]"
        self._terms = sequence.terms()

    def tail_bound(self, n):
        return self.bound_coef * self.bound_ratio ** np.asarray(n, dtype=float)

    def tampered(self, offset):
        return CounterexampleMap(
            self.space,
            self.sequence,
            self.set_distance,
            self.threshold_fraction,
            self.bound_coef,
            self.bound_ratio,
            offset,
        )

    def floor_index(self, x):
        """``n_x``: first index from which ``p(x, x_n) > 0`` up to the horizon."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        pos = np.asarray(self.space.distance(x[:, None], self._terms[None, :])) > 0
        zero = ~pos
        any_zero = zero.any(axis=1)
        last_zero = zero.shape[1] - 1 - np.argmax(zero[:, ::-1], axis=1)
        nx = np.where(any_zero, last_zero + 2, 1)
        if (nx > self._terms.size).any():
            i = int(np.flatnonzero(nx > self._terms.size)[0])
            raise ConstructionError(
                f"p(x, x_n) vanishes up to the horizon for x = {x[i]!r}; cannot select n(x)"
            )
        return nx

    def index_selector(self, x):
        """``n(x)`` (vectorised)."""
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        target = float(self.threshold_fraction) * np.asarray(self.set_distance(x), dtype=float)
        if not (target > 0).all():
            raise ConstructionError("p(x, C_x) must be positive")
        n = np.floor(np.log(target / self.bound_coef) / np.log(self.bound_ratio)) + 1
        n = np.maximum(n, 1).astype(np.int64)
        # floating-point fix-ups so that n is exactly the smallest valid index
        for _ in range(4):
            n = np.where(self.tail_bound(n) >= target, n + 1, n)
            n = np.where((n > 1) & (self.tail_bound(n - 1) < target), n - 1, n)
        n = np.maximum(n, self.floor_index(x))
        n = np.maximum(n + self.offset, 1)
        return int(n[0]) if scalar else n

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        n = np.atleast_1d(self.index_selector(x))
        out = np.asarray(self.sequence(n), dtype=float)
        return float(out[0]) if scalar else out


def build_counterexample_map(
    space: Space,
    seq: SequenceSpec | None = None,
    set_distance: Callable | None = None,
    threshold_fraction=THRESHOLD_FRACTION,
    tolerance: float = 1e-12,
) -> CounterexampleMap:
    """Build the fixed-point-free p-Kannan map from a non-convergent Cauchy sequence.

    Defaults to ``x_n = 2**-n`` on ``paper_example_punctured``, where
    ``p(x, C_x)`` has a closed form. Other spaces must supply
    ``set_distance``.
    """
    seq = SequenceSpec.geometric(0.5) if seq is None else seq
    c = classify_sequence(space, seq, (), tolerance)
    if not (c.tau_p_plus_cauchy and c.plus_limit_zero):
        raise ConstructionError(
            f"{seq.name!r} is not Cauchy in p+ with limit 0 at horizon {c.horizon}"
        )
    if set_distance is None:
        if space.label == "paper_example_punctured" and seq.name == "geometric(0.5)":
            set_distance = _halving_set_distance
        else:
            raise ConstructionError(
                f"no closed form for p(x, C_x) on {space.label!r} with {seq.name!r}; "
                "pass set_distance"
            )
    return CounterexampleMap(space, seq, set_distance, threshold_fraction)


def audit_counterexample(
    space: Space,
    cmap: CounterexampleMap,
    strategy: CheckStrategy | None = None,
    index_spread: int = 64,
) -> VerificationReport:
    """Sampled audit of the constructed map.

    ``kannan``: the p-Kannan inequality with constant 1/8.
    ``no_fixed_point``: ``p+(x, Tx) > 0`` at every sampled ``x``.
    ``selector``: ``p+(x_n, x_m) < threshold * p(x, C_x)`` for ``n, m >= n(x)``,
    always including ``n = m = n(x)`` and otherwise drawn within
    ``index_spread`` of ``n(x)``.
    """
    if strategy is None:
        strategy = CheckStrategy.sampled(10_000, seed=42, upper_cap=1e3)
    report = VerificationReport(f"fixed-point-free Kannan map [{space.label}, {cmap.name}]")
    report.extend(check_kannan(space, cmap, COUNTEREXAMPLE_LAMBDA, strategy))

    rng = rng_for(strategy)
    xs = sample_points(space, strategy, strategy.sample_count, rng)
    tx = cmap.apply(space, xs)
    p = space.distance
    gap = np.asarray(p(xs, tx) + p(tx, xs), dtype=float)
    report.results.append(
        summarize("no_fixed_point", (xs,), gap <= 0, gap, np.zeros_like(gap), -gap)
    )

    n0 = np.asarray(cmap.index_selector(xs))
    target = float(cmap.threshold_fraction) * np.asarray(cmap.set_distance(xs), dtype=float)
    ns = np.concatenate([n0, n0 + rng.integers(0, index_spread, n0.size)])
    ms = np.concatenate([n0, n0 + rng.integers(0, index_spread, n0.size)])
    xx = np.concatenate([xs, xs])
    tt = np.concatenate([target, target])
    xn, xm = np.asarray(cmap.sequence(ns), dtype=float), np.asarray(cmap.sequence(ms), dtype=float)
    plus = np.asarray(p(xn, xm) + p(xm, xn), dtype=float)
    report.results.append(strict_inequality("selector", (xx, ns, ms), plus, tt))

    report.details = {
        "lambda": float(COUNTEREXAMPLE_LAMBDA),
        "threshold_fraction": float(cmap.threshold_fraction),
        "min_p_plus_x_Tx": float(gap.min()),
        "max_Tx_over_x": float(np.max(tx / xs)),
    }
    return report
