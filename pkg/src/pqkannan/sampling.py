"""Check strategies and the seeded point sampler shared by all checkers."""

from __future__ import annotations

import zlib
from dataclasses import dataclass, replace

import numpy as np

from .errors import StrategyError
from .spaces import FiniteSpace, Space

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"


@dataclass(frozen=True)
class CheckStrategy:
    """How a checker chooses the tuples it evaluates.

    ``slack`` is added to the right-hand side of every inequality and is the
    tolerance of every equality test. ``margin`` offsets open interval
    endpoints and ``upper_cap`` truncates unbounded domains when sampling.
    """

    mode: str = SAMPLED
    sample_count: int = 10_000
    seed: int = 42
    slack: float = 1e-9
    margin: float = 1e-9
    upper_cap: float = 1e6

    def __post_init__(self):
        if self.mode not in (EXHAUSTIVE, SAMPLED):
            raise StrategyError(f"unknown mode {self.mode!r}")
        if self.mode == SAMPLED and int(self.sample_count) < 1:
            raise StrategyError(f"sample_count must be positive, got {self.sample_count}")
        if not self.slack >= 0:
            raise StrategyError(f"slack must be non-negative, got {self.slack}")
        if not self.margin > 0:
            raise StrategyError(f"margin must be positive, got {self.margin}")
        if not 0 <= int(self.seed) < 2**64:
            raise StrategyError("seed must fit in an unsigned 64-bit integer")

    @classmethod
    def exhaustive(cls, slack=1e-9):
        return cls(mode=EXHAUSTIVE, slack=slack)

    @classmethod
    def sampled(cls, sample_count=10_000, seed=42, slack=1e-9, **kw):
        return cls(mode=SAMPLED, sample_count=sample_count, seed=seed, slack=slack, **kw)

    @classmethod
    def default_for(cls, space: Space, **kw):
        """Exhaustive for finite spaces, sampled otherwise."""
        mode = EXHAUSTIVE if isinstance(space, FiniteSpace) else SAMPLED
        return cls(mode=mode, **kw)

    def with_slack(self, slack):
        return replace(self, slack=slack)

    def validate_for(self, space: Space):
        if self.mode == EXHAUSTIVE and not isinstance(space, FiniteSpace):
            raise StrategyError(
                f"exhaustive mode needs a finite space; {space.label!r} is {space.kind}"
            )


def rng_for(strategy: CheckStrategy):
    return np.random.default_rng(int(strategy.seed))


def sample_points(space: Space, strategy: CheckStrategy, size: int, rng=None):
    """Draw ``size`` points uniformly from the universe of ``space``."""
    rng = rng_for(strategy) if rng is None else rng
    if isinstance(space, FiniteSpace):
        return rng.integers(0, space.size, size=size)
    lo, hi = space.domain.sampling_bounds(strategy.margin, strategy.upper_cap)
    return rng.uniform(lo, hi, size=size)


def point_tuples(space: Space, strategy: CheckStrategy, arity: int):
    """Return ``arity`` aligned point arrays covering the tuples to check.

    Exhaustive mode enumerates every ordered tuple of indices in
    lexicographic order; sampled mode draws ``sample_count`` tuples.
    """
    strategy.validate_for(space)
    if strategy.mode == EXHAUSTIVE:
        n = space.size
        grids = np.meshgrid(*([np.arange(n)] * arity), indexing="ij")
        return tuple(g.ravel() for g in grids)
    rng = rng_for(strategy)
    return tuple(
        sample_points(space, strategy, strategy.sample_count, rng) for _ in range(arity)
    )


def symmetric_pairs(space: Space, strategy: CheckStrategy):
    """Ordered pairs closed under reversal.

    Exhaustive mode yields all ``n**2`` ordered pairs. Sampled mode draws
    ``sample_count`` pairs and appends each one reversed.
    """
    xs, ys = point_tuples(space, strategy, 2)
    if strategy.mode == EXHAUSTIVE:
        return xs, ys
    return np.concatenate([xs, ys]), np.concatenate([ys, xs])


def module_seed(seed: int, module: str) -> int:
    """Derive a per-module seed from a run seed, deterministically."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(zlib.crc32(module.encode()),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
