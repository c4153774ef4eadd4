"""Finite state spaces, events, acts, reference measures, and act orderings.

Everything in this module is immutable and pure: spaces are fixed label
tuples, events are index subsets of a space, acts assign one payoff per
state, and the relation helpers (stochastic dominance, almost-sure
dominance, comonotonicity) never mutate their arguments, so all of it is
safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Mapping

import numpy as np

#: Largest supported state space; operations enumerate all 2^n events.
MAX_STATES = 16

_SUM_TOL = 1e-12


class SpaceMismatchError(ValueError):
    """Two objects living on different state spaces were combined."""


def require_same_space(*objects) -> "StateSpace":
    space = objects[0].space
    for other in objects[1:]:
        if other.space != space:
            raise SpaceMismatchError(
                f"state spaces differ: {space.labels} vs {other.space.labels}"
            )
    return space


@dataclass(frozen=True)
class StateSpace:
    """Ordered, finite collection of distinct state labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError("state space must have at least one state")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("state labels must be unique")
        if len(self.labels) > MAX_STATES:
            raise ValueError(f"at most {MAX_STATES} states are supported")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown state label {label!r}") from None

    def event(self, *labels: str) -> "Event":
        return Event(self, frozenset(self.index(lb) for lb in labels))

    def event_from_mask(self, mask: int) -> "Event":
        if not 0 <= mask <= self.full_mask:
            raise ValueError(f"mask {mask} out of range for {self.size} states")
        return Event(self, frozenset(i for i in range(self.size) if mask >> i & 1))

    def events(self) -> Iterator["Event"]:
        """All 2^n events, ordered by bitmask."""
        for mask in range(1 << self.size):
            yield self.event_from_mask(mask)


@dataclass(frozen=True)
class Event:
    """Subset of a state space, stored as a frozen set of state indices."""

    space: StateSpace
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if any(i < 0 or i >= self.space.size for i in self.members):
            raise ValueError("event members must be valid state indices")

    @property
    def mask(self) -> int:
        m = 0
        for i in self.members:
            m |= 1 << i
        return m

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.space.labels[i] for i in sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def complement(self) -> "Event":
        return Event(self.space, frozenset(range(self.space.size)) - self.members)

    def union(self, other: "Event") -> "Event":
        require_same_space(self, other)
        return Event(self.space, self.members | other.members)

    def intersection(self, other: "Event") -> "Event":
        require_same_space(self, other)
        return Event(self.space, self.members & other.members)

    def symmetric_difference(self, other: "Event") -> "Event":
        require_same_space(self, other)
        return Event(self.space, self.members ^ other.members)

    def issubset(self, other: "Event") -> bool:
        require_same_space(self, other)
        return self.members <= other.members


@dataclass(frozen=True)
class Act:
    """Total payoff assignment over a state space (currency units)."""

    space: StateSpace
    payoffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "payoffs", tuple(float(x) for x in self.payoffs))
        if len(self.payoffs) != self.space.size:
            raise ValueError("one payoff per state is required")
        if not all(np.isfinite(self.payoffs)):
            raise ValueError("payoffs must be finite")

    @classmethod
    def from_mapping(cls, space: StateSpace, payoff: Mapping[str, float]) -> "Act":
        missing = set(space.labels) - set(payoff)
        if missing:
            raise ValueError(f"payoff missing for states {sorted(missing)}")
        return cls(space, tuple(payoff[lb] for lb in space.labels))

    @classmethod
    def constant(cls, space: StateSpace, value: float) -> "Act":
        return cls(space, (float(value),) * space.size)

    @classmethod
    def binary(cls, event: Event, high: float, low: float) -> "Act":
        """The act paying `high` on the event and `low` elsewhere."""
        return cls(
            event.space,
            tuple(high if i in event.members else low for i in range(event.space.size)),
        )

    @classmethod
    def indicator(cls, event: Event) -> "Act":
        return cls.binary(event, 1.0, 0.0)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.asarray(self.payoffs, dtype=float)
        arr.setflags(write=False)
        return arr

    def map(self, fn: Callable) -> "Act":
        """Apply a (vectorizable) real function state-wise."""
        return Act(self.space, tuple(np.asarray(fn(self.array), dtype=float)))

    def __add__(self, other):
        if isinstance(other, Act):
            require_same_space(self, other)
            return Act(self.space, tuple(self.array + other.array))
        return Act(self.space, tuple(self.array + float(other)))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Act):
            require_same_space(self, other)
            return Act(self.space, tuple(self.array - other.array))
        return Act(self.space, tuple(self.array - float(other)))

    def __mul__(self, scalar: float) -> "Act":
        return Act(self.space, tuple(self.array * float(scalar)))

    __rmul__ = __mul__

    def min(self) -> float:
        return min(self.payoffs)

    def max(self) -> float:
        return max(self.payoffs)


@dataclass(frozen=True)
class ProbabilityMeasure:
    """Probability weights per state; zero-weight states are allowed."""

    space: StateSpace
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.weights) != self.space.size:
            raise ValueError("one weight per state is required")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if abs(sum(self.weights) - 1.0) > _SUM_TOL:
            raise ValueError("weights must sum to one")

    @classmethod
    def uniform(cls, space: StateSpace) -> "ProbabilityMeasure":
        return cls(space, (1.0 / space.size,) * space.size)

    @classmethod
    def from_mapping(cls, space: StateSpace, weight: Mapping[str, float]) -> "ProbabilityMeasure":
        missing = set(space.labels) - set(weight)
        if missing:
            raise ValueError(f"weight missing for states {sorted(missing)}")
        return cls(space, tuple(weight[lb] for lb in space.labels))

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.asarray(self.weights, dtype=float)
        arr.setflags(write=False)
        return arr

    def prob(self, event: Event) -> float:
        require_same_space(self, event)
        return self.prob_mask(event.mask)

    def prob_mask(self, mask: int) -> float:
        return float(sum(self.weights[i] for i in range(self.space.size) if mask >> i & 1))

    @property
    def null_mask(self) -> int:
        """Bitmask of states carrying exactly zero weight."""
        m = 0
        for i, w in enumerate(self.weights):
            if w == 0.0:
                m |= 1 << i
        return m

    def expectation(self, act: Act) -> float:
        require_same_space(self, act)
        return float(self.array @ act.array)


@dataclass(frozen=True)
class RiskPartition:
    """Partition of the state set; its block unions form the unambiguous algebra."""

    space: StateSpace
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        blocks = tuple(sorted((frozenset(b) for b in self.blocks), key=min))
        object.__setattr__(self, "blocks", blocks)
        if not blocks or any(not b for b in blocks):
            raise ValueError("blocks must be nonempty")
        seen: set[int] = set()
        for b in blocks:
            if seen & b:
                raise ValueError("blocks must be pairwise disjoint")
            seen |= b
        if seen != set(range(self.space.size)):
            raise ValueError("blocks must cover every state")

    @classmethod
    def from_labels(cls, space: StateSpace, groups) -> "RiskPartition":
        return cls(space, tuple(frozenset(space.index(lb) for lb in g) for g in groups))

    @classmethod
    def finest(cls, space: StateSpace) -> "RiskPartition":
        return cls(space, tuple(frozenset([i]) for i in range(space.size)))

    @property
    def block_masks(self) -> tuple[int, ...]:
        masks = []
        for b in self.blocks:
            m = 0
            for i in b:
                m |= 1 << i
            masks.append(m)
        return tuple(masks)

    def union_masks(self) -> Iterator[int]:
        """Bitmasks of all 2^k block unions (the generated algebra)."""
        masks = self.block_masks
        for choice in range(1 << len(masks)):
            m = 0
            for j, bm in enumerate(masks):
                if choice >> j & 1:
                    m |= bm
            yield m

    def contains_mask(self, mask: int) -> bool:
        """True iff the mask is a union of blocks."""
        for bm in self.block_masks:
            inter = mask & bm
            if inter != 0 and inter != bm:
                return False
        return True

    def contains(self, event: Event) -> bool:
        require_same_space(self, event)
        return self.contains_mask(event.mask)


@dataclass(frozen=True)
class Distribution:
    """Law of an act: strictly increasing support with matching probabilities."""

    support: tuple[float, ...]
    prob: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(float(v) for v in self.support))
        object.__setattr__(self, "prob", tuple(float(p) for p in self.prob))
        if len(self.support) != len(self.prob):
            raise ValueError("support and prob lengths differ")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise ValueError("support must be strictly increasing")
        if any(p < 0 for p in self.prob):
            raise ValueError("probabilities must be nonnegative")
        if abs(sum(self.prob) - 1.0) > _SUM_TOL:
            raise ValueError("probabilities must sum to one")


def is_measurable(act: Act, part: RiskPartition) -> bool:
    """True iff the act is constant on every block of the partition."""
    require_same_space(act, part)
    return all(len({act.payoffs[i] for i in b}) == 1 for b in part.blocks)


def distribution(act: Act, mu: ProbabilityMeasure) -> Distribution:
    """Law of the act under mu; zero-probability atoms are dropped."""
    require_same_space(act, mu)
    mass: dict[float, float] = {}
    for x, w in zip(act.payoffs, mu.weights):
        if w > 0.0:
            mass[x] = mass.get(x, 0.0) + w
    support = sorted(mass)
    return Distribution(tuple(support), tuple(mass[v] for v in support))


def _survival(payoffs: np.ndarray, weights: np.ndarray, x: float) -> float:
    return float(weights[payoffs > x].sum())


def fsd_geq(X: Act, Y: Act, mu: ProbabilityMeasure, tol: float = 1e-12) -> bool:
    """First-order stochastic dominance of X over Y under mu.

    Survival functions are step functions that can only change at payoff
    values, so comparing them at the merged payoff breakpoints is exact.
    """
    require_same_space(X, Y, mu)
    w = mu.array
    breakpoints = sorted(set(X.payoffs) | set(Y.payoffs))
    for t in breakpoints:
        if _survival(X.array, w, t) < _survival(Y.array, w, t) - tol:
            return False
    return True


def ssd_geq(X: Act, Y: Act, mu: ProbabilityMeasure, tol: float = 1e-12) -> bool:
    """Second-order (increasing-concave) stochastic dominance of X over Y.

    Equivalent to the lower-partial-moment test E[(t-X)+] <= E[(t-Y)+] at
    every threshold; both sides are piecewise linear in t with kinks only at
    payoff values, so the merged breakpoints decide the comparison.
    """
    require_same_space(X, Y, mu)
    w = mu.array
    for t in sorted(set(X.payoffs) | set(Y.payoffs)):
        shortfall_x = float(np.clip(t - X.array, 0.0, None) @ w)
        shortfall_y = float(np.clip(t - Y.array, 0.0, None) @ w)
        if shortfall_x > shortfall_y + tol:
            return False
    return True


def as_dominates(X: Act, Y: Act, mu: ProbabilityMeasure, strict: bool = False,
                 tol: float = 1e-12) -> bool:
    """Almost-sure dominance: mu(X >= Y) = 1, or mu(X > Y) = 1 when strict."""
    require_same_space(X, Y, mu)
    if strict:
        bad = X.array <= Y.array
    else:
        bad = X.array < Y.array
    return float(mu.array[bad].sum()) <= tol


def comonotonic(X: Act, Y: Act, tol: float = 1e-12) -> bool:
    """True iff the two acts never move in opposite directions across states."""
    require_same_space(X, Y)
    dx = X.array[:, None] - X.array[None, :]
    dy = Y.array[:, None] - Y.array[None, :]
    return bool((dx * dy >= -tol).all())
