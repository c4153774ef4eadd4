"""Non-additive capacities on finite spaces and their structural checkers.

Capacities are stored as full 2^n tables indexed by state bitmask, which
keeps every checker an exact, exhaustive quantifier over events. Checkers
return a :class:`CheckResult` that is truthy on success and carries a
witness (a violating event or event pair) on failure, so audit reports can
show certificates instead of bare booleans.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Mapping

import numpy as np

from .distortion import Distortion
from .space import (
    Event,
    ProbabilityMeasure,
    RiskPartition,
    StateSpace,
    require_same_space,
)

EVENT_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """Boolean verdict plus a counterexample certificate on failure."""

    ok: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Capacity:
    """Monotone set function with value 0 on the empty set and 1 on the space."""

    space: StateSpace
    table: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(float(v) for v in self.table))
        n = self.space.size
        if len(self.table) != 1 << n:
            raise ValueError("capacity table must cover all 2^n events")
        if abs(self.table[0]) > EVENT_TOL:
            raise ValueError("capacity not grounded: value on the empty set must be 0")
        if abs(self.table[-1] - 1.0) > EVENT_TOL:
            raise ValueError("capacity not normalized: value on the full space must be 1")
        arr = np.asarray(self.table)
        masks = np.arange(1 << n)
        for i in range(n):
            bit = 1 << i
            if np.any(arr[masks | bit] < arr[masks] - EVENT_TOL):
                bad = int(masks[arr[masks | bit] < arr[masks] - EVENT_TOL][0])
                raise ValueError(
                    "capacity not monotone: adding state "
                    f"{self.space.labels[i]!r} to mask {bad} decreases the value"
                )

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.asarray(self.table, dtype=float)
        arr.setflags(write=False)
        return arr

    def of_mask(self, mask: int) -> float:
        return self.table[mask]

    def __call__(self, event: Event) -> float:
        require_same_space(self, event)
        return self.table[event.mask]

    @classmethod
    def from_values(cls, space: StateSpace, values: Mapping[frozenset[int], float]) -> "Capacity":
        """Build from a mapping of index sets; the empty set and full set default to 0 and 1."""
        table = [0.0] * (1 << space.size)
        table[-1] = 1.0
        seen = {0, space.full_mask}
        for members, v in values.items():
            mask = 0
            for i in members:
                mask |= 1 << i
            table[mask] = float(v)
            seen.add(mask)
        missing = set(range(1 << space.size)) - seen
        if missing:
            raise ValueError(f"incomplete capacity table: {len(missing)} events missing")
        return cls(space, tuple(table))


def from_measure(mu: ProbabilityMeasure) -> Capacity:
    """The additive capacity of a probability measure."""
    n = mu.space.size
    table = np.zeros(1 << n)
    masks = np.arange(1 << n)
    for i, w in enumerate(mu.weights):
        table[(masks >> i & 1) == 1] += w
    table[0] = 0.0
    table[-1] = 1.0
    return Capacity(mu.space, tuple(table))


def _pair_scan(nu: Capacity, sign: float, tol: float) -> CheckResult:
    # sign +1 checks nu(A)+nu(B) <= nu(A|B)+nu(A&B); -1 checks the reverse.
    n = nu.space.size
    if n > 16:
        raise ValueError("space too large for exhaustive pair checking")
    v = nu.array
    masks = np.arange(1 << n, dtype=np.int64)
    for a in range(1 << n):
        bs = masks[a:]
        gap = sign * (v[a | bs] + v[a & bs] - v[a] - v[bs])
        i = int(np.argmin(gap))
        if gap[i] < -tol:
            return CheckResult(
                False,
                (nu.space.event_from_mask(a), nu.space.event_from_mask(int(bs[i]))),
            )
    return CheckResult(True)


def is_supermodular(nu: Capacity, tol: float = EVENT_TOL) -> CheckResult:
    """Exhaustive test of nu(A)+nu(B) <= nu(A|B)+nu(A&B) over all event pairs."""
    return _pair_scan(nu, +1.0, tol)


def is_submodular(nu: Capacity, tol: float = EVENT_TOL) -> CheckResult:
    """Exhaustive test of nu(A)+nu(B) >= nu(A|B)+nu(A&B) over all event pairs."""
    return _pair_scan(nu, -1.0, tol)


def is_additive(nu: Capacity, tol: float = EVENT_TOL) -> CheckResult:
    """True iff every event's value is the sum of its singletons' values."""
    n = nu.space.size
    masks = np.arange(1 << n)
    additive = np.zeros(1 << n)
    for i in range(n):
        additive[(masks >> i & 1) == 1] += nu.table[1 << i]
    gap = np.abs(nu.array - additive)
    worst = int(np.argmax(gap))
    if gap[worst] > tol:
        return CheckResult(False, nu.space.event_from_mask(worst))
    return CheckResult(True)


def is_risk_conforming(nu: Capacity, part: RiskPartition, P: ProbabilityMeasure,
                       tol: float = EVENT_TOL) -> CheckResult:
    """True iff nu agrees with P on every union of partition blocks."""
    require_same_space(nu, part, P)
    for mask in part.union_masks():
        if abs(nu.of_mask(mask) - P.prob_mask(mask)) > tol:
            return CheckResult(False, nu.space.event_from_mask(mask))
    return CheckResult(True)


def is_P_consistent(nu: Capacity, P: ProbabilityMeasure, tol: float = EVENT_TOL) -> CheckResult:
    """True iff nu is unchanged by adding or removing P-null states.

    By monotonicity it suffices that nu(A minus nulls) = nu(A plus nulls)
    for every event A; all intermediate modifications are then pinned.
    """
    require_same_space(nu, P)
    null = P.null_mask
    if null == 0:
        return CheckResult(True)
    for mask in range(1 << nu.space.size):
        lo_mask = mask & ~null
        hi_mask = mask | null
        if nu.of_mask(hi_mask) - nu.of_mask(lo_mask) > tol:
            return CheckResult(
                False,
                (nu.space.event_from_mask(lo_mask), nu.space.event_from_mask(hi_mask)),
            )
    return CheckResult(True)


def dominates_setwise(nu1: Capacity, nu2: Capacity, tol: float = EVENT_TOL) -> CheckResult:
    """True iff nu1(A) >= nu2(A) for every event A."""
    require_same_space(nu1, nu2)
    gap = nu1.array - nu2.array
    worst = int(np.argmin(gap))
    if gap[worst] < -tol:
        return CheckResult(False, nu1.space.event_from_mask(worst))
    return CheckResult(True)


def compose(g: Distortion, nu: Capacity) -> Capacity:
    """Event-wise distortion g(nu(A)); monotonicity is preserved."""
    return Capacity(nu.space, tuple(g(nu.array)))


def construct_counterexample(
    g_blocks: int,
    h_blocks: int,
    P: ProbabilityMeasure,
    h: Distortion,
) -> tuple[Capacity, RiskPartition, RiskPartition]:
    """Capacity on a product space that favors diversification but is unbalanced.

    States are laid out row-major as (i, j), i < g_blocks indexing the
    unambiguous coordinate and j < h_blocks the independent one. With g the
    inverse of the strictly concave h, the returned capacity is
    h(sum over second-coordinate blocks b of P(b) * g(P(A | b))). It agrees
    with P on the first coordinate's algebra, equals h(P(A)) on the second
    coordinate's algebra, sits between P(A) and h(P(A)) everywhere, and its
    g-composition is supermodular.

    Returns the capacity together with both coordinate partitions.
    """
    if g_blocks < 1 or h_blocks < 1:
        raise ValueError("both coordinate sizes must be positive")
    n = g_blocks * h_blocks
    if P.space.size != n:
        raise ValueError("measure must live on the product space")
    if not h.is_strictly_concave():
        raise ValueError("h must be strictly concave")
    g = h.inverse_distortion()

    space = P.space
    g_part = RiskPartition(
        space,
        tuple(frozenset(i * h_blocks + j for j in range(h_blocks)) for i in range(g_blocks)),
    )
    h_part = RiskPartition(
        space,
        tuple(frozenset(i * h_blocks + j for i in range(g_blocks)) for j in range(h_blocks)),
    )

    # Independence of the two coordinates under P.
    row = [sum(P.weights[i * h_blocks + j] for j in range(h_blocks)) for i in range(g_blocks)]
    col = [sum(P.weights[i * h_blocks + j] for i in range(g_blocks)) for j in range(h_blocks)]
    for i in range(g_blocks):
        for j in range(h_blocks):
            if abs(P.weights[i * h_blocks + j] - row[i] * col[j]) > 1e-9:
                raise ValueError("coordinates are not independent under P")

    h_masks = h_part.block_masks
    block_prob = [P.prob_mask(m) for m in h_masks]
    table = np.zeros(1 << n)
    for mask in range(1 << n):
        acc = 0.0
        for bm, pb in zip(h_masks, block_prob):
            if pb > 0.0:
                acc += pb * g(P.prob_mask(mask & bm) / pb)
        table[mask] = h(min(acc, 1.0))
    table[0] = 0.0
    table[-1] = 1.0
    return Capacity(space, tuple(table)), g_part, h_part
