"""The Choquet integral of an act against a capacity.

The production path is the rank-ordered sum over upper-level sets; the
Riemann routine integrates the survival function on a dense grid and exists
only as an independent cross-check, so the two never share code.
"""

from __future__ import annotations

import numpy as np

from .capacity import Capacity
from .space import Act, comonotonic, require_same_space


def choquet(X: Act, nu: Capacity) -> float:
    """Rank-ordered sum: payoff levels weighted by capacity increments.

    States are processed in descending payoff order with ties broken by
    state index; the result does not depend on the tie-break.
    """
    require_same_space(X, nu)
    order = sorted(range(X.space.size), key=lambda i: (-X.payoffs[i], i))
    total = 0.0
    prev = 0.0
    mask = 0
    for i in order:
        mask |= 1 << i
        cur = nu.of_mask(mask)
        total += X.payoffs[i] * (cur - prev)
        prev = cur
    return total


def choquet_riemann_oracle(X: Act, nu: Capacity, grid: int = 1_000_000) -> float:
    """Step integration of the survival function; cross-check for `choquet`.

    Integrates nu(X > x) on x > 0 and nu(X > x) - 1 on x <= 0 over midpoints
    of `grid` subintervals of [min X, max X], plus the exact constant tails
    outside that range. The absolute error is at most (max X - min X)/grid.
    """
    if grid < 10_000:
        raise ValueError("grid must be at least 10^4")
    require_same_space(X, nu)
    lo, hi = X.min(), X.max()
    total = 0.0
    if lo > 0:
        total += lo  # survival is identically 1 on [0, min X]
    if hi < 0:
        total += hi  # survival is identically 0 on [max X, 0]
    if hi > lo:
        step = (hi - lo) / grid
        xs = lo + (np.arange(grid) + 0.5) * step
        masks = np.zeros(grid, dtype=np.int64)
        for i, p in enumerate(X.payoffs):
            masks |= (xs < p).astype(np.int64) << i
        survival = nu.array[masks]
        integrand = np.where(xs > 0, survival, survival - 1.0)
        total += float(integrand.sum()) * step
    return total


def comonotone_additivity_check(X: Act, Y: Act, nu: Capacity, tol: float = 1e-9) -> bool:
    """Whether the integral is additive across the given comonotone pair."""
    require_same_space(X, Y, nu)
    if not comonotonic(X, Y):
        raise ValueError("acts are not comonotonic")
    gap = choquet(X + Y, nu) - choquet(X, nu) - choquet(Y, nu)
    return abs(gap) <= tol
