"""The core polytope of a capacity and the robust aggregation built on it.

The core is the set of probability measures dominating the capacity on
every event. Vertices are enumerated exactly by clipping the probability
simplex with one event constraint at a time; every candidate intersection
point is kept only if it is feasible and its tight constraints have full
rank, so the output is the exact vertex set without any LP dependency.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .capacity import Capacity, CheckResult, from_measure, is_supermodular
from .distortion import Distortion, Utility
from .space import Act, Event, ProbabilityMeasure, require_same_space

MAX_CORE_STATES = 8

_FEAS_TOL = 1e-10
_TIGHT_TOL = 1e-9
_DEDUP_DECIMALS = 9


@dataclass(frozen=True)
class CorePolytope:
    """Inequality system {mu(A) >= nu(A) for proper nonempty A; mu a measure}."""

    nu: Capacity

    @property
    def constraint_masks(self) -> tuple[int, ...]:
        full = self.nu.space.full_mask
        return tuple(m for m in range(1, full))

    @property
    def constraint_count(self) -> int:
        return len(self.constraint_masks)

    def rows(self) -> list[tuple[np.ndarray, float]]:
        n = self.nu.space.size
        out = []
        for mask in self.constraint_masks:
            a = np.array([(mask >> i) & 1 for i in range(n)], dtype=float)
            out.append((a, self.nu.of_mask(mask)))
        return out


def core_contains(nu: Capacity, mu: ProbabilityMeasure, tol: float = _FEAS_TOL) -> bool:
    """Exhaustive check that mu dominates nu on every event."""
    require_same_space(nu, mu)
    additive = from_measure(mu)
    return bool((additive.array >= nu.array - tol).all())


def _dedupe_rows(points: np.ndarray) -> np.ndarray:
    if len(points) == 0:
        return points
    keys = np.round(points, _DEDUP_DECIMALS)
    _, idx = np.unique(keys, axis=0, return_index=True)
    return points[np.sort(idx)]


def _clip_simplex(n: int, rows: list[tuple[np.ndarray, float]]) -> np.ndarray:
    """Exact vertices of the simplex intersected with the given halfspaces.

    Each clip keeps the satisfying vertices and adds every crossing point of
    a (satisfying, violating) pair that is feasible and whose tight
    constraints have full rank; that rank test is what separates genuine
    vertices from interior points of faces.
    """
    V = np.eye(n)
    # Tighter constraints first keeps intermediate vertex sets small.
    ordered = sorted(rows, key=lambda r: -r[1])
    A_proc = np.zeros((0, n))
    b_proc = np.zeros(0)
    for a, b in ordered:
        A_proc = np.vstack([A_proc, a])
        b_proc = np.append(b_proc, b)
        vals = V @ a - b
        keep = vals >= -1e-12
        if keep.all():
            continue
        if not keep.any():
            return np.zeros((0, n))
        Vp, vp = V[keep], vals[keep]
        Vm, vm = V[~keep], vals[~keep]
        T = vp[:, None] / (vp[:, None] - vm[None, :])
        C = (Vp[:, None, :] + T[..., None] * (Vm[None, :, :] - Vp[:, None, :]))
        C = _dedupe_rows(C.reshape(-1, n))
        feas = (C >= -_FEAS_TOL).all(axis=1)
        feas &= (C @ A_proc.T >= b_proc - _FEAS_TOL).all(axis=1)
        C = C[feas]
        new_rows = []
        if len(C):
            tight_ineq = np.abs(C @ A_proc.T - b_proc) <= _TIGHT_TOL
            tight_zero = C <= _TIGHT_TOL
            eye = np.eye(n)
            ones = np.ones((1, n))
            pattern_rank: dict[bytes, bool] = {}
            for ci in range(len(C)):
                pat = tight_ineq[ci].tobytes() + tight_zero[ci].tobytes()
                ok = pattern_rank.get(pat)
                if ok is None:
                    mat = np.vstack([ones, A_proc[tight_ineq[ci]], eye[tight_zero[ci]]])
                    ok = np.linalg.matrix_rank(mat) == n
                    pattern_rank[pat] = ok
                if ok:
                    new_rows.append(C[ci])
        V = _dedupe_rows(np.vstack([Vp] + ([np.array(new_rows)] if new_rows else [])))
    return V


def _marginal_vertices(nu: Capacity) -> np.ndarray:
    # Supermodular case: the core is the convex hull of the marginal vectors,
    # and every marginal vector is a vertex, so enumerating permutations is
    # both exact and far cheaper than clipping.
    from itertools import permutations

    n = nu.space.size
    table = nu.table
    out: dict[tuple, np.ndarray] = {}
    for perm in permutations(range(n)):
        weights = np.zeros(n)
        mask = 0
        prev = 0.0
        for i in perm:
            mask |= 1 << i
            cur = table[mask]
            weights[i] = max(cur - prev, 0.0)
            prev = cur
        out.setdefault(tuple(np.round(weights, _DEDUP_DECIMALS)), weights)
    return np.array(list(out.values()))


# Vertex sets of 8-state convex capacities run to 8! entries, so keep the
# cache small.
@lru_cache(maxsize=32)
def _vertex_tuples(nu: Capacity) -> tuple[tuple[float, ...], ...]:
    n = nu.space.size
    if n > MAX_CORE_STATES:
        raise ValueError(f"core enumeration supports at most {MAX_CORE_STATES} states")
    if is_supermodular(nu):
        V = _marginal_vertices(nu)
    else:
        rows = [r for r in CorePolytope(nu).rows() if r[1] > 1e-15]
        V = _clip_simplex(n, rows)
    out: dict[tuple, tuple[float, ...]] = {}
    for v in V:
        w = np.clip(v, 0.0, None)
        w = w / w.sum()
        key = tuple(np.round(w, _DEDUP_DECIMALS))
        out.setdefault(key, tuple(float(x) for x in w))
    return tuple(out[k] for k in sorted(out))


def core_vertices(nu: Capacity) -> list[ProbabilityMeasure]:
    """All vertices of the core, canonically ordered; empty iff the core is empty."""
    return [ProbabilityMeasure(nu.space, v) for v in _vertex_tuples(nu)]


def marginal_vector(nu: Capacity, perm) -> ProbabilityMeasure:
    """Measure giving each state its capacity increment along the permutation."""
    n = nu.space.size
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of the state indices")
    weights = [0.0] * n
    mask = 0
    prev = 0.0
    for i in perm:
        mask |= 1 << i
        cur = nu.of_mask(mask)
        weights[i] = max(cur - prev, 0.0)
        prev = cur
    total = sum(weights)
    weights = [w / total for w in weights]
    return ProbabilityMeasure(nu.space, tuple(weights))


def is_balanced(nu: Capacity) -> CheckResult:
    """Whether the core is nonempty."""
    return CheckResult(len(_vertex_tuples(nu)) > 0)


def is_exact(nu: Capacity, tol: float = _TIGHT_TOL) -> CheckResult:
    """Whether every event's value is attained as a core minimum.

    An empty core counts as not exact (there is nothing to attain the
    minimum), with no witness.
    """
    vertices = _vertex_tuples(nu)
    if not vertices:
        return CheckResult(False)
    n = nu.space.size
    V = np.array(vertices)
    masks = np.arange(1 << n)
    indicator = np.zeros((1 << n, n))
    for i in range(n):
        indicator[:, i] = (masks >> i) & 1
    mins = (V @ indicator.T).min(axis=0)
    gap = mins - nu.array
    worst = int(np.argmax(gap))
    if gap[worst] > tol:
        return CheckResult(False, nu.space.event_from_mask(worst))
    return CheckResult(True)


@dataclass(frozen=True)
class RobustValue:
    """Minimum found over core candidates, with an exactness flag.

    `exact` is True when the candidate minimum provably equals the minimum
    over the whole core (supermodular capacity, or affine distortion making
    the objective linear); otherwise the value is a certified upper bound.
    """

    value: float
    exact: bool
    minimizer: ProbabilityMeasure


def _candidate_values(u: Utility, g: Distortion, X: Act,
                      candidates: list[ProbabilityMeasure]) -> np.ndarray:
    n = X.space.size
    order = sorted(range(n), key=lambda i: (-X.payoffs[i], i))
    utils = np.asarray(u(X.array[order]), dtype=float)
    W = np.array([[c.weights[i] for i in order] for c in candidates])
    levels = np.clip(np.cumsum(W, axis=1), 0.0, 1.0)
    distorted = np.asarray(g(levels), dtype=float)
    increments = np.diff(distorted, axis=1, prepend=0.0)
    return increments @ utils


def robust_value(u: Utility, g: Distortion, nu: Capacity, X: Act) -> RobustValue:
    """Worst-case rank-dependent value over the core of the capacity.

    Evaluates the distorted expectation of u(X) at every core vertex plus
    the marginal vector of X's descending order (the chain minimizer when
    the capacity is supermodular) and returns the smallest value found.
    """
    require_same_space(nu, X)
    candidates = core_vertices(nu)
    if not candidates:
        raise ValueError("empty core: robust aggregation undefined")
    order = sorted(range(X.space.size), key=lambda i: (-X.payoffs[i], i))
    chain_mv = marginal_vector(nu, order)
    if core_contains(nu, chain_mv):
        candidates = candidates + [chain_mv]
    values = _candidate_values(u, g, X, candidates)
    best = int(np.argmin(values))
    exact = bool(is_supermodular(nu)) or (g.is_convex() and g.is_concave())
    return RobustValue(float(values[best]), exact, candidates[best])


def chain_attainable(nu: Capacity, chain: list[Event]) -> bool:
    """Whether some core element matches the capacity on every chain event."""
    if not chain:
        return len(_vertex_tuples(nu)) > 0
    space = require_same_space(nu, *chain)
    ordered = sorted(chain, key=lambda e: len(e.members))
    for small, big in zip(ordered, ordered[1:]):
        if not small.issubset(big):
            raise ValueError("chain events must be nested")
    n = space.size
    if n > MAX_CORE_STATES:
        raise ValueError(f"core enumeration supports at most {MAX_CORE_STATES} states")
    rows = [r for r in CorePolytope(nu).rows() if r[1] > 1e-15]
    for ev in ordered:
        mask = ev.mask
        if mask in (0, space.full_mask):
            continue
        a = np.array([(mask >> i) & 1 for i in range(n)], dtype=float)
        b = nu.of_mask(mask)
        rows.append((a, b))
        rows.append((-a, -b))
    return len(_clip_simplex(n, rows)) > 0
