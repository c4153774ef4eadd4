"""Seeded random generators for spaces, capacities, and models.

Supermodular capacities come from two constructions: nonnegative mass
spreading (assign nonnegative mass to event subsets and accumulate), and
convex distortions of conditional mixtures, plus convex combinations of
both. Conforming capacities are built block-wise so they agree with the
reference measure on the partition algebra by construction and ignore
reference-null states. Every structural claim is re-verified by the
exhaustive checkers before a sample is returned.
"""

from __future__ import annotations

import numpy as np

from .capacity import (
    Capacity,
    from_measure,
    is_risk_conforming,
    is_submodular,
    is_supermodular,
)
from .distortion import Distortion, Utility
from .models import CRDUModel
from .space import Act, ProbabilityMeasure, RiskPartition, StateSpace

_LABELS = "abcdefghijklmnop"


def space_of(n: int) -> StateSpace:
    return StateSpace(tuple(_LABELS[:n]))


def random_act(rng, space: StateSpace, lo: float = 0.0, hi: float = 1.0) -> Act:
    return Act(space, tuple(rng.uniform(lo, hi, space.size)))


def random_measure(rng, space: StateSpace, zeros: int = 0) -> ProbabilityMeasure:
    w = rng.uniform(0.2, 1.0, space.size)
    if zeros:
        idx = rng.choice(space.size, size=min(zeros, space.size - 1), replace=False)
        w[idx] = 0.0
    w = w / w.sum()
    return ProbabilityMeasure(space, tuple(w))


def random_partition(rng, space: StateSpace, n_blocks: int | None = None) -> RiskPartition:
    n = space.size
    if n_blocks is None:
        n_blocks = int(rng.integers(1, n + 1))
    n_blocks = max(1, min(n_blocks, n))
    assignment = list(range(n_blocks)) + [int(rng.integers(0, n_blocks))
                                          for _ in range(n - n_blocks)]
    rng.shuffle(assignment)
    blocks: dict[int, set[int]] = {}
    for state, b in enumerate(assignment):
        blocks.setdefault(b, set()).add(state)
    return RiskPartition(space, tuple(frozenset(b) for b in blocks.values()))


def random_capacity(rng, space: StateSpace) -> Capacity:
    """Arbitrary monotone capacity: uniform values pushed up to monotonicity."""
    n = space.size
    size = 1 << n
    table = rng.uniform(0.0, 1.0, size)
    table[0] = 0.0
    for mask in range(1, size):
        best = table[mask]
        for i in range(n):
            if mask >> i & 1:
                best = max(best, table[mask & ~(1 << i)])
        table[mask] = best
    table = table / table[-1]
    table[0] = 0.0
    table[-1] = 1.0
    return Capacity(space, tuple(table))


def random_pwl_distortion(rng, knots: int = 4, convex: bool | None = None,
                          concave: bool | None = None) -> Distortion:
    xs = np.concatenate([[0.0], np.sort(rng.uniform(0.05, 0.95, knots - 1)), [1.0]])
    slopes = np.sort(rng.uniform(0.1, 2.0, knots))
    if concave:
        slopes = slopes[::-1]
    elif not convex:
        rng.shuffle(slopes)
    ys = np.concatenate([[0.0], np.cumsum(slopes * np.diff(xs))])
    ys = ys / ys[-1]
    return Distortion.piecewise_linear(tuple(zip(xs, ys)))


def random_power_distortion(rng, lo: float = 0.5, hi: float = 2.0) -> Distortion:
    return Distortion.power(float(rng.uniform(lo, hi)))


def random_utility(rng, concave: bool | None = None) -> Utility:
    gamma_lo, gamma_hi = (0.4, 1.0) if concave else (0.4, 2.0)
    if concave is False:
        gamma_lo = 1.0
        gamma_hi = 2.5
    return Utility.power(float(rng.uniform(gamma_lo, gamma_hi)), lo=0.0, hi=16.0)


def _mass_spreading_supermodular(rng, space: StateSpace) -> Capacity:
    # Nonnegative mass on nonempty events; accumulating over subsets yields
    # a totally monotone (hence supermodular) normalized capacity.
    n = space.size
    size = 1 << n
    mass = rng.uniform(0.0, 1.0, size)
    mass[0] = 0.0
    mass = mass / mass.sum()
    table = np.zeros(size)
    for mask in range(1, size):
        sub = mask
        acc = 0.0
        while sub:
            acc += mass[sub]
            sub = (sub - 1) & mask
        table[mask] = acc
    table[-1] = 1.0
    return Capacity(space, tuple(table))


def _distorted_mixture_supermodular(rng, space: StateSpace) -> Capacity:
    # Convex combination of convex distortions of measures is supermodular.
    n = space.size
    size = 1 << n
    k = int(rng.integers(1, 4))
    weights = rng.uniform(0.2, 1.0, k)
    weights = weights / weights.sum()
    table = np.zeros(size)
    for w in weights:
        mu = random_measure(rng, space)
        g = Distortion.power(float(rng.uniform(1.0, 3.0)))
        table += w * np.asarray(g(from_measure(mu).array))
    table[0] = 0.0
    table[-1] = 1.0
    return Capacity(space, tuple(table))


def random_supermodular_capacity(rng, space: StateSpace) -> Capacity:
    nu = (_mass_spreading_supermodular(rng, space) if rng.uniform() < 0.5
          else _distorted_mixture_supermodular(rng, space))
    check = is_supermodular(nu)
    if not check:
        raise RuntimeError("sampler produced a non-supermodular capacity")
    return nu


def random_submodular_capacity(rng, space: StateSpace) -> Capacity:
    """Conjugate of a supermodular sample: A maps to 1 - nu(complement of A)."""
    nu = random_supermodular_capacity(rng, space)
    full = space.full_mask
    table = tuple(1.0 - nu.of_mask(full ^ mask) for mask in range(1 << space.size))
    out = Capacity(space, table)
    check = is_submodular(out)
    if not check:
        raise RuntimeError("sampler produced a non-submodular capacity")
    return out


def random_conforming_capacity(rng, part: RiskPartition, P: ProbabilityMeasure,
                               convex_within: bool | None = None) -> Capacity:
    """Capacity agreeing with P on the partition algebra and on null sets.

    Built as sum over blocks b of P(b) * psi_b(P(A and b)/P(b)) with a random
    distortion psi_b per block: additive across blocks, distorted within, so
    it is risk conforming and null-consistent by construction. Convex psi_b
    make the result supermodular.
    """
    space = part.space
    n = space.size
    masks = part.block_masks
    probs = [P.prob_mask(bm) for bm in masks]
    psis = []
    for bm in masks:
        if bin(bm).count("1") == 1:
            psis.append(Distortion.identity())
        elif convex_within is None:
            psis.append(random_pwl_distortion(rng))
        else:
            psis.append(random_pwl_distortion(rng, convex=convex_within,
                                              concave=not convex_within))
    table = np.zeros(1 << n)
    for mask in range(1 << n):
        acc = 0.0
        for bm, pb, psi in zip(masks, probs, psis):
            if pb > 0.0:
                acc += pb * psi(min(P.prob_mask(mask & bm) / pb, 1.0))
        table[mask] = acc
    table[0] = 0.0
    table[-1] = 1.0
    nu = Capacity(space, tuple(table))
    if not is_risk_conforming(nu, part, P):
        raise RuntimeError("sampler produced a non-conforming capacity")
    return nu


def dominated_conforming_capacity(rng, nu: Capacity, part: RiskPartition,
                                  P: ProbabilityMeasure) -> Capacity:
    """A conforming capacity set-wise below nu that still matches P on blocks."""
    space = part.space
    theta = float(rng.uniform(0.5, 3.0))
    masks = part.block_masks
    table = list(nu.table)
    for mask in range(1 << space.size):
        if part.contains_mask(mask):
            continue
        # Shrink off-algebra values toward zero while keeping monotonicity:
        # multiply by a power of the reference probability.
        table[mask] = nu.of_mask(mask) * (P.prob_mask(mask) ** theta)
    shrunk = np.array(table)
    # Re-impose monotonicity from below (shrinking can break it upward only
    # against algebra events, which stayed fixed).
    n = space.size
    for mask in range(1, 1 << n):
        for i in range(n):
            if mask >> i & 1:
                shrunk[mask] = max(shrunk[mask], shrunk[mask & ~(1 << i)])
    shrunk = np.minimum(shrunk, nu.array)
    out = Capacity(space, tuple(shrunk))
    if not is_risk_conforming(out, part, P):
        raise RuntimeError("shrunk capacity lost risk conformity")
    return out


def random_crdu_model(rng, space: StateSpace, part: RiskPartition | None = None,
                      P: ProbabilityMeasure | None = None,
                      supermodular: bool = False,
                      concave_utility: bool | None = None,
                      convex_distortion: bool | None = None) -> CRDUModel:
    if part is None:
        part = random_partition(rng, space)
    if P is None:
        P = random_measure(rng, space)
    nu = random_conforming_capacity(rng, part, P,
                                    convex_within=True if supermodular else None)
    u = random_utility(rng, concave=concave_utility)
    if convex_distortion is None:
        g = random_power_distortion(rng)
    else:
        g = random_power_distortion(rng, 1.0, 2.5) if convex_distortion \
            else random_power_distortion(rng, 0.4, 1.0)
    return CRDUModel(u, g, nu, part, P)


def dyadic_frame(rng, n: int = 4) -> tuple[StateSpace, RiskPartition, ProbabilityMeasure]:
    """Uniform reference on 2^k-style spaces with equal-probability blocks.

    Guarantees a probability-1/2 block union and equal-probability blocks,
    the structure the symmetry and mixture audits need.
    """
    if n not in (2, 4, 8):
        raise ValueError("dyadic frames need 2, 4, or 8 states")
    space = space_of(n)
    P = ProbabilityMeasure.uniform(space)
    if n == 2:
        part = RiskPartition.finest(space)
    else:
        half = n // 2
        if rng.uniform() < 0.5:
            blocks = tuple(frozenset([i]) for i in range(half)) + (
                frozenset(range(half, n)),)
        else:
            blocks = tuple(frozenset([2 * j, 2 * j + 1]) for j in range(half))
        part = RiskPartition(space, blocks)
    return space, part, P


def audit_friendly_crdu_model(rng, n: int = 4, **kwargs) -> CRDUModel:
    """A model whose frame supports every axiom audit (nothing skipped)."""
    space, part, P = dyadic_frame(rng, n)
    return random_crdu_model(rng, space, part=part, P=P, **kwargs)
