"""Randomized verification suites for the toolkit's structural guarantees.

Each suite generates instances from the documented samplers, checks a
representation-level equivalence or construction guarantee, and reports a
pass count plus the first failures. Suites are deterministic given the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacity import (
    Capacity,
    compose,
    construct_counterexample,
    is_risk_conforming,
    is_submodular,
    is_supermodular,
)
from .choquet import choquet
from .core import chain_attainable, is_balanced, robust_value
from .distortion import Distortion, Utility
from .models import (
    CRDUModel,
    _shift_to_indifference,
    attitude_report,
    derive_distortion_family,
    family_representation_value,
    more_ambiguity_averse,
)
from .sampling import (
    dominated_conforming_capacity,
    random_act,
    random_conforming_capacity,
    random_measure,
    random_partition,
    random_power_distortion,
    random_pwl_distortion,
    random_submodular_capacity,
    random_supermodular_capacity,
    random_utility,
    space_of,
)
from .space import Act, ProbabilityMeasure


@dataclass(frozen=True)
class VerifyResult:
    theorem: str
    trials: int
    passed: int
    failures: tuple[str, ...] = ()
    details: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def lines(self) -> list[str]:
        out = [f"{self.theorem}: {self.passed}/{self.trials} trials passed"]
        out.extend(f"  {d}" for d in self.details)
        if self.failures:
            out.append(f"  first failure: {self.failures[0]}")
        return out


def _run_trials(theorem: str, trials: int, seed: int, one_trial) -> VerifyResult:
    passed = 0
    failures: list[str] = []
    details: list[str] = []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        try:
            note = one_trial(rng, t)
            passed += 1
            if note and len(details) < 3:
                details.append(note)
        except AssertionError as exc:
            if len(failures) < 5:
                failures.append(f"trial {t}: {exc}")
    return VerifyResult(theorem, trials, passed, tuple(failures), tuple(details))


# ---------------------------------------------------------------------------
# Robust aggregation (worst case over the core)


def _balanced_nonsupermodular(rng) -> Capacity:
    # Three states with two heavy pair events: balanced (the core is the box
    # mu2 <= 1-c, mu3 <= 1-c) but not supermodular, and no core element can
    # match the capacity on the chain {first state} within {first two}.
    space = space_of(3)
    c = float(rng.uniform(0.55, 0.95))
    d = float(rng.uniform(0.0, 2.0 * (1.0 - c)))
    s1 = float(rng.uniform(0.0, 0.5 * (2.0 * c - 1.0)))
    return Capacity.from_values(space, {
        frozenset([0]): s1, frozenset([1]): 0.0, frozenset([2]): 0.0,
        frozenset([0, 1]): c, frozenset([0, 2]): c, frozenset([1, 2]): d,
    })


def _unattainable_nested_pair(nu: Capacity):
    n = nu.space.size
    for big in range(1, 1 << n):
        sub = (big - 1) & big
        while sub:
            small_ev = nu.space.event_from_mask(sub)
            big_ev = nu.space.event_from_mask(big)
            if not chain_attainable(nu, [small_ev, big_ev]):
                return small_ev, big_ev
            sub = (sub - 1) & big
    return None


def verify_maxmin(trials: int = 100, seed: int = 42) -> VerifyResult:
    """Supermodular beliefs make the core-worst-case match the direct value.

    Forward direction on generated supermodular capacities each trial; every
    tenth trial also exercises the converse on a balanced non-supermodular
    capacity, where a two-step act over an unattainable chain exhibits a
    strict gap.
    """

    def one_trial(rng, t):
        n = int(rng.integers(2, 6))
        space = space_of(n)
        nu = random_supermodular_capacity(rng, space)
        u = random_utility(rng)
        g = random_power_distortion(rng)
        for _ in range(10):
            X = random_act(rng, space)
            direct = choquet(X.map(u), compose(g, nu))
            robust = robust_value(u, g, nu, X)
            assert robust.exact, "supermodular capacity must be flagged exact"
            assert abs(robust.value - direct) <= 1e-7, (
                f"robust {robust.value} vs direct {direct}")

        if t % 10 == 0:
            bad = _balanced_nonsupermodular(rng)
            assert is_balanced(bad), "constructed capacity must be balanced"
            assert not is_supermodular(bad), "constructed capacity must not be supermodular"
            pair = _unattainable_nested_pair(bad)
            assert pair is not None, "an unattainable chain must exist"
            lo_ev, hi_ev = pair
            payoffs = [0.0] * bad.space.size
            for i in hi_ev.members:
                payoffs[i] = 1.0
            for i in lo_ev.members:
                payoffs[i] = 2.0
            X2 = Act(bad.space, tuple(payoffs))
            u2 = Utility.identity(lo=0.0, hi=4.0)
            g2 = random_power_distortion(rng)
            direct = choquet(X2.map(u2), compose(g2, bad))
            robust = robust_value(u2, g2, bad, X2)
            assert robust.value > direct + 1e-9, (
                f"expected a strict gap, got {robust.value} vs {direct}")
        return None

    return _run_trials("maxmin", trials, seed, one_trial)


# ---------------------------------------------------------------------------
# Diversification from concavity, convexity, and supermodularity


def verify_main(trials: int = 100, seed: int = 7) -> VerifyResult:
    """Concave utility + convex distortion + supermodular belief imply the
    diversification flag, and mixing indifferent acts never hurts."""

    def one_trial(rng, t):
        n = int(rng.integers(3, 5))
        space = space_of(n)
        part = random_partition(rng, space)
        P = random_measure(rng, space)
        nu = random_conforming_capacity(rng, part, P, convex_within=True)
        u = random_utility(rng, concave=True)
        g = random_power_distortion(rng, 1.0, 2.5)
        m = CRDUModel(u, g, nu, part, P)
        report = attitude_report(m)
        assert report.diversifying.ok, "diversification flag must hold"
        assert report.strong_risk_averse.ok, "risk-aversion flag must hold"
        lo, hi = 0.1, 0.9
        width = (hi - lo) / 3.0
        for _ in range(3):
            X = random_act(rng, space, lo + width, hi - width)
            Y0 = random_act(rng, space, lo + width, hi - width)
            Y = _shift_to_indifference(m, Y0, m.value(X), width)
            for lam in (0.25, 0.5, 0.75):
                mix = lam * X + (1.0 - lam) * Y
                assert m.value(mix) >= m.value(X) - 1e-9, (
                    f"mixture dropped below the indifference level at lam={lam}")
        return None

    return _run_trials("main", trials, seed, one_trial)


# ---------------------------------------------------------------------------
# Comparative ambiguity attitudes


def verify_comam(trials: int = 50, seed: int = 11, pairs_per_trial: int = 20) -> VerifyResult:
    """Set-wise belief dominance is equivalent to comparative ambiguity aversion.

    Construct dominated pairs sharing the risk components, confirm the binary
    brute-force check and the sampled risky-vs-general implication, and also
    confirm that a deliberately non-dominated pair yields a witness event.
    """

    def one_trial(rng, t):
        n = int(rng.integers(3, 6))
        space = space_of(n)
        part = random_partition(rng, space, n_blocks=max(1, n - 2))
        P = random_measure(rng, space)
        nu1 = random_conforming_capacity(rng, part, P)
        nu2 = dominated_conforming_capacity(rng, nu1, part, P)
        u = random_utility(rng)
        g = random_power_distortion(rng)
        m1 = CRDUModel(u, g, nu1, part, P)
        m2 = CRDUModel(u, g, nu2, part, P)
        assert more_ambiguity_averse(m1, m2), "constructed dominance must hold"

        masks = part.block_masks
        for _ in range(pairs_per_trial):
            vals = rng.uniform(0.0, 1.0, len(masks))
            payoffs = [0.0] * n
            for bm, v in zip(masks, vals):
                for i in range(n):
                    if bm >> i & 1:
                        payoffs[i] = v
            X = Act(space, tuple(payoffs))
            Y = random_act(rng, space)
            if m1.value(X) >= m1.value(Y) - 1e-12:
                assert m2.value(X) >= m2.value(Y) - 1e-9, (
                    "risky act lost its preferred status under the more "
                    "ambiguity-averse model")
            if m1.value(X) > m1.value(Y) + 1e-9:
                assert m2.value(X) > m2.value(Y) - 1e-12, (
                    "strict preference was not preserved")

        gap = float((nu1.array - nu2.array).max())
        if gap > 1e-9:
            swapped = more_ambiguity_averse(m2, m1)
            assert not swapped, "reversed comparison should fail"
            assert swapped.witness is not None, "reversed comparison needs a witness"
        return None

    return _run_trials("comam", trials, seed, one_trial)


# ---------------------------------------------------------------------------
# Act-dependent distortion families


def _comonotone_partner(rng, X: Act) -> Act:
    # A nondecreasing (possibly flat) transform of X is comonotone with it.
    distinct = sorted(set(X.payoffs))
    jumps = rng.uniform(0.0, 1.0, len(distinct))
    jumps[0] = rng.uniform(0.0, 0.2)
    levels = np.cumsum(jumps)
    mapping = {v: float(levels[k]) for k, v in enumerate(distinct)}
    return Act(X.space, tuple(mapping[v] for v in X.payoffs))


def verify_family(trials: int = 50, seed: int = 23, acts_per_trial: int = 100) -> VerifyResult:
    """The act-dependent distortion representation reproduces the model value,
    is monotone across nested bets, and agrees across comonotone acts."""

    def one_trial(rng, t):
        n = int(rng.integers(3, 6))
        space = space_of(n)
        part = random_partition(rng, space)
        P = random_measure(rng, space, zeros=int(rng.integers(0, 2)))
        nu = random_conforming_capacity(rng, part, P)
        u = random_utility(rng)
        g = random_power_distortion(rng)
        m = CRDUModel(u, g, nu, part, P)

        for _ in range(acts_per_trial):
            X = random_act(rng, space)
            direct = m.value(X)
            via_family = family_representation_value(m, X)
            assert abs(direct - via_family) <= 1e-9, (
                f"family value {via_family} vs direct {direct}")

        # (a) nested bets: interior level of the smaller event never exceeds
        # the larger one's. The interior constant of a bet's distortion is the
        # distorted belief of the event.
        gv = np.asarray(g(nu.array))
        for mask in range(1 << n):
            sub = (mask - 1) & mask
            while sub:
                assert gv[sub] <= gv[mask] + 1e-12, "nested bets out of order"
                sub = (sub - 1) & mask

        # (c) comonotone acts share distortion values on shared levels.
        for _ in range(10):
            X = random_act(rng, space)
            Y = _comonotone_partner(rng, X)
            ex = derive_distortion_family(m, X)
            ey = derive_distortion_family(m, Y)
            for lv, val in zip(ex.levels, ex.values):
                for lw, wal in zip(ey.levels, ey.values):
                    if abs(lv - lw) <= 1e-12:
                        assert abs(val - wal) <= 1e-9, (
                            f"comonotone acts disagree at level {lv}")
        return None

    return _run_trials("family", trials, seed, one_trial)


# ---------------------------------------------------------------------------
# Shape-preserving composition on the event lattice


def verify_latt(trials: int = 200, seed: int = 29) -> VerifyResult:
    """Increasing convex maps of supermodular set functions stay supermodular;
    increasing concave maps of submodular ones stay submodular."""

    def one_trial(rng, t):
        n = int(rng.integers(3, 6))
        space = space_of(n)
        phi = random_supermodular_capacity(rng, space)
        f = (Distortion.power(float(rng.uniform(1.0, 3.0)))
             if rng.uniform() < 0.5 else random_pwl_distortion(rng, convex=True))
        assert is_supermodular(compose(f, phi)), "convex map lost supermodularity"

        psi = random_submodular_capacity(rng, space)
        f2 = (Distortion.power(float(rng.uniform(0.3, 1.0)))
              if rng.uniform() < 0.5 else random_pwl_distortion(rng, concave=True))
        assert is_submodular(compose(f2, psi)), "concave map lost submodularity"
        return None

    return _run_trials("latt", trials, seed, one_trial)


# ---------------------------------------------------------------------------
# Counterexample construction: diversification without balancedness


def counterexample_suite(g_blocks: int, h_blocks: int, h: Distortion,
                         P: ProbabilityMeasure | None = None) -> tuple[list[str], float]:
    """Run all construction guarantees; raises on failure.

    Returns the report lines and the exact value of nu(A0) + nu(A0 complement)
    for the first independent-coordinate block A0.
    """
    if P is None:
        n = g_blocks * h_blocks
        P = ProbabilityMeasure.uniform(space_of(n))
    nu, g_part, h_part = construct_counterexample(g_blocks, h_blocks, P, h)
    g = h.inverse_distortion()
    lines = []

    assert is_risk_conforming(nu, g_part, P), "capacity must conform on the risk algebra"
    lines.append("risk conformity on the unambiguous algebra: ok")

    hp = np.array([float(h(P.prob_mask(mask))) for mask in h_part.union_masks()])
    vals = np.array([nu.of_mask(mask) for mask in h_part.union_masks()])
    assert np.max(np.abs(hp - vals)) <= 1e-12, "independent-coordinate algebra mismatch"
    lines.append("distorted reference on the independent algebra: ok")

    pa = np.array([P.prob_mask(mask) for mask in range(1 << P.space.size)])
    hpa = np.asarray(h(pa))
    assert bool((hpa >= nu.array - 1e-12).all()), "upper sandwich bound violated"
    assert bool((nu.array >= pa - 1e-12).all()), "lower sandwich bound violated"
    lines.append("sandwich between reference and its concave distortion: ok")

    assert is_supermodular(compose(g, nu)), "inverse distortion must restore supermodularity"
    lines.append("supermodular after inverse distortion: ok")

    a0 = h_part.block_masks[0]
    total = nu.of_mask(a0) + nu.of_mask(P.space.full_mask ^ a0)
    if 0.0 < P.prob_mask(a0) < 1.0:
        assert total > 1.0 + 1e-9, "complementary bets must overshoot one"
        if P.space.size <= 8:
            assert not is_balanced(nu), "capacity must have an empty core"
    lines.append(f"nu(A0)+nu(A0c)={total:.6f}")
    return lines, total


def verify_counterexample(trials: int = 1, seed: int = 5) -> VerifyResult:
    """Construction guarantees, canonical 2x2 case first, then random shapes."""

    def one_trial(rng, t):
        if t == 0:
            lines, total = counterexample_suite(2, 2, Distortion.power(0.5))
            assert abs(total - np.sqrt(2.0)) <= 1e-9, "canonical overshoot is sqrt(2)"
            return lines[-1]
        gb = int(rng.integers(2, 4))
        hb = int(rng.integers(2, 4))
        row = rng.uniform(0.5, 1.0, gb)
        row /= row.sum()
        col = rng.uniform(0.5, 1.0, hb)
        col /= col.sum()
        weights = tuple((row[:, None] * col[None, :]).ravel())
        P = ProbabilityMeasure(space_of(gb * hb), weights)
        counterexample_suite(gb, hb, Distortion.power(float(rng.uniform(0.3, 0.8))), P)
        return None

    return _run_trials("counterexample", trials, seed, one_trial)


# ---------------------------------------------------------------------------
# Entropic evaluator against its variational form


def relative_entropy(mu: np.ndarray, p: np.ndarray) -> float:
    """KL divergence with the 0 log 0 = 0 convention; p must have full support."""
    mask = mu > 0
    return float((mu[mask] * np.log(mu[mask] / p[mask])).sum())


def entropic_variational_oracle(X: Act, beta: float, P: ProbabilityMeasure,
                                steps: int = 800) -> float:
    """Grid minimization of expected payoff plus scaled relative entropy."""
    n = X.space.size
    x = X.array
    p = P.array
    if np.any(p <= 0):
        raise ValueError("reference must have full support for the grid oracle")
    if n == 2:
        q = np.linspace(0.0, 1.0, steps + 1)
        mus = np.stack([q, 1.0 - q], axis=1)
    elif n == 3:
        q = np.linspace(0.0, 1.0, steps + 1)
        a, b = np.meshgrid(q, q)
        keep = a + b <= 1.0 + 1e-12
        mus = np.stack([a[keep], b[keep], 1.0 - a[keep] - b[keep]], axis=1)
        mus = np.clip(mus, 0.0, 1.0)
    else:
        raise ValueError("grid oracle supports 2 or 3 states")
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(mus > 0, np.log(np.maximum(mus, 1e-300) / p), 0.0)
    kl = (mus * logs).sum(axis=1)
    obj = mus @ x + beta * kl
    return float(obj.min())


def verify_dv(trials: int = 20, seed: int = 3) -> VerifyResult:
    """The entropic certainty equivalent matches the penalized worst case."""

    def one_trial(rng, t):
        from .models import EntropicModel

        space = space_of(3)
        w = rng.uniform(0.5, 1.0, 3)
        P = ProbabilityMeasure(space, tuple(w / w.sum()))
        beta = float(rng.uniform(0.7, 2.0))
        X = random_act(rng, space)
        m = EntropicModel(beta, P)
        closed = m.certainty_equivalent(X)
        gridded = entropic_variational_oracle(X, beta, P)
        assert abs(closed - gridded) <= 1e-4, f"{closed} vs {gridded}"
        return None

    return _run_trials("dv", trials, seed, one_trial)


SUITES = {
    "maxmin": verify_maxmin,
    "main": verify_main,
    "comam": verify_comam,
    "family": verify_family,
    "latt": verify_latt,
    "counterexample": verify_counterexample,
    "dv": verify_dv,
}

DEFAULT_TRIALS = {
    "maxmin": 100,
    "main": 100,
    "comam": 50,
    "family": 50,
    "latt": 200,
    "counterexample": 5,
    "dv": 20,
}
