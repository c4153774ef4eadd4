import numpy as np
import pytest

from crdu import (
    Act,
    Capacity,
    ProbabilityMeasure,
    choquet,
    choquet_riemann_oracle,
    comonotone_additivity_check,
    from_measure,
    is_supermodular,
)
from crdu.sampling import random_act, random_capacity, random_supermodular_capacity, space_of


class TestSortedSum:
    def test_worked_example(self, worked_capacity, act312):
        assert choquet(act312, worked_capacity) == pytest.approx(1.6, abs=1e-12)

    def test_constant_act_normalization(self, worked_capacity, abc):
        for c in (-2.0, 0.0, 3.5):
            assert choquet(Act.constant(abc, c), worked_capacity) == pytest.approx(c)

    def test_additive_capacity_reduces_to_expectation(self, rng):
        sp = space_of(5)
        for _ in range(20):
            w = rng.uniform(0.1, 1.0, 5)
            mu = ProbabilityMeasure(sp, tuple(w / w.sum()))
            X = random_act(rng, sp, -2.0, 2.0)
            assert choquet(X, from_measure(mu)) == pytest.approx(
                float(mu.array @ X.array), abs=1e-12)

    def test_indicator_recovers_capacity(self, worked_capacity, abc):
        for ev in abc.events():
            assert choquet(Act.indicator(ev), worked_capacity) == pytest.approx(
                worked_capacity(ev), abs=1e-12)


class TestRiemannOracle:
    def test_worked_example(self, worked_capacity, act312):
        got = choquet_riemann_oracle(act312, worked_capacity, grid=1_000_000)
        assert got == pytest.approx(1.6, abs=1e-5)

    def test_signed_act_symmetric_expectation(self, ab, uniform2):
        nu = from_measure(uniform2)
        got = choquet_riemann_oracle(Act(ab, (-1.0, 1.0)), nu, grid=1_000_000)
        assert got == pytest.approx(0.0, abs=1e-5)

    def test_negative_branch(self, rng):
        sp = space_of(4)
        for _ in range(5):
            nu = random_capacity(rng, sp)
            X = random_act(rng, sp, -3.0, -0.5)
            assert choquet_riemann_oracle(X, nu, grid=200_000) == pytest.approx(
                choquet(X, nu), abs=2e-5)

    def test_rejects_coarse_grid(self, worked_capacity, act312):
        with pytest.raises(ValueError):
            choquet_riemann_oracle(act312, worked_capacity, grid=100)


class TestComonotoneAdditivity:
    def test_positive_homogeneity_pair(self, worked_capacity, abc):
        X = Act(abc, (3.0, 1.0, 2.0))
        assert comonotone_additivity_check(X, 2.0 * X, worked_capacity)

    def test_translation_by_constant(self, worked_capacity, abc, act312):
        assert comonotone_additivity_check(act312, Act.constant(abc, 4.2),
                                           worked_capacity)

    def test_random_comonotone_pairs(self, rng):
        sp = space_of(5)
        for _ in range(30):
            nu = random_capacity(rng, sp)
            order = rng.permutation(5)
            xs, ys = np.sort(rng.uniform(-1, 1, 5)), np.sort(rng.uniform(-1, 1, 5))
            X = Act(sp, tuple(xs[np.argsort(order)]))
            Y = Act(sp, tuple(ys[np.argsort(order)]))
            assert comonotone_additivity_check(X, Y, nu)

    def test_rejects_non_comonotone(self, worked_capacity, abc):
        with pytest.raises(ValueError):
            comonotone_additivity_check(Act(abc, (1, 2, 3)), Act(abc, (3, 2, 1)),
                                        worked_capacity)


class TestFunctionalProperties:
    def test_monotone_in_the_act(self, rng):
        sp = space_of(5)
        for _ in range(30):
            nu = random_capacity(rng, sp)
            Y = random_act(rng, sp, -1.0, 1.0)
            X = Act(sp, tuple(Y.array + rng.uniform(0.0, 1.0, 5)))
            assert choquet(X, nu) >= choquet(Y, nu) - 1e-12

    def test_state_relabeling_invariance(self, rng):
        # Permuting states (acting on both the act and the capacity table)
        # cannot change the integral; with tied payoffs this certifies that
        # the index tie-break is value-irrelevant.
        sp = space_of(4)
        for _ in range(20):
            nu = random_capacity(rng, sp)
            payoffs = rng.choice([-1.0, 0.25, 0.25, 1.5], size=4, replace=True)
            X = Act(sp, tuple(payoffs))
            perm = list(rng.permutation(4))
            permuted_payoffs = [0.0] * 4
            for i in range(4):
                permuted_payoffs[perm[i]] = X.payoffs[i]
            table = [0.0] * 16
            for mask in range(16):
                pmask = 0
                for i in range(4):
                    if mask >> i & 1:
                        pmask |= 1 << perm[i]
                table[pmask] = nu.of_mask(mask)
            nu_p = Capacity(sp, tuple(table))
            assert choquet(Act(sp, tuple(permuted_payoffs)), nu_p) == pytest.approx(
                choquet(X, nu), abs=1e-12)

    def test_superadditive_under_supermodular(self, rng):
        sp = space_of(4)
        for _ in range(25):
            nu = random_supermodular_capacity(rng, sp)
            X = random_act(rng, sp, -1.0, 1.0)
            Y = random_act(rng, sp, -1.0, 1.0)
            assert choquet(X + Y, nu) >= choquet(X, nu) + choquet(Y, nu) - 1e-10

    def test_oracle_agreement_random(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 7))
            sp = space_of(n)
            nu = random_capacity(rng, sp)
            X = random_act(rng, sp, -1.5, 1.5)
            assert abs(choquet(X, nu)
                       - choquet_riemann_oracle(X, nu, grid=200_000)) <= 2e-5
