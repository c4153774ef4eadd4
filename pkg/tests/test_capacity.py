import math

import numpy as np
import pytest

from crdu import (
    Act,
    Capacity,
    Distortion,
    ProbabilityMeasure,
    RiskPartition,
    StateSpace,
    compose,
    construct_counterexample,
    dominates_setwise,
    from_measure,
    is_additive,
    is_P_consistent,
    is_risk_conforming,
    is_submodular,
    is_supermodular,
)
from crdu.sampling import random_capacity, space_of


def cap2(v1, v2):
    sp = StateSpace(("a", "b"))
    return Capacity.from_values(sp, {frozenset([0]): v1, frozenset([1]): v2})


def test_capacity_validation(ab, abc):
    with pytest.raises(ValueError, match="grounded"):
        Capacity(ab, (0.1, 0.3, 0.4, 1.0))
    with pytest.raises(ValueError, match="normalized"):
        Capacity(ab, (0.0, 0.3, 0.4, 0.9))
    with pytest.raises(ValueError, match="monotone"):
        Capacity(abc, (0.0, 0.5, 0.1, 0.3, 0.1, 0.6, 0.4, 1.0))
    with pytest.raises(ValueError, match="incomplete"):
        Capacity.from_values(abc, {frozenset([0]): 0.1})


def test_from_measure(ab, abc):
    assert from_measure(ProbabilityMeasure.uniform(ab)).of_mask(0b01) == 0.5
    assert from_measure(ProbabilityMeasure(ab, (0.3, 0.7))).of_mask(0b10) == 0.7
    nu = from_measure(ProbabilityMeasure(abc, (0.25, 0.5, 0.25)))
    assert nu(abc.event("a", "c")) == pytest.approx(0.5)


class TestModularity:
    def test_two_state_single_pair(self):
        # Only nontrivial pair: 0.3 + 0.4 <= 1 + 0.
        assert is_supermodular(cap2(0.3, 0.4))

    def test_additive_is_both(self, uniform3):
        nu = from_measure(uniform3)
        assert is_supermodular(nu) and is_submodular(nu)

    def test_violation_with_witness(self, gap_capacity):
        res = is_supermodular(gap_capacity)
        assert not res
        a, b = res.witness
        lhs = gap_capacity(a) + gap_capacity(b)
        rhs = gap_capacity(a.union(b)) + gap_capacity(a.intersection(b))
        assert lhs > rhs + 1e-9

    def test_conjugate_flips_direction(self, rng):
        sp = space_of(4)
        nu = random_capacity(rng, sp)
        conj = Capacity(sp, tuple(1.0 - nu.of_mask(sp.full_mask ^ m)
                                  for m in range(1 << 4)))
        assert bool(is_supermodular(nu)) == bool(is_submodular(conj))


class TestAdditive:
    def test_measures_are_additive(self, uniform3):
        assert is_additive(from_measure(uniform3))

    def test_matching_singletons_but_broken_total(self):
        res = is_additive(cap2(0.707107, 0.707107))
        assert not res
        assert res.witness is not None

    def test_identity_composition_stays_additive(self, uniform3):
        assert is_additive(compose(Distortion.identity(), from_measure(uniform3)))


class TestRiskConforming:
    def test_measure_conforms_to_itself(self, abc, uniform3):
        part = RiskPartition.from_labels(abc, [["a"], ["b", "c"]])
        assert is_risk_conforming(from_measure(uniform3), part, uniform3)

    def test_counterexample_construction_conforms(self):
        P = ProbabilityMeasure.uniform(space_of(4))
        nu, g_part, _h = construct_counterexample(2, 2, P, Distortion.power(0.5))
        assert is_risk_conforming(nu, g_part, P)

    def test_mismatch_detected(self, abc, uniform3):
        part = RiskPartition.from_labels(abc, [["a"], ["b", "c"]])
        skew = from_measure(ProbabilityMeasure(abc, (0.5, 0.3, 0.2)))
        res = is_risk_conforming(skew, part, uniform3)
        assert not res and res.witness is not None


class TestPConsistency:
    def test_full_support_is_trivially_consistent(self, abc, uniform3, gap_capacity):
        assert is_P_consistent(gap_capacity, uniform3)

    def test_null_state_changes_value(self, abc):
        P = ProbabilityMeasure(abc, (0.5, 0.5, 0.0))
        nu = Capacity.from_values(abc, {
            frozenset([0]): 0.5, frozenset([1]): 0.4, frozenset([2]): 0.0,
            frozenset([0, 1]): 1.0, frozenset([0, 2]): 0.6, frozenset([1, 2]): 0.4,
        })
        res = is_P_consistent(nu, P)
        assert not res
        lo_ev, hi_ev = res.witness
        assert nu(hi_ev) > nu(lo_ev)

    def test_measure_consistent_with_itself(self, abc):
        P = ProbabilityMeasure(abc, (0.5, 0.5, 0.0))
        assert is_P_consistent(from_measure(P), P)


class TestDominance:
    def test_reflexive(self, worked_capacity):
        assert dominates_setwise(worked_capacity, worked_capacity)

    def test_concave_distortion_dominates_measure(self, uniform3):
        nu = from_measure(uniform3)
        lifted = compose(Distortion.power(0.5), nu)
        assert dominates_setwise(lifted, nu)
        res = dominates_setwise(nu, lifted)
        assert not res and res.witness is not None


class TestCompose:
    def test_identity_is_noop(self, worked_capacity):
        assert compose(Distortion.identity(), worked_capacity).table == worked_capacity.table

    def test_power_two(self):
        assert compose(Distortion.power(2), cap2(0.5, 0.5)).of_mask(0b01) == pytest.approx(0.25)

    def test_sqrt_of_uniform(self, uniform2):
        nu = compose(Distortion.power(0.5), from_measure(uniform2))
        assert nu.of_mask(0b01) == pytest.approx(0.7071067811865476)

    def test_composition_associates(self, rng):
        sp = space_of(4)
        nu = random_capacity(rng, sp)
        a, b = 1.7, 0.6
        left = compose(Distortion.power(a), compose(Distortion.power(b), nu))
        right = compose(Distortion.power(a * b), nu)
        assert np.allclose(left.array, right.array, atol=1e-12)


class TestCounterexampleConstruction:
    def test_canonical_values(self):
        P = ProbabilityMeasure.uniform(space_of(4))
        nu, g_part, h_part = construct_counterexample(2, 2, P, Distortion.power(0.5))
        a0 = h_part.block_masks[0]
        assert nu.of_mask(a0) == pytest.approx(math.sqrt(0.5), abs=1e-12)
        total = nu.of_mask(a0) + nu.of_mask(P.space.full_mask ^ a0)
        assert total == pytest.approx(math.sqrt(2.0), abs=1e-9)

    def test_risk_algebra_matches_reference(self):
        P = ProbabilityMeasure.uniform(space_of(4))
        nu, g_part, _h = construct_counterexample(2, 2, P, Distortion.power(0.5))
        for mask in g_part.union_masks():
            assert nu.of_mask(mask) == pytest.approx(P.prob_mask(mask), abs=1e-12)

    def test_guarantees_on_2x3(self):
        P = ProbabilityMeasure.uniform(space_of(6))
        h = Distortion.power(0.5)
        nu, g_part, h_part = construct_counterexample(2, 3, P, h)
        assert is_risk_conforming(nu, g_part, P)
        for mask in h_part.union_masks():
            assert nu.of_mask(mask) == pytest.approx(float(h(P.prob_mask(mask))), abs=1e-12)
        pa = np.array([P.prob_mask(m) for m in range(1 << 6)])
        assert bool((np.asarray(h(pa)) >= nu.array - 1e-12).all())
        assert bool((nu.array >= pa - 1e-12).all())
        assert is_supermodular(compose(h.inverse_distortion(), nu))

    def test_rejects_non_concave(self):
        P = ProbabilityMeasure.uniform(space_of(4))
        with pytest.raises(ValueError, match="strictly concave"):
            construct_counterexample(2, 2, P, Distortion.identity())

    def test_rejects_dependent_coordinates(self):
        sp = space_of(4)
        P = ProbabilityMeasure(sp, (0.4, 0.1, 0.1, 0.4))
        with pytest.raises(ValueError, match="independent"):
            construct_counterexample(2, 2, P, Distortion.power(0.5))
