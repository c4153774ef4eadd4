import numpy as np
import pytest

from crdu import (
    Act,
    Capacity,
    CRDUModel,
    Distortion,
    ProbabilityMeasure,
    RDUModel,
    RiskPartition,
    Utility,
    derive_distortion_family,
    family_representation_value,
    from_measure,
)
from crdu.sampling import random_act, random_conforming_capacity, space_of


@pytest.fixture
def worked_model(abc, uniform3, worked_capacity):
    part = RiskPartition(abc, (frozenset([0, 1, 2]),))
    return CRDUModel(Utility.identity(lo=-8, hi=8), Distortion.identity(),
                     worked_capacity, part, uniform3)


class TestDeriveFamily:
    def test_worked_levels(self, worked_model, act312):
        entry = derive_distortion_family(worked_model, act312)
        assert entry.value_at(1.0 / 3.0) == pytest.approx(0.2, abs=1e-12)
        assert entry.value_at(2.0 / 3.0) == pytest.approx(0.4, abs=1e-12)
        assert entry.value_at(0.0) == 0.0
        assert entry.value_at(1.0) == 1.0

    def test_measurable_act_recovers_the_risk_distortion(self):
        sp = space_of(4)
        P = ProbabilityMeasure.uniform(sp)
        part = RiskPartition(sp, (frozenset([0, 1]), frozenset([2, 3])))
        rng = np.random.default_rng(11)
        nu = random_conforming_capacity(rng, part, P)
        g = Distortion.power(1.6)
        m = CRDUModel(Utility.identity(lo=-8, hi=8), g, nu, part, P)
        X = Act(sp, (0.9, 0.9, 0.1, 0.1))
        entry = derive_distortion_family(m, X)
        for lv, val in zip(entry.levels, entry.values):
            assert val == pytest.approx(float(g(lv)), abs=1e-12)

    def test_constant_act_has_endpoints_only(self, worked_model, abc):
        entry = derive_distortion_family(worked_model, Act.constant(abc, 2.0))
        assert entry.levels == (0.0, 1.0)
        assert entry.values == (0.0, 1.0)

    def test_unknown_level_raises(self, worked_model, act312):
        entry = derive_distortion_family(worked_model, act312)
        with pytest.raises(KeyError):
            entry.value_at(0.5)

    def test_requires_null_consistency(self, abc):
        P = ProbabilityMeasure(abc, (0.5, 0.5, 0.0))
        nu = Capacity.from_values(abc, {
            frozenset([0]): 0.5, frozenset([1]): 0.4, frozenset([2]): 0.0,
            frozenset([0, 1]): 1.0, frozenset([0, 2]): 0.6, frozenset([1, 2]): 0.4,
        })
        part = RiskPartition(abc, (frozenset([0, 1, 2]),))
        m = CRDUModel(Utility.identity(lo=-8, hi=8), Distortion.identity(),
                      nu, part, P)
        with pytest.raises(ValueError, match="null-consistent"):
            derive_distortion_family(m, Act(abc, (3, 1, 2)))

    def test_null_states_collapse_levels(self, abc):
        P = ProbabilityMeasure(abc, (0.5, 0.5, 0.0))
        nu = from_measure(P)
        part = RiskPartition(abc, (frozenset([0, 1, 2]),))
        m = CRDUModel(Utility.identity(lo=-8, hi=8), Distortion.identity(),
                      nu, part, P)
        entry = derive_distortion_family(m, Act(abc, (3, 1, 2)))
        assert entry.levels == (0.0, 0.5, 1.0)


class TestFamilyRepresentation:
    def test_worked_example_matches_direct_value(self, worked_model, act312):
        assert family_representation_value(worked_model, act312) == pytest.approx(
            worked_model.value(act312), abs=1e-12)

    def test_measurable_acts_give_rdu(self):
        sp = space_of(4)
        P = ProbabilityMeasure.uniform(sp)
        part = RiskPartition(sp, (frozenset([0, 1]), frozenset([2, 3])))
        rng = np.random.default_rng(13)
        nu = random_conforming_capacity(rng, part, P)
        u = Utility.power(0.7, lo=0.0, hi=4.0)
        g = Distortion.power(1.5)
        m = CRDUModel(u, g, nu, part, P)
        rdu = RDUModel(u, g, P)
        X = Act(sp, (0.8, 0.8, 0.2, 0.2))
        assert family_representation_value(m, X) == pytest.approx(rdu.value(X),
                                                                  abs=1e-12)

    def test_constant_act(self, worked_model, abc):
        got = family_representation_value(worked_model, Act.constant(abc, 1.5))
        assert got == pytest.approx(worked_model.utility(1.5))

    def test_random_models_and_acts(self, rng):
        for _ in range(10):
            n = int(rng.integers(3, 6))
            sp = space_of(n)
            from crdu.sampling import random_measure, random_partition
            part = random_partition(rng, sp)
            P = random_measure(rng, sp, zeros=int(rng.integers(0, 2)))
            nu = random_conforming_capacity(rng, part, P)
            m = CRDUModel(Utility.power(float(rng.uniform(0.5, 1.8)), lo=0.0, hi=4.0),
                          Distortion.power(float(rng.uniform(0.6, 1.8))),
                          nu, part, P)
            for _ in range(20):
                X = random_act(rng, sp)
                assert family_representation_value(m, X) == pytest.approx(
                    m.value(X), abs=1e-9)
