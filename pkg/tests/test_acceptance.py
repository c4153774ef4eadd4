"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines. Everything is seeded and deterministic; total runtime is well under a
minute.
"""

import math
from contextlib import contextmanager

import numpy as np
import pytest

from crdu import (
    Act,
    Capacity,
    CRDUModel,
    Distortion,
    DualModel,
    ProbabilityMeasure,
    RiskPartition,
    Utility,
    attitude_report,
    axiom_audit,
    choquet,
    choquet_riemann_oracle,
    comonotone_additivity_check,
    from_measure,
    robust_value,
    subjective_mixture,
    subjective_mixture_fixed_point_oracle,
)
from crdu.sampling import (
    audit_friendly_crdu_model,
    dyadic_frame,
    random_act,
    random_capacity,
    random_conforming_capacity,
    space_of,
)
from crdu.verify import (
    counterexample_suite,
    verify_comam,
    verify_dv,
    verify_family,
    verify_latt,
    verify_maxmin,
)


@contextmanager
def criterion(n, desc):
    try:
        yield
    except Exception:
        print(f"\n[criterion {n:2d}] FAIL - {desc}")
        raise
    print(f"\n[criterion {n:2d}] PASS - {desc}")


def test_criterion_1_choquet_oracle_agreement():
    with criterion(1, "sorted-sum vs Riemann oracle and comonotone additivity"):
        rng = np.random.default_rng(101)
        worst = 0.0
        for _ in range(200):
            n = int(rng.integers(2, 7))
            sp = space_of(n)
            nu = random_capacity(rng, sp)
            X = random_act(rng, sp, -2.0, 2.0)
            gap = abs(choquet(X, nu) - choquet_riemann_oracle(X, nu, 1_000_000))
            worst = max(worst, gap)
            assert gap <= 1e-5
        for _ in range(200):
            n = int(rng.integers(2, 7))
            sp = space_of(n)
            nu = random_capacity(rng, sp)
            order = rng.permutation(n)
            inv = np.argsort(order)
            X = Act(sp, tuple(np.sort(rng.uniform(-2, 2, n))[inv]))
            Y = Act(sp, tuple(np.sort(rng.uniform(-2, 2, n))[inv]))
            assert comonotone_additivity_check(X, Y, nu, tol=1e-9)


def test_criterion_2_robust_aggregation():
    with criterion(2, "worst case over the core: forward equality and strict gap"):
        res = verify_maxmin(trials=100, seed=42)
        assert res.ok, res.failures
        # Converse witness on the fixed three-state example.
        sp = space_of(3)
        nu = Capacity.from_values(sp, {
            frozenset([0]): 0.0, frozenset([1]): 0.0, frozenset([2]): 0.0,
            frozenset([0, 1]): 0.8, frozenset([0, 2]): 0.8, frozenset([1, 2]): 0.0,
        })
        X = Act(sp, (2.0, 1.0, 0.0))
        rv = robust_value(Utility.identity(lo=-8, hi=8), Distortion.identity(), nu, X)
        direct = choquet(X, nu)
        assert rv.value == pytest.approx(1.4, abs=1e-9)
        assert direct == pytest.approx(0.8, abs=1e-12)
        assert rv.value - direct >= 0.59


def test_criterion_3_counterexample_suite():
    with criterion(3, "counterexample construction: all five guarantees on 2x2"):
        lines, total = counterexample_suite(2, 2, Distortion.power(0.5))
        assert len(lines) == 5
        assert total == pytest.approx(1.414214, abs=1e-6)
        assert total == pytest.approx(math.sqrt(2.0), abs=1e-9)
        # Diversification holds while aversion fails once utility is concave.
        sp = space_of(4)
        P = ProbabilityMeasure.uniform(sp)
        from crdu import construct_counterexample
        nu, g_part, _h = construct_counterexample(2, 2, P, Distortion.power(0.5))
        m = CRDUModel(Utility.power(0.5, lo=0.0, hi=4.0), Distortion.power(2.0),
                      nu, g_part, P)
        rep = attitude_report(m)
        assert rep.diversifying.ok and not rep.averse.ok


def test_criterion_4_distortion_family_representation():
    with criterion(4, "act-dependent distortions reproduce the value"):
        res = verify_family(trials=50, seed=23, acts_per_trial=100)
        assert res.ok, res.failures


def test_criterion_5_lattice_composition():
    with criterion(5, "convex/concave maps preserve super/submodularity"):
        res = verify_latt(trials=200, seed=29)
        assert res.ok, res.failures


def test_criterion_6_matching_probability_round_trip():
    with criterion(6, "matching probabilities recover the belief and reference"):
        rng = np.random.default_rng(606)
        for _ in range(50):
            n = int(rng.integers(2, 6))
            sp = space_of(n)
            from crdu.sampling import random_measure, random_partition
            part = random_partition(rng, sp)
            P = random_measure(rng, sp)
            nu = random_conforming_capacity(rng, part, P)
            m = CRDUModel(
                Utility.power(float(rng.uniform(0.5, 2.0)), lo=0.0, hi=4.0),
                Distortion.power(float(rng.uniform(0.5, 2.0))),
                nu, part, P)
            for ev in sp.events():
                assert m.matching_probability(ev) == pytest.approx(
                    nu(ev), abs=1e-9)
            for mask in part.union_masks():
                ev = sp.event_from_mask(mask)
                assert m.matching_probability(ev) == pytest.approx(
                    P.prob_mask(mask), abs=1e-12)


def test_criterion_7_comparative_ambiguity():
    with criterion(7, "belief dominance matches behavioral comparisons"):
        res = verify_comam(trials=50, seed=11, pairs_per_trial=20)
        assert res.ok, res.failures


def test_criterion_8_subjective_mixture_oracle():
    with criterion(8, "closed-form mixtures agree with the fixed-point oracle"):
        rng = np.random.default_rng(808)
        checked = 0
        while checked < 500:
            sp = space_of(3)
            from crdu.sampling import random_measure, random_partition
            part = random_partition(rng, sp)
            P = random_measure(rng, sp)
            nu = random_conforming_capacity(rng, part, P)
            if rng.uniform() < 0.5:
                u = Utility.power(float(rng.uniform(0.5, 2.0)), lo=0.0, hi=4.0)
            else:
                u = Utility.piecewise_linear(
                    [(0.0, 0.0), (0.4, float(rng.uniform(0.2, 0.6))), (1.0, 1.0)])
            g = Distortion.power(float(rng.uniform(0.6, 1.6)))
            m = CRDUModel(u, g, nu, part, P)
            for _ in range(10):
                mask = int(rng.integers(1, sp.full_mask))
                R = sp.event_from_mask(mask)
                if not 0.05 < nu(R) < 0.95:
                    continue
                y, x = np.sort(rng.uniform(0.02, 0.98, 2))
                closed = subjective_mixture(m, x, y)
                fixed = subjective_mixture_fixed_point_oracle(m, x, y, R)
                assert abs(closed - fixed) <= 1e-8
                checked += 1
        # Affine utility: the mixture is exactly the arithmetic mean.
        sp, part, P = dyadic_frame(np.random.default_rng(9))
        m = CRDUModel(Utility.identity(lo=-8, hi=8), Distortion.power(1.3),
                      from_measure(P), part, P)
        assert subjective_mixture(m, 0.7, 0.1) == (0.7 + 0.1) / 2.0


def test_criterion_9_entropic_variational_match():
    with criterion(9, "entropic certainty equivalent equals the penalized minimum"):
        res = verify_dv(trials=20, seed=3)
        assert res.ok, res.failures


def test_criterion_10_axiom_audits():
    with criterion(10, "axiom audits: generated models pass; convex utility fails CI"):
        rng = np.random.default_rng(1010)
        for k in range(3):
            m = audit_friendly_crdu_model(rng)
            report = axiom_audit(m, n_samples=1000, seed=k)
            assert report.ok, report.lines()
            assert [r.axiom for r in report.results] == ["M", "RC", "SRM", "RS", "SCI"]
            assert all(r.skipped is None for r in report.results)

        sp, part, P = dyadic_frame(rng)
        nu = random_conforming_capacity(rng, part, P)
        dual = DualModel(Distortion.power(1.5), nu, part, P)
        report = axiom_audit(dual, n_samples=1000, seed=99)
        assert report.ok, report.lines()
        assert "CI" in [r.axiom for r in report.results]

        convex_u = CRDUModel(Utility.power(2.0, lo=0.0, hi=4.0),
                             Distortion.identity(), from_measure(P), part, P)
        ci_report = axiom_audit(convex_u, n_samples=200, seed=5, axioms=("CI",))
        assert not ci_report.ok
        assert ci_report.results[0].counterexample is not None
