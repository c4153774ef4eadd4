"""Finite-state toolkit for evaluating and auditing decision models under ambiguity."""

from .capacity import (
    Capacity,
    CheckResult,
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
from .choquet import choquet, choquet_riemann_oracle, comonotone_additivity_check
from .core import (
    CorePolytope,
    RobustValue,
    chain_attainable,
    core_contains,
    core_vertices,
    is_balanced,
    is_exact,
    marginal_vector,
    robust_value,
)
from .distortion import Distortion, DomainError, Utility
from .models import (
    AttitudeReport,
    AuditReport,
    AxiomResult,
    CRDUModel,
    DistortionFamilyEntry,
    DualModel,
    EntropicModel,
    MEUModel,
    RDUModel,
    act_mixture,
    attitude_report,
    axiom_audit,
    ceu_model,
    comparative_full,
    derive_distortion_family,
    family_representation_value,
    more_ambiguity_averse,
    subjective_mixture,
    subjective_mixture_fixed_point_oracle,
)
from .space import (
    Act,
    Distribution,
    Event,
    ProbabilityMeasure,
    RiskPartition,
    SpaceMismatchError,
    StateSpace,
    as_dominates,
    comonotonic,
    distribution,
    fsd_geq,
    is_measurable,
    ssd_geq,
)

__version__ = "0.1.0"

__all__ = [
    "Act",
    "AttitudeReport",
    "AuditReport",
    "AxiomResult",
    "CRDUModel",
    "Capacity",
    "CheckResult",
    "CorePolytope",
    "Distortion",
    "DistortionFamilyEntry",
    "Distribution",
    "DomainError",
    "DualModel",
    "EntropicModel",
    "Event",
    "MEUModel",
    "ProbabilityMeasure",
    "RDUModel",
    "RiskPartition",
    "RobustValue",
    "SpaceMismatchError",
    "StateSpace",
    "Utility",
    "act_mixture",
    "as_dominates",
    "attitude_report",
    "axiom_audit",
    "ceu_model",
    "chain_attainable",
    "choquet",
    "choquet_riemann_oracle",
    "comonotone_additivity_check",
    "comonotonic",
    "comparative_full",
    "compose",
    "construct_counterexample",
    "core_contains",
    "core_vertices",
    "derive_distortion_family",
    "distribution",
    "dominates_setwise",
    "family_representation_value",
    "from_measure",
    "fsd_geq",
    "is_P_consistent",
    "is_additive",
    "is_balanced",
    "is_exact",
    "is_measurable",
    "is_risk_conforming",
    "is_submodular",
    "is_supermodular",
    "marginal_vector",
    "more_ambiguity_averse",
    "robust_value",
    "ssd_geq",
    "subjective_mixture",
    "subjective_mixture_fixed_point_oracle",
]
