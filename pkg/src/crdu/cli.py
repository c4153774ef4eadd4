"""Command-line interface: model files, evaluation, checks, and verification.

Model files are JSON documents listing the states, the reference measure,
the risk partition, a complete capacity table (empty set and full space
implicit), the distortion/utility parameters, named acts, and the model
kind. Subset keys are comma-joined state labels in state order. Exit codes:
0 success, 1 property or verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .capacity import (
    Capacity,
    CheckResult,
    construct_counterexample,
    is_additive,
    is_P_consistent,
    is_risk_conforming,
    is_submodular,
    is_supermodular,
)
from .core import core_vertices, is_balanced, is_exact
from .distortion import Distortion, Utility
from .models import (
    CRDUModel,
    DualModel,
    EntropicModel,
    MEUModel,
    RDUModel,
    attitude_report,
    axiom_audit,
    comparative_full,
    derive_distortion_family,
    more_ambiguity_averse,
)
from .space import Act, Event, ProbabilityMeasure, RiskPartition, StateSpace
from .verify import DEFAULT_TRIALS, SUITES

SCHEMA_VERSION = 1


class ModelFileError(ValueError):
    """A model file failed to parse or violated a named invariant."""


# ---------------------------------------------------------------------------
# Loading and saving


def _subset_key(space: StateSpace, mask: int) -> str:
    return ",".join(space.labels[i] for i in range(space.size) if mask >> i & 1)


def _parse_subset(space: StateSpace, key: str) -> int:
    if key == "":
        return 0
    mask = 0
    for label in key.split(","):
        mask |= 1 << space.index(label.strip())
    return mask


def _distortion_from_record(rec: dict) -> Distortion:
    kind = rec.get("kind")
    if kind == "identity":
        return Distortion.identity()
    if kind == "power":
        return Distortion.power(float(rec["gamma"]))
    if kind == "pwl":
        return Distortion.piecewise_linear(tuple((float(x), float(y))
                                                 for x, y in rec["points"]))
    raise ModelFileError(f"unknown distortion kind {kind!r}")


def _distortion_to_record(g: Distortion) -> dict:
    if g.kind == "identity":
        return {"kind": "identity"}
    if g.kind == "power":
        return {"kind": "power", "gamma": g.gamma}
    return {"kind": "pwl", "points": [list(p) for p in g.points]}


def _utility_from_record(rec: dict) -> Utility:
    kind = rec.get("kind")
    lo = float(rec.get("lo", -1e9))
    hi = float(rec.get("hi", 1e9))
    if kind == "identity":
        u = Utility.identity(lo=lo, hi=hi)
    elif kind == "power":
        u = Utility.power(float(rec["gamma"]), lo=float(rec.get("lo", 0.0)), hi=hi)
    elif kind == "exponential":
        u = Utility.exponential(float(rec["beta"]), lo=lo, hi=hi)
    elif kind == "pwl":
        u = Utility.piecewise_linear(tuple((float(x), float(y))
                                           for x, y in rec["points"]))
    else:
        raise ModelFileError(f"unknown utility kind {kind!r}")
    scale = float(rec.get("scale", 1.0))
    shift = float(rec.get("shift", 0.0))
    if (scale, shift) != (1.0, 0.0):
        u = Utility(u.kind, lo=u.lo, hi=u.hi, gamma=u.gamma, beta=u.beta,
                    points=u.points, scale=scale, shift=shift)
    return u


def _utility_to_record(u: Utility) -> dict:
    rec: dict = {"kind": u.kind}
    if u.kind == "pwl":
        rec["points"] = [list(p) for p in u.points]
    else:
        rec["lo"] = u.lo
        rec["hi"] = u.hi
    if u.kind == "power":
        rec["gamma"] = u.gamma
    if u.kind == "exponential":
        rec["beta"] = u.beta
    if (u.scale, u.shift) != (1.0, 0.0):
        rec["scale"] = u.scale
        rec["shift"] = u.shift
    return rec


def _capacity_from_table(space: StateSpace, table: dict) -> Capacity:
    values = [None] * (1 << space.size)
    for key, val in table.items():
        mask = _parse_subset(space, key)
        values[mask] = float(val)
    if values[0] is None:
        values[0] = 0.0
    elif abs(values[0]) > 1e-12:
        raise ModelFileError("capacity not grounded: empty set must map to 0")
    full = space.full_mask
    if values[full] is None:
        values[full] = 1.0
    elif abs(values[full] - 1.0) > 1e-12:
        raise ModelFileError("capacity not normalized: full space must map to 1")
    missing = [m for m, v in enumerate(values) if v is None]
    if missing:
        raise ModelFileError(
            "incomplete capacity table: missing "
            + ", ".join(repr(_subset_key(space, m)) for m in missing[:5])
            + ("..." if len(missing) > 5 else "")
        )
    try:
        return Capacity(space, tuple(values))
    except ValueError as exc:
        raise ModelFileError(str(exc)) from exc


def load(path) -> tuple[object, dict[str, Act]]:
    """Load and validate a model file; returns the model and its named acts."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"parse error at line {exc.lineno}, column {exc.colno}: "
                             f"{exc.msg}") from exc
    try:
        kind = doc.get("kind", "crdu")
        space = StateSpace(tuple(doc["states"]))
        reference = ProbabilityMeasure.from_mapping(space, doc["reference"])
        part = None
        if "risk_partition" in doc:
            part = RiskPartition.from_labels(space, doc["risk_partition"])
        acts = {name: Act.from_mapping(space, payoff)
                for name, payoff in doc.get("acts", {}).items()}

        if kind in ("crdu", "ceu"):
            nu = _capacity_from_table(space, doc["capacity"])
            if kind == "crdu":
                g = _distortion_from_record(doc["distortion"])
            else:
                g = Distortion.identity()
                if "distortion" in doc and _distortion_from_record(doc["distortion"]) != g:
                    raise ModelFileError("ceu models use the identity distortion")
            u = _utility_from_record(doc["utility"])
            if part is None:
                raise ModelFileError("risk_partition is required for this kind")
            model = CRDUModel(u, g, nu, part, reference, kind=kind)
        elif kind == "dual":
            nu = _capacity_from_table(space, doc["capacity"])
            g = _distortion_from_record(doc["distortion"])
            if part is None:
                raise ModelFileError("risk_partition is required for this kind")
            model = DualModel(g, nu, part, reference)
        elif kind == "rdu":
            g = _distortion_from_record(doc["distortion"])
            u = _utility_from_record(doc["utility"])
            model = RDUModel(u, g, reference)
        elif kind == "meu":
            u = _utility_from_record(doc["utility"])
            priors = tuple(ProbabilityMeasure.from_mapping(space, w)
                           for w in doc["priors"])
            model = MEUModel(u, priors, part, reference)
        elif kind == "entropic":
            model = EntropicModel(float(doc["beta"]), reference)
        else:
            raise ModelFileError(f"unknown model kind {kind!r}")
    except ModelFileError:
        raise
    except KeyError as exc:
        raise ModelFileError(f"missing required field {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise ModelFileError(str(exc)) from exc
    return model, acts


def save(path, model, acts: dict[str, Act] | None = None) -> None:
    """Write the canonical model-file form; stable under load/save round trips."""
    space = model.space
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "kind": model.kind,
        "states": list(space.labels),
    }
    reference = getattr(model, "reference", None)
    if reference is not None:
        doc["reference"] = {lb: w for lb, w in zip(space.labels, reference.weights)}
    part = getattr(model, "risk_partition", None)
    if part is not None:
        doc["risk_partition"] = [[space.labels[i] for i in sorted(b)]
                                 for b in part.blocks]
    belief = getattr(model, "belief", None)
    if belief is not None:
        doc["capacity"] = {
            _subset_key(space, mask): belief.of_mask(mask)
            for mask in range(1, space.full_mask)
        }
    if hasattr(model, "distortion") and model.kind != "ceu":
        doc["distortion"] = _distortion_to_record(model.distortion)
    if hasattr(model, "utility"):
        doc["utility"] = _utility_to_record(model.utility)
    if model.kind == "meu":
        doc["priors"] = [{lb: w for lb, w in zip(space.labels, mu.weights)}
                         for mu in model.priors]
    if model.kind == "entropic":
        doc["beta"] = model.beta
    if acts:
        doc["acts"] = {name: {lb: p for lb, p in zip(space.labels, act.payoffs)}
                       for name, act in acts.items()}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


# ---------------------------------------------------------------------------
# Commands


def _emit(payload: dict, args, lines: list[str]) -> None:
    rendered = json.dumps(payload, indent=2, default=str)
    if getattr(args, "out", None):
        Path(args.out).write_text(rendered + "\n")
    if args.json:
        print(rendered)
    else:
        for line in lines:
            print(line)


def _get_act(acts: dict[str, Act], name: str | None) -> tuple[str, Act]:
    if not acts:
        raise ModelFileError("the model file declares no acts")
    if name is None:
        if len(acts) == 1:
            return next(iter(acts.items()))
        raise ModelFileError("--act is required when several acts are declared")
    if name not in acts:
        raise ModelFileError(f"unknown act {name!r}; available: {sorted(acts)}")
    return name, acts[name]


def cmd_eval(args) -> int:
    model, acts = load(args.model)
    name, act = _get_act(acts, args.act)
    value = model.value(act)
    ce = model.certainty_equivalent(act)
    levels = []
    if hasattr(model, "distorted_belief"):
        kappa = model.distorted_belief
        u = getattr(model, "utility", None)
        mask = 0
        prev = 0.0
        for v in sorted(set(act.payoffs), reverse=True):
            for i, p in enumerate(act.payoffs):
                if p == v:
                    mask |= 1 << i
            cur = kappa.of_mask(mask)
            weight = cur - prev
            util = u(v) if u is not None else v
            levels.append({"payoff": v, "utility": util, "weight": weight,
                           "contribution": util * weight})
            prev = cur
    payload = {"schema_version": SCHEMA_VERSION, "command": "eval", "act": name,
               "value": value, "certainty_equivalent": ce, "levels": levels}
    lines = [f"act {name}: value {value:.9g}, certainty equivalent {ce:.9g}"]
    for lv in levels:
        lines.append(f"  payoff {lv['payoff']:.6g}: weight {lv['weight']:.9g}, "
                     f"contribution {lv['contribution']:.9g}")
    _emit(payload, args, lines)
    return 0


_CAPACITY_PROPERTIES = {
    "supermodular": lambda m: is_supermodular(m.belief),
    "submodular": lambda m: is_submodular(m.belief),
    "additive": lambda m: is_additive(m.belief),
    "balanced": lambda m: is_balanced(m.belief),
    "exact": lambda m: is_exact(m.belief),
    "risk_conforming": lambda m: is_risk_conforming(m.belief, m.risk_partition,
                                                    m.reference),
    "p_consistent": lambda m: is_P_consistent(m.belief, m.reference),
}

_ATTITUDE_PROPERTIES = ("AN", "AA", "RAA", "DS", "SRA", "NSC", "family")


def _witness_str(witness) -> str:
    if witness is None:
        return ""
    if isinstance(witness, Event):
        return f"event {set(witness.labels) or '{}'}"
    if isinstance(witness, tuple) and all(isinstance(w, Event) for w in witness):
        return " vs ".join(f"{set(w.labels) or '{}'}" for w in witness)
    return str(witness)


def cmd_check(args) -> int:
    model, _acts = load(args.model)
    requested = [p.strip() for p in args.properties.split(",") if p.strip()]
    if not requested:
        raise ModelFileError("no properties requested")
    report = None
    rows = []
    failed = False
    for prop in requested:
        if prop in _CAPACITY_PROPERTIES:
            if not hasattr(model, "belief"):
                raise ModelFileError(f"property {prop!r} needs a capacity-based model")
            res = _CAPACITY_PROPERTIES[prop](model)
        elif prop in _ATTITUDE_PROPERTIES:
            if not isinstance(model, CRDUModel):
                raise ModelFileError("attitude flags need a crdu or ceu model")
            if report is None:
                report = attitude_report(model)
            flag_map = {
                "AN": report.neutral, "AA": report.averse,
                "RAA": report.reference_averse, "DS": report.diversifying,
                "SRA": report.strong_risk_averse, "NSC": report.null_consistent,
                "family": report.averse_family,
            }
            res = flag_map[prop]
        elif prop == "axioms":
            audit = axiom_audit(model, n_samples=args.trials or 1000,
                                seed=args.seed or 0)
            res = CheckResult(audit.ok, "; ".join(
                line for line in audit.lines() if "FAIL" in line) or None)
        else:
            raise ModelFileError(f"unknown property {prop!r}")
        rows.append((prop, res))
        failed = failed or not res.ok

    payload = {"schema_version": SCHEMA_VERSION, "command": "check",
               "properties": {p: {"ok": r.ok, "witness": _witness_str(r.witness)}
                              for p, r in rows}}
    lines = []
    for prop, res in rows:
        status = "pass" if res.ok else "FAIL"
        wit = _witness_str(res.witness)
        lines.append(f"{prop:16s} {status}" + (f"  witness: {wit}" if wit and not res.ok else ""))
    _emit(payload, args, lines)
    return 1 if failed else 0


def cmd_core(args) -> int:
    model, _acts = load(args.model)
    if not hasattr(model, "belief"):
        raise ModelFileError("core analysis needs a capacity-based model")
    vertices = core_vertices(model.belief)
    balanced = is_balanced(model.belief)
    exact = is_exact(model.belief)
    payload = {"schema_version": SCHEMA_VERSION, "command": "core",
               "balanced": balanced.ok, "exact": exact.ok,
               "vertices": [list(v.weights) for v in vertices]}
    lines = [f"balanced: {balanced.ok}", f"exact: {exact.ok}",
             f"vertices: {len(vertices)}"]
    for v in vertices:
        lines.append("  (" + ", ".join(f"{w:.9g}" for w in v.weights) + ")")
    _emit(payload, args, lines)
    return 0


def cmd_match(args) -> int:
    model, _acts = load(args.model)
    if not isinstance(model, CRDUModel):
        raise ModelFileError("matching probabilities need a crdu or ceu model")
    space = model.space
    if args.event is not None:
        masks = [_parse_subset(space, args.event)]
    else:
        masks = list(range(1 << space.size))
    table = {}
    for mask in masks:
        ev = space.event_from_mask(mask)
        table[_subset_key(space, mask)] = model.matching_probability(ev)
    payload = {"schema_version": SCHEMA_VERSION, "command": "match",
               "matching_probabilities": table}
    lines = [f"{key or '(empty)':24s} {val:.9g}" for key, val in table.items()]
    _emit(payload, args, lines)
    return 0


def cmd_family(args) -> int:
    model, acts = load(args.model)
    if not isinstance(model, CRDUModel):
        raise ModelFileError("distortion families need a crdu or ceu model")
    name, act = _get_act(acts, args.act)
    entry = derive_distortion_family(model, act)
    payload = {"schema_version": SCHEMA_VERSION, "command": "family", "act": name,
               "levels": list(entry.levels), "values": list(entry.values)}
    lines = [f"act {name}: act-dependent distortion on its survival levels"]
    for lv, val in zip(entry.levels, entry.values):
        lines.append(f"  alpha {lv:.9g} -> {val:.9g}")
    _emit(payload, args, lines)
    return 0


def cmd_compare(args) -> int:
    m1, _ = load(args.model)
    m2, _ = load(args.other)
    if not (isinstance(m1, CRDUModel) and isinstance(m2, CRDUModel)):
        raise ModelFileError("comparison needs two crdu/ceu models")
    dominance = more_ambiguity_averse(m1, m2)
    full = comparative_full(m1, m2, seed=args.seed or 0)
    payload = {"schema_version": SCHEMA_VERSION, "command": "compare",
               "more_ambiguity_averse": dominance.ok, "full_comparative": full.ok,
               "witness": _witness_str(full.witness if not full.ok else dominance.witness)}
    lines = [f"second model more ambiguity averse: {dominance.ok}",
             f"full comparative implication: {full.ok}"]
    if not dominance.ok:
        lines.append(f"  dominance witness: {_witness_str(dominance.witness)}")
    if not full.ok and full.witness is not None:
        lines.append(f"  witness: {_witness_str(full.witness)}")
    _emit(payload, args, lines)
    return 0 if (dominance.ok and full.ok) else 1


def cmd_verify(args) -> int:
    suite = SUITES.get(args.theorem)
    if suite is None:
        print(f"unknown theorem id {args.theorem!r}; choose from "
              f"{sorted(SUITES)}", file=sys.stderr)
        return 2
    trials = args.trials if args.trials is not None else DEFAULT_TRIALS[args.theorem]
    if trials < 1:
        print("trials must be at least 1", file=sys.stderr)
        return 2
    kwargs = {"trials": trials}
    if args.seed is not None:
        kwargs["seed"] = args.seed
    result = suite(**kwargs)
    payload = {"schema_version": SCHEMA_VERSION, "command": "verify",
               "theorem": result.theorem, "trials": result.trials,
               "passed": result.passed, "failures": list(result.failures),
               "details": list(result.details)}
    _emit(payload, args, result.lines())
    return 0 if result.ok else 1


def cmd_counterexample(args) -> int:
    form = args.h.split(":")
    if form[0] == "power":
        h = Distortion.power(float(form[1]))
    elif form[0] == "pwl":
        pts = [tuple(float(v) for v in p.split("/")) for p in form[1].split(";")]
        h = Distortion.piecewise_linear(pts)
    else:
        raise ModelFileError("h must look like power:0.5 or pwl:x/y;x/y;...")
    n = args.g_states * args.h_states
    space = StateSpace(tuple(f"g{i}h{j}" for i in range(args.g_states)
                             for j in range(args.h_states)))
    P = ProbabilityMeasure.uniform(space)
    nu, g_part, h_part = construct_counterexample(args.g_states, args.h_states, P, h)
    model = CRDUModel(
        Utility.power(0.5, lo=0.0, hi=4.0),
        h.inverse_distortion(),
        nu, g_part, P,
    )
    sample = Act.indicator(space.event_from_mask(h_part.block_masks[0]))
    save(args.out, model, {"bet_on_A0": sample})
    # Record the independent coordinate partition alongside the model.
    doc = json.loads(Path(args.out).read_text())
    doc["h_partition"] = [[space.labels[i] for i in sorted(b)] for b in h_part.blocks]
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    a0 = h_part.block_masks[0]
    total = nu.of_mask(a0) + nu.of_mask(space.full_mask ^ a0)
    print(f"wrote {args.out} ({n} states); nu(A0)+nu(A0c)={total:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crdu",
        description="Evaluate and audit decision models under ambiguity on finite state spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, model=True):
        if model:
            p.add_argument("--model", required=True, help="path to a model file")
        p.add_argument("--json", action="store_true", help="emit machine-readable output")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--out", default=None, help="also write the JSON record here")

    p_eval = sub.add_parser("eval", help="value and certainty equivalent of an act")
    add_common(p_eval)
    p_eval.add_argument("--act", default=None, help="name of the act to evaluate")
    p_eval.set_defaults(fn=cmd_eval)

    p_check = sub.add_parser("check", help="property table with witnesses")
    add_common(p_check)
    p_check.add_argument("properties", help="comma-separated property names")
    p_check.set_defaults(fn=cmd_check)

    p_core = sub.add_parser("core", help="core vertices, balancedness, exactness")
    add_common(p_core)
    p_core.set_defaults(fn=cmd_core)

    p_match = sub.add_parser("match", help="matching probabilities per event")
    add_common(p_match)
    p_match.add_argument("--event", default=None, help="comma-joined state labels")
    p_match.set_defaults(fn=cmd_match)

    p_family = sub.add_parser("family", help="act-dependent distortion of an act")
    add_common(p_family)
    p_family.add_argument("--act", default=None)
    p_family.set_defaults(fn=cmd_family)

    p_compare = sub.add_parser("compare", help="comparative ambiguity attitudes")
    add_common(p_compare)
    p_compare.add_argument("--other", required=True, help="path to the second model")
    p_compare.set_defaults(fn=cmd_compare)

    p_verify = sub.add_parser("verify", help="run a randomized verification suite")
    p_verify.add_argument("theorem", help=f"one of {sorted(SUITES)}")
    p_verify.add_argument("--json", action="store_true")
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--trials", type=int, default=None)
    p_verify.add_argument("--out", default=None, help="also write the JSON record here")
    p_verify.set_defaults(fn=cmd_verify)

    p_cx = sub.add_parser("counterexample",
                          help="write a diversification-without-balancedness model")
    p_cx.add_argument("--g-states", type=int, default=2, dest="g_states")
    p_cx.add_argument("--h-states", type=int, default=2, dest="h_states")
    p_cx.add_argument("--h", default="power:0.5",
                      help="strictly concave distortion, e.g. power:0.5")
    p_cx.add_argument("--out", required=True)
    p_cx.set_defaults(fn=cmd_counterexample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ModelFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
