"""Command-line front end: load spaces, maps, and measures, build and
calibrate mechanisms, sample, audit, and emit JSON reports.

Exit status contract:
  0  success (and the audited quantity passed --threshold, if given)
  1  the audited quantity failed the user-supplied --threshold
  2  parse or schema errors (bad flags, unreadable or malformed files);
     no report is written
  3  domain precondition errors (invalid metric, degenerate measure,
     unmet audit hypotheses); an error report is written

Every report is a JSON envelope {"command", "version", "params",
"result"} echoing the full configuration, so identical invocations
produce byte-identical files and any report can be fed back into a
later command (loaders unwrap the envelope).
"""

from __future__ import annotations

import argparse
import math
import sys

from . import __version__
from . import formats
from .audit import audit_privacy, audit_utility, impossibility_lower_bound
from .covering import covering_measure, greedy_net
from .errors import DomainError, SchemaError, StructuralError
from .measures import uniform_measure
from .mechanisms import (
    ExpMechParams,
    calibrate_beta,
    privacy_bound,
    sample_many,
    tabulate,
    tradeoff_upper_bound,
)
from .spaces import discrete_space, grid_space, identity_map, validate_metric

DEMO_SPACES = {
    "grid3": lambda: grid_space(3),
    "grid5": lambda: grid_space(5),
    "grid9": lambda: grid_space(9),
    "discrete4": lambda: discrete_space(4),
    "discrete8": lambda: discrete_space(8),
    "singleton": lambda: grid_space(1),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="metricdp",
        description="Build, calibrate, sample, and audit distance-scaled "
        "private mechanisms on finite metric spaces.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def cmd(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--out", help="write the JSON report here (default: stdout)")
        return sp

    sp = cmd("validate", "check a space file against the metric axioms")
    sp.add_argument("--space", required=True, help="space file or generator JSON")

    sp = cmd("net", "greedy covering net at a given radius")
    sp.add_argument("--space", required=True)
    sp.add_argument("--r", type=float, required=True, help="covering radius")

    sp = cmd("build-measure", "hierarchical base measure that is positive on every ball")
    sp.add_argument("--space", required=True)
    sp.add_argument("--L", type=int, help="number of levels (default: resolve the space)")

    sp = cmd("calibrate", "noise parameter beta meeting a (gamma, delta) utility target")
    sp.add_argument("--gamma", type=float, required=True, help="target output radius")
    sp.add_argument("--delta", type=float, required=True, help="allowed failure probability")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--m", type=float, help="ball-mass floor of the normalized base at gamma/2")
    group.add_argument("--measure", help="measure file; its normalized modulus at gamma/2 is used")

    sp = cmd("tabulate", "exact mechanism table for a map, base measure, and beta")
    sp.add_argument("--map", required=True, help="map file (domain, codomain, table)")
    sp.add_argument("--measure", required=True, help="base measure file")
    sp.add_argument("--beta", type=float, required=True)

    sp = cmd("sample", "seeded draws from the mechanism at one input")
    sp.add_argument("--map", required=True)
    sp.add_argument("--measure", required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--input", required=True, help="input label to run the mechanism at")
    sp.add_argument("--seed", type=int, required=True, help="generator seed (no silent default)")
    sp.add_argument("--count", type=int, default=1)

    sp = cmd("audit-privacy", "exact smallest epsilon a mechanism table satisfies")
    sp.add_argument("--mech", required=True, help="mechanism table file")
    sp.add_argument("--space", required=True, help="input space file (supplies the metric)")
    sp.add_argument("--per-pair", action="store_true", help="include the per-pair maxima matrix")
    sp.add_argument("--threshold", type=float, help="pass iff epsilon_max <= threshold")

    sp = cmd("audit-utility", "worst-case in-ball mass at radius gamma")
    sp.add_argument("--mech", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--threshold", type=float, help="pass iff min_mass >= threshold")

    sp = cmd("lower-bound", "privacy floor forced by disjoint well-served balls")
    sp.add_argument("--mech", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--centers", required=True, help="comma-separated input labels; first is the reference")
    sp.add_argument("--r", type=float, required=True, help="target ball radius")
    sp.add_argument("--utility-threshold", type=float, default=0.5,
                    help="required per-ball mass (default 0.5)")
    sp.add_argument("--threshold", type=float, help="pass iff eps_lower >= threshold")

    sp = cmd("tradeoff", "privacy level sufficient for a (gamma, delta) target on a base")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--delta", type=float, required=True)

    sp = cmd("demo", "end-to-end pipeline on a built-in space, plus the "
                     "discrete-family lower-bound table")
    sp.add_argument("--space", choices=sorted(DEMO_SPACES), default="grid5")
    sp.add_argument("--gamma", type=float, default=0.5)
    sp.add_argument("--delta", type=float, default=0.1)

    return p


def _load_measure(source, fallback_space=None):
    """Measure file, with the space taken from the file itself or, when the
    file names none, from the surrounding command's map."""
    doc = formats.load_doc(source)
    if "space" in doc:
        return formats.measure_from_doc(doc)
    if fallback_space is None:
        raise SchemaError("measure document names no space and none is implied")
    return formats.measure_from_doc(doc, space=fallback_space)


def cmd_validate(args):
    labels, mat = formats.space_components(args.space)
    if len(labels) != mat.shape[0]:
        raise StructuralError(
            f"{len(labels)} labels but a {mat.shape[0]}x{mat.shape[1]} matrix"
        )
    report = validate_metric(mat)
    violations = [
        {
            "axiom": v.axiom,
            "witness": [labels[i] for i in v.witness],
            "detail": v.detail,
        }
        for v in report.violations
    ]
    result = {"ok": report.ok, "points": len(labels), "violations": violations}
    return result, (0 if report.ok else 3)


def cmd_net(args):
    space = formats.space_from_doc(args.space)
    centers = greedy_net(space, args.r)
    return {"radius": args.r, "size": len(centers), "centers": centers}, 0


def cmd_build_measure(args):
    space = formats.space_from_doc(args.space)
    measure, hier = covering_measure(space, depth=args.L)
    result = {
        "space": formats.space_to_doc(space),
        "weights": measure.as_dict(),
        "total_mass": measure.total_mass,
        "hierarchy": formats.hierarchy_to_doc(hier),
    }
    return result, 0


def cmd_calibrate(args):
    if args.m is not None:
        modulus = args.m
    else:
        measure = _load_measure(args.measure)
        modulus = measure.modulus(args.gamma / 2) / measure.total_mass
    beta = calibrate_beta(args.gamma, args.delta, modulus)
    return {"beta": beta, "modulus": modulus}, 0


def _mechanism_params(args):
    lmap = formats.map_from_doc(args.map)
    base = _load_measure(args.measure, fallback_space=lmap.codomain)
    return ExpMechParams(base=base, beta=args.beta, query=lmap), lmap


def cmd_tabulate(args):
    params, lmap = _mechanism_params(args)
    mech = tabulate(params)
    result = formats.table_to_doc(mech)
    result["lipschitz_c"] = lmap.constant
    result["privacy_bound"] = privacy_bound(args.beta, lmap.constant)
    return result, 0


def cmd_sample(args):
    params, _ = _mechanism_params(args)
    outputs = sample_many(params, args.input, args.seed, args.count)
    return {"input": args.input, "outputs": outputs}, 0


def _thresholded(result, passed, threshold):
    if threshold is None:
        return result, 0
    result["threshold"] = threshold
    result["passed"] = bool(passed)
    return result, (0 if passed else 1)


def cmd_audit_privacy(args):
    space = formats.space_from_doc(args.space)
    mech = formats.table_from_doc(args.mech, input_space=space)
    rep = audit_privacy(mech, include_per_pair=args.per_pair)
    result = {
        "epsilon_max": rep.epsilon_max,
        "witness": list(rep.witness) if rep.witness is not None else None,
    }
    if args.per_pair:
        result["per_pair_max"] = rep.per_pair_max
    ok = args.threshold is None or rep.epsilon_max <= args.threshold
    return _thresholded(result, ok, args.threshold)


def cmd_audit_utility(args):
    lmap = formats.map_from_doc(args.map)
    mech = formats.table_from_doc(args.mech, input_space=lmap.domain,
                                  output_space=lmap.codomain)
    rep = audit_utility(mech, lmap, args.gamma)
    result = {
        "gamma": rep.gamma,
        "min_mass": rep.min_mass,
        "worst_input": rep.worst_input,
        "per_input_mass": rep.per_input_mass,
    }
    ok = args.threshold is None or rep.min_mass >= args.threshold
    return _thresholded(result, ok, args.threshold)


def cmd_lower_bound(args):
    lmap = formats.map_from_doc(args.map)
    mech = formats.table_from_doc(args.mech, input_space=lmap.domain,
                                  output_space=lmap.codomain)
    centers = [c for c in args.centers.split(",") if c]
    rep = impossibility_lower_bound(mech, lmap, centers, args.r,
                                    utility_threshold=args.utility_threshold)
    result = {
        "eps_lower": rep.eps_lower,
        "witness_index": rep.witness_index,
        "witness_center": centers[rep.witness_index],
        "ball_mass_self": list(rep.ball_mass_self),
        "ball_mass_ref": list(rep.ball_mass_ref),
    }
    ok = args.threshold is None or rep.eps_lower >= args.threshold
    return _thresholded(result, ok, args.threshold)


def cmd_tradeoff(args):
    base = _load_measure(args.measure)
    bound = tradeoff_upper_bound(base, args.gamma, args.delta)
    return {"epsilon": bound.epsilon, "beta": bound.beta, "modulus": bound.modulus}, 0


def pipeline_demo(space_name: str, gamma: float, delta: float) -> dict:
    """End-to-end composition on one built-in space: build the hierarchical
    base, read off its modulus, calibrate beta, tabulate the identity
    mechanism, and audit both guarantees.  Always appends the lower-bound
    table for the discrete family, showing the audited floor beating
    ln(n/2) once per size."""
    space = DEMO_SPACES[space_name]()
    measure, hier = covering_measure(space)
    modulus = measure.modulus(gamma / 2) / measure.total_mass
    beta = calibrate_beta(gamma, delta, modulus)
    query = identity_map(space)
    mech = tabulate(ExpMechParams(base=measure, beta=beta, query=query))
    priv = audit_privacy(mech)
    util = audit_utility(mech, query, gamma)

    lower_rows = []
    for n in (4, 8, 16, 32):
        sp = discrete_space(n)
        q = identity_map(sp)
        b = math.log(2 * (n - 1))  # keeps every self-ball mass at 2/3
        tab = tabulate(ExpMechParams(base=uniform_measure(sp), beta=b, query=q))
        rep = impossibility_lower_bound(tab, q, list(sp.labels), 0.5)
        lower_rows.append({
            "n": n,
            "beta": b,
            "eps_lower": rep.eps_lower,
            "floor": math.log(n / 2),
        })

    return {
        "space": space_name,
        "hierarchy": formats.hierarchy_to_doc(hier),
        "measure": {"weights": measure.as_dict(), "total_mass": measure.total_mass},
        "modulus": modulus,
        "beta": beta,
        "privacy_bound": privacy_bound(beta, query.constant),
        "epsilon_audited": priv.epsilon_max,
        "utility_min_mass": util.min_mass,
        "lower_bound_table": lower_rows,
    }


def cmd_demo(args):
    return pipeline_demo(args.space, args.gamma, args.delta), 0


HANDLERS = {
    "validate": cmd_validate,
    "net": cmd_net,
    "build-measure": cmd_build_measure,
    "calibrate": cmd_calibrate,
    "tabulate": cmd_tabulate,
    "sample": cmd_sample,
    "audit-privacy": cmd_audit_privacy,
    "audit-utility": cmd_audit_utility,
    "lower-bound": cmd_lower_bound,
    "tradeoff": cmd_tradeoff,
    "demo": cmd_demo,
}


def _envelope(args, result: dict) -> dict:
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("command", "out") and v is not None
    }
    return {
        "command": args.command,
        "version": __version__,
        "params": params,
        "result": result,
    }


def _emit(args, doc: dict) -> None:
    if args.out:
        formats.write_doc(args.out, doc)
    else:
        sys.stdout.write(formats.dump_doc(doc))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result, code = HANDLERS[args.command](args)
    except SchemaError as exc:
        # Malformed input: report nothing, mirror argparse's own exit code.
        print(f"metricdp: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValueError) as exc:
        _emit(args, _envelope(args, {"error": str(exc), "error_kind": type(exc).__name__}))
        print(f"metricdp: error: {exc}", file=sys.stderr)
        return 3
    _emit(args, _envelope(args, result))
    return code


if __name__ == "__main__":
    sys.exit(main())
