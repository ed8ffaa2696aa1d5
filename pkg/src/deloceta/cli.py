"""Batch command-line front end.

Subcommands::

    grp describe | grp ball
    coh rank
    cocycle build | cocycle skew | cocycle periodicity | cocycle growth-fit
    eta compute | tau compute | ch compute
    verify {lipschitz, transgression, s-invariance, aps-model,
            homotopy-identity, averaging}
    validate

Exit codes: 0 success, 2 validation error, 3 computation failure,
64 unrecognized command. Reports embed the full configuration (group
spec, generating-set order, radii, seeds, witness choices) and are
byte-deterministic for a fixed configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import List, Optional

from . import __version__
from .cochains import (
    FLAVOR_DELOCALIZED,
    FLAVOR_GROUP,
    Cochain,
    all_tuples,
    averaging_R,
    build_delocalized_cocycle,
    chain_homotopy_p,
    group_coboundary,
    inclusion_iota,
    make_relative_cochain,
    periodicity_S,
    random_cochain,
    skew_symmetrize,
    trace_indicator,
    AVERAGING_COEFFICIENT_NOTE,
)
from .groups import (
    CapacityError,
    Group,
    GroupError,
    RadiusExceededError,
    group_from_string,
)
from .pairings import (
    aps_model_check,
    chern_character,
    connecting_path,
    determinant_tau,
    eta_from_spectrum,
    eta_invariant,
    rho_path,
    verify_rho_eta,
    verify_s_invariance,
    verify_transgression,
)
from .polygrowth import growth_bound_estimate, lipschitz_check
from .quadrature import QuadratureError
from .ranks import ComplexTruncation, SizeCapError
from .rational import QC
from .schemas import validate_document
from .serialize import (
    cochain_from_json,
    cochain_to_json,
    dumps_deterministic,
    load_cochain,
)
from .spectral import (
    AlgebraElement,
    GapError,
    ModelError,
    SpectralModel,
    eigendecompose,
    load_spectrum,
)

DEFAULT_SEED = 42
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_COMPUTE = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def default_radius() -> int:
    return int(os.environ.get("DELOCETA_RADIUS", "8"))


def _emit(report: dict, output: Optional[str]) -> None:
    text = dumps_deterministic(report)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_group(args) -> Group:
    return group_from_string(args.group)


def _load_model(args, group: Optional[Group] = None) -> SpectralModel:
    if getattr(args, "model", None):
        with open(args.model) as fh:
            element = AlgebraElement.from_json(json.load(fh), group=group)
        return eigendecompose(element)
    if group is None:
        raise GroupError("either --model or --group is required")
    gamma = group.parse_element(args.gamma)
    return _default_model(group, gamma)


def _default_model(group: Group, gamma) -> SpectralModel:
    """Hermitian gamma + gamma^{-1} with its spectrum pushed off zero."""
    base = AlgebraElement.from_scalar_coeffs(group, {gamma: 1.0, group.inverse(gamma): 1.0})
    if gamma == group.inverse(gamma):
        base = AlgebraElement.from_scalar_coeffs(
            group, {group.identity(): 1.0, gamma: 2.0}
        )
        return eigendecompose(base)
    model0 = eigendecompose(base + AlgebraElement.unit(group, 1).scaled(0.0))
    shifted = model0.functional_calculus(lambda x: x + 0.75 if x >= 0 else x - 0.75)
    return eigendecompose(shifted)


def _load_cocycle(args, group: Group, model: Optional[SpectralModel] = None) -> Cochain:
    if getattr(args, "cocycle", None):
        return load_cochain(args.cocycle, group=group)
    if getattr(args, "gamma", None):
        cls = group.conjugacy_class(group.parse_element(args.gamma), args.radius)
        return trace_indicator(cls)
    raise GroupError("either --cocycle or --gamma (for tr_gamma) is required")


def _csv_row(report) -> str:
    d = report.as_dict()
    passed = d["checks"].get("passed", "")
    return (
        f'{d["invariant"]},{d["provenance"].get("group", {}).get("kind", "")},'
        f'{d["provenance"].get("gamma", "")},{d["provenance"].get("m", "")},'
        f'{d["value"]["re"]!r},{d["value"]["im"]!r},{d["error"]!r},'
        f'{d["truncation"]!r},{passed}'
    )


CSV_HEADER = "invariant,group,gamma,m,value_re,value_im,err,T,passed"


def _semantic_argv(argv: List[str]) -> List[str]:
    """The argv with output-destination flags removed, so reports stay
    byte-identical regardless of where they are written."""
    out = []
    skip = False
    for token in argv:
        if skip:
            skip = False
            continue
        if token in ("-o", "--output", "--csv"):
            skip = True
            continue
        out.append(token)
    return out


def _emit_pairing(report, args) -> None:
    doc = report.as_dict()
    doc["config"] = {
        "command": " ".join(_semantic_argv(getattr(args, "_argv", []) or [])),
        "seed": getattr(args, "seed", None),
        "radius": getattr(args, "radius", None),
        "tolerance": getattr(args, "tol", None),
    }
    _emit(doc, args.output)
    if getattr(args, "csv", None):
        with open(args.csv, "w") as fh:
            fh.write(CSV_HEADER + "\n" + _csv_row(report) + "\n")


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def cmd_grp_describe(args) -> int:
    grp = _load_group(args)
    doc = {
        "group": grp.spec(),
        "kind": grp.kind,
        "abelian": grp.is_abelian,
        "finite": grp.is_finite,
        "generators": [grp.element_name(s) for s in grp.generators],
    }
    if grp.is_finite:
        doc["order"] = grp.order
    if args.growth_radius:
        c0, m = grp.growth_degree_fit(args.growth_radius)
        doc["growth_fit"] = {"C0": c0, "m": m, "max_radius": args.growth_radius}
    _emit(doc, args.output)
    return EXIT_OK


def cmd_grp_ball(args) -> int:
    grp = _load_group(args)
    ball = grp.ball(args.radius)
    doc = {
        "group": grp.spec(),
        "radius": args.radius,
        "size": len(ball),
        "elements": [grp.element_name(g) for g in ball],
    }
    _emit(doc, args.output)
    return EXIT_OK


def cmd_coh_rank(args) -> int:
    grp = _load_group(args)
    cls = None
    if args.flavor == FLAVOR_DELOCALIZED:
        if not args.gamma:
            raise GroupError("delocalized ranks need --gamma")
        cls = grp.conjugacy_class(grp.parse_element(args.gamma), args.radius)
    trunc = ComplexTruncation(grp, args.flavor, args.max_degree, cls=cls)
    ranks = [trunc.cohomology_rank(d) for d in range(args.max_degree + 1)]
    doc = {
        "group": grp.spec(),
        "flavor": args.flavor,
        "gamma": args.gamma,
        "ranks": ranks,
        "dimensions": [trunc.dimension(d) for d in range(args.max_degree + 1)],
    }
    _emit(doc, args.output)
    return EXIT_OK


def cmd_cocycle_build(args) -> int:
    import itertools

    grp = _load_group(args)
    cls = grp.conjugacy_class(grp.parse_element(args.gamma), args.radius)
    alpha = load_cochain(args.alpha, group=grp)
    if alpha.flavor != "relative":
        raise GroupError(f"--alpha must be a relative cochain, got {alpha.flavor!r}")
    phi = build_delocalized_cocycle(alpha, cls)
    if grp.is_finite:
        tuples = list(all_tuples(grp, phi.arity))
    else:
        ball = grp.ball(args.entry_radius)
        tuples = list(itertools.product(ball, repeat=phi.arity))
    phi = phi.materialize(tuples)
    phi.cls = cls
    _emit(cochain_to_json(phi), args.output)
    return EXIT_OK


def cmd_cocycle_skew(args) -> int:
    phi = load_cochain(args.cochain)
    grp = phi.group
    skew = skew_symmetrize(phi)
    support = set()
    import itertools as it

    for key in phi.entries:
        for perm in it.permutations(range(len(key))):
            support.add(tuple(key[p] for p in perm))
    out = skew.materialize(sorted(support, key=lambda t: [grp.shortlex_key(g) for g in t]))
    _emit(cochain_to_json(out, include_witnesses=False), args.output)
    return EXIT_OK


def cmd_cocycle_periodicity(args) -> int:
    phi = load_cochain(args.cochain)
    grp = phi.group
    if not grp.is_finite:
        raise GroupError("periodicity output materializes on finite groups only")
    s_phi = periodicity_S(phi, delocalized=args.delocalized or None)
    out = s_phi.materialize(list(all_tuples(grp, s_phi.arity)))
    _emit(cochain_to_json(out, include_witnesses=False), args.output)
    return EXIT_OK


def cmd_cocycle_growth_fit(args) -> int:
    phi = load_cochain(args.cochain)
    bound = growth_bound_estimate(phi, args.radius)
    doc = {
        "check": "growth-bound",
        "group": phi.group.spec(),
        "R": bound.r_value,
        "k": bound.k,
        "max_radius_checked": bound.max_radius_checked,
        "grid_exceeded": bound.grid_exceeded,
    }
    _emit(doc, args.output)
    return EXIT_OK


def cmd_eta(args) -> int:
    if args.spectrum:
        spectrum = load_spectrum(args.spectrum, eta_mode=True)
        report = eta_from_spectrum(spectrum, args.class_id, tol=args.tol)
        _emit_pairing(report, args)
        return EXIT_OK
    grp = group_from_string(args.group) if args.group else None
    model = _load_model(args, group=grp)
    grp = model.group
    phi = _load_cocycle(args, grp, model)
    report = eta_invariant(phi, model, args.m, tol=args.tol)
    _emit_pairing(report, args)
    return EXIT_OK


def cmd_tau(args) -> int:
    from .pairings import path_from_json

    if args.path_file:
        with open(args.path_file) as fh:
            path = path_from_json(json.load(fh))
        path.validate()
        grp = path.group
        phi = _load_cocycle(args, grp)
    else:
        grp = group_from_string(args.group) if args.group else None
        model = _load_model(args, group=grp)
        grp = model.group
        phi = _load_cocycle(args, grp, model)
        if args.path == "connecting":
            if args.idempotent:
                with open(args.idempotent) as fh:
                    p = AlgebraElement.from_json(json.load(fh), group=grp)
            else:
                p = _positive_projection(model)
            path = connecting_path(p)
        elif args.path == "rho":
            path = rho_path(model)
            if args.reversed_orientation:
                path = path.reversed_orientation()
        else:
            raise GroupError(f"unknown path kind {args.path!r}")
    report = determinant_tau(phi, path, args.m, tol=args.tol)
    _emit_pairing(report, args)
    return EXIT_OK


def _positive_projection(model: SpectralModel) -> AlgebraElement:
    out = AlgebraElement(model.group, model.n, {}, 0j)
    for lam, proj in zip(model.eigenvalues, model.projections):
        if lam > 0:
            out = out + proj
    return out


def cmd_ch(args) -> int:
    grp = group_from_string(args.group) if args.group else None
    model = _load_model(args, group=grp)
    grp = model.group
    phi = _load_cocycle(args, grp, model)
    if args.idempotent:
        with open(args.idempotent) as fh:
            p = AlgebraElement.from_json(json.load(fh), group=grp)
    else:
        p = _positive_projection(model)
    value = chern_character(phi, p, args.m)
    doc = {
        "invariant": "chern-character",
        "value": {"re": value.real, "im": value.imag},
        "m": args.m,
        "group": grp.spec(),
        "gamma": args.gamma,
    }
    _emit(doc, args.output)
    return EXIT_OK


# -- verify ----------------------------------------------------------------


def cmd_verify_lipschitz(args) -> int:
    grp = _load_group(args)
    cls = grp.conjugacy_class(grp.parse_element(args.gamma), 2 * args.radius)
    report = lipschitz_check(cls, args.radius)
    doc = report.as_dict(grp)
    doc["group"] = grp.spec()
    doc["gamma"] = args.gamma
    doc["generators"] = [grp.element_name(s) for s in grp.generators]
    _emit(doc, args.output)
    return EXIT_OK if report.passed else EXIT_COMPUTE


def cmd_verify_transgression(args) -> int:
    grp = _load_group(args)
    model = _load_model(args, group=grp)
    cls = grp.conjugacy_class(grp.parse_element(args.gamma), args.radius)
    rng = random.Random(args.seed)
    phi = random_cochain(
        grp, 2 * args.m - 1, FLAVOR_DELOCALIZED, rng, cls=cls, make_cyclic=True
    ).materialize(list(all_tuples(grp, 2 * args.m)))
    report = verify_transgression(phi, model, args.m)
    _emit_pairing(report, args)
    return EXIT_OK if report.checks["passed"] else EXIT_COMPUTE


def cmd_verify_s_invariance(args) -> int:
    grp = _load_group(args)
    model = _load_model(args, group=grp)
    cls = grp.conjugacy_class(grp.parse_element(args.gamma), args.radius)
    phi = _load_cocycle(args, grp, model)
    report = verify_s_invariance(
        phi, model, args.m, idempotents=[_positive_projection(model)], tol=args.tol
    )
    _emit_pairing(report, args)
    return EXIT_OK if report.checks["passed"] else EXIT_COMPUTE


def cmd_verify_aps(args) -> int:
    grp = _load_group(args)
    model = _load_model(args, group=grp)
    phi = _load_cocycle(args, grp, model)
    p = _positive_projection(model)
    report = aps_model_check(phi, p, model, args.m, tol=args.tol)
    rho = verify_rho_eta(phi, model, args.m, tol=args.tol)
    report.checks["rho_eta"] = rho.checks
    _emit_pairing(report, args)
    ok = report.checks["passed"] and rho.checks["passed"]
    return EXIT_OK if ok else EXIT_COMPUTE


def cmd_verify_homotopy(args) -> int:
    grp = _load_group(args)
    rng = random.Random(args.seed)
    failures = []
    checked = 0
    for _ in range(args.count):
        degree = rng.randint(1, args.max_degree)
        phi = random_cochain(grp, degree, FLAVOR_GROUP, rng, n_entries=6)
        f_phi = skew_symmetrize(phi)
        lhs = f_phi - phi
        rhs = group_coboundary(chain_homotopy_p(phi)) + chain_homotopy_p(
            group_coboundary(phi)
        )
        tuples = list(all_tuples(grp, degree + 1))
        if len(tuples) > 256:
            tuples = [
                tuple(rng.choice(list(grp.elements())) for _ in range(degree + 1))
                for _ in range(256)
            ]
        for t in tuples:
            checked += 1
            if lhs(t) != rhs(t):
                failures.append({"degree": degree, "tuple": [grp.element_name(g) for g in t]})
                break
    doc = {
        "check": "homotopy-identity",
        "group": grp.spec(),
        "seed": args.seed,
        "cochains": args.count,
        "tuples_checked": checked,
        "failures": failures,
        "passed": not failures,
    }
    _emit(doc, args.output)
    return EXIT_OK if not failures else EXIT_COMPUTE


def cmd_verify_averaging(args) -> int:
    grp = _load_group(args)
    cls = grp.conjugacy_class(grp.parse_element(args.gamma), args.radius)
    rng = random.Random(args.seed)
    rows = []
    passed = True
    for degree in range(args.max_degree + 1):
        alpha = make_relative_cochain(grp, cls, degree, rng)
        r_iota = averaging_R(inclusion_iota(alpha), cls)
        expect = QC(cls.order ** (degree + 1))
        ok = all(
            r_iota(t) == alpha(t) * expect for t in all_tuples(grp, degree + 1)
        )
        passed = passed and ok
        rows.append({"degree": degree, "factor": cls.order ** (degree + 1), "exact": ok})
    doc = {
        "check": "averaging",
        "group": grp.spec(),
        "gamma": args.gamma,
        "ord_gamma": cls.order,
        "seed": args.seed,
        "rows": rows,
        "coefficient_discrepancy": AVERAGING_COEFFICIENT_NOTE,
        "stated_coefficient_factor": (cls.order * (cls.order + 1) // 2),
        "passed": passed,
    }
    _emit(doc, args.output)
    return EXIT_OK if passed else EXIT_COMPUTE


def cmd_validate(args) -> int:
    try:
        with open(args.file) as fh:
            doc = json.load(fh)
    except OSError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        _emit({"file": args.file, "diagnostics": [{"path": "$", "message": str(exc)}]}, args.output)
        return EXIT_VALIDATION
    diagnostics = validate_document(doc, args.schema)
    # semantic pass: rationals such as "1/0" are caught by the pattern, but
    # attempt a real parse for cochain entries to surface field paths
    if args.schema == "cochain" and not diagnostics:
        try:
            cochain_from_json(doc)
        except Exception as exc:  # noqa: BLE001 - reported as a diagnostic
            from .schemas import Diagnostic

            diagnostics = [Diagnostic("$.entries", str(exc))]
    _emit(
        {
            "file": args.file,
            "schema": args.schema,
            "diagnostics": [{"path": d.path, "message": d.message} for d in diagnostics],
            "valid": not diagnostics,
        },
        args.output,
    )
    return EXIT_OK if not diagnostics else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, model: bool = False, pairing: bool = False):
    p.add_argument("--output", "-o", help="write the JSON report here (default stdout)")
    p.add_argument("--radius", type=int, default=default_radius(), help="enumeration radius")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="PRNG seed (echoed in reports)")
    if model:
        p.add_argument("--model", help="spectral model JSON file")
        p.add_argument("--group", help="group shorthand, e.g. cyclic:2")
        p.add_argument("--gamma", help="conjugacy class base element name")
        p.add_argument("--cocycle", help="cochain JSON file (default: tr_gamma)")
    if pairing:
        p.add_argument("--m", type=int, default=0, help="half the cocycle degree")
        p.add_argument("--tol", type=float, default=1e-8, help="quadrature tolerance")
        p.add_argument("--csv", help="also append a CSV row here")


def build_parser() -> _Parser:
    parser = _Parser(prog="deloceta", description=__doc__)
    parser.add_argument("--version", action="version", version=f"deloceta {__version__}")
    sub = parser.add_subparsers(dest="command")

    grp = sub.add_parser("grp", help="group kernel queries")
    grp_sub = grp.add_subparsers(dest="subcommand")
    p = grp_sub.add_parser("describe")
    p.add_argument("--group", required=True)
    p.add_argument("--growth-radius", type=int, default=0)
    _add_common(p)
    p.set_defaults(handler=cmd_grp_describe)
    p = grp_sub.add_parser("ball")
    p.add_argument("--group", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_grp_ball)

    coh = sub.add_parser("coh", help="cohomology ranks")
    coh_sub = coh.add_subparsers(dest="subcommand")
    p = coh_sub.add_parser("rank")
    p.add_argument("--group", required=True)
    p.add_argument("--gamma")
    p.add_argument("--flavor", default=FLAVOR_DELOCALIZED)
    p.add_argument("--max-degree", type=int, default=2)
    _add_common(p)
    p.set_defaults(handler=cmd_coh_rank)

    coc = sub.add_parser("cocycle", help="cochain constructions")
    coc_sub = coc.add_subparsers(dest="subcommand")
    p = coc_sub.add_parser("build")
    p.add_argument("--group", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--alpha", required=True, help="relative cochain JSON file")
    p.add_argument("--entry-radius", type=int, default=3)
    _add_common(p)
    p.set_defaults(handler=cmd_cocycle_build)
    p = coc_sub.add_parser("skew")
    p.add_argument("--cochain", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_cocycle_skew)
    p = coc_sub.add_parser("periodicity")
    p.add_argument("--cochain", required=True)
    p.add_argument("--delocalized", action="store_true")
    _add_common(p)
    p.set_defaults(handler=cmd_cocycle_periodicity)
    p = coc_sub.add_parser("growth-fit")
    p.add_argument("--cochain", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_cocycle_growth_fit)

    p = sub.add_parser("eta").add_subparsers(dest="subcommand").add_parser("compute")
    _add_common(p, model=True, pairing=True)
    p.add_argument("--spectrum", help="spectrum JSON file (m = 0 trace pairing)")
    p.add_argument("--class-id", help="class id inside the spectrum file")
    p.set_defaults(handler=cmd_eta)

    p = sub.add_parser("tau").add_subparsers(dest="subcommand").add_parser("compute")
    _add_common(p, model=True, pairing=True)
    p.add_argument("--path", choices=["connecting", "rho"], default="rho")
    p.add_argument("--path-file", help="sampled path JSON (integrated by finite differences)")
    p.add_argument("--idempotent", help="idempotent JSON (AlgebraElement schema)")
    p.add_argument("--reversed-orientation", action="store_true")
    p.set_defaults(handler=cmd_tau)

    p = sub.add_parser("ch").add_subparsers(dest="subcommand").add_parser("compute")
    _add_common(p, model=True, pairing=True)
    p.add_argument("--idempotent", help="idempotent JSON (AlgebraElement schema)")
    p.set_defaults(handler=cmd_ch)

    ver = sub.add_parser("verify", help="identity checks")
    ver_sub = ver.add_subparsers(dest="subcommand")
    p = ver_sub.add_parser("lipschitz")
    p.add_argument("--group", required=True)
    p.add_argument("--gamma", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_verify_lipschitz)
    p = ver_sub.add_parser("transgression")
    _add_common(p, model=True, pairing=True)
    p.set_defaults(handler=cmd_verify_transgression, m=1)
    p = ver_sub.add_parser("s-invariance")
    _add_common(p, model=True, pairing=True)
    p.set_defaults(handler=cmd_verify_s_invariance)
    p = ver_sub.add_parser("aps-model")
    _add_common(p, model=True, pairing=True)
    p.set_defaults(handler=cmd_verify_aps)
    p = ver_sub.add_parser("homotopy-identity")
    p.add_argument("--group", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--max-degree", type=int, default=4)
    _add_common(p)
    p.set_defaults(handler=cmd_verify_homotopy)
    p = ver_sub.add_parser("averaging")
    p.add_argument("--group", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--max-degree", type=int, default=2)
    _add_common(p)
    p.set_defaults(handler=cmd_verify_averaging)

    p = sub.add_parser("validate")
    p.add_argument("--file", required=True)
    p.add_argument("--schema", required=True, choices=["group", "cochain", "model", "spectrum", "path"])
    p.add_argument("--output", "-o")
    p.set_defaults(handler=cmd_validate)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._argv = list(argv)
    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return handler(args)
    except (GroupError, ModelError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"validation error: {exc}\n")
        return EXIT_VALIDATION
    except (QuadratureError, CapacityError, GapError, RadiusExceededError, SizeCapError) as exc:
        sys.stderr.write(f"computation failure: {exc}\n")
        return EXIT_COMPUTE


def entrypoint() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    entrypoint()
