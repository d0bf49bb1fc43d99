"""Command-line front end.

Exit codes: 0 success, 1 parse error, 2 invalid automorphism or lattice,
3 undecided (a certification tie).  All subcommands accept --json for
machine-readable output with a stable field order.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import AlgebraError
from .analysis import (
    AutomorphismError,
    LatticeError,
    VERDICT_UNDECIDED,
    compute_grading,
    GradingError,
    rigidity_verdict,
    validate_automorphism,
)
from .documents import (
    EXAMPLE_NAMES,
    TOOL_NAME,
    TOOL_VERSION,
    InputError,
    dumps_report,
    example_pair,
    geometry_report,
    input_document_dict,
    load_input_file,
    perturb_report,
    rational_str,
    validation_dict,
    verdict_report,
)
from .geometry import geometry_check_suite
from .poly import PolynomialDomainError
from .roots import CertificationError
from .shear import (
    ShearPreconditionError,
    ShearUnsupportedError,
    TrigPoly,
    find_shear_data,
    lipschitz_pairing_test,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INVALID = 2
EXIT_UNDECIDED = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilrigid",
        description="Rigidity analysis of Anosov automorphisms of nilmanifolds from exact rational data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_flags(p, needs_input=True):
        if needs_input:
            p.add_argument("input", nargs="?", help="path to a .toml or .json description")
            p.add_argument("--example", choices=EXAMPLE_NAMES, help="use a built-in example instead of a file")
        p.add_argument("--json", action="store_true", help="emit a machine-readable JSON report")
        p.add_argument("--tol", type=float, default=1e-12, help="relative certification tolerance (default 1e-12)")

    for name, helptext in (
        ("validate", "validate the algebra and the automorphism"),
        ("analyze", "full analysis report (grading, spectrum, sortedness, irreducibility)"),
        ("verdict", "print the rigidity verdict"),
        ("grading", "print the invariant grading"),
        ("geometry-check", "run the coarse-geometry invariant suite"),
    ):
        p = sub.add_parser(name, help=helptext)
        add_input_flags(p)

    p = sub.add_parser("perturb-witness", help="search for a shear family and a Lipschitz-failure witness")
    add_input_flags(p)
    p.add_argument("--K", type=int, default=5, dest="pairing_power", help="pairing power (default 5)")
    p.add_argument("--mode", type=str, default=None, help="comma-separated frequency vector, e.g. 1,0,0")
    p.add_argument("--invert", action="store_true", help="search the inverse automorphism only")

    p = sub.add_parser("example", help="print a built-in example as an input document")
    p.add_argument("name", choices=EXAMPLE_NAMES)
    p.add_argument("--json", action="store_true")
    return parser


def _resolve_input(args) -> tuple:
    if getattr(args, "example", None):
        alg, matrix = example_pair(args.example)
        return alg, matrix, args.example
    if not getattr(args, "input", None):
        raise InputError("no input given: pass a file path or --example NAME")
    doc = load_input_file(args.input)
    alg, matrix = doc.build()
    return alg, matrix, doc.metadata.get("name", args.input)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (InputError, PolynomialDomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (AutomorphismError, LatticeError, AlgebraError, ShearUnsupportedError, ShearPreconditionError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except (CertificationError, GradingError) as err:
        print(f"undecided: {err}", file=sys.stderr)
        return EXIT_UNDECIDED


def _dispatch(args) -> int:
    if args.command == "example":
        alg, matrix = example_pair(args.name)
        doc = input_document_dict(alg, matrix, args.name)
        print(dumps_report(doc))
        return EXIT_OK

    alg, matrix, name = _resolve_input(args)

    if args.command == "validate":
        auto = validate_automorphism(alg, matrix)
        report = validation_dict(alg, matrix, auto.bracket_preserving, auto.lattice_preserving, None)
        if args.json:
            print(dumps_report({"tool": {"name": TOOL_NAME, "version": TOOL_VERSION}, "input": {"name": name}, **report}))
        else:
            print(f"{name}: valid automorphism (step {report['nilpotency_step']}, det {report['determinant']})")
        return EXIT_OK

    if args.command in ("verdict", "analyze"):
        auto = validate_automorphism(alg, matrix)
        verdict = rigidity_verdict(auto, args.tol)
        report = verdict_report(verdict, name, args.tol)
        if args.json:
            print(dumps_report(report))
        else:
            _print_verdict_text(report, full=args.command == "analyze")
        return EXIT_UNDECIDED if verdict.verdict == VERDICT_UNDECIDED else EXIT_OK

    if args.command == "grading":
        auto = validate_automorphism(alg, matrix)
        grading = compute_grading(auto)
        report = {
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "input": {"name": name, "dim": alg.dim},
            "lower_central_series_dims": [s.dim for s in grading.lcs],
            "grade_dims": [g.dim for g in grading.grades],
            "carnot_verified": grading.carnot_verified,
            "grade_polynomials": [[rational_str(c) for c in p.coeffs] for p in grading.grade_polys],
        }
        if args.json:
            print(dumps_report(report))
        else:
            print(f"{name}: lcs dims {report['lower_central_series_dims']}, grades {report['grade_dims']}, "
                  f"carnot={report['carnot_verified']}")
            for k, coeffs in enumerate(report["grade_polynomials"], start=1):
                print(f"  grade {k} charpoly (ascending): {coeffs}")
        return EXIT_OK

    if args.command == "geometry-check":
        auto = validate_automorphism(alg, matrix)
        outcomes = geometry_check_suite(auto)
        report = geometry_report(name, outcomes)
        if args.json:
            print(dumps_report(report))
        else:
            for entry in report["checks"]:
                print(f"[{entry['status'].upper():4}] {entry['name']}: {entry['detail']}")
            print("overall:", "PASS" if report["passed"] else "FAIL")
        return EXIT_OK if report["passed"] else EXIT_UNDECIDED

    if args.command == "perturb-witness":
        auto = validate_automorphism(alg, matrix)
        data = find_shear_data(auto, invert_only=args.invert, tol=args.tol)
        pairing = None
        mode = None
        if data is not None:
            mode = _choose_mode(args.mode, data)
            phi = TrigPoly.character(data.base_matrix.rows, mode, 1.0, real=True)
            pairing = lipschitz_pairing_test(phi, data, args.pairing_power)
        report = perturb_report(name, data, pairing, mode, args.pairing_power)
        if args.json:
            print(dumps_report(report))
        else:
            if data is None:
                print(f"{name}: no shear data (no slow central unstable line is dominated)")
            else:
                side = "L^-1" if data.inverted else "L"
                print(f"{name}: shear data on {side}: |lambda_u|={abs(data.lambda_u):.6g} > "
                      f"|lambda_w|={abs(data.lambda_w):.6g} > 1")
                print(f"  pairing at K={args.pairing_power}, mode {list(mode)}: left={pairing.left:.6g}, "
                      f"right={pairing.right:.6g}, witness={pairing.witness}")
        return EXIT_OK

    raise InputError(f"unknown command {args.command!r}")


def _choose_mode(raw: str | None, data) -> tuple[int, ...]:
    d = data.base_matrix.rows
    if raw is not None:
        try:
            mode = tuple(int(x) for x in raw.split(","))
        except ValueError:
            raise InputError(f"cannot parse --mode {raw!r}: expected comma-separated integers")
        if len(mode) != d:
            raise InputError(f"--mode must have {d} entries")
        return mode
    # deterministic scan for a frequency visible to the u-derivative
    for k in range(d):
        mode = tuple(int(i == k) for i in range(d))
        if abs(sum(m * u for m, u in zip(mode, data.u))) > 1e-6:
            return mode
    return tuple(1 for _ in range(d))


def _print_verdict_text(report: dict, full: bool) -> None:
    label = {
        "rigid": "RIGID",
        "not_rigid": "NOT RIGID",
        "inapplicable": "INAPPLICABLE",
        "undecided": "UNDECIDED",
    }[report["verdict"]]
    print(f"{report['input']['name']}: {label}")
    sp = report["spectrum"]
    if sp is not None:
        print(f"  simple spectrum: {sp['simple']}, hyperbolic: {sp['hyperbolic']}")
    so = report["sortedness"]
    if so["unstable"] is not None:
        print(f"  sorted unstable: {so['unstable']}, sorted stable: {so['stable']}")
    if report["irreducibility"] is not None:
        flags = [r["irreducible"] for r in report["irreducibility"]]
        print(f"  irreducible per level: {flags}")
    for w in report["witnesses"]:
        print(f"  witness: {w}")
    if full and sp is not None:
        print("  eigenvalues:")
        for e in sp["eigenvalues"]:
            tag = "stable" if e["stable"] else "unstable"
            print(
                f"    grade {e['grade']}: {e['re']:.9g}"
                + (f"{e['im']:+.9g}i" if e["im"] else "")
                + f"  (|.|={e['modulus']:.9g}, {tag}, escape {e['escape_speed']:.9g}, "
                + f"radius {e['radius']:.3g})"
            )
        if report["grading"] is not None:
            print(f"  grade dims: {report['grading']['grade_dims']}, "
                  f"carnot: {report['grading']['carnot_verified']}")


if __name__ == "__main__":
    sys.exit(main())
