"""Command-line front end: run verification cases and print q-expansions.

Exit status: 0 when every requested check passes, 1 when any verdict is
"fail", 2 for usage errors, 3 for internal failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra import half_q_label, pontryagin_all
from .bundles import Family, GeometrySpec, ch_theta_bundle
from .decomp import BrBetarKind, extract_br_betar
from .errors import UsageError
from .theta import ModularFormId, modular_form
from .verifier import CaseId, CaseRequest, Report, default_grid, run_suite, verify_case

_FAMILY_NAMES = {"ab": Family.AB, "ab-xi": Family.AB_XI, "two-line": Family.TWO_LINE}
_FAMILY_LABELS = {v: k for k, v in _FAMILY_NAMES.items()}

_CASE_DEFAULT_FAMILY = {
    CaseId.THM31: "ab", CaseId.COR32: "ab", CaseId.COR33: "ab",
    CaseId.EQ318_TRANSFER: "ab", CaseId.HLZ_SPECIAL: "ab",
    CaseId.THM34: "ab-xi",
    CaseId.THM41: "two-line", CaseId.COR42: "two-line", CaseId.COR43: "two-line",
    CaseId.DOUBLE_ROUTE: "ab", CaseId.BR_BETAR_CLOSED_FORMS: "ab",
}

_MODULAR_OBJECTS = {
    "delta1": ModularFormId.DELTA1, "eps1": ModularFormId.EPS1,
    "delta2": ModularFormId.DELTA2, "eps2": ModularFormId.EPS2,
    "e2": ModularFormId.E2,
}

_BR_KIND_BY_FAMILY = {
    Family.AB: (BrBetarKind.B_R, BrBetarKind.BETA_R),
    Family.AB_XI: (BrBetarKind.B_TILDE_R, BrBetarKind.BETA_TILDE_R),
    Family.TWO_LINE: (BrBetarKind.B_BAR_R, BrBetarKind.BETA_BAR_R),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anomcancel",
        description="Exact verification of twisted elliptic-genus anomaly "
                    "cancellation identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification cases")
    v.add_argument("--case", help="case identifier, e.g. THM31 or COR32")
    v.add_argument("--k", type=int, default=1, help="manifold dimension is 4k")
    v.add_argument("--l", type=int, default=1, help="auxiliary bundle rank is 2l")
    v.add_argument("--a", type=int, default=1, help="first twist integer")
    v.add_argument("--b", type=int, default=0, help="second twist integer")
    v.add_argument("--family", choices=sorted(_FAMILY_NAMES),
                   help="bundle family (defaults to the case's natural family)")
    v.add_argument("--q-order", type=int, dest="q_order",
                   help="truncation order in integer q units (default k+2)")
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.add_argument("--suite", help="path to a JSON suite configuration")
    v.add_argument("--all", action="store_true", help="run the default grid")
    v.add_argument("--tolerance", type=float,
                   help="override the numeric tolerances")

    e = sub.add_parser("expand", help="print q-expansions of named objects")
    e.add_argument("--object", required=True,
                   choices=sorted(_MODULAR_OBJECTS) + ["theta-bundle", "br", "betar"])
    e.add_argument("--k", type=int, default=1)
    e.add_argument("--l", type=int, default=1)
    e.add_argument("--a", type=int, default=1)
    e.add_argument("--b", type=int, default=0)
    e.add_argument("--family", choices=sorted(_FAMILY_NAMES), default="ab")
    e.add_argument("--which", type=int, choices=[1, 2], default=2,
                   help="which twisted bundle (theta-bundle object only)")
    e.add_argument("--q-order", type=int, dest="q_order", default=3)
    e.add_argument("--format", choices=["text", "json"], default="text")
    return parser


# ---------------------------------------------------------------------------
# report serialization


def _half_index_str(n: int | None) -> str | None:
    return None if n is None else str(Fraction(n, 2))


def report_to_dict(report: Report) -> dict:
    spec = report.spec
    return {
        "case": report.case.value,
        "spec": None if spec is None else {
            "family": _FAMILY_LABELS[spec.family],
            "k": spec.k, "l": spec.l, "a": spec.a, "b": spec.b,
        },
        "qOrder": report.q_order,
        "verdict": report.verdict,
        "residual": {
            "firstNonzeroQOrder": _half_index_str(report.residual_q),
            "degree": report.residual_degree,
        },
        "quantities": [{"name": n, "pontryagin": v} for n, v in report.quantities],
        "notes": list(report.notes),
        "millis": report.millis,
    }


def dumps_reports(reports: list[Report]) -> str:
    return json.dumps([report_to_dict(r) for r in reports], indent=2)


def format_report_text(report: Report) -> str:
    tag = "PASS" if report.passed else "FAIL"
    spec = report.spec
    head = f"[{tag}] {report.case.value}"
    if spec is not None:
        head += (f" family={_FAMILY_LABELS[spec.family]}"
                 f" k={spec.k} l={spec.l} a={spec.a} b={spec.b}")
    head += f" N={report.q_order}"
    if report.residual_q is None and report.residual_degree is None:
        head += " residual=0"
    else:
        where = []
        if report.residual_q is not None:
            where.append(f"q^({Fraction(report.residual_q, 2)})")
        if report.residual_degree is not None:
            where.append(f"degree {report.residual_degree}")
        head += " residual at " + ", ".join(where)
    head += f" ({report.millis} ms)"
    lines = [head]
    lines += [f"    {name} = {value}" for name, value in report.quantities]
    lines += [f"    note: {note}" for note in report.notes]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# verify command


def _spec_from_args(family: Family, k: int, l: int, a: int, b: int) -> GeometrySpec:
    # GeometrySpec validation rejects invalid combinations (e.g. twists other
    # than (1, 0) for the two-line family) before any case executes.
    return GeometrySpec(k=k, l=l, a=a, b=b, family=family)


def _request_from_args(args: argparse.Namespace) -> CaseRequest:
    try:
        case = CaseId(args.case)
    except ValueError:
        raise UsageError(f"unknown case {args.case!r}; choose from "
                         + ", ".join(c.value for c in CaseId))
    if case in (CaseId.NUMERIC_MODULARITY, CaseId.JACOBI_QSERIES):
        return CaseRequest(case, None, args.q_order, tolerance=args.tolerance)
    family_name = args.family or _CASE_DEFAULT_FAMILY[case]
    spec = _spec_from_args(_FAMILY_NAMES[family_name], args.k, args.l, args.a, args.b)
    return CaseRequest(case, spec, args.q_order, tolerance=args.tolerance)


def _requests_from_suite_file(path: str) -> tuple[list[CaseRequest], str | None]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read suite config {path!r}: {exc}")
    if not isinstance(config, dict) or "cases" not in config:
        raise UsageError("suite config must be an object with a 'cases' array")
    tolerance = config.get("tolerance")
    requests = []
    for entry in config["cases"]:
        try:
            case = CaseId(entry["case"])
        except (KeyError, ValueError):
            raise UsageError(f"suite entry with unknown case: {entry!r}")
        spec = None
        if case not in (CaseId.NUMERIC_MODULARITY, CaseId.JACOBI_QSERIES):
            family_name = entry.get("family", _CASE_DEFAULT_FAMILY[case])
            if family_name not in _FAMILY_NAMES:
                raise UsageError(f"unknown family {family_name!r}")
            spec = _spec_from_args(_FAMILY_NAMES[family_name],
                                   entry.get("k", 1), entry.get("l", 1),
                                   entry.get("a", 1), entry.get("b", 0))
        requests.append(CaseRequest(case, spec, entry.get("qOrder"),
                                    perturb=bool(entry.get("perturb", False)),
                                    tolerance=tolerance))
    return requests, config.get("format")


def cmd_verify(args: argparse.Namespace) -> int:
    out_format = args.format
    if args.suite:
        requests, fmt = _requests_from_suite_file(args.suite)
        if fmt in ("text", "json"):
            out_format = fmt
        reports = run_suite(requests)
    elif args.all:
        reports = run_suite(default_grid())
    elif args.case:
        req = _request_from_args(args)
        reports = [verify_case(req.case, req.spec, req.q_order,
                               req.perturb, req.tolerance)]
    else:
        raise UsageError("choose one of --case, --all or --suite")

    if out_format == "json":
        print(dumps_reports(reports))
    else:
        for report in reports:
            print(format_report_text(report))
        passed = sum(r.passed for r in reports)
        print(f"{passed}/{len(reports)} cases passed")
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# expand command


def _expand_rows(args: argparse.Namespace) -> list[tuple[str, str]]:
    n = args.q_order
    if args.object in _MODULAR_OBJECTS:
        series = modular_form(_MODULAR_OBJECTS[args.object], n)
        return [(half_q_label(i), str(c)) for i, c in enumerate(series.coeffs)]

    family = _FAMILY_NAMES[args.family]
    spec = _spec_from_args(family, args.k, args.l, args.a, args.b)
    if args.object == "theta-bundle":
        series = ch_theta_bundle(args.which, spec, n)
        rows = []
        for i, c in enumerate(series.coeffs):
            rows.append((half_q_label(i), str(pontryagin_all(c, spec.root_families()))))
        return rows

    b_kind, beta_kind = _BR_KIND_BY_FAMILY[family]
    kind = b_kind if args.object == "br" else beta_kind
    result, checks = extract_br_betar(spec, kind, max(n, spec.k + 2))
    rows = []
    prefix = "b" if args.object == "br" else "beta"
    for r, h in enumerate(result.h):
        rows.append((f"{prefix}_{r}", str(pontryagin_all(h, spec.root_families()))))
    for check in checks:
        rows.append((f"{check.name} readings", ",".join(check.matches) or "none"))
    return rows


def cmd_expand(args: argparse.Namespace) -> int:
    rows = _expand_rows(args)
    if args.format == "json":
        payload = {"object": args.object, "qOrder": args.q_order,
                   "rows": [{"power": p, "value": v} for p, v in rows]}
        print(json.dumps(payload, indent=2))
    else:
        width = max(len(p) for p, _ in rows)
        for power, value in rows:
            print(f"{power:<{width}}  {value}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_expand(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure: distinct exit status
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
