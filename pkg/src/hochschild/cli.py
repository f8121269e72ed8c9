"""Command-line interface: compute, verify, compare.

Exit codes: 0 success (and, for ``verify``, zero failures), 1 suite failures,
2 input/parse errors, 3 resource-cap violations, 4 validation failures.
Reports are canonical JSON and byte-identical for a fixed input and seed.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import cochains as cx
from . import identities as ident
from .catalog import qci, standard_catalog, truncated_poly
from .errors import (
    AssociativityViolation,
    BadParameter,
    HochschildError,
    InputFormatError,
    NotPrime,
    ResourceBound,
    TruncationTooSmall,
    UnitViolation,
)
from .fdcat import FDCategory
from .hh1 import hh1_restricted
from .io import load_input, serialize_restricted_lie, write_report
from .restricted import RestrictedLie, fingerprint, iso_search, verify_restricted

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_PARSE = 2
EXIT_RESOURCE = 3
EXIT_VALIDATION = 4

_VALIDATION_ERRORS = (
    AssociativityViolation,
    UnitViolation,
    BadParameter,
    TruncationTooSmall,
    NotPrime,
)


def _cap_entries(cap_bytes: int) -> int:
    return max(1, cap_bytes // 8)


def cmd_compute(args) -> int:
    obj = load_input(args.input)
    cap = _cap_entries(args.cap)
    report: dict = {"format_version": 1, "command": "compute"}
    if isinstance(obj, RestrictedLie):
        report["kind"] = "restricted_lie"
        report["name"] = obj.name
        report["verify"] = verify_restricted(obj).ok
        report["fingerprint"] = fingerprint(obj).as_dict()
        write_report(report, args.out)
        return EXIT_OK
    cat: FDCategory = obj
    normalized = not args.full
    report["kind"] = "category"
    report["name"] = cat.name
    report["p"] = cat.field.p
    report["dim"] = cat.dim
    report["normalized_complex"] = normalized
    dims = []
    for n in range(args.degree_max + 1):
        dims.append(cx.cohomology(cat, n, normalized, cap=cap).dim)
    report["hh_dims"] = dims
    r = hh1_restricted(cat)
    report["hh1"] = serialize_restricted_lie(r.lie)["payload"]
    report["hh1"]["verify"] = verify_restricted(r.lie).ok
    report["fingerprint"] = fingerprint(r.lie).as_dict()
    if args.tables:
        report["cup_tables"] = _cup_tables(cat, args.degree_max, normalized, cap)
    write_report(report, args.out)
    return EXIT_OK


def _cup_tables(cat, degree_max, normalized, cap) -> list:
    tables = []
    for i in range(1, degree_max):
        for j in range(1, degree_max - i + 1):
            hi = cx.cohomology(cat, i, normalized, cap=cap)
            hj = cx.cohomology(cat, j, normalized, cap=cap)
            hij = cx.cohomology(cat, i + j, normalized, cap=cap)
            entries = []
            for a in range(hi.dim):
                for b in range(hj.dim):
                    prod = cx.cup(hi.basis_class(a).representative(), hj.basis_class(b).representative())
                    entries.append([a, b, hij.class_of(prod).coords.tolist()])
            tables.append({"degrees": [i, j], "products": entries})
    return tables


def _suite_appendix(seed: int, trials: int) -> dict:
    algebras = [truncated_poly(2, 2), truncated_poly(3, 3), truncated_poly(5, 5), qci(3, 2, 2, 2)]
    convention, resolution = ident.resolve_signs(algebras, seed=seed, trials=trials)
    rng = np.random.default_rng(seed + 1)
    failures = []
    per_algebra = []
    for cat in algebras:
        rel1_fail = rel2_fail = 0
        for t in range(trials):
            degs = [(1, 1), (1, 2), (2, 1), (2, 2)][t % 4]
            x = cx.cochain_space(cat, degs[0], normalized=False).random(rng)
            y = cx.cochain_space(cat, degs[1], normalized=False).random(rng)
            z = cx.cochain_space(cat, (t % 2) + 1, normalized=False).random(rng)
            if not ident.check_rel1(cat, x, y, convention):
                rel1_fail += 1
            if not ident.check_rel2(cat, x, y, z, convention):
                rel2_fail += 1
        per_algebra.append({"algebra": cat.name, "rel1_failures": rel1_fail, "rel2_failures": rel2_fail})
        if rel1_fail or rel2_fail:
            failures.append(cat.name)
    turchin_cases = []
    for (n, p) in [(2, 2), (2, 3), (3, 3), (4, 2), (3, 5)]:
        cat = truncated_poly(p, p)
        ok = True
        for degree in (1, 3):
            for _ in range(max(1, trials // 10)):
                x = cx.random_cocycle(cat, degree, rng, normalized=True)
                if not ident.check_turchin(cat, x, n, convention):
                    ok = False
        turchin_cases.append({"n": n, "p": p, "ok": ok})
        if not ok:
            failures.append(f"turchin({n},{p})")
    return {
        "suite": "appendix",
        "resolution": resolution,
        "identities": per_algebra,
        "turchin": turchin_cases,
        "failures": failures,
    }


def _suite_welldefined(seed: int, trials: int) -> dict:
    reports = []
    failures = []
    for cat in standard_catalog():
        rep = ident.check_power_welldefined(cat, 1, trials, seed)
        reports.append(rep)
        if not rep["ok"]:
            failures.append(cat.name)
    for cat in [truncated_poly(2, 2), truncated_poly(3, 3)]:
        rep = ident.check_power_welldefined(cat, 3, max(1, trials // 2), seed)
        reports.append(rep)
        if not rep["ok"]:
            failures.append(f"{cat.name}@3")
    return {"suite": "welldefined", "reports": reports, "failures": failures}


def _suite_morita(seed: int, trials: int) -> dict:
    reports = []
    failures = []
    for cat in [truncated_poly(2, 2), truncated_poly(3, 3), qci(3, 2, 2, 2)]:
        rep = ident.check_morita_instance(cat, 2, seed=seed, trials=trials)
        reports.append(rep)
        if not rep["ok"]:
            failures.append(cat.name)
    return {"suite": "morita", "reports": reports, "failures": failures}


def _suite_zeta(seed: int, trials: int) -> dict:
    reports = [
        ident.zeta_experiment(truncated_poly(3, 3), seed=seed, trials=trials),
        ident.zeta_experiment(qci(3, 2, 2, 2), seed=seed, trials=trials),
    ]
    return {"suite": "zeta", "reports": reports, "failures": []}


_SUITES = {
    "appendix": _suite_appendix,
    "welldefined": _suite_welldefined,
    "morita": _suite_morita,
    "zeta": _suite_zeta,
}


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in _SUITES:
        raise InputFormatError("suite", f"unknown suite {args.suite!r}")
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    sections = []
    failures = []
    for name in names:
        section = _SUITES[name](args.seed, args.trials)
        sections.append(section)
        failures.extend(section["failures"])
    report = {
        "format_version": 1,
        "command": "verify",
        "suite": args.suite,
        "seed": args.seed,
        "trials": args.trials,
        "sections": sections,
        "failures": failures,
    }
    write_report(report, args.out)
    return EXIT_OK if not failures else EXIT_FAILURES


def _as_restricted_lie(obj) -> RestrictedLie:
    if isinstance(obj, RestrictedLie):
        return obj
    return hh1_restricted(obj).lie


def cmd_compare(args) -> int:
    obj_a = load_input(args.a)
    obj_b = load_input(args.b)
    lie_a = _as_restricted_lie(obj_a)
    lie_b = _as_restricted_lie(obj_b)
    fp_a, fp_b = fingerprint(lie_a), fingerprint(lie_b)
    report = {
        "format_version": 1,
        "command": "compare",
        "a": {"name": getattr(obj_a, "name", "?"), "hh1_fingerprint": fp_a.as_dict()},
        "b": {"name": getattr(obj_b, "name", "?"), "hh1_fingerprint": fp_b.as_dict()},
    }
    if not fp_a.matches(fp_b):
        report["verdict"] = "distinguished: restricted-invariant fingerprints differ, so the algebras are not stably equivalent of Morita type"
    else:
        iso = iso_search(lie_a, lie_b, budget=args.budget)
        report["iso_search"] = {
            "verdict": iso.verdict,
            "witness": None if iso.witness is None else iso.witness.tolist(),
            "nodes": iso.nodes,
        }
        if iso.verdict == "isomorphic":
            report["verdict"] = "restricted structures on HH^1 are isomorphic (no stable-equivalence verdict implied)"
        else:
            report["verdict"] = "inconclusive: fingerprints agree but no isomorphism was found within budget"
    write_report(report, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hochschild",
        description="Hochschild cohomology over prime fields with its restricted structure",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="cohomology dimensions, HH^1 structure, fingerprint")
    p_compute.add_argument("--input", required=True)
    p_compute.add_argument("--degree-max", type=int, default=3)
    mode = p_compute.add_mutually_exclusive_group()
    mode.add_argument("--normalized", action="store_true", default=True)
    mode.add_argument("--full", action="store_true")
    p_compute.add_argument("--cap", type=int, default=16_000_000, help="tensor cap in bytes")
    p_compute.add_argument("--tables", action="store_true", help="include cup product tables")
    p_compute.add_argument("--out", default=None)
    p_compute.set_defaults(func=cmd_compute)

    p_verify = sub.add_parser("verify", help="run a verification suite over the built-in catalog")
    p_verify.add_argument("--suite", required=True, help="appendix | welldefined | morita | zeta | all")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--trials", type=int, default=50)
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_compare = sub.add_parser("compare", help="compare restricted HH^1 invariants of two inputs")
    p_compare.add_argument("--a", required=True)
    p_compare.add_argument("--b", required=True)
    p_compare.add_argument("--budget", type=int, default=500_000)
    p_compare.add_argument("--out", default=None)
    p_compare.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceBound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except HochschildError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
