"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 a budget ran out (value unknown).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path

from . import simplicial as simp
from .cohomology import lcp_J
from .distance import (
    Budgets,
    CertificateCheck,
    DistanceValue,
    cat,
    cat_via_inclusions,
    distance,
    gcat,
    inclusions,
    tc_m,
    verify_certificate,
    verify_gcat_certificate,
)
from .errors import HomdistError
from .io import (
    InputError,
    Workspace,
    certificate_from_json,
    certificate_to_json,
    poset_to_json,
    value_to_json,
)
from .poset import OrderMap, core

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


def bundled_fixtures() -> list[Path]:
    base = resources.files("homdist") / "fixtures"
    return sorted(Path(str(p)) for p in base.iterdir() if p.name.endswith(".json"))


def _budgets(args) -> Budgets:
    b = Budgets(
        ideals=args.budget_ideals,
        bfs=args.budget_bfs,
        cover=args.budget_cover,
        use_cores=not args.no_cores,
        workers=max(1, args.threads),
    )
    return b.scaled()


def _workspace(args) -> Workspace:
    return Workspace.load(args.workspace or bundled_fixtures())


def _report(quantity: str, d: DistanceValue, maps=None) -> dict:
    out = {"quantity": quantity, "value": value_to_json(d)}
    out["certificate"] = certificate_to_json(quantity, maps, d) if maps is not None else None
    if d.lower_bound_proof is not None:
        out["lower_bound_proof"] = d.lower_bound_proof
    out["budgets_hit"] = list(d.budgets_hit)
    return out


def cmd_distance(args):
    ws = _workspace(args)
    maps = [ws.map(n) for n in args.maps]
    d = distance(maps, _budgets(args))
    return _report("distance", d, maps)


def cmd_cat(args):
    ws = _workspace(args)
    X = ws.poset(args.poset)
    base = args.basepoint or X.elements[0]
    if args.via_inclusions:
        _, i1, i2 = inclusions(X, base)
        return _report("cat", cat_via_inclusions(X, base, _budgets(args)), [i1, i2])
    maps = [OrderMap.identity(X), OrderMap.constant(X, X, base)]
    return _report("cat", cat(X, base, _budgets(args)), maps)


def cmd_gcat(args):
    X = _workspace(args).poset(args.poset)
    return _report("gcat", gcat(X, _budgets(args)), [OrderMap.identity(X)] * 2)


def cmd_tc(args):
    from .poset import power_product

    X = _workspace(args).poset(args.poset)
    m = args.m
    d = tc_m(X, m, _budgets(args))
    _, projections = power_product([X] * m)
    return _report("tc" if m == 2 else f"tc_{m}", d, projections)


def cmd_lcp(args):
    ws = _workspace(args)
    f, g = (ws.map(n) for n in args.maps)
    rep = lcp_J(f, g, args.degree_budget)
    return {"quantity": "lcp_J", "value": rep.value, "report": rep.as_dict(), "budgets_hit": []}


def cmd_sd(args):
    ws = _workspace(args)
    maps = [ws.simplicial_map(n) for n in args.maps]
    return _report("sd", simp.sd(maps, _budgets(args)), maps)


def cmd_scat(args):
    from .complexes import SimplicialMap

    K = _workspace(args).complex(args.complex)
    v = args.vertex or K.vertices[0]
    maps = [SimplicialMap.identity(K), SimplicialMap.constant(K, K, v)]
    return _report("scat", simp.scat(K, v, _budgets(args)), maps)


def cmd_dtc(args):
    K = _workspace(args).complex(args.complex)
    _, projections = simp.categorical_power([K] * args.m)
    return _report("dtc", simp.dtc_m(K, args.m, _budgets(args)), projections)


def cmd_core(args):
    X = _workspace(args).poset(args.poset)
    cd = core(X)
    return {
        "quantity": "core",
        "value": len(cd.core),
        "core": poset_to_json(cd.core),
        "removal_log": [list(e) for e in cd.removal_log],
        "retraction": cd.retraction.as_dict(),
        "budgets_hit": [],
    }


def cmd_verify(args):
    path = Path(args.certificate)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if isinstance(obj, dict) and isinstance(obj.get("certificate"), dict):
        obj = obj["certificate"]  # accept a whole report
    try:
        quantity, maps, cert, value = certificate_from_json(obj)
    except Exception as exc:
        return {"quantity": "verify", "valid": False, "reason": f"Malformed: {type(exc).__name__}: {exc}"}
    if quantity == "gcat":
        check = verify_gcat_certificate(maps[0].dom, cert)
        if check and value is not None and len(cert.ideals) != value + 1:
            check = CertificateCheck(False, "WrongSize")
    elif isinstance(cert, simp.SubcomplexCoverCertificate):
        check = simp.verify_sd_certificate(maps, cert, value)
    else:
        check = verify_certificate(maps, cert, value)
    return {"quantity": "verify", "valid": check.valid, "reason": check.reason}


def triangle_example(budgets: Budgets, workspace: Workspace | None = None) -> dict:
    """Distances between id, id x c and c x c on S x S, and the triangle check."""
    ws = workspace or Workspace.load([f for f in bundled_fixtures() if f.name == "triangle_counterexample.json"])
    f, g, h = ws.map("f"), ws.map("g"), ws.map("h")
    results = {}
    out = {"quantity": "triangle_example", "values": {}, "certificates": {}, "lower_bound_proofs": {}}
    hit = []
    for label, pair in [("D(f,g)", [f, g]), ("D(g,h)", [g, h]), ("D(f,h)", [f, h])]:
        d = distance(pair, budgets)
        results[label] = d
        out["values"][label] = value_to_json(d)
        out["certificates"][label] = certificate_to_json("distance", pair, d)
        out["lower_bound_proofs"][label] = d.lower_bound_proof
        hit += [b for b in d.budgets_hit if b not in hit]
    fg, gh, fh = results["D(f,g)"], results["D(g,h)"], results["D(f,h)"]
    violation = None  # undecided when a budget ran out
    if fg.finite and gh.finite:
        bound = fg.value + gh.value
        if fh.kind == "infinite":
            violation = True
        elif fh.finite:
            violation = fh.value > bound
        elif fh.at_least > bound:
            violation = True
    out["triangle_violation"] = violation
    out["budgets_hit"] = hit
    return out


def cmd_triangle_example(args):
    ws = Workspace.load(args.workspace) if args.workspace else None
    return triangle_example(_budgets(args), ws)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-w", "--workspace", action="append", metavar="FILE",
                        help="JSON workspace file (repeatable; default: bundled fixtures)")
    common.add_argument("--budget-ideals", type=int, default=Budgets.ideals, metavar="N")
    common.add_argument("--budget-bfs", type=int, default=Budgets.bfs, metavar="N")
    common.add_argument("--budget-cover", type=int, default=Budgets.cover, metavar="N")
    common.add_argument("--no-cores", action="store_true", help="disable core reduction")
    common.add_argument("--threads", type=int, default=1, metavar="N",
                        help="worker processes for domain checks")
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="homdist", description="Exact homotopic distance on finite spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[common], help="distance between two or more maps")
    p.add_argument("--maps", nargs="+", required=True, metavar="NAME")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("cat", parents=[common], help="LS-category of a poset")
    p.add_argument("--poset", required=True)
    p.add_argument("--basepoint")
    p.add_argument("--via-inclusions", action="store_true",
                   help="compute as the distance between the two axis inclusions")
    p.set_defaults(func=cmd_cat)

    p = sub.add_parser("gcat", parents=[common], help="geometric category of a poset")
    p.add_argument("--poset", required=True)
    p.set_defaults(func=cmd_gcat)

    for name in ("tc", "tcm"):
        p = sub.add_parser(name, parents=[common], help="(higher) topological complexity")
        p.add_argument("--poset", required=True)
        p.add_argument("--m", type=int, default=2 if name == "tc" else 3)
        p.set_defaults(func=cmd_tc)

    p = sub.add_parser("lcp", parents=[common], help="cup-length lower bound for two maps")
    p.add_argument("--maps", nargs=2, required=True, metavar="NAME")
    p.add_argument("--degree-budget", type=int)
    p.set_defaults(func=cmd_lcp)

    p = sub.add_parser("sd", parents=[common], help="contiguity distance of simplicial maps")
    p.add_argument("--maps", nargs="+", required=True, metavar="NAME")
    p.set_defaults(func=cmd_sd)

    p = sub.add_parser("scat", parents=[common], help="simplicial LS-category")
    p.add_argument("--complex", required=True)
    p.add_argument("--vertex")
    p.set_defaults(func=cmd_scat)

    p = sub.add_parser("dtc", parents=[common], help="discrete topological complexity")
    p.add_argument("--complex", required=True)
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(func=cmd_dtc)

    p = sub.add_parser("core", parents=[common], help="Stong core of a poset")
    p.add_argument("--poset", required=True)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate or report file")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("triangle-example", aliases=["paper-example"], parents=[common],
                       help="the S x S triple violating the triangle inequality")
    p.set_defaults(func=cmd_triangle_example)
    return parser


def _exhausted(report: dict) -> bool:
    return bool(report.get("budgets_hit"))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (HomdistError, ValueError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return EXIT_INPUT
    report["wall_ms"] = round((time.perf_counter() - start) * 1000, 3)
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_BUDGET if _exhausted(report) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
