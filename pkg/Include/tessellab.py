"""
tessellab.py

Command-line entry point: python Include/tessellab.py <subcommand> ...

Subcommands: generate, curvature, cheeger, growth, spectrum, eigenfunctions, verify, report.
Exit codes: 0 success, 1 failed verification or computation, 2 input error.
Reports go to stdout (JSON with --json); logs go through logfire.
"""

import argparse
import sys
from typing import Callable, Dict, List, Optional

import logfire
from pydantic import BaseModel

from curvature import curvature_constants
from errors import InputError, NoTrustedRadii, TessellabError
from generators import generate_truncation
from growth import bishop_comparison, sphere_series
from isoperimetry import exact_cheeger_search
from parsers import parse_compare, parse_radii
from planar_core import load_truncation, save_truncation
from report_store import file_digest, get_client, get_database, ping, purge_reports, store_report
from reports import emit_report, render
from settings import TOLERANCE_PROFILES, Settings, configure_logging
from spectrum import find_finitely_supported_eigenfunctions, spectral_report, verify_certificate
from verify_suite import run_verify


class GenerationSummary(BaseModel):
    path: str
    family: str
    radius: int
    vertices: int
    edges: int
    interior: int


def _print(args, model: BaseModel, lines: List[str]) -> None:
    if args.json:
        print(render(emit_report(model)))
    else:
        print("\n".join(lines))


def _interior_radii(trunc, low: int, high: int) -> List[int]:
    return [n for n in range(low, high + 1) if all(trunc.is_interior(v) for v in trunc.ball(n))]


def cmd_generate(args, settings: Settings) -> int:
    trunc = generate_truncation(args.family, args.radius, p=args.p, q=args.q, budget=settings.budget_vertices)
    save_truncation(trunc, args.out)
    summary = GenerationSummary(path=args.out, family=args.family, radius=args.radius, vertices=trunc.vertex_count,
                                edges=trunc.map.edge_count, interior=len(trunc.interior_vertices))
    _print(args, summary, [f"Wrote {summary.vertices} vertices ({summary.interior} interior) to {summary.path}"])
    return 0


def cmd_curvature(args, settings: Settings) -> int:
    profile = curvature_constants(load_truncation(args.file), per_vertex=args.per_vertex)
    _print(args, profile, [f"interior vertices: {profile.interior_count}",
                           f"a = {profile.a}, b = {profile.b}, c = {profile.c}",
                           f"nonpositive corner curvature: {profile.nonpositive_corner_curvature}"])
    return 0


def cmd_cheeger(args, settings: Settings) -> int:
    report = exact_cheeger_search(load_truncation(args.file), args.cap, prune=not args.no_prune,
                                  workers=args.workers, limit=settings.enumeration_limit)
    lines = [f"lower bounds: physical {report.bound_physical}, combinatorial {report.bound_combinatorial}"]
    if report.hjl_exact is not None:
        lines.append(f"exact combinatorial constant: {report.hjl_exact:.6f}")
    for label, witness in (("physical", report.enumerated_min_physical),
                           ("combinatorial", report.enumerated_min_combinatorial),
                           ("vertex", report.enumerated_min_h)):
        if witness is not None:
            lines.append(f"{label} upper estimate: {witness.value} on {len(witness.vertices)} vertices")
    _print(args, report, lines)
    return 0


def cmd_growth(args, settings: Settings) -> int:
    series = sphere_series(load_truncation(args.file))
    if args.compare:
        compare = parse_compare(args.compare)
        if compare is None:
            raise InputError(f"--compare expects 'p,q', got {args.compare!r}")
        verdict = bishop_comparison(series, compare[0], compare[1], settings.tolerances.bishop_slack)
        if args.json:
            print(render(emit_report({"series": series, "comparison": verdict}, name="GrowthComparison")))
        else:
            print(f"spheres: {list(series.sphere_sizes)}")
            print(f"comparison with ({compare[0]},{compare[1]}): {verdict.verdict}")
        return 0
    _print(args, series, [f"spheres: {list(series.sphere_sizes)}",
                          f"ratio estimate: {series.ratio_estimates[-1]:.6f}",
                          f"monotone: {series.monotone}"])
    return 0


def cmd_spectrum(args, settings: Settings) -> int:
    radii = parse_radii(args.radii)
    if radii is None:
        raise InputError(f"--radii expects 'A:B', got {args.radii!r}")
    trunc = load_truncation(args.file)
    report = spectral_report(trunc, _interior_radii(trunc, *radii), args.kind, settings.tolerances.eigen_residual)
    lines = [f"radius {d.radius}: {d.value:.10f} (residual {d.residual:.1e})" for d in report.dirichlet]
    lines.append(f"bottom of the combinatorial spectrum in [{report.lower}, {report.upper}]")
    _print(args, report, lines)
    return 0


class EigenfunctionReport(BaseModel):
    region_radius: int
    region_size: int
    certificates: list
    all_verified: bool


def cmd_eigenfunctions(args, settings: Settings) -> int:
    trunc = load_truncation(args.file)
    region = trunc.ball(args.region_radius)
    certificates = find_finitely_supported_eigenfunctions(trunc, region, max_support=args.max_support,
                                                          singular_tol=settings.tolerances.kernel_singular)
    report = EigenfunctionReport(region_radius=args.region_radius, region_size=len(region), certificates=certificates,
                                 all_verified=all(verify_certificate(trunc, c) for c in certificates))
    lines = [f"{len(certificates)} finitely supported eigenfunctions in B_{args.region_radius}"]
    lines += [f"  eigenvalue {c.eigenvalue} on {len(c.support)} vertices" for c in certificates]
    _print(args, report, lines)
    return 0 if report.all_verified else 1


def cmd_verify(args, settings: Settings) -> int:
    suite = run_verify(args.file, args.profile, settings.tolerances, seed=args.seed,
                       enumeration_limit=settings.enumeration_limit)
    lines = [f"{c.status:8} {c.name}" + (f"  ({c.detail})" if c.detail and c.status != "pass" else "")
             for c in suite.checks]
    lines.append(f"Verification summary: {suite.passed} passed, {suite.failed} failed, {suite.skipped} skipped")
    _print(args, suite, lines)
    return 0 if suite.ok else 1


def _section(name: str, compute: Callable[[], BaseModel], sections: Dict) -> None:
    try:
        sections[name] = compute()
    except TessellabError as e:
        logfire.error("Report section failed", section=name, error=f"{type(e).__name__}: {e}")
        sections[name] = {"error": f"{type(e).__name__}: {e}"}


def cmd_report(args, settings: Settings) -> int:
    trunc = load_truncation(args.file)
    digest = file_digest(args.file)
    sections: Dict = {"source": args.file, "input_digest": digest}
    _section("curvature", lambda: curvature_constants(trunc), sections)
    _section("cheeger", lambda: exact_cheeger_search(trunc, args.cap, limit=settings.enumeration_limit), sections)
    _section("growth", lambda: sphere_series(trunc), sections)
    radii = _interior_radii(trunc, 0, trunc.radius)
    if radii:
        _section("spectrum", lambda: spectral_report(trunc, radii, "comb", settings.tolerances.eigen_residual),
                 sections)
    else:
        sections["spectrum"] = {"error": f"{NoTrustedRadii.__name__}: no ball about the center is interior"}
    document = emit_report(sections, name="CombinedReport")

    if args.store or args.purge:
        client = get_client(settings)
        if not ping(client):
            raise TessellabError("report store unreachable")
        db = get_database(settings, client)
        if args.purge:
            deleted = purge_reports(db, digest, settings.db_collection)
            print(f"Deleted {deleted} stored reports for {args.file}.", file=sys.stderr)
        if args.store:
            inserted = store_report(db, document, digest, settings.db_collection)
            print(f"Stored report {inserted}.", file=sys.stderr)
    if args.json or not (args.store or args.purge):
        print(render(document))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a tessellab-report/1 JSON document")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--budget-vertices", type=int, default=None, help="vertex budget for generators")
    common.add_argument("--tol-profile", choices=sorted(TOLERANCE_PROFILES), default=None,
                        help="numeric tolerance profile")

    parser = argparse.ArgumentParser(prog="tessellab", description="Curvature, isoperimetry, growth and spectra "
                                                                   "of locally tessellating planar graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write a truncation of a standard host")
    p.add_argument("--family", choices=["gpq", "tree", "trihex"], required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("curvature", parents=[common], help="curvature constants a, b, c")
    p.add_argument("file")
    p.add_argument("--per-vertex", action="store_true")
    p.set_defaults(handler=cmd_curvature)

    p = sub.add_parser("cheeger", parents=[common], help="Cheeger lower bounds and enumerated upper estimates")
    p.add_argument("file")
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-prune", action="store_true", help="record minima per subset size")
    p.set_defaults(handler=cmd_cheeger)

    p = sub.add_parser("growth", parents=[common], help="sphere sizes and growth estimates")
    p.add_argument("file")
    p.add_argument("--compare", help="comparison host 'p,q' (q may be inf)")
    p.set_defaults(handler=cmd_growth)

    p = sub.add_parser("spectrum", parents=[common], help="Dirichlet eigenvalues and spectral bounds")
    p.add_argument("file")
    p.add_argument("--radii", required=True, help="inclusive radius range A:B")
    p.add_argument("--kind", choices=["comb", "phys"], default="comb")
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("eigenfunctions", parents=[common], help="exact finitely supported eigenfunctions")
    p.add_argument("file")
    p.add_argument("--region-radius", type=int, required=True)
    p.add_argument("--max-support", type=int)
    p.set_defaults(handler=cmd_eigenfunctions)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("file")
    p.add_argument("--profile", choices=["small", "full"], default="small")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("report", parents=[common], help="combined report, optionally stored in MongoDB")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=6)
    p.add_argument("--store", action="store_true")
    p.add_argument("--purge", action="store_true")
    p.set_defaults(handler=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = Settings.from_env()
    overrides = {}
    if args.budget_vertices is not None:
        overrides["budget_vertices"] = args.budget_vertices
    if args.tol_profile is not None:
        overrides["tol_profile"] = args.tol_profile
    if overrides:
        settings = Settings(**{**settings.model_dump(), **overrides})
    configure_logging(settings)

    try:
        return args.handler(args, settings)
    except InputError as e:
        logfire.error("Input error", command=args.command, error=f"{type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except TessellabError as e:
        logfire.error("Computation failed", command=args.command, error=f"{type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
