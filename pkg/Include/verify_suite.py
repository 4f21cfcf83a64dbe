"""
verify_suite.py

The verification suite behind `tessellab verify`.
Every applicable identity, inequality and reference value is checked on one truncation.
Each check runs in isolation: an exception marks that check failed, is logged, and the
run continues with the next one.
"""

import math
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple, Union

import logfire
import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict

from curvature import (boundary_lower_bound, corner_curvature, curvature_constants, face_regular_curvature,
                       harm_identity_check, inverse_degree, vertex_curvature)
from errors import CompletionLeavesInterior, IdentityViolated
from growth import (SUPPORTED_Q, bishop_comparison, bp_lower_bound, gpq_sphere_sizes, mu_closed_forms, sigma_recursion,
                    sphere_difference_residuals, sphere_series)
from isoperimetry import (cheeger_bounds, exact_cheeger_search, gpq_curvature_bound, hjl_exact, polygon_completion,
                          tree_h_relation)
from planar_core import (DEFAULT_ENUMERATION_LIMIT, Truncation, cut_locus, distance_map, embedding_is_planar,
                         enumerate_connected_subsets, load_truncation, subset_stats, to_networkx)
from settings import Tolerances
from spectrum import (assemble, dirichlet_lambda0, find_finitely_supported_eigenfunctions, fujiwara_lower,
                      fujiwara_upper, indicator_rayleigh, spectral_report, verify_certificate)

Status = Literal["pass", "fail", "skipped"]
Kind = Literal["identity", "inequality", "example"]
Mode = Literal["exact", "tolerance"]

G66_INTERVAL = (0.1835, 0.2441)
G66_MCKEAN = 0.1340
REGION_LIMIT = 40
COMPLETION_SAMPLE = 500
CUT_LOCUS_RADIUS = 2


class Check(BaseModel):
    """
    One verification step.

    Attributes:
        anchor (str): Stable id of the result being checked, e.g. 'cheeger-curvature-bound'.
        kind (str): 'identity', 'inequality' or 'example'.
        mode (str): 'exact' for rational arithmetic, 'tolerance' when floats are compared.
        detail (Optional[str]): The statement checked, followed by run-specific notes.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    anchor: str
    kind: Kind
    mode: Mode
    status: Status
    expected: Any = None
    observed: Any = None
    detail: Optional[str] = None


class CheckSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    anchor: str
    kind: Kind
    mode: Mode
    statement: str


class VerificationSuite(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    source: Optional[str] = None
    profile: Literal["small", "full"]
    family: Optional[str] = None
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    checks: List[Check] = []

    @property
    def ok(self) -> bool:
        return self.failed == 0


CHECKS: List[Callable[["_Context"], Check]] = []
SPECS: Dict[str, CheckSpec] = {}


def check(name: str, anchor: str, kind: Kind, mode: Mode, statement: str):
    """Register a check under its result name; CHECKS keeps definition order."""
    def register(fn):
        SPECS[name] = CheckSpec(name=name, anchor=anchor, kind=kind, mode=mode, statement=statement)
        fn.check_name = name
        CHECKS.append(fn)
        return fn
    return register


class _Skip(Exception):
    pass


class _Context:
    """Shared, lazily computed inputs of the checks."""

    def __init__(self, trunc: Truncation, profile: str, tolerances: Tolerances, seed: int, enumeration_limit: int):
        self.trunc = trunc
        self.tol = tolerances
        self.rng = np.random.default_rng(seed)
        self.full = profile == "full"
        self.cap = 9 if self.full else 8
        self.cheeger_cap = 8 if self.full else 6
        self.max_radius = trunc.radius if self.full else min(trunc.radius, 6)
        self.max_subsets = 20_000 if self.full else 2_000
        self.enumeration_limit = enumeration_limit
        host = trunc.host
        self.q = host.face_degree_bound
        if self.q is None:
            self.q = trunc.max_face_degree if trunc.max_face_degree is not None else math.inf

    def require(self, condition: bool, reason: str) -> None:
        if not condition:
            raise _Skip(reason)

    @cached_property
    def profile(self):
        return curvature_constants(self.trunc, per_vertex=True)

    @cached_property
    def series(self):
        self.require(self.trunc.is_interior(self.trunc.center), "center is not interior")
        return sphere_series(self.trunc)

    @cached_property
    def subsets(self) -> List[frozenset]:
        found = []
        for subset in enumerate_connected_subsets(self.trunc, self.cap, limit=self.enumeration_limit):
            found.append(subset)
            if len(found) >= self.max_subsets:
                break
        return found

    @cached_property
    def spectral(self):
        radii = [n for n in range(self.max_radius + 1)
                 if all(self.trunc.is_interior(v) for v in self.trunc.ball(n))]
        self.require(bool(radii), "no ball about the center is interior")
        return spectral_report(self.trunc, radii, "comb", self.tol.eigen_residual)

    @cached_property
    def interior_ball_radius(self) -> int:
        n = -1
        while n + 1 <= self.trunc.radius and all(self.trunc.is_interior(v) for v in self.trunc.ball(n + 1)):
            n += 1
        return n

    @property
    def no_cut_locus(self) -> bool:
        return self.trunc.host.family == "tree" or (
            not self.trunc.finite_host and self.profile.nonpositive_corner_curvature)




def _result(name: str, passed: bool, expected=None, observed=None, detail: Optional[str] = None,
            kind: Optional[Kind] = None) -> Check:
    spec = SPECS[name]
    return Check(name=name, anchor=spec.anchor, kind=kind or spec.kind, mode=spec.mode,
                 status="pass" if passed else "fail", expected=expected, observed=observed,
                 detail=f"{spec.statement}; {detail}" if detail else spec.statement)


@check("planarity", "euler-formula", "identity", "exact", "planar embedding and V - E + F = 2")
def check_planarity(ctx: _Context) -> Check:
    planar, _ = nx.check_planarity(to_networkx(ctx.trunc.map))
    embedded = embedding_is_planar(ctx.trunc.map)
    euler = ctx.trunc.map.euler_characteristic()
    return _result("planarity", planar and embedded and euler == 2, expected=[True, True, 2],
                   observed=[planar, embedded, euler])


@check("corner_sums", "corner-curvature-sum", "identity", "exact",
       "vertex curvature is the sum of its corner curvatures")
def check_corner_sums(ctx: _Context) -> Check:
    trunc = ctx.trunc
    bad = []
    for v in trunc.interior_vertices:
        corners = sum((corner_curvature(trunc.degree(v), f) for f in trunc.corner_degrees(v)), Fraction(0))
        direct = 1 - Fraction(trunc.degree(v), 2) + sum((inverse_degree(f) for f in trunc.corner_degrees(v)),
                                                         Fraction(0))
        if corners != direct or corners != vertex_curvature(trunc, v):
            bad.append(v)
    return _result("corner_sums", not bad, expected=0, observed=len(bad),
                   detail=f"mismatched vertices {bad[:5]}" if bad else None)


@check("curvature_constants", "curvature-constants", "example", "exact",
       "curvature constants a, b, c of the host; total curvature 2 on a finite host")
def check_curvature_constants(ctx: _Context) -> Check:
    trunc, profile, host = ctx.trunc, ctx.profile, ctx.trunc.host
    if trunc.finite_host:
        total = sum(profile.vertex_curvatures.values(), Fraction(0))
        return _result("curvature_constants", total == 2, expected=Fraction(2), observed=total, kind="identity")
    if host.family == "gpq":
        kappa = face_regular_curvature(host.p, host.q)
        expected = [-kappa if kappa < 0 else None, -kappa, -kappa / host.p if kappa < 0 else None]
    elif host.family == "tree":
        expected = [Fraction(host.p, 2) - 1, Fraction(host.p, 2) - 1, Fraction(host.p - 2, 2 * host.p)]
    elif host.family == "trihex":
        expected = [None, Fraction(0), None]
    else:
        raise _Skip("no closed-form curvature for a custom host")
    observed = [profile.a, profile.b, profile.c]
    return _result("curvature_constants", observed == expected, expected=expected, observed=observed)


@check("subset_identities", "subset-boundary-identity", "identity", "exact",
       "boundary identity for subsets and the curvature bound on |dE W|")
def check_subset_identities(ctx: _Context) -> Check:
    """Exact boundary identities and the curvature lower bound on |dE W| for enumerated subsets."""
    violations = []
    for subset in ctx.subsets:
        stats = subset_stats(ctx.trunc, subset)
        residual = harm_identity_check(stats)
        if residual != 0 or boundary_lower_bound(stats, ctx.q) > stats.edge_boundary:
            violations.append(stats.vertices)
    return _result("subset_identities", not violations and bool(ctx.subsets), expected=0,
                   observed=len(violations), detail=f"{len(ctx.subsets)} connected subsets of size <= {ctx.cap}")


@check("polygon_completion", "polygon-completion", "inequality", "exact",
       "filling enclosed regions leaves one non-host face and lowers neither Cheeger quotient")
def check_polygon_completion(ctx: _Context) -> Check:
    completed, failures = 0, []
    for subset in ctx.subsets[:COMPLETION_SAMPLE]:
        before = subset_stats(ctx.trunc, subset)
        try:
            polygon = polygon_completion(ctx.trunc, subset)
        except CompletionLeavesInterior:
            continue
        except IdentityViolated as e:
            failures.append(f"{before.vertices}: {e}")
            continue
        if set(polygon) == set(before.vertices):
            continue
        completed += 1
        after = subset_stats(ctx.trunc, polygon)
        if after.edge_boundary and after.non_host_faces != 1:
            failures.append(f"{before.vertices}: {after.non_host_faces} non-host faces after completion")
        if Fraction(after.edge_boundary, after.size) > Fraction(before.edge_boundary, before.size) or \
                Fraction(after.edge_boundary, after.volume) > Fraction(before.edge_boundary, before.volume):
            failures.append(f"{before.vertices}: quotient increased to {after.edge_boundary}/{after.size}")
    return _result("polygon_completion", not failures, expected=0, observed=len(failures),
                   detail=f"{completed} sets completed" + (f"; {failures[:3]}" if failures else ""))


@check("cheeger_bounds", "cheeger-curvature-bound", "inequality", "exact",
       "curvature lower bounds on the Cheeger constants")
def check_cheeger(ctx: _Context) -> Check:
    report = exact_cheeger_search(ctx.trunc, ctx.cheeger_cap, limit=ctx.enumeration_limit)
    problems = []
    pairs = [(report.bound_physical, report.enumerated_min_physical),
             (report.bound_combinatorial, report.enumerated_min_combinatorial)]
    for bound, witness in pairs:
        if bound is not None and witness is not None and witness.value < bound:
            problems.append(f"{witness.value} < {bound}")
    if report.bound_combinatorial is not None and report.bound_combinatorial > 1:
        problems.append(f"combinatorial bound {report.bound_combinatorial} > 1")
    return _result("cheeger_bounds", not problems, expected=[report.bound_physical, report.bound_combinatorial],
                   observed=[w.value if w else None for _, w in pairs], detail="; ".join(problems) or None)


@check("hjl_exact", "gpq-exact-cheeger", "inequality", "exact",
       "exact combinatorial Cheeger constant of G_{p,q} dominates the curvature bound")
def check_hjl(ctx: _Context) -> Check:
    host = ctx.trunc.host
    ctx.require(host.family == "gpq" and host.curvature_regime == "hyperbolic", "host is not a hyperbolic G_{p,q}")
    bound = gpq_curvature_bound(host.p, host.q)
    exact = hjl_exact(host.p, host.q)
    _, combinatorial = cheeger_bounds(ctx.profile, host.q)
    return _result("hjl_exact", combinatorial == bound and bound <= exact, expected=bound,
                   observed=[combinatorial, exact])


@check("hjl_grid", "gpq-exact-cheeger-grid", "inequality", "exact",
       "curvature bound below the exact constant for hyperbolic 3 <= p, q <= 12")
def check_hjl_grid(ctx: _Context) -> Check:
    failures = []
    for p in range(3, 13):
        for q in range(3, 13):
            if Fraction(1, p) + Fraction(1, q) < Fraction(1, 2) and gpq_curvature_bound(p, q) > hjl_exact(p, q):
                failures.append((p, q))
    return _result("hjl_grid", not failures, expected=[], observed=failures)


@check("sphere_sizes", "gpq-sphere-recursion", "identity", "exact",
       "sphere sizes agree with the G_{p,q} integer recursion, or with an independent BFS")
def check_spheres(ctx: _Context) -> Check:
    trunc, series = ctx.trunc, ctx.series
    host = trunc.host
    n = len(series.sphere_sizes) - 1
    observed = list(series.sphere_sizes)
    if host.family == "gpq" and host.q in SUPPORTED_Q:
        expected = gpq_sphere_sizes(host.p, host.q, n)
        sigma = sigma_recursion(host.p, host.q, n)
        passed = observed == expected and all(s >= t for s, t in zip(observed, sigma))
        return _result("sphere_sizes", passed, expected=expected, observed=observed, detail="integer recursion")
    lengths = nx.single_source_shortest_path_length(to_networkx(trunc.map), trunc.center)
    expected = [sum(1 for d in lengths.values() if d == k) for k in range(n + 1)]
    return _result("sphere_sizes", observed == expected, expected=expected, observed=observed, detail="BFS recount")


@check("sphere_difference", "sphere-difference-identity", "identity", "exact",
       "s_{n+1} - s_n = 2q/(q-2) (1 - kappa(B_n))")
def check_sphere_difference(ctx: _Context) -> Check:
    host = ctx.trunc.host
    ctx.require(host.family == "gpq" and host.q in SUPPORTED_Q, "identity needs G_{p,q} with q in {3, 4, 6}")
    residuals = sphere_difference_residuals(ctx.trunc, ctx.series)
    ctx.require(bool(residuals), "no interior ball with a trusted next sphere")
    return _result("sphere_difference", all(r == 0 for _, r in residuals), expected=0,
                   observed=[r for _, r in residuals])


@check("growth_lower_bound", "growth-curvature-bound", "inequality", "tolerance",
       "curvature lower bound on exponential growth")
def check_bp_bound(ctx: _Context) -> Check:
    host, profile = ctx.trunc.host, ctx.profile
    ctx.require(profile.a is not None and ctx.no_cut_locus, "needs a > 0 and a host without cut locus")
    bound = bp_lower_bound(profile.a, ctx.q)
    if host.family == "tree":
        mu = mu_closed_forms(host.p).mu_tree
        passed = abs(bound - mu) <= ctx.tol.algebraic
    else:
        ctx.require(host.family == "gpq" and host.q in SUPPORTED_Q, "no closed-form growth for this host")
        mu = mu_closed_forms(host.p, host.q).mu_gpq
        passed = bound <= mu + ctx.tol.algebraic
    return _result("growth_lower_bound", passed, expected=mu, observed=bound)


@check("bishop_comparison", "growth-comparison", "inequality", "tolerance",
       "growth compared with G_{p,q} of the same degree bounds")
def check_bishop(ctx: _Context) -> Check:
    host = ctx.trunc.host
    ctx.require(host.vertex_degree is not None and not ctx.trunc.finite_host,
                "comparison needs an infinite host with p")
    verdict = bishop_comparison(ctx.series, host.vertex_degree, ctx.q, ctx.tol.bishop_slack)
    ctx.require(verdict.verdict != "unavailable", "no comparison value")
    return _result("bishop_comparison", verdict.verdict == "consistent", expected=verdict.comparison_mu,
                   observed=verdict.estimate, detail=verdict.verdict)


@check("spectral_interval", "spectral-interval", "inequality", "tolerance",
       "Fujiwara, McKean and essential-spectrum bounds bracket the bottom of the spectrum")
def check_spectral_interval(ctx: _Context) -> Check:
    host, report = ctx.trunc.host, ctx.spectral
    tol = ctx.tol.quoted_decimal
    passed = report.interval_consistent
    expected, observed = None, [report.lower, report.upper]
    if report.lower is not None:
        passed = passed and all(d.value >= report.lower - ctx.tol.eigen_residual for d in report.dirichlet)
    if host.family == "gpq" and (host.p, host.q) == (6, 6):
        lower = 1 - math.sqrt(2 / 3)
        upper = 1 - 2 * (math.sqrt(3) + math.sqrt(7)) / (7 + math.sqrt(21))
        mckean = next(b.value for b in report.bounds.bounds if b.name == "mckean")
        expected = [G66_INTERVAL[0], G66_INTERVAL[1], G66_MCKEAN]
        observed = [report.lower, report.upper, mckean]
        passed = passed and all(abs(o - e) <= tol for o, e in zip(observed, expected)) and \
            abs(report.lower - lower) <= ctx.tol.algebraic and abs(report.upper - upper) <= ctx.tol.algebraic
    return _result("spectral_interval", passed, expected=expected, observed=observed)


@check("dirichlet_monotone", "dirichlet-exhaustion", "inequality", "tolerance",
       "Dirichlet bottom eigenvalues decrease as balls grow")
def check_dirichlet_monotone(ctx: _Context) -> Check:
    report = ctx.spectral
    values = [d.value for d in report.dirichlet]
    nonnegative = all(v >= -ctx.tol.eigen_residual for v in values)
    return _result("dirichlet_monotone", report.dirichlet_monotone and nonnegative, observed=values)


@check("rayleigh_indicators", "indicator-rayleigh", "identity", "exact",
       "Rayleigh quotients of indicator functions equal |dE W|")
def check_rayleigh_indicators(ctx: _Context) -> Check:
    mismatches = 0
    for subset in ctx.subsets[:300]:
        boundary = subset_stats(ctx.trunc, subset).edge_boundary
        if indicator_rayleigh(ctx.trunc, subset, "comb") != boundary or \
                indicator_rayleigh(ctx.trunc, subset, "phys") != boundary:
            mismatches += 1
    return _result("rayleigh_indicators", mismatches == 0, expected=0, observed=mismatches)


def _largest_interior_ball(ctx: _Context) -> Tuple[int, ...]:
    ctx.require(ctx.interior_ball_radius >= 0, "no ball about the center is interior")
    return ctx.trunc.ball(min(ctx.interior_ball_radius, ctx.max_radius))


@check("self_adjoint", "laplacian-self-adjoint", "identity", "tolerance",
       "both Laplacians are symmetric in their inner products")
def check_self_adjoint(ctx: _Context) -> Check:
    ball = _largest_interior_ball(ctx)
    comb = assemble(ctx.trunc, "comb", ball)
    phys = assemble(ctx.trunc, "phys", ball)
    worst = 0.0
    for _ in range(100):
        u = ctx.rng.standard_normal(len(ball))
        w = ctx.rng.standard_normal(len(ball))
        left = np.dot(comb.operator @ u * comb.degrees, w)
        right = np.dot(u * comb.degrees, comb.operator @ w)
        worst = max(worst, abs(left - right) / max(1.0, abs(left)))
        left = np.dot(phys.operator @ u, w)
        right = np.dot(u, phys.operator @ w)
        worst = max(worst, abs(left - right) / max(1.0, abs(left)))
    return _result("self_adjoint", worst <= ctx.tol.algebraic, expected=0.0, observed=worst)


@check("physical_scaling", "physical-scaling", "identity", "tolerance",
       "physical Laplacian is p times the combinatorial one on a p-regular host")
def check_physical_scaling(ctx: _Context) -> Check:
    p = ctx.trunc.host.vertex_degree
    ctx.require(p is not None and all(ctx.trunc.degree(v) == p for v in ctx.trunc.interior_vertices),
                "host is not regular")
    ball = _largest_interior_ball(ctx)
    comb = assemble(ctx.trunc, "comb", ball)
    phys = assemble(ctx.trunc, "phys", ball)
    entrywise = abs(phys.operator - p * comb.operator).max()
    eigen = abs(dirichlet_lambda0(phys, ctx.tol.eigen_residual).value -
                p * dirichlet_lambda0(comb, ctx.tol.eigen_residual).value)
    return _result("physical_scaling", entrywise <= ctx.tol.algebraic and eigen <= ctx.tol.algebraic,
                   expected=0.0, observed=[float(entrywise), eigen])


def _interior_hexagon(trunc: Truncation) -> Optional[Tuple[int, ...]]:
    for face_id in sorted(trunc.host_face_ids):
        walk = trunc.map.faces[face_id]
        if len(walk) == 6 and all(trunc.is_interior(v) for v in trunc.closed_neighborhood(walk)):
            return walk
    return None


@check("eigenfunctions", "finitely-supported-eigenfunctions", "identity", "exact",
       "exact eigenfunction certificates: the alternating hexagon function at 3/2 on the trihexagonal tiling, "
       "none under nonpositive corner curvature, zero residual everywhere")
def check_eigenfunctions(ctx: _Context) -> Check:
    trunc = ctx.trunc
    if trunc.host.family == "trihex":
        hexagon = _interior_hexagon(trunc)
        ctx.require(hexagon is not None, "no hexagon with an interior neighborhood")
        certificates = find_finitely_supported_eigenfunctions(trunc, hexagon, singular_tol=ctx.tol.kernel_singular)
        values = {}
        if len(certificates) == 1:
            values = dict(zip(certificates[0].support, certificates[0].values))
        alternating = len(values) == 6 and all(
            values[a] == -values[b] and abs(values[a]) == 1 for a, b in zip(hexagon, hexagon[1:] + hexagon[:1]))
        passed = alternating and certificates[0].eigenvalue == Fraction(3, 2) and verify_certificate(
            trunc, certificates[0])
        return _result("eigenfunctions", passed, expected=Fraction(3, 2),
                       observed=[c.eigenvalue for c in certificates], detail="hexagon support", kind="example")

    radius = -1
    while radius + 1 <= ctx.max_radius and len(trunc.ball(radius + 1)) <= REGION_LIMIT and \
            all(trunc.complete_flags[v] for v in trunc.closed_neighborhood(trunc.ball(radius + 1))):
        radius += 1
    ctx.require(radius >= 0, "no region with a complete neighborhood")
    certificates = find_finitely_supported_eigenfunctions(trunc, trunc.ball(radius),
                                                          singular_tol=ctx.tol.kernel_singular)
    verified = all(verify_certificate(trunc, c) for c in certificates)
    if ctx.profile.nonpositive_corner_curvature and not trunc.finite_host:
        return _result("eigenfunctions", not certificates, expected=[],
                       observed=[c.eigenvalue for c in certificates], detail=f"region B_{radius}", kind="example")
    return _result("eigenfunctions", verified, observed=len(certificates), detail=f"region B_{radius}")


@check("tree_sharpness", "tree-sharpness", "example", "exact",
       "Cheeger, Fujiwara and growth bounds are attained on regular trees; e^mu = 1 + h")
def check_tree_sharpness(ctx: _Context) -> Check:
    host = ctx.trunc.host
    ctx.require(host.family == "tree", "host is not a tree")
    p = host.p
    bounds = cheeger_bounds(ctx.profile, math.inf)
    fujiwara_gap = abs(fujiwara_lower((p - 2) / p) - fujiwara_upper(math.log(p - 1)))
    report = exact_cheeger_search(ctx.trunc, ctx.cheeger_cap, prune=False, limit=ctx.enumeration_limit)
    relation = tree_h_relation(p, ctx.series, report)
    expected_sizes = {k: Fraction(k * (p - 2) + 2, k) for k in report.physical_by_size}
    passed = (bounds == (Fraction(p - 2), Fraction(p - 2, p)) and fujiwara_gap <= ctx.tol.algebraic and
              relation.holds and report.physical_by_size == expected_sizes)
    return _result("tree_sharpness", passed, expected=expected_sizes, observed=report.physical_by_size,
                   detail=f"e^mu estimate {relation.growth_base}, 1 + enumerated h {1 + relation.enumerated_h}")


@check("cut_locus", "no-cut-locus", "example", "exact",
       "no cut locus under nonpositive corner curvature, from every sampled interior vertex")
def check_cut_locus(ctx: _Context) -> Check:
    ctx.require(ctx.no_cut_locus, "host may have a cut locus")
    trunc = ctx.trunc
    if ctx.full:
        sources = trunc.interior_vertices
    else:
        sources = tuple(v for v in trunc.ball(CUT_LOCUS_RADIUS) if trunc.is_interior(v))
    found = {}
    for v in sources:
        locus = cut_locus(trunc, v)
        if locus.members:
            found[v] = list(locus.members[:5])
    return _result("cut_locus", not found, expected={}, observed=found,
                   detail=f"{len(sources)} source vertices")


@check("triangle_inequality", "metric-triangle", "inequality", "exact",
       "combinatorial distance is a metric matching BFS")
def check_triangle_inequality(ctx: _Context) -> Check:
    trunc = ctx.trunc
    n = trunc.vertex_count
    sources = sorted({int(v) for v in ctx.rng.integers(0, n, size=min(n, 20))})
    distances = {v: distance_map(trunc.map, v) for v in sources}
    graph = to_networkx(trunc.map)
    bad = 0
    for x in sources:
        reference = nx.single_source_shortest_path_length(graph, x)
        if any(int(distances[x][v]) != d for v, d in reference.items()):
            bad += 1
        for y in sources:
            for z in ctx.rng.integers(0, n, size=10):
                if distances[x][z] > distances[x][y] + distances[y][z]:
                    bad += 1
    return _result("triangle_inequality", bad == 0, expected=0, observed=bad)


def run_verify(source: Union[str, Path, Truncation], profile: str = "small", tolerances: Optional[Tolerances] = None,
               seed: int = 0, enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT) -> VerificationSuite:
    """
    Run every applicable check on a truncation file (or an already loaded truncation).
    Parse and validation errors propagate; everything after loading is isolated per check.
    """
    trunc = source if isinstance(source, Truncation) else load_truncation(source)
    ctx = _Context(trunc, profile, tolerances or Tolerances(), seed, enumeration_limit)
    checks: List[Check] = []
    with logfire.span("Verification", profile=profile, family=trunc.host.family, vertices=trunc.vertex_count):
        for run in CHECKS:
            spec = SPECS[run.check_name]
            try:
                result = run(ctx)
            except _Skip as e:
                result = Check(name=spec.name, anchor=spec.anchor, kind=spec.kind, mode=spec.mode, status="skipped",
                               detail=str(e))
            except Exception as e:
                result = Check(name=spec.name, anchor=spec.anchor, kind=spec.kind, mode=spec.mode, status="fail",
                               detail=f"{spec.statement}; {type(e).__name__}: {e}")
            if result.status == "fail":
                logfire.error("Check failed", check=result.name, expected=str(result.expected),
                              observed=str(result.observed), detail=result.detail)
            checks.append(result)

    suite = VerificationSuite(
        source=None if isinstance(source, Truncation) else str(source),
        profile=profile,
        family=trunc.host.family,
        passed=sum(1 for c in checks if c.status == "pass"),
        failed=sum(1 for c in checks if c.status == "fail"),
        skipped=sum(1 for c in checks if c.status == "skipped"),
        checks=checks,
    )
    logfire.info("Verification summary", passed=suite.passed, failed=suite.failed, skipped=suite.skipped,
                 profile=profile)
    return suite
