"""
growth.py

Sphere sizes and exponential growth: BFS series of a truncation with its two growth
estimators, the doubled integer recursions for G_{p,q}, closed forms for the growth
rate, the curvature lower bound, and a comparison against G_{p,q}.
"""

import math
from fractions import Fraction
from typing import List, Optional, Tuple

import logfire
from pydantic import BaseModel, ConfigDict

from curvature import boundary_factor, vertex_curvature
from errors import (CenterOnBoundary, DegreeBoundViolated, InputError, InvalidTau, NonpositiveA, NoTrustedRadii,
                    SphericalParameters, UnsupportedQ)
from parsers import FaceDegree
from planar_core import Truncation

SUPPORTED_Q = (3, 4, 6)


def _doubled_tau(p: int, q: int) -> int:
    """2 tau = p - 4/(q-2), an integer for q in {3, 4, 6}."""
    if q not in SUPPORTED_Q:
        raise UnsupportedQ(f"q = {q}: the integer recursion needs q in {{3, 4, 6}}")
    return p - 4 // (q - 2)


def _check_not_spherical(p: int, q: int) -> None:
    if Fraction(1, p) + Fraction(1, q) > Fraction(1, 2):
        raise SphericalParameters(f"1/{p} + 1/{q} > 1/2")


def sigma_recursion(p: int, q: int, N: int) -> List[int]:
    """sigma_0 = 1, sigma_1 = p, sigma_{n+2} = 2 tau sigma_{n+1} - sigma_n, in exact integers."""
    two_tau = _doubled_tau(p, q)
    _check_not_spherical(p, q)
    sigma = [1, p]
    while len(sigma) <= N:
        sigma.append(two_tau * sigma[-1] - sigma[-2])
    return sigma[:N + 1]


def gpq_sphere_sizes(p: int, q: int, N: int) -> List[int]:
    """
    Sphere sizes |S_0|, ..., |S_N| of G_{p,q}: s_0 = 1, s_1 = p and s_n = 2 tau s_{n-1} - s_{n-2}
    for n >= 2, where the recursion reads s_0 as 0.
    """
    two_tau = _doubled_tau(p, q)
    _check_not_spherical(p, q)
    sizes = [1]
    previous, current = 0, p
    for _ in range(N):
        sizes.append(current)
        previous, current = current, two_tau * current - previous
    return sizes


class GrowthSeries(BaseModel):
    """
    Sphere and ball sizes about the center, restricted to trusted radii.

    Attributes:
        sphere_sizes (Tuple[int, ...]): s_0..s_N, where B_{n-1} is complete for every n <= N.
        volumes (Tuple[int, ...]): vol(B_n) for every n with B_n complete.
        ratio_estimates (Tuple[float, ...]): log(s_{n+1}/s_n), upper estimates of mu in the tail.
        cumulative_estimates (Tuple[float, ...]): log(vol(B_n))/n for n >= 1.
        monotone (bool): s_n is non-decreasing, the precondition for trusting the ratio estimator.
    """
    model_config = ConfigDict(frozen=True)

    center: int
    trusted_radius: int
    sphere_sizes: Tuple[int, ...]
    volumes: Tuple[int, ...]
    ratio_estimates: Tuple[float, ...]
    cumulative_estimates: Tuple[float, ...]
    monotone: bool
    max_vertex_degree: int
    max_face_degree: Optional[FaceDegree] = None


def sphere_series(trunc: Truncation) -> GrowthSeries:
    if not trunc.is_interior(trunc.center):
        raise CenterOnBoundary(f"center {trunc.center} is not interior")
    dist = trunc.center_distances
    eccentricity = int(dist.max())
    complete = trunc.complete_flags

    # s_n is exact once B_{n-1} is complete; vol(B_n) once B_n is
    sphere_sizes = [1]
    volumes = []
    running = 0
    for n in range(eccentricity + 1):
        layer = trunc.sphere(n)
        if not all(complete[v] for v in layer):
            break
        running += sum(trunc.degree(v) for v in layer)
        volumes.append(running)
        if n + 1 <= eccentricity:
            sphere_sizes.append(len(trunc.sphere(n + 1)))
    if len(sphere_sizes) < 2:
        raise NoTrustedRadii(f"no trusted sphere beyond the center of a radius-{trunc.radius} truncation")

    ratios = tuple(math.log(b / a) for a, b in zip(sphere_sizes, sphere_sizes[1:]))
    cumulative = tuple(math.log(volumes[n]) / n for n in range(1, len(volumes)))
    interior = trunc.interior_vertices
    face_degrees = [d for v in interior for d in trunc.corner_degrees(v)]
    series = GrowthSeries(
        center=trunc.center,
        trusted_radius=len(sphere_sizes) - 1,
        sphere_sizes=tuple(sphere_sizes),
        volumes=tuple(volumes),
        ratio_estimates=ratios,
        cumulative_estimates=cumulative,
        monotone=all(a <= b for a, b in zip(sphere_sizes, sphere_sizes[1:])),
        max_vertex_degree=max(trunc.degree(v) for v in interior),
        max_face_degree=max(face_degrees) if face_degrees else None,
    )
    logfire.info("Sphere series", trusted_radius=series.trusted_radius, spheres=list(series.sphere_sizes),
                 monotone=series.monotone)
    return series


class MuClosedForms(BaseModel):
    """Closed-form growth rates; each present only when its inputs were given."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mu_tree: Optional[float] = None
    tau_gpq: Optional[Fraction] = None
    mu_gpq: Optional[float] = None
    tau_curv: Optional[Fraction] = None
    mu_curv: Optional[float] = None


def _mu_from_tau(tau: Fraction) -> float:
    """log(tau + sqrt(tau^2 - 1)), which is 0 at tau = 1."""
    if tau < 1:
        raise InvalidTau(f"tau = {tau} < 1")
    return math.acosh(tau)


def mu_closed_forms(p: Optional[int] = None, q: Optional[FaceDegree] = None,
                    b: Optional[Fraction] = None) -> MuClosedForms:
    """
    mu_tree = log(p-1) from p; mu_gpq from tau = p/2 - 2/(q-2); mu_curv from tau = 1 + q/(q-2) b.
    The last two need q in {3, 4, 6}.
    """
    if p is None and b is None:
        raise InputError("mu_closed_forms needs p, (p, q) or (b, q)")
    finite_q = q is not None and not math.isinf(q)
    if finite_q and int(q) not in SUPPORTED_Q:
        raise UnsupportedQ(f"q = {q}: closed forms need q in {{3, 4, 6}}")
    if b is not None and not finite_q:
        raise UnsupportedQ("the curvature growth bound needs a finite q in {3, 4, 6}")

    values = {}
    if p is not None:
        values["mu_tree"] = math.log(p - 1)
        if finite_q:
            tau = Fraction(p, 2) - Fraction(2, int(q) - 2)
            values["tau_gpq"] = tau
            values["mu_gpq"] = _mu_from_tau(tau)
    if b is not None:
        tau = 1 + Fraction(int(q), int(q) - 2) * Fraction(b)
        values["tau_curv"] = tau
        values["mu_curv"] = _mu_from_tau(tau)
    return MuClosedForms(**values)


def bp_lower_bound(a: Fraction, q: FaceDegree) -> float:
    """log(1 + 2q/(q-1) a), with factor 2 for q = inf; a lower bound on mu without cut locus."""
    if a <= 0:
        raise NonpositiveA(f"a = {a} must be positive")
    factor = Fraction(2) if math.isinf(q) else Fraction(2 * int(q), int(q) - 1)
    return math.log(1 + factor * Fraction(a))


def sphere_difference_residuals(trunc: Truncation, series: GrowthSeries) -> List[Tuple[int, Fraction]]:
    """
    (n, s_{n+1} - s_n - (2q/(q-2)) (1 - kappa(B_n))) for every n >= 1 with B_n interior and
    s_{n+1} trusted. All residuals vanish on G_{p,q} with q in {3, 4, 6}.
    """
    host = trunc.host
    if host.family != "gpq" or host.q not in SUPPORTED_Q:
        raise UnsupportedQ("the sphere-difference identity is checked on G_{p,q} with q in {3, 4, 6}")
    factor = boundary_factor(host.q)
    sizes = series.sphere_sizes
    residuals = []
    for n in range(1, len(sizes) - 1):
        ball = trunc.ball(n)
        if not all(trunc.is_interior(v) for v in ball):
            break
        kappa = sum((vertex_curvature(trunc, v) for v in ball), Fraction(0))
        residuals.append((n, sizes[n + 1] - sizes[n] - factor * (1 - kappa)))
    return residuals


class BishopVerdict(BaseModel):
    """
    Outcome of comparing finite-radius growth with G_{p,q} (T_p when q = inf).
    verdict is 'consistent', 'violated-at-<n>' or 'unavailable'; an empirical check only.
    """
    model_config = ConfigDict(frozen=True)

    p: int
    q: FaceDegree
    verdict: str
    comparison_mu: Optional[float] = None
    estimate: Optional[float] = None
    at_radius: Optional[int] = None
    slack: float


def bishop_comparison(series: GrowthSeries, p: int, q: FaceDegree, slack: float = 1e-2) -> BishopVerdict:
    """
    A radius n counts against the comparison only when s_n exceeds the sphere of the comparison
    host and the tail ratio estimate exceeds its growth rate by more than slack.
    """
    if series.max_vertex_degree > p:
        raise DegreeBoundViolated(f"interior vertex degree {series.max_vertex_degree} exceeds p = {p}")
    if series.max_face_degree is not None and not math.isinf(q) and series.max_face_degree > q:
        raise DegreeBoundViolated(f"interior face degree {series.max_face_degree} exceeds q = {q}")

    n = len(series.sphere_sizes) - 1
    comparison, spheres = None, None
    if math.isinf(q):
        comparison = math.log(p - 1)
        spheres = [1] + [p * (p - 1) ** (k - 1) for k in range(1, n + 1)]
    elif int(q) in SUPPORTED_Q and Fraction(1, p) + Fraction(1, int(q)) <= Fraction(1, 2):
        comparison = mu_closed_forms(p, q).mu_gpq
        spheres = gpq_sphere_sizes(p, int(q), n)
    if comparison is None or not series.ratio_estimates or not series.monotone:
        logfire.warning("Bishop comparison unavailable", p=p, q=str(q), monotone=series.monotone)
        return BishopVerdict(p=p, q=q, verdict="unavailable", comparison_mu=comparison, slack=slack)

    estimate = series.ratio_estimates[-1]
    exceeded = [k for k in range(n + 1) if series.sphere_sizes[k] > spheres[k]]
    verdict = "consistent"
    at_radius = None
    if exceeded and estimate > comparison + slack:
        at_radius = exceeded[0]
        verdict = f"violated-at-{at_radius}"
        logfire.warning("Bishop comparison exceeded", p=p, q=str(q), radius=at_radius, estimate=estimate,
                        comparison=comparison)
    return BishopVerdict(p=p, q=q, verdict=verdict, comparison_mu=comparison, estimate=estimate,
                         at_radius=at_radius, slack=slack)
