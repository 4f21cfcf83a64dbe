"""
spectrum.py

Combinatorial and physical Laplacians on truncations: Dirichlet assembly and bottom
eigenvalues, the closed-form bounds on the bottom of the spectrum, degree tails for the
physical/combinatorial comparison, and an exact search for finitely supported eigenfunctions.
"""

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Literal, Optional, Sequence, Tuple

import logfire
import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict
from scipy.sparse import csr_matrix, diags, identity
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from curvature import CurvatureProfile, boundary_factor, curvature_constants
from errors import (CenterOnBoundary, IndexSetTouchesBoundary, NoConvergence, NoTrustedRadii,
                    RegionTouchesBoundary, SupportTouchesBoundary)
from growth import SUPPORTED_Q, mu_closed_forms
from isoperimetry import hjl_exact
from parsers import FaceDegree
from planar_core import Truncation

OperatorKind = Literal["comb", "phys"]

DENSE_LIMIT = 2000
CANDIDATE_DENOMINATOR = 10 ** 6
SMALL_REGION = 8


class LaplacianOperator(BaseModel):
    """
    Dirichlet restriction of a Laplacian to an interior index set.

    Attributes:
        operator (csr_matrix): Rows of the Laplacian as it acts on functions, I - D^-1 A or D - A.
        symmetric (csr_matrix): Symmetric matrix with the same spectrum, used by the eigensolvers.
        degrees (np.ndarray): Host degree per row.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: OperatorKind
    index_set: Tuple[int, ...]
    operator: csr_matrix
    symmetric: csr_matrix
    degrees: np.ndarray

    @property
    def size(self) -> int:
        return len(self.index_set)


def assemble(trunc: Truncation, kind: OperatorKind, index_set: Iterable[int]) -> LaplacianOperator:
    """Neighbors outside the index set only enter through the diagonal (Dirichlet condition)."""
    vertices = tuple(sorted(set(index_set)))
    outside = [v for v in vertices if not trunc.is_interior(v)]
    if outside:
        raise IndexSetTouchesBoundary(f"{len(outside)} index-set vertices are not interior, e.g. {outside[0]}")
    if not vertices:
        raise IndexSetTouchesBoundary("empty index set")
    return _block_operator(trunc, kind, vertices)


def _block_operator(trunc: Truncation, kind: OperatorKind, vertices: Tuple[int, ...]) -> LaplacianOperator:
    rows = np.array(vertices, dtype=np.int64)
    block = trunc.map.adjacency[rows][:, rows].astype(np.float64)
    degrees = np.array([trunc.degree(v) for v in vertices], dtype=np.float64)
    eye = identity(len(vertices), format="csr")
    if kind == "comb":
        operator = eye - diags(1.0 / degrees) @ block
        scale = diags(1.0 / np.sqrt(degrees))
        symmetric = eye - scale @ block @ scale
    elif kind == "phys":
        operator = diags(degrees) - block
        symmetric = operator
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    return LaplacianOperator(kind=kind, index_set=vertices, operator=csr_matrix(operator),
                             symmetric=csr_matrix(symmetric), degrees=degrees)


class DirichletValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    radius: Optional[int] = None
    rows: int
    value: float
    residual: float


def dirichlet_lambda0(op: LaplacianOperator, tol: float = 1e-8) -> DirichletValue:
    """Smallest eigenvalue of the symmetric form, with residual ||S x - lambda x|| / ||x||."""
    if op.size == 0:
        raise NoConvergence("empty operator")
    matrix = op.symmetric
    if op.size <= DENSE_LIMIT:
        values, vectors = scipy.linalg.eigh(matrix.toarray(), subset_by_index=[0, 0])
    else:
        try:
            values, vectors = eigsh(matrix, k=1, sigma=-1e-2, which="LM", tol=tol / 10)
        except ArpackNoConvergence as e:
            raise NoConvergence(f"ARPACK did not converge on {op.size} rows: {e}") from e
    value = float(values[0])
    x = vectors[:, 0]
    residual = float(np.linalg.norm(matrix @ x - value * x) / np.linalg.norm(x))
    if residual > tol:
        raise NoConvergence(f"residual {residual:.3e} exceeds {tol:.1e} on {op.size} rows")
    return DirichletValue(rows=op.size, value=value, residual=residual)


def indicator_rayleigh(trunc: Truncation, W: Iterable[int], kind: OperatorKind) -> Fraction:
    """
    <L chi_W, chi_W> in the operator's own inner product (degree-weighted for comb), exact.
    Both kinds give |dE W|.
    """
    members = set(W)
    for v in members:
        if not trunc.is_interior(v):
            raise IndexSetTouchesBoundary(f"vertex {v} is not interior")
    total = Fraction(0)
    for v in members:
        degree = trunc.degree(v)
        inside = sum(1 for w in trunc.map.neighbors(v) if w in members)
        if kind == "comb":
            total += degree * (1 - Fraction(inside, degree))
        else:
            total += degree - inside
    return total


def fujiwara_lower(alpha_tilde: float) -> float:
    return 1 - math.sqrt(1 - alpha_tilde ** 2)


def fujiwara_upper(mu: float) -> float:
    return 1 - 2 * math.exp(mu / 2) / (1 + math.exp(mu))


class SpectralBound(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    side: Literal["lower", "upper"]
    operator: OperatorKind
    value: float
    provenance: str


class BoundRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    bounds: Tuple[SpectralBound, ...] = ()
    unavailable: Tuple[str, ...] = ()

    def best(self, side: str, operator: OperatorKind = "comb") -> Optional[float]:
        values = [b.value for b in self.bounds if b.side == side and b.operator == operator]
        if not values:
            return None
        return max(values) if side == "lower" else min(values)


def closed_form_bounds(alpha_tilde: Optional[float] = None, mu: Optional[float] = None,
                       c: Optional[Fraction] = None, q: Optional[FaceDegree] = None, p: Optional[int] = None,
                       b: Optional[Fraction] = None, alpha: Optional[float] = None, M: Optional[int] = None,
                       no_cut_locus: bool = False) -> BoundRecord:
    """
    Every bound whose inputs are present. Corollary-type essential-spectrum bounds need a host
    without cut locus, which callers assert through no_cut_locus.
    """
    bounds: List[SpectralBound] = []
    unavailable: List[str] = []
    if alpha_tilde is not None:
        bounds.append(SpectralBound(name="fujiwara_lower", side="lower", operator="comb",
                                    value=fujiwara_lower(alpha_tilde),
                                    provenance="1 - sqrt(1 - alpha~^2) from the combinatorial Cheeger constant"))
    if mu is not None:
        bounds.append(SpectralBound(name="fujiwara_upper", side="upper", operator="comb",
                                    value=fujiwara_upper(mu),
                                    provenance="1 - 2 e^(mu/2) / (1 + e^mu) from exponential growth"))
    if c is not None and c > 0 and q is not None:
        bound = float(boundary_factor(q) * c)
        bounds.append(SpectralBound(name="mckean", side="lower", operator="comb", value=fujiwara_lower(min(bound, 1.0)),
                                    provenance="combinatorial McKean: curvature bound on alpha~ fed to Fujiwara"))
    else:
        unavailable.append("mckean")
    if p is not None and no_cut_locus:
        bounds.append(SpectralBound(name="essential_upper_degree", side="upper", operator="comb",
                                    value=1 - 2 * math.sqrt(p - 1) / p,
                                    provenance="no cut locus, |v| <= p: bottom of the spectrum of T_p"))
    else:
        unavailable.append("essential_upper_degree")
    if b is not None and b > 0 and q is not None and not math.isinf(q) and int(q) in SUPPORTED_Q and no_cut_locus:
        bounds.append(SpectralBound(name="essential_upper_curvature", side="upper", operator="comb",
                                    value=fujiwara_upper(mu_closed_forms(b=b, q=q).mu_curv),
                                    provenance="no cut locus, face-regular, kappa >= -b: tau = 1 + q/(q-2) b"))
    else:
        unavailable.append("essential_upper_curvature")
    if alpha is not None and M is not None:
        bounds.append(SpectralBound(name="dodziuk", side="lower", operator="phys", value=alpha ** 2 / (2 * M),
                                    provenance="alpha^2 / 2M from the physical Cheeger constant"))
    else:
        unavailable.append("dodziuk")
    unavailable.append("dodziuk_essential")
    return BoundRecord(bounds=tuple(bounds), unavailable=tuple(unavailable))


class DegreeTail(BaseModel):
    """m_n and M_n: extreme host degrees among trusted vertices outside B_{n-1}."""
    model_config = ConfigDict(frozen=True)

    minima: Tuple[int, ...]
    maxima: Tuple[int, ...]
    m_infinity: int
    M_infinity: int


def degree_tail(trunc: Truncation) -> DegreeTail:
    if not trunc.is_interior(trunc.center):
        raise CenterOnBoundary(f"center {trunc.center} is not interior")
    dist = trunc.center_distances
    trusted = [v for v in range(trunc.vertex_count) if trunc.complete_flags[v]]
    if not trusted:
        raise NoTrustedRadii("no vertex carries its host degree")
    minima, maxima = [], []
    for n in range(int(max(dist[v] for v in trusted)) + 1):
        degrees = [trunc.degree(v) for v in trusted if dist[v] >= n]
        if not degrees:
            break
        minima.append(min(degrees))
        maxima.append(max(degrees))
    return DegreeTail(minima=tuple(minima), maxima=tuple(maxima), m_infinity=minima[-1], M_infinity=maxima[-1])


def comparison_interval(tail: DegreeTail, low: Optional[float],
                        high: Optional[float]) -> Tuple[Optional[float], Optional[float]]:
    """[m_0 low, M_0 high] for the physical bottom from a combinatorial bracket."""
    return (tail.minima[0] * low if low is not None else None,
            tail.maxima[0] * high if high is not None else None)


class SpectralReport(BaseModel):
    """
    Bracket for the bottom of the combinatorial spectrum, with Dirichlet values kept apart as
    upper estimates.
    """
    model_config = ConfigDict(frozen=True)

    kind: OperatorKind
    dirichlet: Tuple[DirichletValue, ...]
    dirichlet_monotone: bool
    bounds: BoundRecord
    lower: Optional[float] = None
    upper: Optional[float] = None
    interval_consistent: bool
    physical_interval: Tuple[Optional[float], Optional[float]]
    degree_tail: DegreeTail
    essential_note: Optional[str] = None
    tree_spectrum: Optional[Tuple[float, float]] = None


def host_spectral_inputs(trunc: Truncation, profile: CurvatureProfile) -> Dict:
    """Keyword arguments for closed_form_bounds drawn from the host family and the curvature profile."""
    host = trunc.host
    q = host.face_degree_bound
    if q is None:
        q = profile.max_face_degree if profile.max_face_degree is not None else math.inf
    inputs = {"c": profile.c, "q": q, "p": host.vertex_degree, "b": profile.b,
              "M": host.vertex_degree or max(trunc.degree(v) for v in trunc.interior_vertices),
              "no_cut_locus": host.family == "tree" or profile.nonpositive_corner_curvature}
    if host.family == "tree":
        inputs["alpha_tilde"] = (host.p - 2) / host.p
        inputs["alpha"] = float(host.p - 2)
        inputs["mu"] = math.log(host.p - 1)
    else:
        if profile.a is not None:
            inputs["alpha"] = float(boundary_factor(q) * profile.a)
        if host.family == "gpq" and host.curvature_regime == "hyperbolic":
            inputs["alpha_tilde"] = hjl_exact(host.p, host.q)
            if host.q in SUPPORTED_Q:
                inputs["mu"] = mu_closed_forms(host.p, host.q).mu_gpq
        elif host.curvature_regime == "euclidean":
            # polynomial growth
            inputs["mu"] = 0.0
    return inputs


def spectral_report(trunc: Truncation, radii: Sequence[int], kind: OperatorKind = "comb",
                    tol: float = 1e-8) -> SpectralReport:
    profile = curvature_constants(trunc)
    bounds = closed_form_bounds(**host_spectral_inputs(trunc, profile))

    values: List[DirichletValue] = []
    with logfire.span("Dirichlet eigenvalues", kind=kind, radii=list(radii)):
        for n in radii:
            ball = trunc.ball(n)
            if not all(trunc.is_interior(v) for v in ball):
                logfire.warning("Skipping radius", radius=n, reason="ball leaves the interior")
                continue
            value = dirichlet_lambda0(assemble(trunc, kind, ball), tol)
            values.append(value.model_copy(update={"radius": n}))
    monotone = all(b.value <= a.value + tol for a, b in zip(values, values[1:]))

    lower, upper = bounds.best("lower"), bounds.best("upper")
    consistent = lower is None or upper is None or lower <= upper + tol
    if not consistent:
        logfire.error("Inconsistent spectral interval", lower=lower, upper=upper)
    tail = degree_tail(trunc)
    host = trunc.host
    note = None
    if host.vertex_transitive and not trunc.finite_host:
        note = "vertex-transitive host: bottom of the spectrum equals bottom of the essential spectrum"
    tree_spectrum = None
    if host.family == "tree":
        half_width = 2 * math.sqrt(host.p - 1) / host.p
        tree_spectrum = (1 - half_width, 1 + half_width)

    report = SpectralReport(kind=kind, dirichlet=tuple(values), dirichlet_monotone=monotone, bounds=bounds,
                            lower=lower, upper=upper, interval_consistent=consistent,
                            physical_interval=comparison_interval(tail, lower, upper), degree_tail=tail,
                            essential_note=note, tree_spectrum=tree_spectrum)
    logfire.info("Spectral report", kind=kind, lower=lower, upper=upper, radii=[v.radius for v in values],
                 monotone=monotone)
    return report


class EigenfunctionCertificate(BaseModel):
    """
    A finitely supported eigenfunction of the combinatorial Laplacian, exact.

    Attributes:
        support (Tuple[int, ...]): Vertices where f is nonzero.
        values (Tuple[Fraction, ...]): f on the support, first value normalised to 1.
        eigenvalue (Fraction): lambda with (Lf)(v) = lambda f(v) on the closed neighborhood.
        neighborhood (Tuple[int, ...]): Closed neighborhood N[support] the residual was checked on.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    support: Tuple[int, ...]
    values: Tuple[Fraction, ...]
    eigenvalue: Fraction
    neighborhood: Tuple[int, ...]


def _require_complete(trunc: Truncation, vertices: Iterable[int], error) -> None:
    """The eigen equation at v reads only deg(v) and the neighbors of v."""
    for v in vertices:
        if not 0 <= v < trunc.vertex_count or not trunc.complete_flags[v]:
            raise error(f"vertex {v} does not have its full host neighborhood")


def _exact_system(trunc: Truncation, rows: Sequence[int], columns: Sequence[int], eigenvalue: Fraction) -> DomainMatrix:
    """(L - lambda) restricted to rows x columns, each row scaled by the row degree."""
    position = {v: j for j, v in enumerate(columns)}
    matrix = []
    for v in rows:
        entries = [Fraction(0)] * len(columns)
        if v in position:
            entries[position[v]] = trunc.degree(v) * (1 - eigenvalue)
        for w in trunc.map.neighbors(v):
            if w in position:
                entries[position[w]] -= 1
        matrix.append([QQ(x.numerator, x.denominator) for x in entries])
    return DomainMatrix(matrix, (len(rows), len(columns)), QQ)


def _candidate_eigenvalues(trunc: Truncation, region: Sequence[int], rows: Sequence[int],
                           singular_tol: float) -> List[Fraction]:
    """Rationalised block eigenvalues whose eigenspace nearly satisfies the outside rows."""
    op = _block_operator(trunc, "comb", tuple(region))
    values, vectors = scipy.linalg.eigh(op.symmetric.toarray())
    functions = vectors / np.sqrt(op.degrees)[:, None]
    position = {v: j for j, v in enumerate(region)}
    outer = [v for v in rows if v not in position]
    out_block = np.zeros((len(outer), len(region)))
    for i, v in enumerate(outer):
        for w in trunc.map.neighbors(v):
            if w in position:
                out_block[i, position[w]] = -1.0 / trunc.degree(v)
    candidates = set()
    start = 0
    while start < len(values):
        stop = start + 1
        while stop < len(values) and values[stop] - values[start] < 1e-9:
            stop += 1
        basis = functions[:, start:stop]
        if outer:
            smallest = np.linalg.svd(out_block @ basis, compute_uv=False).min()
        else:
            smallest = 0.0
        if smallest <= singular_tol:
            candidates.add(Fraction(float(values[start])).limit_denominator(CANDIDATE_DENOMINATOR))
        start = stop
    if len(region) <= SMALL_REGION:
        lcm = math.lcm(*(trunc.degree(v) for v in region))
        candidates.update(Fraction(k, 2 * lcm) for k in range(4 * lcm + 1))
    return sorted(candidates)


def find_finitely_supported_eigenfunctions(trunc: Truncation, region: Iterable[int], max_support: Optional[int] = None,
                                           singular_tol: float = 1e-8) -> List[EigenfunctionCertificate]:
    """
    Exact null spaces of (L - lambda) over N[region] x region for every candidate lambda.
    An empty result means no eigenfunction with support inside the region has a rational eigenvalue.
    """
    region = tuple(sorted(set(region)))
    if not region:
        raise IndexSetTouchesBoundary("empty region")
    rows = trunc.closed_neighborhood(region)
    _require_complete(trunc, rows, RegionTouchesBoundary)

    certificates: List[EigenfunctionCertificate] = []
    with logfire.span("Eigenfunction search", region=len(region)):
        for eigenvalue in _candidate_eigenvalues(trunc, region, rows, singular_tol):
            null = _exact_system(trunc, rows, region, eigenvalue).nullspace().to_Matrix()
            for i in range(null.rows):
                vector = [Fraction(int(x.p), int(x.q)) for x in null.row(i)]
                support = tuple(v for v, x in zip(region, vector) if x != 0)
                if max_support is not None and len(support) > max_support:
                    continue
                first = next(x for x in vector if x != 0)
                values = tuple(x / first for x in vector if x != 0)
                certificates.append(EigenfunctionCertificate(
                    support=support, values=values, eigenvalue=eigenvalue,
                    neighborhood=trunc.closed_neighborhood(support)))
    logfire.info("Eigenfunction search summary", region=len(region), certificates=len(certificates),
                 eigenvalues=sorted({str(c.eigenvalue) for c in certificates}))
    return certificates


def verify_certificate(trunc: Truncation, cert: EigenfunctionCertificate) -> bool:
    """Recompute (Lf - lambda f)(v) in exact rationals on N[support]; True iff all vanish."""
    _require_complete(trunc, trunc.closed_neighborhood(cert.support), SupportTouchesBoundary)
    f = dict(zip(cert.support, cert.values))
    for v in trunc.closed_neighborhood(cert.support):
        value = f.get(v, Fraction(0))
        mean = Fraction(sum((f.get(w, Fraction(0)) for w in trunc.map.neighbors(v)), Fraction(0)), trunc.degree(v))
        if value - mean - cert.eigenvalue * value != 0:
            return False
    return True
