"""
isoperimetry.py

Cheeger constants: curvature lower bounds, the exact combinatorial constant of
hyperbolic G_{p,q}, polygon completion, and an exact brute-force search over small
connected interior subsets that brackets the true infima from above.
"""

import math
import threading
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import logfire
from pydantic import BaseModel, ConfigDict

from curvature import CurvatureProfile, boundary_factor, curvature_constants
from errors import (CapTooLargeForBudget, CompletionLeavesInterior, IdentityViolated, InvalidCap, NoInteriorVertices,
                    NotHyperbolic, NoTrustedRadii, QSmallerThanFaceDegree, SubsetDisconnected, SubsetTouchesBoundary)
from growth import GrowthSeries
from parsers import FaceDegree
from planar_core import DEFAULT_ENUMERATION_LIMIT, Truncation, subset_stats, walk_connected_subsets


def cheeger_bounds(profile: CurvatureProfile, q: FaceDegree) -> Tuple[Optional[Fraction], Optional[Fraction]]:
    """
    Curvature lower bounds (2q/(q-2) * a, 2q/(q-2) * c) for the physical and combinatorial
    Cheeger constants; each is None when its curvature constant is absent.
    """
    if profile.max_face_degree is not None and not math.isinf(q) and q < profile.max_face_degree:
        raise QSmallerThanFaceDegree(f"q = {q} is below the host face degree {profile.max_face_degree}")
    factor = boundary_factor(q)
    physical = factor * profile.a if profile.a is not None else None
    combinatorial = factor * profile.c if profile.c is not None else None
    return physical, combinatorial


def gpq_curvature_bound(p: int, q: int) -> Fraction:
    """The combinatorial curvature bound specialised to G_{p,q}: ((p-2)(q-2) - 4) / (p(q-2))."""
    return Fraction((p - 2) * (q - 2) - 4, p * (q - 2))


def hjl_exact(p: int, q: int) -> float:
    """Exact combinatorial Cheeger constant of hyperbolic G_{p,q}: (p-2)/p * sqrt(1 - 4/((p-2)(q-2)))."""
    if Fraction(1, p) + Fraction(1, q) >= Fraction(1, 2):
        raise NotHyperbolic(f"G_{{{p},{q}}} is not hyperbolic")
    return (p - 2) / p * math.sqrt(1 - 4 / ((p - 2) * (q - 2)))


class CheegerWitness(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Fraction
    vertices: Tuple[int, ...]


class CheegerReport(BaseModel):
    """
    Lower bounds from curvature and upper estimates from enumeration, bracketing the Cheeger constants.

    Attributes:
        bound_physical (Optional[Fraction]): Curvature lower bound on the physical constant.
        bound_combinatorial (Optional[Fraction]): Curvature lower bound on the combinatorial constant.
        hjl_exact (Optional[float]): Exact combinatorial constant, hyperbolic G_{p,q} only.
        enumerated_min_physical (Optional[CheegerWitness]): Smallest |dE P|/|P| found (upper estimate).
        enumerated_min_combinatorial (Optional[CheegerWitness]): Smallest |dE P|/vol(P) found (upper estimate).
        enumerated_min_h (Optional[CheegerWitness]): Smallest |dV P|/|P| found (upper estimate).
        physical_by_size (Optional[Dict[int, Fraction]]): Smallest physical quotient per size, unpruned runs only.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    cap: int
    roots: Optional[Tuple[int, ...]] = None
    bound_physical: Optional[Fraction] = None
    bound_combinatorial: Optional[Fraction] = None
    hjl_exact: Optional[float] = None
    enumerated_min_physical: Optional[CheegerWitness] = None
    enumerated_min_combinatorial: Optional[CheegerWitness] = None
    enumerated_min_h: Optional[CheegerWitness] = None
    physical_by_size: Optional[Dict[int, Fraction]] = None
    subsets_visited: int = 0
    completed: int = 0
    skipped: int = 0
    pruned: bool = True


def _complement_components(trunc: Truncation, members: Set[int]) -> List[List[int]]:
    seen = set(members)
    components = []
    for start in range(trunc.vertex_count):
        if start in seen:
            continue
        seen.add(start)
        component = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in trunc.map.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    component.append(w)
                    queue.append(w)
        components.append(component)
    return components


def _fill_enclosed(trunc: Truncation, members: Set[int]) -> Set[int]:
    """W together with every component of G - W that does not reach the outside."""
    if trunc.host.family == "tree":
        return set(members)
    components = _complement_components(trunc, members)
    if not components:
        return set(members)
    if trunc.finite_host:
        outside = max(components, key=lambda comp: (len(comp), -min(comp)))
    else:
        anchored = [comp for comp in components if any(not trunc.interior_flags[v] for v in comp)]
        if len(anchored) != 1:
            raise CompletionLeavesInterior(
                f"{len(anchored)} complementary components reach the truncation boundary")
        outside = anchored[0]
    filled = set(members)
    for comp in components:
        if comp is not outside:
            filled.update(comp)
    return filled


def polygon_completion(trunc: Truncation, W: Iterable[int]) -> Tuple[int, ...]:
    """
    Fill the regions enclosed by W, returning the polygon P_W with C(P_W) = 1.
    Neither Cheeger quotient increases; both are asserted.
    """
    members = set(W)
    before = subset_stats(trunc, members)
    polygon = _fill_enclosed(trunc, members)
    for v in polygon:
        if not trunc.is_interior(v):
            raise CompletionLeavesInterior(f"enclosed vertex {v} is not interior")
    if polygon == members:
        return before.vertices
    after = subset_stats(trunc, polygon)
    if after.edge_boundary > 0 and after.non_host_faces != 1:
        raise IdentityViolated(f"completed polygon still has {after.non_host_faces} non-host faces")
    if Fraction(after.edge_boundary, after.size) > Fraction(before.edge_boundary, before.size) or \
            Fraction(after.edge_boundary, after.volume) > Fraction(before.edge_boundary, before.volume):
        raise IdentityViolated("polygon completion increased a Cheeger quotient")
    return after.vertices


class GrowthVertexRelation(BaseModel):
    """
    e^mu against 1 + h on a regular tree T_p, from a sphere series and an unpruned search.

    Attributes:
        growth_base (Fraction): s_N / s_{N-1} at the last trusted radius, the estimate of e^mu.
        closed_h (Fraction): h(T_p) = p - 2.
        enumerated_h (Fraction): Smallest |dV W|/|W| the search found.
        witness_size (int): |W| of that minimiser; every subtree of size k has |dV W| = k(p-2) + 2.
        holds (bool): e^mu = 1 + h(T_p) exactly, the minimiser has the subtree value, and e^mu < 1 + enumerated h.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    growth_base: Fraction
    closed_h: Fraction
    enumerated_h: Fraction
    witness_size: int
    holds: bool


def tree_h_relation(p: int, series: GrowthSeries, report: CheegerReport) -> GrowthVertexRelation:
    if len(series.sphere_sizes) < 3:
        raise NoTrustedRadii("the growth base needs two trusted spheres beyond the center")
    witness = report.enumerated_min_h
    if witness is None:
        raise NoInteriorVertices("the search found no interior subset")
    growth_base = Fraction(series.sphere_sizes[-1], series.sphere_sizes[-2])
    closed_h = Fraction(p - 2)
    size = len(witness.vertices)
    holds = (growth_base == 1 + closed_h and
             witness.value == Fraction(size * (p - 2) + 2, size) and
             growth_base < 1 + witness.value)
    return GrowthVertexRelation(growth_base=growth_base, closed_h=closed_h, enumerated_h=witness.value,
                                witness_size=size, holds=holds)


class _SearchState:
    """Best quotients found so far, shared between worker threads."""

    def __init__(self, track_sizes: bool):
        self.lock = threading.Lock()
        self.best: Dict[str, Tuple] = {}
        self.by_size: Optional[Dict[int, Fraction]] = {} if track_sizes else None
        self.visited = 0
        self.completed = 0
        self.skipped = 0

    def offer(self, name: str, value: Fraction, vertices: Tuple[int, ...]) -> None:
        key = (value, len(vertices), vertices)
        current = self.best.get(name)
        if current is None or key < current:
            self.best[name] = key

    def witness(self, name: str) -> Optional[CheegerWitness]:
        if name not in self.best:
            return None
        value, _, vertices = self.best[name]
        return CheegerWitness(value=value, vertices=vertices)


def exact_cheeger_search(trunc: Truncation, cap: int, roots: Optional[Iterable[int]] = None, prune: bool = True,
                         workers: int = 1, limit: int = DEFAULT_ENUMERATION_LIMIT) -> CheegerReport:
    """
    Minimise the three Cheeger quotients over polygons P_W of connected interior sets |W| <= cap.

    Candidates whose completion exceeds cap or leaves the interior are skipped. For a
    vertex-transitive host the search defaults to sets containing the center. Pruning drops a
    partial set only when exact lower bounds over all its extensions exceed all three current minima.
    """
    if cap < 1:
        raise InvalidCap(f"cap must be >= 1, got {cap}")
    profile = curvature_constants(trunc)
    q = trunc.host.face_degree_bound
    if q is None:
        q = profile.max_face_degree if profile.max_face_degree is not None else math.inf
    bound_physical, bound_combinatorial = cheeger_bounds(profile, q)
    hjl = None
    host = trunc.host
    if host.family == "gpq" and host.curvature_regime == "hyperbolic":
        hjl = hjl_exact(host.p, host.q)

    adjacency = trunc.interior_adjacency
    rank = None
    if roots is None and host.vertex_transitive and trunc.is_interior(trunc.center) and not trunc.finite_host:
        roots = [trunc.center]
        rank = {v: v for v in adjacency}
        rank[trunc.center] = -1
    root_list = sorted(adjacency) if roots is None else sorted(set(roots))

    max_degree = max(trunc.degree(v) for v in adjacency)
    host_faces_at = {v: [f for f in trunc.corner_faces(v) if f in trunc.host_face_ids] for v in adjacency}
    faces = trunc.map.faces
    tree_host = host.family == "tree"
    state = _SearchState(track_sizes=not prune)

    def quantities(vertices):
        volume = sum(trunc.degree(v) for v in vertices)
        inner = sum(1 for v in vertices for w in trunc.map.neighbors(v) if w in vertices)
        outside = {w for v in vertices for w in trunc.map.neighbors(v) if w not in vertices}
        return volume, inner // 2, volume - inner, len(outside)

    def evaluate(members: FrozenSet[int], cache: Dict):
        volume, edges, edge_boundary, vertex_boundary = quantities(members)
        if len(members) < cap:
            cache[members] = (volume, edge_boundary, vertex_boundary)
        candidate = members
        if not tree_host:
            inside = {f for v in members for f in host_faces_at[v] if all(u in members for u in faces[f])}
            non_host = 2 - len(members) + edges - len(inside)
            if non_host > 1:
                try:
                    candidate = frozenset(_fill_enclosed(trunc, set(members)))
                except CompletionLeavesInterior:
                    candidate = None
                if candidate is not None and (len(candidate) > cap or
                                              any(not trunc.interior_flags[v] for v in candidate)):
                    candidate = None
                with state.lock:
                    state.completed += 1
                    if candidate is None:
                        state.skipped += 1
                if candidate is None:
                    return
                volume, _, edge_boundary, vertex_boundary = quantities(candidate)
        vertices = tuple(sorted(candidate))
        with state.lock:
            state.offer("physical", Fraction(edge_boundary, len(vertices)), vertices)
            if volume:
                state.offer("combinatorial", Fraction(edge_boundary, volume), vertices)
            state.offer("h", Fraction(vertex_boundary, len(vertices)), vertices)
            if state.by_size is not None:
                value = Fraction(edge_boundary, len(vertices))
                size = len(vertices)
                if size not in state.by_size or value < state.by_size[size]:
                    state.by_size[size] = value

    def run(chunk: Sequence[int]) -> None:
        cache: Dict[FrozenSet[int], Tuple[int, int, int]] = {}

        def descend(members: FrozenSet[int]) -> bool:
            volume, edge_boundary, vertex_boundary = cache.pop(members)
            if not prune:
                return True
            with state.lock:
                if len(state.best) < 3:
                    return True
                best = {name: key[0] for name, key in state.best.items()}
            room = cap - len(members)
            low_boundary = edge_boundary - max_degree * room
            return not (Fraction(low_boundary, cap) > best["physical"] and
                        Fraction(low_boundary, volume + max_degree * room) > best["combinatorial"] and
                        Fraction(vertex_boundary - room, cap) > best["h"])

        for members in walk_connected_subsets(adjacency, chunk, cap, descend=descend, rank=rank):
            with state.lock:
                state.visited += 1
                if state.visited > limit:
                    raise CapTooLargeForBudget(f"more than {limit} connected subsets of size <= {cap}")
            evaluate(members, cache)

    with logfire.span("Cheeger search", cap=cap, roots=len(root_list), prune=prune, workers=workers):
        if workers <= 1 or len(root_list) <= 1:
            run(root_list)
        else:
            chunks = [root_list[i::workers] for i in range(workers)]
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for future in [pool.submit(run, chunk) for chunk in chunks]:
                    future.result()

    report = CheegerReport(
        cap=cap,
        roots=tuple(root_list) if roots is not None else None,
        bound_physical=bound_physical,
        bound_combinatorial=bound_combinatorial,
        hjl_exact=hjl,
        enumerated_min_physical=state.witness("physical"),
        enumerated_min_combinatorial=state.witness("combinatorial"),
        enumerated_min_h=state.witness("h"),
        physical_by_size=dict(sorted(state.by_size.items())) if state.by_size is not None else None,
        subsets_visited=state.visited,
        completed=state.completed,
        skipped=state.skipped,
        pruned=prune,
    )
    logfire.info("Cheeger search summary", cap=cap, visited=state.visited, completed=state.completed,
                 skipped=state.skipped,
                 min_physical=str(report.enumerated_min_physical.value) if report.enumerated_min_physical else None)
    return report
