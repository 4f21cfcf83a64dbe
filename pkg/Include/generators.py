"""
generators.py

Truncations of the standard host families: regular tessellations G_{p,q},
regular trees T_p and the trihexagonal (kagome) tiling.
Every generator returns a validated Truncation whose vertex ids are ordered by
distance from the center, with ties broken by host geometry only, so a larger
radius extends a smaller one.
"""

from collections import deque
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import logfire

from errors import BudgetExceeded, GenerationInconsistent, SphericalParameters, ValidationError
from growth import gpq_sphere_sizes
from planar_core import HostDescriptor, Truncation, build_from_rotation_system, make_truncation

DEFAULT_BUDGET = 2_000_000


class _TessellationPatch:
    """
    A growing disk of G_{p,q} built face by face.

    The boundary is a doubly linked cycle (nxt/prv) traversed with the patch on the left.
    A boundary vertex with m incident faces has m + 1 edges; it is complete once m = p.
    """

    def __init__(self, p: int, q: int, budget: int):
        self.p = p
        self.q = q
        self.budget = budget
        self.rotation: List[List[int]] = []
        self.faces: List[Tuple[int, ...]] = []
        self.vertex_faces: List[List[int]] = []
        self.nxt: Dict[int, int] = {}
        self.prv: Dict[int, int] = {}
        self._seed()

    def _new_vertex(self) -> int:
        if len(self.rotation) >= self.budget:
            raise BudgetExceeded(f"G_{{{self.p},{self.q}}} patch exceeds the budget of {self.budget} vertices")
        self.rotation.append([])
        self.vertex_faces.append([])
        return len(self.rotation) - 1

    def _record_face(self, walk: Tuple[int, ...]) -> None:
        face_id = len(self.faces)
        self.faces.append(walk)
        for v in walk:
            self.vertex_faces[v].append(face_id)

    def _seed(self) -> None:
        ids = [self._new_vertex() for _ in range(self.q)]
        for i, v in enumerate(ids):
            after, before = ids[(i + 1) % self.q], ids[(i - 1) % self.q]
            self.rotation[v] = [after, before]
            self.nxt[v] = after
            self.prv[v] = before
        self._record_face(tuple(ids))

    def missing(self, v: int) -> int:
        return self.p - len(self.vertex_faces[v])

    def _add_face(self, b: int) -> None:
        """Attach a q-gon on the outer side of the boundary edge b -> nxt[b]."""
        c = self.nxt[b]
        back = [b]
        while self.missing(back[-1]) == 1:
            x = self.prv[back[-1]]
            if x == c or x in back:
                raise GenerationInconsistent("boundary path wrapped around the patch")
            back.append(x)
        seen = set(back)
        forward = [c]
        while self.missing(forward[-1]) == 1:
            y = self.nxt[forward[-1]]
            if y in seen or y in forward:
                raise GenerationInconsistent("boundary path wrapped around the patch")
            forward.append(y)
        path = back[::-1] + forward
        length = len(path) - 1
        new_count = self.q - 1 - length
        if new_count < 0:
            raise GenerationInconsistent(f"face on {b}-{c} spans a boundary path of length {length} >= q = {self.q}")
        x0, x_last = path[0], path[-1]
        if new_count == 0 and x_last in self.rotation[x0]:
            raise GenerationInconsistent(f"closing edge {x0}-{x_last} already exists")

        chain = [self._new_vertex() for _ in range(new_count)]
        sequence = [x0] + chain + [x_last]
        for i, z in enumerate(chain):
            self.rotation[z] = [sequence[i], sequence[i + 2]]
        around = self.rotation[x0]
        around.insert(around.index(path[1]), sequence[1])
        around = self.rotation[x_last]
        around.insert(around.index(path[-2]) + 1, sequence[-2])

        for inner in path[1:-1]:
            del self.nxt[inner]
            del self.prv[inner]
        for a, z in zip(sequence, sequence[1:]):
            self.nxt[a] = z
            self.prv[z] = a
        self._record_face(tuple(path[::-1]) + tuple(chain))

    def complete(self, v: int) -> None:
        while self.missing(v) > 0:
            self._add_face(v)

    def distances(self) -> List[Optional[int]]:
        dist: List[Optional[int]] = [None] * len(self.rotation)
        dist[0] = 0
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in self.rotation[v]:
                if dist[w] is None:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def grow(self, radius: int) -> List[Optional[int]]:
        """
        Complete the vertices of B_{radius-1} that still miss faces, nearest first, until none is left.
        Returns the final distances, which are host-exact up to radius.
        """
        while True:
            dist = self.distances()
            targets = [v for v, d in enumerate(dist) if d is not None and d <= radius - 1 and self.missing(v) > 0]
            targets.sort(key=lambda v: (dist[v], v))
            if not targets:
                return dist
            for v in targets:
                self.complete(v)


def _canonical_order(rotation: Sequence[Sequence[int]], dist: Sequence[Optional[int]], radius: int) -> List[int]:
    """
    Breadth-first order of B_radius from vertex 0, scanning every rotation cyclically from the
    edge back to the parent (from the seed neighbor 1 at the root).
    Only the complete vertices of B_{radius-1} are scanned, so the order does not depend on how far the patch grew.
    """
    order = [0]
    parent = {0: 1}
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        if dist[v] >= radius:
            continue
        around = rotation[v]
        start = around.index(parent[v])
        for k in range(len(around)):
            w = around[(start + k) % len(around)]
            if dist[w] == dist[v] + 1 and w not in parent:
                parent[w] = v
                order.append(w)
    return order


def _ball_truncation(rotation: Sequence[Sequence[int]], order: Sequence[int], interior: Dict[int, bool],
                     host: HostDescriptor, radius: int) -> Truncation:
    new_id = {old: new for new, old in enumerate(order)}
    relabeled = [[new_id[w] for w in rotation[old] if w in new_id] for old in order]
    flags = [interior[old] for old in order]
    # local conditions are checked by make_truncation, which knows the host's face rules
    planar_map = build_from_rotation_system(relabeled, strict=False)
    return make_truncation(planar_map, host, flags, center=0, radius=radius, strict=True)


def generate_gpq(p: int, q: int, radius: int, budget: int = DEFAULT_BUDGET) -> Truncation:
    """
    Ball of radius `radius` in the regular tessellation G_{p,q} (degree p, all faces q-gons).

    Returns:
        Truncation: Every interior vertex has degree p, every face at an interior vertex is a q-gon.
    """
    if p < 3 or q < 3:
        raise ValidationError("G_{p,q} needs p >= 3 and q >= 3")
    if Fraction(1, p) + Fraction(1, q) > Fraction(1, 2):
        raise SphericalParameters(f"1/{p} + 1/{q} > 1/2: G_{{{p},{q}}} is a finite spherical tessellation")
    if radius < 0:
        raise ValidationError("radius must be >= 0")
    if q in (3, 4, 6):
        projected = sum(gpq_sphere_sizes(p, q, radius))
        if projected > budget:
            raise BudgetExceeded(f"B_{radius} of G_{{{p},{q}}} has {projected} vertices, budget is {budget}")

    with logfire.span("Generating G_{p},{q} truncation", p=p, q=q, radius=radius):
        patch = _TessellationPatch(p, q, budget)
        dist = patch.grow(radius)
        order = _canonical_order(patch.rotation, dist, radius)
        in_ball = set(order)
        interior = {}
        for v in order:
            interior[v] = (patch.missing(v) == 0 and
                           all(u in in_ball for face_id in patch.vertex_faces[v] for u in patch.faces[face_id]))
        host = HostDescriptor(family="gpq", p=p, q=q, vertex_transitive=True)
        trunc = _ball_truncation(patch.rotation, order, interior, host, radius)
    logfire.info("Generated truncation", family="gpq", p=p, q=q, radius=radius, vertices=trunc.vertex_count,
                 patch_vertices=len(patch.rotation), interior=len(trunc.interior_vertices))
    return trunc


def generate_tree(p: int, radius: int, budget: int = DEFAULT_BUDGET) -> Truncation:
    """Ball of radius `radius` in the p-regular tree; every host face is an infinigon."""
    if p < 3:
        raise ValidationError("T_p needs p >= 3")
    if radius < 0:
        raise ValidationError("radius must be >= 0")
    projected = 1 + sum(p * (p - 1) ** (n - 1) for n in range(1, radius + 1))
    if projected > budget:
        raise BudgetExceeded(f"B_{radius} of T_{p} has {projected} vertices, budget is {budget}")

    rotation: List[List[int]] = [[]]
    depth = [0]
    layer = [0]
    for n in range(1, radius + 1):
        next_layer = []
        for v in layer:
            for _ in range(p if v == 0 else p - 1):
                child = len(rotation)
                rotation.append([v])
                depth.append(n)
                rotation[v].append(child)
                next_layer.append(child)
        layer = next_layer
    interior = {v: depth[v] <= radius - 1 for v in range(len(rotation))}
    host = HostDescriptor(family="tree", p=p, vertex_transitive=True)
    trunc = _ball_truncation(rotation, list(range(len(rotation))), interior, host, radius)
    logfire.info("Generated truncation", family="tree", p=p, radius=radius, vertices=trunc.vertex_count)
    return trunc


# Kagome sites are the triangular-lattice points (i, j) outside the sublattice 2Z x 2Z,
# with lattice directions listed counterclockwise.
TRIHEX_DIRECTIONS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
TRIHEX_CENTER = (1, 0)

Site = Tuple[int, int]


def _is_site(point: Site) -> bool:
    return not (point[0] % 2 == 0 and point[1] % 2 == 0)


def _site_neighbors(site: Site) -> List[Site]:
    i, j = site
    return [(i + di, j + dj) for di, dj in TRIHEX_DIRECTIONS if _is_site((i + di, j + dj))]


def _site_faces(site: Site) -> List[Tuple[Site, ...]]:
    """Two triangles and two hexagons meet at every site."""
    i, j = site
    faces = []
    for di, dj in TRIHEX_DIRECTIONS:
        hole = (i + di, j + dj)
        if not _is_site(hole):
            faces.append(tuple((hole[0] + a, hole[1] + b) for a, b in TRIHEX_DIRECTIONS))
    around = _site_neighbors(site)
    for a, b in zip(around, around[1:] + around[:1]):
        if (b[0] - a[0], b[1] - a[1]) in TRIHEX_DIRECTIONS:
            faces.append((site, a, b))
    return faces


def generate_trihex(radius: int, budget: int = DEFAULT_BUDGET) -> Truncation:
    """Ball of radius `radius` in the trihexagonal tiling (degree 4, faces 3, 6, 3, 6 around every vertex)."""
    if radius < 0:
        raise ValidationError("radius must be >= 0")
    dist = {TRIHEX_CENTER: 0}
    queue = deque([TRIHEX_CENTER])
    while queue:
        site = queue.popleft()
        if dist[site] == radius:
            continue
        for other in _site_neighbors(site):
            if other not in dist:
                if len(dist) >= budget:
                    raise BudgetExceeded(f"trihexagonal ball exceeds the budget of {budget} vertices")
                dist[other] = dist[site] + 1
                queue.append(other)

    order = sorted(dist, key=lambda s: (dist[s], s))
    index = {site: v for v, site in enumerate(order)}
    rotation = [[index[other] for other in _site_neighbors(site) if other in index] for site in order]
    interior = {
        v: len(rotation[v]) == 4 and all(u in index for face in _site_faces(site) for u in face)
        for v, site in enumerate(order)
    }
    host = HostDescriptor(family="trihex", vertex_transitive=True)
    trunc = _ball_truncation(rotation, list(range(len(order))), interior, host, radius)
    logfire.info("Generated truncation", family="trihex", radius=radius, vertices=trunc.vertex_count,
                 interior=len(trunc.interior_vertices))
    return trunc


def generate_truncation(family: str, radius: int, p: Optional[int] = None, q: Optional[int] = None,
                        budget: int = DEFAULT_BUDGET) -> Truncation:
    if family == "gpq":
        if p is None or q is None:
            raise ValidationError("--family gpq needs --p and --q")
        return generate_gpq(p, q, radius, budget)
    if family == "tree":
        if p is None:
            raise ValidationError("--family tree needs --p")
        return generate_tree(p, radius, budget)
    if family == "trihex":
        return generate_trihex(radius, budget)
    raise ValidationError(f"unknown family {family!r}")
