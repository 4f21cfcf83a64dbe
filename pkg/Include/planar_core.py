"""
planar_core.py

Rotation-system planar maps and truncations of infinite hosts.
Provides face tracing, combinatorial distance, cut loci, exact finite-subset
statistics and canonical enumeration of connected interior subsets.
"""

import json
import math
from collections import deque
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Literal, Mapping, Optional, Sequence, Tuple, \
    Union

import logfire
import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from errors import (CapTooLargeForBudget, CenterOnBoundary, DisconnectedGraph, EdgeOnOneFace, IdentityViolated,
                    InconsistentAdjacency, InvalidCap, NonPlanarRotation, ParseError, SphericalParameters,
                    SubsetDisconnected, SubsetTouchesBoundary, TerminalVertex, ValidationError)
from parsers import FaceDegree, parse_int

FORMAT_TAG = "tessellab-rotation/1"
DEFAULT_ENUMERATION_LIMIT = 5_000_000

HalfEdge = Tuple[int, int]


class HostDescriptor(BaseModel):
    """
    Metadata of the (possibly infinite) graph a truncation is cut from.

    Attributes:
        family (str): 'gpq', 'tree', 'trihex' or 'custom'.
        p (Optional[int]): Vertex degree of the host, when constant.
        q (Optional[int]): Face degree of a face-regular host; None means infinigons for trees.
        face_degrees (Optional[Tuple[int, ...]]): Allowed finite face degrees of a custom host.
        vertex_transitive (bool): Generator-provided transitivity flag; never machine-checked.
    """
    model_config = ConfigDict(frozen=True)

    family: Literal["gpq", "tree", "trihex", "custom"]
    p: Optional[int] = Field(default=None, ge=2)
    q: Optional[int] = Field(default=None, ge=3)
    face_degrees: Optional[Tuple[int, ...]] = None
    vertex_transitive: bool = False

    @model_validator(mode="after")
    def check_family(self) -> "HostDescriptor":
        if self.family == "gpq":
            if self.p is None or self.q is None or self.p < 3:
                raise ValueError("gpq hosts need p >= 3 and q >= 3")
            if Fraction(1, self.p) + Fraction(1, self.q) > Fraction(1, 2):
                raise SphericalParameters(f"1/{self.p} + 1/{self.q} > 1/2 describes a finite spherical tessellation")
        elif self.family == "tree":
            if self.p is None or self.p < 3:
                raise ValueError("tree hosts need p >= 3")
            if self.q is not None or self.face_degrees:
                raise ValueError("tree hosts only have infinigon faces")
        elif self.family == "trihex":
            if self.p not in (None, 4) or self.q is not None:
                raise ValueError("the trihexagonal host has p = 4 and faces of degree 3 and 6")
        if self.face_degrees is not None and any(d < 3 for d in self.face_degrees):
            raise ValueError("face degrees must be >= 3")
        return self

    @property
    def vertex_degree(self) -> Optional[int]:
        if self.family == "trihex":
            return 4
        return self.p

    @property
    def allowed_face_degrees(self) -> Optional[FrozenSet[int]]:
        """Finite face degrees a host face may have; None accepts any degree >= 3."""
        if self.family == "tree":
            return frozenset()
        if self.family == "trihex":
            return frozenset((3, 6))
        if self.face_degrees:
            return frozenset(self.face_degrees)
        if self.q is not None:
            return frozenset((self.q,))
        return None

    @property
    def face_degree_bound(self) -> Optional[FaceDegree]:
        if self.family == "tree":
            return math.inf
        allowed = self.allowed_face_degrees
        return max(allowed) if allowed else None

    @property
    def curvature_regime(self) -> str:
        if self.family == "tree":
            return "hyperbolic"
        if self.family == "trihex":
            return "euclidean"
        if self.p is None or self.q is None:
            return "unknown"
        excess = Fraction(1, self.p) + Fraction(1, self.q) - Fraction(1, 2)
        if excess > 0:
            return "spherical"
        return "euclidean" if excess == 0 else "hyperbolic"


def trace_faces(rotation: Union[Sequence[Sequence[int]], Mapping[int, Sequence[int]]]):
    """
    Trace the faces of a rotation system.

    The successor of half-edge (u, v) is (v, w) where w precedes u in the rotation at v,
    so every face lies to the left of its half-edges.

    Returns:
        tuple: (walks, face_of) where walks[i] lists the vertices of face i in order and
        face_of maps each half-edge to its face index. A map without edges has one empty face.
    """
    if isinstance(rotation, Mapping):
        keys = sorted(rotation)
    else:
        keys = range(len(rotation))
    position = {v: {w: i for i, w in enumerate(rotation[v])} for v in keys}
    face_of: Dict[HalfEdge, int] = {}
    walks: List[Tuple[int, ...]] = []
    for v in keys:
        for w in rotation[v]:
            if (v, w) in face_of:
                continue
            face_id = len(walks)
            walk = []
            u, x = v, w
            while (u, x) not in face_of:
                face_of[(u, x)] = face_id
                walk.append(u)
                around = rotation[x]
                u, x = x, around[(position[x][u] - 1) % len(around)]
            walks.append(tuple(walk))
    if not walks:
        walks.append(())
    return walks, face_of


def _edge_key(walk: Sequence[int]) -> FrozenSet[HalfEdge]:
    """Half-edges of a face walk; the two sides of a cycle get different keys."""
    if len(walk) < 2:
        return frozenset()
    return frozenset(zip(walk, tuple(walk[1:]) + tuple(walk[:1])))


class PlanarMap:
    """
    Immutable combinatorial map (rotation system) with traced faces.
    Vertex ids are 0..n-1 and rotations list neighbors counterclockwise.
    """

    def __init__(self, rotation: Sequence[Sequence[int]]):
        self._rotation = tuple(tuple(int(w) for w in nbrs) for nbrs in rotation)
        self._faces, self._face_of = trace_faces(self._rotation)
        self._faces = tuple(self._faces)

    @property
    def rotation(self) -> Tuple[Tuple[int, ...], ...]:
        return self._rotation

    @property
    def vertex_count(self) -> int:
        return len(self._rotation)

    @cached_property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._rotation) // 2

    @property
    def faces(self) -> Tuple[Tuple[int, ...], ...]:
        return self._faces

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._rotation[v]

    def degree(self, v: int) -> int:
        return len(self._rotation[v])

    def face_of(self, u: int, v: int) -> int:
        """Index of the face to the left of the half-edge u -> v."""
        return self._face_of[(u, v)]

    def face_degree(self, face_id: int) -> int:
        return len(self._faces[face_id])

    def edges(self) -> Iterator[Tuple[int, int]]:
        for v, nbrs in enumerate(self._rotation):
            for w in nbrs:
                if v < w:
                    yield v, w

    @cached_property
    def adjacency(self) -> csr_matrix:
        rows = [v for v, nbrs in enumerate(self._rotation) for _ in nbrs]
        cols = [w for nbrs in self._rotation for w in nbrs]
        data = np.ones(len(rows), dtype=np.int8)
        n = self.vertex_count
        return csr_matrix((data, (rows, cols)), shape=(n, n))

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + len(self._faces)


def _check_rotation_lists(rotation: Sequence[Sequence[int]]) -> None:
    n = len(rotation)
    if n == 0:
        raise ValidationError("rotation system has no vertices")
    neighbor_sets = []
    for v, nbrs in enumerate(rotation):
        for w in nbrs:
            if not isinstance(w, int) or isinstance(w, bool) or w < 0 or w >= n:
                raise InconsistentAdjacency(f"vertex {v} lists unknown neighbor {w!r}")
            if w == v:
                raise InconsistentAdjacency(f"vertex {v} has a loop")
        members = set(nbrs)
        if len(members) != len(nbrs):
            raise InconsistentAdjacency(f"vertex {v} lists a neighbor twice (multiple edge)")
        neighbor_sets.append(members)
    for v, nbrs in enumerate(rotation):
        for w in nbrs:
            if v not in neighbor_sets[w]:
                raise InconsistentAdjacency(f"vertex {v} lists {w} but {w} does not list {v}")


def _check_local_conditions(planar_map: PlanarMap, degree_exempt: Iterable[int] = (),
                            side_exempt: Iterable[int] = ()) -> None:
    degree_exempt = set(degree_exempt)
    side_exempt = set(side_exempt)
    for v in range(planar_map.vertex_count):
        if v not in degree_exempt and planar_map.degree(v) < 2:
            raise TerminalVertex(f"vertex {v} has degree {planar_map.degree(v)}")
        if v in side_exempt:
            continue
        for w in planar_map.neighbors(v):
            if planar_map.face_of(v, w) == planar_map.face_of(w, v):
                raise EdgeOnOneFace(f"edge {v}-{w} has the same face on both sides")


def build_from_rotation_system(rotation: Sequence[Sequence[int]], strict: bool = True,
                               exempt: Iterable[int] = ()) -> PlanarMap:
    """
    Validate a rotation system and trace its faces.

    Args:
        rotation: Counterclockwise neighbor lists, one per vertex id 0..n-1.
        strict: Enforce the local tessellation conditions (no terminal vertices, two faces per edge).
        exempt: Vertices excused from the strict conditions, typically the boundary of a truncation.

    Returns:
        PlanarMap: The traced map; V - E + F = 2 holds.
    """
    rotation = [list(nbrs) for nbrs in rotation]
    _check_rotation_lists(rotation)
    exempt = set(exempt)
    if strict:
        for v, nbrs in enumerate(rotation):
            if v not in exempt and len(nbrs) < 2:
                raise TerminalVertex(f"vertex {v} has degree {len(nbrs)}")
    planar_map = PlanarMap(rotation)
    if planar_map.vertex_count > 1:
        component_count, _ = connected_components(planar_map.adjacency, directed=False)
        if component_count != 1:
            raise DisconnectedGraph(f"rotation system has {component_count} components")
    if planar_map.euler_characteristic() != 2:
        raise NonPlanarRotation(
            f"V - E + F = {planar_map.vertex_count} - {planar_map.edge_count} + {len(planar_map.faces)} "
            f"= {planar_map.euler_characteristic()}, expected 2")
    if strict:
        _check_local_conditions(planar_map, degree_exempt=exempt, side_exempt=exempt)
    return planar_map


def distance_map(planar_map: PlanarMap, v: int) -> np.ndarray:
    """
    Combinatorial distance from v to every vertex (BFS layers S_n).
    Raises DisconnectedGraph when some vertex is unreachable.
    """
    if planar_map.vertex_count == 1:
        return np.zeros(1, dtype=np.int64)
    dist = shortest_path(planar_map.adjacency, directed=False, unweighted=True, indices=v)
    if np.isinf(dist).any():
        raise DisconnectedGraph(f"{int(np.isinf(dist).sum())} vertices unreachable from {v}")
    return dist.astype(np.int64)


def to_networkx(planar_map: PlanarMap) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(planar_map.vertex_count))
    graph.add_edges_from(planar_map.edges())
    return graph


def embedding_is_planar(planar_map: PlanarMap) -> bool:
    """Independent planarity check of the rotation system through networkx.PlanarEmbedding."""
    embedding = nx.PlanarEmbedding()
    # networkx stores neighbors clockwise
    embedding.set_data({v: list(reversed(nbrs)) for v, nbrs in enumerate(planar_map.rotation)})
    try:
        embedding.check_structure()
    except nx.NetworkXException:
        return False
    return True


class Truncation(BaseModel):
    """
    A finite ball of a host graph together with per-vertex trust flags.

    Attributes:
        map (PlanarMap): The traced truncation.
        center (int): Ball center.
        radius (int): Ball radius; every vertex lies within it.
        interior_flags (Tuple[bool, ...]): Full neighborhood and every incident host face present.
        complete_flags (Tuple[bool, ...]): Truncation degree equals host degree.
        host (HostDescriptor): Host metadata.
        finite_host (bool): The map is its own host; every face, the outer one included, is a host face.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    map: PlanarMap
    center: int = 0
    radius: int = Field(ge=0)
    interior_flags: Tuple[bool, ...]
    complete_flags: Tuple[bool, ...]
    host: HostDescriptor
    finite_host: bool = False

    @property
    def vertex_count(self) -> int:
        return self.map.vertex_count

    def degree(self, v: int) -> int:
        return self.map.degree(v)

    def is_interior(self, v: int) -> bool:
        return self.interior_flags[v]

    @cached_property
    def interior_vertices(self) -> Tuple[int, ...]:
        return tuple(v for v, flag in enumerate(self.interior_flags) if flag)

    @cached_property
    def center_distances(self) -> np.ndarray:
        return distance_map(self.map, self.center)

    @cached_property
    def complete_mask(self) -> np.ndarray:
        return np.asarray(self.complete_flags, dtype=bool)

    @cached_property
    def host_face_ids(self) -> FrozenSet[int]:
        if self.finite_host:
            return frozenset(range(len(self.map.faces)))
        if self.host.family == "tree":
            return frozenset()
        return frozenset(self.map.face_of(v, w) for v in self.interior_vertices for w in self.map.neighbors(v))

    @cached_property
    def host_face_lookup(self) -> Dict[FrozenSet[Tuple[int, int]], int]:
        return {_edge_key(self.map.faces[face_id]): face_id for face_id in self.host_face_ids}

    def corner_faces(self, v: int) -> Tuple[int, ...]:
        """Face ids of the corners at v, in rotation order (one per incident edge)."""
        return tuple(self.map.face_of(v, w) for w in self.map.neighbors(v))

    def face_degree(self, face_id: int) -> FaceDegree:
        """Degree of a traced face; infinite unless it is a finite host face."""
        if face_id in self.host_face_ids:
            return self.map.face_degree(face_id)
        return math.inf

    def corner_degrees(self, v: int) -> Tuple[FaceDegree, ...]:
        return tuple(self.face_degree(face_id) for face_id in self.corner_faces(v))

    @cached_property
    def max_face_degree(self) -> Optional[int]:
        finite = [self.map.face_degree(face_id) for face_id in self.host_face_ids]
        return max(finite) if finite else None

    @cached_property
    def interior_adjacency(self) -> Dict[int, Tuple[int, ...]]:
        flags = self.interior_flags
        return {v: tuple(w for w in self.map.neighbors(v) if flags[w]) for v in self.interior_vertices}

    def sphere(self, n: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in np.flatnonzero(self.center_distances == n))

    def ball(self, n: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in np.flatnonzero(self.center_distances <= n))

    def closed_neighborhood(self, vertices: Iterable[int]) -> Tuple[int, ...]:
        members = set(vertices)
        for v in list(members):
            members.update(self.map.neighbors(v))
        return tuple(sorted(members))


def derive_interior_flags(planar_map: PlanarMap, host: HostDescriptor) -> Tuple[bool, ...]:
    """
    Interior flags for a truncation file that omits them.
    The longest face walk (smallest index on ties) is taken as the synthetic outer face.
    """
    outer = max(range(len(planar_map.faces)), key=lambda i: (len(planar_map.faces[i]), -i))
    allowed = host.allowed_face_degrees
    flags = []
    for v in range(planar_map.vertex_count):
        if host.vertex_degree is not None and planar_map.degree(v) != host.vertex_degree:
            flags.append(False)
            continue
        if host.family == "tree":
            flags.append(True)
            continue
        interior = True
        for w in planar_map.neighbors(v):
            walk = planar_map.faces[planar_map.face_of(v, w)]
            if planar_map.face_of(v, w) == outer or len(set(walk)) != len(walk) or \
                    (allowed is not None and len(walk) not in allowed):
                interior = False
                break
        flags.append(interior)
    return tuple(flags)


def _check_interior_faces(planar_map: PlanarMap, host: HostDescriptor, interior: Sequence[bool]) -> None:
    allowed = host.allowed_face_degrees
    for v in range(planar_map.vertex_count):
        if not interior[v]:
            continue
        if host.vertex_degree is not None and planar_map.degree(v) != host.vertex_degree:
            raise ValidationError(
                f"interior vertex {v} has degree {planar_map.degree(v)}, host degree is {host.vertex_degree}")
        if host.family == "tree":
            continue
        for w in planar_map.neighbors(v):
            face_id = planar_map.face_of(v, w)
            walk = planar_map.faces[face_id]
            if len(set(walk)) != len(walk):
                if face_id == planar_map.face_of(w, v):
                    raise EdgeOnOneFace(f"edge {v}-{w} at interior vertex {v} lies twice on face {face_id}")
                raise ValidationError(f"face {face_id} at interior vertex {v} is not a simple cycle")
            if len(walk) < 3 or (allowed is not None and len(walk) not in allowed):
                raise ValidationError(f"face {face_id} at interior vertex {v} has degree {len(walk)}, "
                                      f"allowed {sorted(allowed) if allowed is not None else '>= 3'}")


def make_truncation(planar_map: PlanarMap, host: HostDescriptor, interior_flags: Optional[Sequence[bool]] = None,
                    center: int = 0, radius: Optional[int] = None, strict: bool = True) -> Truncation:
    """
    Attach host metadata to a traced map and validate the interior flags against it.
    A custom host without interior flags is a finite host: every vertex is interior.
    """
    n = planar_map.vertex_count
    finite_host = interior_flags is None and host.family == "custom"
    if interior_flags is None:
        interior_flags = (True,) * n if finite_host else derive_interior_flags(planar_map, host)
    interior_flags = tuple(bool(flag) for flag in interior_flags)
    if len(interior_flags) != n:
        raise ValidationError(f"{len(interior_flags)} interior flags for {n} vertices")
    if not 0 <= center < n:
        raise ValidationError(f"center {center} is not a vertex")

    dist = distance_map(planar_map, center)
    eccentricity = int(dist.max())
    if radius is None:
        radius = eccentricity
    if eccentricity > radius:
        raise ValidationError(f"vertex at distance {eccentricity} from the center exceeds radius {radius}")

    if strict:
        boundary = [v for v in range(n) if not interior_flags[v]]
        side_exempt = range(n) if host.family == "tree" else boundary
        _check_local_conditions(planar_map, degree_exempt=boundary, side_exempt=side_exempt)
    _check_interior_faces(planar_map, host, interior_flags)

    if finite_host:
        complete_flags = (True,) * n
    elif host.vertex_degree is not None:
        complete_flags = tuple(planar_map.degree(v) == host.vertex_degree for v in range(n))
    else:
        complete_flags = interior_flags

    return Truncation(map=planar_map, center=center, radius=radius, interior_flags=interior_flags,
                      complete_flags=complete_flags, host=host, finite_host=finite_host)


def parse_truncation_document(doc: dict, strict: bool = True) -> Truncation:
    """
    Turn a tessellab-rotation/1 document into a validated Truncation.
    Raises ParseError for malformed documents and ValidationError subclasses for invalid maps.
    """
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise ParseError(f"document format must be {FORMAT_TAG!r}")
    records = doc.get("vertices")
    if not isinstance(records, list) or not records:
        raise ParseError("document has no vertex list")

    rotation: Dict[int, List[int]] = {}
    for record in records:
        if not isinstance(record, dict):
            raise ParseError(f"vertex record {record!r} is not an object")
        vertex_id = parse_int(record.get("id"))
        neighbors = record.get("neighbors")
        if vertex_id is None or not isinstance(neighbors, list):
            raise ParseError(f"vertex record {record!r} needs an integer id and a neighbor list")
        if vertex_id in rotation:
            raise ParseError(f"vertex id {vertex_id} appears twice")
        parsed = [parse_int(w) for w in neighbors]
        if any(w is None for w in parsed):
            raise ParseError(f"vertex {vertex_id} has a non-integer neighbor")
        rotation[vertex_id] = parsed
    if set(rotation) != set(range(len(rotation))):
        raise ParseError("vertex ids must be exactly 0..n-1")

    try:
        host = HostDescriptor(**(doc.get("host") or {}))
    except PydanticValidationError as e:
        raise ParseError(f"invalid host descriptor: {e}") from e
    except TypeError as e:
        raise ParseError(f"invalid host descriptor: {e}") from e

    n = len(rotation)
    interior_flags = None
    if doc.get("interior") is not None:
        interior_ids = [parse_int(v) for v in doc["interior"]]
        if any(v is None or not 0 <= v < n for v in interior_ids):
            raise ParseError("interior list must hold vertex ids")
        members = set(interior_ids)
        interior_flags = tuple(v in members for v in range(n))

    center = parse_int(doc.get("center", 0))
    radius = parse_int(doc.get("radius")) if doc.get("radius") is not None else None
    if center is None or (doc.get("radius") is not None and radius is None):
        raise ParseError("center and radius must be integers")

    ordered = [rotation[v] for v in range(n)]
    planar_map = build_from_rotation_system(ordered, strict=False)
    return make_truncation(planar_map, host, interior_flags, center=center, radius=radius, strict=strict)


def load_truncation(source: Union[str, Path, dict], strict: bool = True) -> Truncation:
    if isinstance(source, dict):
        doc = source
    else:
        try:
            with open(source, "r", encoding="utf-8") as f:
                doc = json.load(f)
        except (OSError, json.JSONDecodeError, UnicodeDecodeError) as e:
            raise ParseError(f"cannot read {source}: {e}") from e
    truncation = parse_truncation_document(doc, strict=strict)
    logfire.info("Loaded truncation", source=str(source) if not isinstance(source, dict) else "<document>",
                 family=truncation.host.family, vertices=truncation.vertex_count,
                 interior=len(truncation.interior_vertices))
    return truncation


def dump_truncation(trunc: Truncation) -> dict:
    doc = {
        "format": FORMAT_TAG,
        "vertices": [{"id": v, "neighbors": list(nbrs)} for v, nbrs in enumerate(trunc.map.rotation)],
    }
    if not trunc.finite_host:
        doc["interior"] = list(trunc.interior_vertices)
    doc["center"] = trunc.center
    doc["radius"] = trunc.radius
    doc["host"] = trunc.host.model_dump(exclude_none=True)
    return doc


def save_truncation(trunc: Truncation, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(dump_truncation(trunc), f, separators=(",", ":"))
    logfire.info("Wrote truncation", path=str(path), vertices=trunc.vertex_count)


class CutLocus(BaseModel):
    vertex: int
    members: Tuple[int, ...]
    undetermined: Tuple[int, ...]


def cut_locus(trunc: Truncation, v: int) -> CutLocus:
    """
    Vertices where the distance to v attains a local maximum.

    A vertex w is decided only when its neighborhood is complete and every distance
    involved is host-exact, i.e. d(v, w) <= radius - d(center, v) - 1; all other
    vertices are reported undetermined, never absent.
    """
    if not trunc.is_interior(v):
        raise CenterOnBoundary(f"vertex {v} is not interior")
    dist = distance_map(trunc.map, v)
    if trunc.finite_host:
        limit = math.inf
    else:
        limit = trunc.radius - int(trunc.center_distances[v]) - 1
    decided = trunc.complete_mask & (dist <= limit)
    adjacency = trunc.map.adjacency
    # farthest neighbor of every vertex; rows without neighbors read 0
    farthest = adjacency.multiply(dist[np.newaxis, :]).tocsr().max(axis=1).toarray().ravel()
    peaks = decided & (adjacency.getnnz(axis=1) > 0) & (farthest <= dist)
    return CutLocus(vertex=v, members=tuple(np.flatnonzero(peaks).tolist()),
                    undetermined=tuple(np.flatnonzero(~decided).tolist()))


class SubsetStats(BaseModel):
    """
    Exact quantities of a finite connected interior vertex set W.

    Attributes:
        vertices (Tuple[int, ...]): W, sorted.
        volume (int): Sum of host degrees over W.
        edge_count (int): Edges of the induced subgraph G_W.
        edge_boundary (int): Edges leaving W.
        vertex_boundary (int): Vertices outside W adjacent to W.
        face_count (int): Faces of the induced map, its outer face included.
        host_faces_inside (int): Faces of the induced map that are host faces.
        non_host_faces (int): C(W), faces of the induced map that are not host faces.
        inner_degrees (Tuple[Tuple[int, int], ...]): (face degree, corners at W) per finite boundary face.
        boundary_face_sum (Fraction): Sum of inner degree over face degree across boundary faces.
        curvature (Fraction): Sum of vertex curvatures over W.
        max_face_degree (Optional[int]): Largest finite host face degree at W.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vertices: Tuple[int, ...]
    size: int
    volume: int
    edge_count: int
    edge_boundary: int
    vertex_boundary: int
    face_count: int
    host_faces_inside: int
    non_host_faces: int
    inner_degrees: Tuple[Tuple[int, int], ...]
    boundary_face_sum: Fraction
    curvature: Fraction
    max_face_degree: Optional[int] = None


def _definitional_curvature(trunc: Truncation, v: int) -> Fraction:
    total = Fraction(1) - Fraction(trunc.degree(v), 2)
    for degree in trunc.corner_degrees(v):
        if not math.isinf(degree):
            total += Fraction(1, degree)
    return total


def _is_connected(vertices: Sequence[int], adjacency: Mapping[int, Sequence[int]]) -> bool:
    members = set(vertices)
    start = vertices[0]
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w in members and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(members)


def subset_stats(trunc: Truncation, W: Iterable[int]) -> SubsetStats:
    """
    Compute every SubsetStats field exactly.
    The induced map is traced afresh; its faces are matched against host faces by edge set.
    """
    vertices = tuple(sorted(set(W)))
    if not vertices:
        raise SubsetDisconnected("empty subset")
    for v in vertices:
        if not 0 <= v < trunc.vertex_count or not trunc.is_interior(v):
            raise SubsetTouchesBoundary(f"vertex {v} is not interior")
    members = set(vertices)
    induced = {v: [w for w in trunc.map.neighbors(v) if w in members] for v in vertices}
    if not _is_connected(vertices, induced):
        raise SubsetDisconnected(f"induced subgraph on {len(vertices)} vertices is disconnected")

    walks, _ = trace_faces(induced)
    edge_count = sum(len(nbrs) for nbrs in induced.values()) // 2
    lookup = trunc.host_face_lookup
    host_faces_inside = sum(1 for walk in walks if walk and _edge_key(walk) in lookup)

    volume = sum(trunc.degree(v) for v in vertices)
    edge_boundary = volume - 2 * edge_count
    vertex_boundary = len({w for v in vertices for w in trunc.map.neighbors(v) if w not in members})

    incident = {face_id for v in vertices for face_id in trunc.corner_faces(v)}
    inner_degrees = []
    boundary_face_sum = Fraction(0)
    faces_within = 0
    max_face_degree = None
    for face_id in sorted(incident):
        degree = trunc.face_degree(face_id)
        if math.isinf(degree):
            continue
        max_face_degree = degree if max_face_degree is None else max(max_face_degree, degree)
        walk = trunc.map.faces[face_id]
        inner = sum(1 for u in walk if u in members)
        if inner == len(walk):
            faces_within += 1
            continue
        inner_degrees.append((degree, inner))
        boundary_face_sum += Fraction(inner, degree)

    if volume != 2 * edge_count + edge_boundary:
        raise IdentityViolated("vol(W) != 2|E_W| + |boundary edges|")
    if len(vertices) - edge_count + len(walks) != 2:
        raise IdentityViolated(f"induced map on {vertices} violates V - E + F = 2")
    if faces_within != host_faces_inside:
        raise IdentityViolated(f"{faces_within} host faces inside W but {host_faces_inside} matched induced faces")
    non_host_faces = len(walks) - host_faces_inside
    if edge_boundary > 0 and non_host_faces < 1:
        raise IdentityViolated("a set with boundary edges must have a non-host face")

    return SubsetStats(
        vertices=vertices,
        size=len(vertices),
        volume=volume,
        edge_count=edge_count,
        edge_boundary=edge_boundary,
        vertex_boundary=vertex_boundary,
        face_count=len(walks),
        host_faces_inside=host_faces_inside,
        non_host_faces=non_host_faces,
        inner_degrees=tuple(sorted(inner_degrees)),
        boundary_face_sum=boundary_face_sum,
        curvature=sum((_definitional_curvature(trunc, v) for v in vertices), Fraction(0)),
        max_face_degree=max_face_degree,
    )


def walk_connected_subsets(adjacency: Mapping[int, Sequence[int]], roots: Iterable[int], cap: int,
                           descend: Optional[Callable[[FrozenSet[int]], bool]] = None,
                           rank: Optional[Mapping[int, int]] = None) -> Iterator[FrozenSet[int]]:
    """
    Canonical-root enumeration of connected vertex sets (extension sets with exclusive neighborhoods).

    Every connected set of size <= cap whose lowest-ranked vertex is one of the roots is yielded
    exactly once. Ranks default to the vertex ids. descend(W) returning False skips all proper
    supersets reached through W.
    """
    order = rank if rank is not None else {v: v for v in adjacency}
    for root in roots:
        if root not in adjacency:
            continue
        extension = [u for u in adjacency[root] if order[u] > order[root]]
        yield from _extend(adjacency, order, frozenset((root,)), extension, order[root], cap, descend)


def _extend(adjacency, order, members, extension, root_rank, cap, descend):
    yield members
    if len(members) >= cap:
        return
    if descend is not None and not descend(members):
        return
    closed = set(members)
    for v in members:
        closed.update(adjacency[v])
    extension = list(extension)
    while extension:
        w = extension.pop()
        exclusive = [u for u in adjacency[w] if order[u] > root_rank and u not in closed]
        yield from _extend(adjacency, order, members | {w}, extension + exclusive, root_rank, cap, descend)


def enumerate_connected_subsets(trunc: Truncation, cap: int, roots: Optional[Iterable[int]] = None,
                                limit: int = DEFAULT_ENUMERATION_LIMIT) -> Iterator[FrozenSet[int]]:
    """
    Yield every connected interior subset of size <= cap exactly once.

    Args:
        roots: Restrict to sets whose smallest vertex is one of these (default: all interior vertices).
        limit: Raise CapTooLargeForBudget once more than this many sets have been produced.
    """
    if cap < 1:
        raise InvalidCap(f"cap must be >= 1, got {cap}")
    adjacency = trunc.interior_adjacency
    roots = sorted(adjacency) if roots is None else sorted(set(roots))
    count = 0
    for subset in walk_connected_subsets(adjacency, roots, cap):
        count += 1
        if count > limit:
            raise CapTooLargeForBudget(f"more than {limit} connected subsets of size <= {cap}")
        yield subset
