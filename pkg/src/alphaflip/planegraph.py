"""Plane graphs with straight-line embeddings.

Vertices carry coordinates. The rotation system (counterclockwise cyclic
order of incident edges at every vertex) is derived by sorting edges by
angle, faces are traced from the rotation system, and the outer face is
the unique face walk with negative signed area.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class EmbeddingInvalid(ValueError):
    """Raised when the input is not a crossing-free straight-line embedding."""


@dataclass(frozen=True)
class FaceWalk:
    """A directed boundary walk of one face.

    ``vertices[i] -> vertices[i + 1]`` (cyclically) is the walk; ``edges[i]``
    is the edge index joining that pair.  Bounded faces are traced
    counterclockwise (positive signed area), the outer face clockwise.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    area: float

    @property
    def degree(self) -> int:
        return len(self.edges)

    @property
    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def __contains__(self, edge: int) -> bool:
        return edge in self.edges


def _canonical_walk(vertices: Sequence[int], edges: Sequence[int]):
    """Rotate a cyclic walk to a canonical starting point."""
    k = len(vertices)
    best = min(range(k), key=lambda i: (vertices[i], vertices[(i + 1) % k], edges[i]))
    verts = tuple(vertices[best:]) + tuple(vertices[:best])
    eds = tuple(edges[best:]) + tuple(edges[:best])
    return verts, eds


def trace_faces(coords: Mapping[int, tuple[float, float]],
                edges: Sequence[tuple[int, int]]) -> list[FaceWalk]:
    """Trace all face walks of an embedded (sub)graph.

    ``edges`` is indexed globally; the rotation at each vertex is rebuilt
    from the coordinates of exactly the edges given.  Arriving along
    u -> v, the walk continues with the neighbor that precedes u in the
    counterclockwise rotation at v (the face stays on the left), which
    traces every bounded face as a counterclockwise walk and the outer
    walk of each connected component clockwise.
    """
    incident: dict[int, list[tuple[float, int, int]]] = {}
    for eid, (u, v) in enumerate(edges):
        ux, uy = coords[u]
        vx, vy = coords[v]
        incident.setdefault(u, []).append((math.atan2(vy - uy, vx - ux), v, eid))
        incident.setdefault(v, []).append((math.atan2(uy - vy, ux - vx), u, eid))

    rotation: dict[int, list[tuple[int, int]]] = {}
    succ: dict[int, dict[int, tuple[int, int]]] = {}
    for v, inc in incident.items():
        inc.sort()
        for (a1, _, e1), (a2, _, e2) in zip(inc, inc[1:]):
            if a1 == a2:
                raise EmbeddingInvalid(
                    f"edges {e1} and {e2} leave vertex {v} at the same angle")
        rotation[v] = [(nbr, eid) for _, nbr, eid in inc]
        # predecessor of each neighbor in ccw order, for O(1) walk steps
        succ[v] = {}
        k = len(inc)
        for i, (_, nbr, _) in enumerate(inc):
            succ[v][nbr] = rotation[v][(i - 1) % k]

    faces: list[FaceWalk] = []
    seen: set[tuple[int, int]] = set()
    for eid, (u, v) in enumerate(edges):
        for tail, head in ((u, v), (v, u)):
            if (tail, head) in seen:
                continue
            walk_v = []
            walk_e = []
            a, b = tail, head
            e = eid
            while (a, b) not in seen:
                seen.add((a, b))
                walk_v.append(a)
                walk_e.append(e)
                b2, e2 = succ[b][a]
                a, b, e = b, b2, e2
            area = 0.0
            k = len(walk_v)
            for i in range(k):
                x1, y1 = coords[walk_v[i]]
                x2, y2 = coords[walk_v[(i + 1) % k]]
                area += x1 * y2 - x2 * y1
            verts, eds = _canonical_walk(walk_v, walk_e)
            faces.append(FaceWalk(verts, eds, 0.5 * area))
    faces.sort(key=lambda f: (f.vertices, f.edges))
    return faces


class PlaneGraph:
    """An immutable connected plane graph with straight-line coordinates.

    Vertex ids are arbitrary ints; edges are stored canonically sorted so
    that edge indices do not depend on input order.  Construction validates
    the embedding: strict angular order at every vertex, Euler's formula
    for the traced face set, and a unique negative-area (outer) face walk.
    """

    def __init__(self, vertices: Iterable[tuple[int, float, float]],
                 edges: Iterable[tuple[int, int]]):
        coords: dict[int, tuple[float, float]] = {}
        for vid, x, y in vertices:
            if vid in coords:
                raise EmbeddingInvalid(f"duplicate vertex id {vid}")
            coords[vid] = (float(x), float(y))
        if len(set(coords.values())) != len(coords):
            raise EmbeddingInvalid("two vertices share coordinates")
        self._coords = dict(sorted(coords.items()))

        canon = set()
        for u, v in edges:
            if u == v or u not in coords or v not in coords:
                raise EmbeddingInvalid(f"bad edge ({u}, {v})")
            canon.add((u, v) if u < v else (v, u))
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(canon))
        self.edge_index = {e: i for i, e in enumerate(self.edges)}

        self._adj: dict[int, list[int]] = {v: [] for v in self._coords}
        for u, v in self.edges:
            self._adj[u].append(v)
            self._adj[v].append(u)

        if not self._connected():
            raise EmbeddingInvalid("graph is not connected")

        self._faces = tuple(trace_faces(self._coords, self.edges))
        if len(self._coords) - len(self.edges) + len(self._faces) != 2:
            raise EmbeddingInvalid("face count violates Euler's formula; "
                                   "embedding is not planar")
        negative = [i for i, f in enumerate(self._faces) if f.area < 0]
        if len(negative) != 1:
            raise EmbeddingInvalid(
                f"{len(negative)} face walks have negative area, expected 1")
        self.outer_face: int = negative[0]

    # -- basic accessors ---------------------------------------------------

    @property
    def vertex_ids(self) -> tuple[int, ...]:
        return tuple(self._coords)

    @property
    def n_vertices(self) -> int:
        return len(self._coords)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def coords(self, v: int) -> tuple[float, float]:
        return self._coords[v]

    @property
    def coordinates(self) -> dict[int, tuple[float, float]]:
        return dict(self._coords)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(self._adj[v])

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def incident_edges(self, v: int) -> tuple[int, ...]:
        return tuple(self.edge_index[(v, u) if v < u else (u, v)]
                     for u in self._adj[v])

    def _connected(self) -> bool:
        ids = list(self._coords)
        seen = {ids[0]}
        stack = [ids[0]]
        while stack:
            for u in self._adj[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self._coords)

    # -- faces -------------------------------------------------------------

    def faces(self) -> tuple[FaceWalk, ...]:
        """All face walks, outer face included (see ``outer_face``)."""
        return self._faces

    def bounded_faces(self) -> tuple[FaceWalk, ...]:
        return tuple(f for i, f in enumerate(self._faces) if i != self.outer_face)

    def faces_of_edge(self, eid: int) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self._faces) if eid in f.edges)

    # -- classification ----------------------------------------------------

    def bipartition(self) -> tuple[frozenset[int], frozenset[int]] | None:
        """Two-coloring (sides sorted by smallest member), None if odd cycle."""
        color: dict[int, int] = {}
        for root in self._coords:
            if root in color:
                continue
            color[root] = 0
            stack = [root]
            while stack:
                v = stack.pop()
                for u in self._adj[v]:
                    if u not in color:
                        color[u] = 1 - color[v]
                        stack.append(u)
                    elif color[u] == color[v]:
                        return None
        a = frozenset(v for v, c in color.items() if c == 0)
        b = frozenset(v for v, c in color.items() if c == 1)
        return (a, b) if min(a) < min(b) else (b, a)

    def classify(self) -> str:
        """'quadrangulation', 'triangulation' or 'other'.

        Quadrangulation: bipartite and every face (outer included) is a
        simple 4-cycle.  Triangulation: every face is a simple 3-cycle.
        """
        if all(f.degree == 4 and f.is_simple for f in self._faces):
            if self.bipartition() is not None:
                return "quadrangulation"
        if all(f.degree == 3 and f.is_simple for f in self._faces):
            return "triangulation"
        return "other"

    # -- serialization -----------------------------------------------------

    def to_json(self, alpha: Mapping[int, int] | None = None,
                markers: Mapping[str, int] | None = None) -> str:
        doc: dict = {
            "format": 1,
            "vertices": [{"id": v, "x": x, "y": y}
                         for v, (x, y) in self._coords.items()],
            "edges": [[u, v] for u, v in self.edges],
        }
        if alpha is not None:
            doc["alpha"] = {str(v): int(a) for v, a in sorted(alpha.items())}
        if markers is not None:
            doc["markers"] = {k: int(v) for k, v in sorted(markers.items())}
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PlaneGraph":
        g, _, _ = load_instance(text)
        return g

    def to_dot(self, directions: Sequence[int] | None = None,
               colors: Sequence[str | None] | None = None) -> str:
        """DOT export; optionally directed (bit per edge, 1 = as stored)."""
        lines = []
        directed = directions is not None
        lines.append("digraph G {" if directed else "graph G {")
        for v, (x, y) in self._coords.items():
            lines.append(f'  {v} [pos="{x},{y}!"];')
        sep = " -> " if directed else " -- "
        for i, (u, v) in enumerate(self.edges):
            a, b = (u, v) if not directed or directions[i] else (v, u)
            attr = ""
            if colors is not None and colors[i] is not None:
                attr = f' [color="{colors[i]}"]'
            lines.append(f"  {a}{sep}{b}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def load_instance(text: str):
    """Parse the JSON interchange format.

    Returns ``(graph, alpha_or_None, markers_or_None)`` where alpha is a
    plain dict vertex id -> prescribed outdegree.
    """
    doc = json.loads(text)
    if doc.get("format") != 1:
        raise EmbeddingInvalid(f"unsupported format {doc.get('format')!r}")
    g = PlaneGraph([(v["id"], v["x"], v["y"]) for v in doc["vertices"]],
                   [tuple(e) for e in doc["edges"]])
    alpha = None
    if "alpha" in doc:
        alpha = {int(k): int(v) for k, v in doc["alpha"].items()}
    markers = None
    if "markers" in doc:
        markers = {k: int(v) for k, v in doc["markers"].items()}
    return g, alpha, markers
