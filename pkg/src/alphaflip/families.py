"""Generators for the graph families used by the experiments.

Every generator returns a FamilyInstance: an embedded plane graph, the
outdegree prescription, named marker vertices, and (where defined) the
hour-glass classifier mapping a state to 'L', 'C' or 'R'.  Layouts are
layered on horizontal lines with convex fan arcs so that the signed-area
outer-face detection and the angular rotation systems are stable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .orientations import AlphaSpec, Lattice, Orientation
from .planegraph import PlaneGraph


class BadParam(ValueError):
    """Family parameter outside the supported range."""


@dataclass
class FamilyInstance:
    name: str
    graph: PlaneGraph
    alpha: AlphaSpec
    markers: dict[str, int]
    classifier: Callable[[Orientation], str] | None = None
    extras: dict = field(default_factory=dict)
    _lattice: Lattice | None = field(default=None, repr=False)

    @property
    def lattice(self) -> Lattice:
        if self._lattice is None:
            self._lattice = Lattice(self.graph, self.alpha)
        return self._lattice

    def to_json(self) -> str:
        return self.graph.to_json(self.alpha.as_dict(), self.markers)


class _Builder:
    """Accumulates named vertices and edges, then builds the PlaneGraph."""

    def __init__(self):
        self.ids: dict[str, int] = {}
        self.coords: list[tuple[int, float, float]] = []
        self.edges: set[tuple[int, int]] = set()

    def vertex(self, name: str, x: float, y: float) -> int:
        vid = len(self.coords)
        self.ids[name] = vid
        self.coords.append((vid, x, y))
        return vid

    def edge(self, a: str, b: str) -> None:
        u, v = self.ids[a], self.ids[b]
        self.edges.add((u, v) if u < v else (v, u))

    def graph(self) -> PlaneGraph:
        return PlaneGraph(self.coords, sorted(self.edges))


def _central_bits(graph: PlaneGraph, ids: dict[str, int],
                  directed: list[tuple[str, str]]) -> int:
    """Pack (tail, head) name pairs into the orientation bit layout."""
    bits = 0
    seen = set()
    for ta, he in directed:
        t, h = ids[ta], ids[he]
        key = (t, h) if t < h else (h, t)
        e = graph.edge_index[key]
        if e in seen:
            raise ValueError(f"edge {ta}-{he} directed twice")
        seen.add(e)
        if t == key[0]:
            bits |= 1 << e
    if len(seen) != graph.n_edges:
        raise ValueError("central orientation does not cover all edges")
    return bits


def _alpha_from_bits(graph: PlaneGraph, bits: int) -> dict[int, int]:
    out = dict.fromkeys(graph.vertex_ids, 0)
    for e, (u, v) in enumerate(graph.edges):
        out[u if bits >> e & 1 else v] += 1
    return out


# ---------------------------------------------------------------------------
# octahedron
# ---------------------------------------------------------------------------

def octahedron() -> FamilyInstance:
    """The plane octahedron with outdegree 2 everywhere (Eulerian)."""
    import math
    b = _Builder()
    for i, ang in enumerate((90, 210, 330)):
        b.vertex(f"o{i}", 4 * math.cos(math.radians(ang)),
                 4 * math.sin(math.radians(ang)))
    for i, ang in enumerate((30, 150, 270)):
        b.vertex(f"i{i}", 1.4 * math.cos(math.radians(ang)),
                 1.4 * math.sin(math.radians(ang)))
    for a, c in (("o0", "o1"), ("o1", "o2"), ("o0", "o2"),
                 ("i0", "i1"), ("i1", "i2"), ("i0", "i2"),
                 ("i0", "o0"), ("i0", "o2"), ("i1", "o0"), ("i1", "o1"),
                 ("i2", "o1"), ("i2", "o2")):
        b.edge(a, c)
    g = b.graph()
    alpha = AlphaSpec({v: 2 for v in g.vertex_ids})
    markers = dict(b.ids)
    markers["center_face_vertex"] = b.ids["i0"]
    return FamilyInstance("octahedron", g, alpha, markers)


# ---------------------------------------------------------------------------
# nested rings (quadrangulation with maximum degree 3) and the coupling
# hardness pair
# ---------------------------------------------------------------------------

def nested_rings(k: int) -> FamilyInstance:
    """k concentric 4-cycles joined by radial spokes; a quadrangulation.

    The two black vertices of the outer ring are the sinks s and t; every
    other vertex has outdegree 2.
    """
    import math
    if k < 2:
        raise BadParam("need at least 2 rings")
    b = _Builder()
    for j in range(k):
        r = 2.0 * (k - j)
        for p in range(4):
            ang = math.radians(45 + 90 * p)
            b.vertex(f"r{j}p{p}", r * math.cos(ang), r * math.sin(ang))
    for j in range(k):
        for p in range(4):
            b.edge(f"r{j}p{p}", f"r{j}p{(p + 1) % 4}")
            if j + 1 < k:
                b.edge(f"r{j}p{p}", f"r{j + 1}p{p}")
    g = b.graph()
    s, t = b.ids["r0p0"], b.ids["r0p2"]
    alpha = AlphaSpec({v: (0 if v in (s, t) else 2) for v in g.vertex_ids})
    markers = {"s": s, "t": t}
    return FamilyInstance(f"rings_{k}", g, alpha, markers)


def hardness_example() -> tuple[FamilyInstance, Orientation, Orientation]:
    """A quadrangulation with two states that have the same directed faces.

    The pair differs by reversing one ring, yet both states orient exactly
    the same set of essential cycles, so the trivial face-flip coupling can
    never change their distance.
    """
    inst = nested_rings(3)
    lat = inst.lattice
    ring1 = {inst.graph.edge_index[e] for e in inst.graph.edges
             if 4 <= e[0] < 8 and 4 <= e[1] < 8}
    (cyc,) = [c for c in lat.essential_cycles() if set(c.edge_ids) == ring1]
    x = lat.minimal()
    y = lat.flip(x, cyc)
    return inst, x, y


# ---------------------------------------------------------------------------
# quadrangular grids (low degree testbed)
# ---------------------------------------------------------------------------

def quad_grid(a: int, b: int) -> FamilyInstance:
    """a x b grid of vertices, all bounded faces quadrilateral, degree <= 4.

    The outdegree prescription is read off a seed orientation chosen to
    leave a large flippable region: the boundary cycle runs
    counterclockwise while interior horizontal edges alternate direction by
    row and interior vertical edges by column.  Interior vertices get
    outdegree 2.
    """
    if a < 2 or b < 2:
        raise BadParam("grid needs at least 2x2 vertices")
    bld = _Builder()
    for y in range(b):
        for x in range(a):
            bld.vertex(f"g{x},{y}", float(x), float(y))
    directed: list[tuple[str, str]] = []

    def on_boundary(x, y):
        return x in (0, a - 1) or y in (0, b - 1)

    for y in range(b):
        for x in range(a):
            if x + 1 < a:
                bld.edge(f"g{x},{y}", f"g{x + 1},{y}")
                if y in (0, b - 1):
                    # boundary run: bottom row rightward, top row leftward
                    pair = (f"g{x},{y}", f"g{x + 1},{y}") if y == 0 else \
                           (f"g{x + 1},{y}", f"g{x},{y}")
                else:
                    pair = (f"g{x},{y}", f"g{x + 1},{y}") if y % 2 == 0 else \
                           (f"g{x + 1},{y}", f"g{x},{y}")
                directed.append(pair)
            if y + 1 < b:
                bld.edge(f"g{x},{y}", f"g{x},{y + 1}")
                if x in (0, a - 1):
                    # boundary run: right side upward, left side downward
                    pair = (f"g{x},{y}", f"g{x},{y + 1}") if x == a - 1 else \
                           (f"g{x},{y + 1}", f"g{x},{y}")
                else:
                    pair = (f"g{x},{y}", f"g{x},{y + 1}") if x % 2 == 1 else \
                           (f"g{x},{y + 1}", f"g{x},{y}")
                directed.append(pair)
    g = bld.graph()
    bits = _central_bits(g, bld.ids, directed)
    alpha = AlphaSpec(_alpha_from_bits(g, bits))
    markers = {"origin": bld.ids["g0,0"]}
    inst = FamilyInstance(f"grid_{a}x{b}", g, alpha, markers)
    inst.extras["seed_bits"] = bits
    return inst


# ---------------------------------------------------------------------------
# the slow-mixing quadrangulation family
# ---------------------------------------------------------------------------

def quad_Q(n: int) -> FamilyInstance:
    """Fan-plus-ladder quadrangulation on 5n+1 vertices with sinks s and t.

    The hub x0 is adjacent to s, to x1 and to every v_k and w_k, so its
    second out-edge (the one not pointing at s) classifies each state as
    left, central or right.
    """
    if n < 2:
        raise BadParam("need n >= 2")
    if n > 6:
        raise BadParam("layout is calibrated for n <= 6")
    b = _Builder()
    big = 4.0 ** (n + 1)
    b.vertex("x0", 0, 0)
    b.vertex("x1", 0, 1)
    for k in range(2, n + 1):
        b.vertex(f"x{k}", 0, k)
    for k in range(1, n):
        b.vertex(f"vbar{k}", -0.5, k + 0.5)
        b.vertex(f"wbar{k}", 0.5, k + 0.5)
    b.vertex(f"vbar{n}", -big, n + 1)
    b.vertex(f"wbar{n}", big, n + 1)
    for k in range(2, n + 1):
        b.vertex(f"v{k}", -(4.0 ** k), k)
        b.vertex(f"w{k}", 4.0 ** k, k)
    b.vertex("s", 0, -2)
    b.vertex("t", 0, n + 3)

    b.edge("x0", "s")
    b.edge("x0", "x1")
    b.edge("x1", "vbar1")
    b.edge("x1", "wbar1")
    for k in range(2, n + 1):
        b.edge("x0", f"v{k}")
        b.edge("x0", f"w{k}")
        for c in ("v", "w"):
            b.edge(f"x{k}", f"{c}bar{k - 1}")
            b.edge(f"x{k}", f"{c}bar{k}")
            b.edge(f"{c}{k}", f"{c}bar{k - 1}")
            b.edge(f"{c}{k}", f"{c}bar{k}")
    for name in ("s", "t"):
        b.edge(name, f"vbar{n}")
        b.edge(name, f"wbar{n}")

    directed = [("x0", "s"), ("x0", "x1"), ("x1", "vbar1"), ("x1", "wbar1")]
    for k in range(1, n):
        for c in ("v", "w"):
            directed += [(f"{c}bar{k}", f"{c}{k + 1}"),
                         (f"{c}bar{k}", f"x{k + 1}")]
    for k in range(2, n + 1):
        for c in ("v", "w"):
            directed += [(f"{c}{k}", f"{c}bar{k}"), (f"x{k}", f"{c}bar{k}"),
                         (f"{c}{k}", "x0")]
    for c in ("v", "w"):
        directed += [(f"{c}bar{n}", "t"), (f"{c}bar{n}", "s")]

    g = b.graph()
    central = _central_bits(g, b.ids, directed)
    alpha = AlphaSpec({v: 0 if v in (b.ids["s"], b.ids["t"]) else 2
                       for v in g.vertex_ids})
    markers = dict(b.ids)

    x0 = b.ids["x0"]
    s_id = b.ids["s"]
    left = {b.ids[f"v{k}"] for k in range(2, n + 1)}
    right = {b.ids[f"w{k}"] for k in range(2, n + 1)}
    x1 = b.ids["x1"]

    def classify(x: Orientation) -> str:
        heads = [x.direction(e)[1] for e in x.out_edges(x0)]
        others = [h for h in heads if h != s_id]
        if len(others) != 1:
            raise ValueError("hub must point at s plus exactly one more vertex")
        z = others[0]
        if z == x1:
            return "C"
        if z in left:
            return "L"
        if z in right:
            return "R"
        raise ValueError(f"unexpected second out-neighbor {z}")

    inst = FamilyInstance(f"Q_{n}", g, alpha, markers, classify)
    inst.extras["central_bits"] = central
    return inst


# ---------------------------------------------------------------------------
# the slow-mixing triangulation family and its variants
# ---------------------------------------------------------------------------

def _t_skeleton(n: int, drop_hub_fan: bool = False):
    """Vertices, edges and central directions of the fan/ladder triangulation.

    With drop_hub_fan the hub x0 keeps only its edges to the two bottom
    corners (the starting point of the constant-degree family).
    """
    b = _Builder()
    big = 4.0 ** (n + 3)
    b.vertex("x0", 0, 0)
    for j in range(1, n + 2):
        b.vertex(f"x{j}", 0, j)
    for i in range(1, n + 1):
        b.vertex(f"v{i}", -(4.0 ** (i + 1)), i + 0.5)
        b.vertex(f"w{i}", 4.0 ** (i + 1), i + 0.5)
    b.vertex("a_b", -big, -1)
    b.vertex("a_g", big, -1)

    directed: list[tuple[str, str]] = []
    b.edge("x0", "a_g")
    b.edge("x0", "a_b")
    directed += [("x0", "a_g"), ("x0", "a_b")]
    if not drop_hub_fan:
        b.edge("x0", "x1")
        directed.append(("x0", "x1"))
        for i in range(1, n + 1):
            b.edge("x0", f"v{i}")
            b.edge("x0", f"w{i}")
            directed += [(f"v{i}", "x0"), (f"w{i}", "x0")]
    for j in range(1, n + 1):
        b.edge(f"x{j}", f"x{j + 1}")
    for i in range(1, n):
        b.edge(f"v{i}", f"v{i + 1}")
        b.edge(f"w{i}", f"w{i + 1}")
        directed += [(f"v{i}", f"v{i + 1}"), (f"w{i}", f"w{i + 1}")]
    for c in ("v", "w"):
        for j in range(1, n + 2):
            if j <= n:
                b.edge(f"x{j}", f"{c}{j}")
            if j >= 2:
                b.edge(f"x{j}", f"{c}{j - 1}")
    directed += [("x1", "v1"), ("x1", "w1"), ("x1", "x2")]
    for j in range(2, n + 1):
        directed += [(f"x{j}", f"v{j}"), (f"x{j}", f"w{j}"),
                     (f"x{j}", f"x{j + 1}")]
    for i in range(1, n + 1):
        directed += [(f"v{i}", f"x{i + 1}"), (f"w{i}", f"x{i + 1}")]
    apex = f"x{n + 1}"
    b.edge("a_g", "a_b")
    b.edge("a_g", apex)
    b.edge("a_b", apex)
    b.edge("a_g", f"w{n}")
    b.edge("a_b", f"v{n}")
    directed += [(apex, "a_g"), (apex, "a_b"), ("a_g", "a_b"),
                 (f"w{n}", "a_g"), (f"v{n}", "a_b")]
    return b, directed


def _t_classifier(b_ids: dict[str, int], n: int, corner_ids: set[int]):
    x0 = b_ids["x0"]
    x1 = b_ids["x1"]
    left = {b_ids[f"v{i}"] for i in range(1, n + 1)}
    right = {b_ids[f"w{i}"] for i in range(1, n + 1)}

    def classify(x: Orientation) -> str:
        heads = [x.direction(e)[1] for e in x.out_edges(x0)]
        others = [h for h in heads if h not in corner_ids]
        if len(others) != 1:
            raise ValueError("hub must point at the corners plus one more vertex")
        z = others[0]
        if z == x1:
            return "C"
        if z in left:
            return "L"
        if z in right:
            return "R"
        raise ValueError(f"unexpected free out-neighbor {z}")

    return classify


def tri_T(n: int) -> FamilyInstance:
    """Fan-plus-ladder triangulation on 3n+4 vertices, maximum degree 2n+3.

    Inner vertices get outdegree 3; the two bottom corners and the apex
    carry a fixed transitive orientation of the outer triangle, which makes
    every edge at an outer vertex rigid.
    """
    if n < 1:
        raise BadParam("need n >= 1")
    if n > 5:
        raise BadParam("layout is calibrated for n <= 5")
    b, directed = _t_skeleton(n)
    g = b.graph()
    central = _central_bits(g, b.ids, directed)
    alpha = AlphaSpec(_alpha_from_bits(g, central))
    markers = dict(b.ids)
    markers["a_r"] = b.ids[f"x{n + 1}"]
    corners = {b.ids["a_g"], b.ids["a_b"]}
    inst = FamilyInstance(f"T_{n}", g, alpha, markers,
                          _t_classifier(b.ids, n, corners))
    inst.extras["central_bits"] = central
    return inst


def tri_T_subdiv(n: int, m: int) -> FamilyInstance:
    """Ladder variant with each edge x_i x_{i+1} (1 <= i < n) subdivided by a
    path of m gadget vertices, every gadget vertex joined to v_i and w_i.

    3n+4+(n-1)m vertices, maximum degree max(2n+3, m+5).
    """
    if n < 1 or m < 0:
        raise BadParam("need n >= 1 and m >= 0")
    if n > 5:
        raise BadParam("layout is calibrated for n <= 5")
    b, directed = _t_skeleton(n)
    # deletes x_i x_{i+1} for 1 <= i <= n-1 and splices in the gadget path
    drop = set()
    for i in range(1, n):
        u, v = b.ids[f"x{i}"], b.ids[f"x{i + 1}"]
        drop.add((u, v) if u < v else (v, u))
    b.edges -= drop
    directed = [(ta, he) for ta, he in directed
                if not (ta.startswith("x") and he.startswith("x")
                        and {b.ids[ta], b.ids[he]} in [set(d) for d in drop])]
    for i in range(1, n):
        prev = f"x{i}"
        for j in range(1, m + 1):
            b.vertex(f"y{i},{j}", 0.0, i + j / (m + 1))
            b.edge(prev, f"y{i},{j}")
            b.edge(f"y{i},{j}", f"v{i}")
            b.edge(f"y{i},{j}", f"w{i}")
            directed += [(prev, f"y{i},{j}"),
                         (f"y{i},{j}", f"v{i}"), (f"y{i},{j}", f"w{i}")]
            prev = f"y{i},{j}"
        b.edge(prev, f"x{i + 1}")
        directed.append((prev, f"x{i + 1}"))
    g = b.graph()
    central = _central_bits(g, b.ids, directed)
    alpha = AlphaSpec(_alpha_from_bits(g, central))
    markers = dict(b.ids)
    markers["a_r"] = b.ids[f"x{n + 1}"]
    corners = {b.ids["a_g"], b.ids["a_b"]}
    inst = FamilyInstance(f"T_{n}({m})", g, alpha, markers,
                          _t_classifier(b.ids, n, corners))
    inst.extras["central_bits"] = central
    return inst


# ---------------------------------------------------------------------------
# constant-degree slow-mixing family: ladder + hexagonal reservoir
# ---------------------------------------------------------------------------

def _hexagon_cells(k: int):
    """Cube-coordinate vertex set of the side-k hexagonal patch."""
    cells = []
    for cx in range(-k, k + 1):
        for cy in range(-k, k + 1):
            if abs(cx + cy) <= k:
                cells.append((cx, cy))
    return cells


def tri_G(k: int) -> FamilyInstance:
    """Triangulation on 3(k^2+4k-1) vertices with degrees in [4, 6].

    Built from the fan/ladder triangulation with n = 3k-2 by deleting the
    hub fan and filling the hole with a side-k hexagonal patch of the
    triangular grid whose opposite corners are identified with x0 and x1.
    All flow from the patch is funneled through a single non-rigid out-edge,
    which classifies states as left, central or right.
    """
    if k < 2:
        raise BadParam("need k >= 2")
    if k > 3:
        raise BadParam("layout is calibrated for k <= 3")
    n = 3 * k - 2
    b, directed = _t_skeleton(n, drop_hub_fan=True)

    # hexagonal patch; opposite corners (k,-k) and (-k,k) land on x1 and x0
    w_scale = 0.4 / k
    h_scale = 0.25 / k
    names: dict[tuple[int, int], str] = {}
    for c in _hexagon_cells(k):
        cx, cy = c
        if c == (k, -k):
            names[c] = "x1"
            continue
        if c == (-k, k):
            names[c] = "x0"
            continue
        nm = f"h{cx},{cy}"
        names[c] = nm
        b.vertex(nm, (cx + cy) * w_scale, 0.5 + (cx - cy) * h_scale)
    hex_edges: list[tuple[str, str]] = []
    cellset = set(names)
    for c in cellset:
        cx, cy = c
        for dx, dy in ((1, 0), (0, 1), (1, -1)):
            d = (cx + dx, cy + dy)
            if d in cellset:
                b.edge(names[c], names[d])
                hex_edges.append((names[c], names[d]))

    # boundary paths from the top corner to the bottom corner
    def boundary_path(left: bool):
        path = [(k, -k)]
        steps = ([(-1, 0)] * k + [(-1, 1)] * k + [(0, 1)] * k) if left else \
                ([(0, 1)] * k + [(-1, 1)] * k + [(-1, 0)] * k)
        for dx, dy in steps:
            cx, cy = path[-1]
            path.append((cx + dx, cy + dy))
        assert path[-1] == (-k, k)
        return [names[c] for c in path]

    vprime = boundary_path(left=True)
    wprime = boundary_path(left=False)
    u1 = names[(k - 1, -k + 1)]  # interior axis neighbor of x1

    # strips: ladder of triangles between the chains and the patch boundary
    for side, prime in (("v", vprime), ("w", wprime)):
        chain = ["x1"] + [f"{side}{i}" for i in range(1, n + 1)] + \
                ["a_b" if side == "v" else "a_g", "x0"]
        assert len(chain) == len(prime) == 3 * k + 1
        for t in range(1, 3 * k):
            b.edge(chain[t], prime[t])
            directed.append((chain[t], prime[t]))
            if t + 1 <= 3 * k:
                b.edge(chain[t + 1], prime[t])
                if chain[t + 1] != "x0":
                    directed.append((chain[t + 1], prime[t]))

    g = b.graph()

    # patch flow: everything descends toward u1 by (distance-to-u1, id),
    # except the gateway edges at x1
    ids = b.ids
    hex_adj: dict[str, list[str]] = {}
    for a_, c_ in hex_edges:
        hex_adj.setdefault(a_, []).append(c_)
        hex_adj.setdefault(c_, []).append(a_)
    from collections import deque
    dist = {u1: 0}
    q = deque([u1])
    while q:
        cur = q.popleft()
        for nb in hex_adj[cur]:
            if nb != "x1" and nb not in dist:
                dist[nb] = dist[cur] + 1
                q.append(nb)
    directed += [("x1", vprime[1]), ("x1", wprime[1]), (u1, "x1")]
    for a_, c_ in hex_edges:
        if "x1" in (a_, c_):
            continue
        ka = (dist[a_], ids[a_])
        kc = (dist[c_], ids[c_])
        directed.append((a_, c_) if ka > kc else (c_, a_))

    central = _central_bits(g, ids, directed)
    alpha = AlphaSpec(_alpha_from_bits(g, central))
    markers = dict(ids)
    markers["a_r"] = ids[f"x{n + 1}"]
    markers["u1"] = ids[u1]

    reservoir = {ids[nm] for nm in names.values() if nm != "x1"}
    x1_id = ids["x1"]
    left = {ids[f"v{i}"] for i in range(1, n + 1)}
    right = {ids[f"w{i}"] for i in range(1, n + 1)}

    def classify(x: Orientation) -> str:
        lat = x.lattice
        rigid = lat.rigid_edges()
        free = []
        for e, (uu, vv) in enumerate(g.edges):
            if e in rigid or (uu in reservoir) == (vv in reservoir):
                continue
            tail, head = x.direction(e)
            if tail in reservoir:
                free.append(head)
        if len(free) != 1:
            raise ValueError(f"expected one free out-edge, found {len(free)}")
        z = free[0]
        if z == x1_id:
            return "C"
        if z in left:
            return "L"
        if z in right:
            return "R"
        raise ValueError(f"unexpected free out-neighbor {z}")

    inst = FamilyInstance(f"G_{k}", g, alpha, markers, classify)
    inst.extras["central_bits"] = central
    inst.extras["reservoir"] = frozenset(reservoir)
    return inst


# ---------------------------------------------------------------------------
# registry for the CLI
# ---------------------------------------------------------------------------

def make(family: str, **params) -> FamilyInstance:
    if family == "oct":
        return octahedron()
    if family == "Q":
        return quad_Q(params["n"])
    if family == "T":
        return tri_T(params["n"])
    if family == "Tm":
        return tri_T_subdiv(params["n"], params["m"])
    if family == "G":
        return tri_G(params["k"])
    if family == "grid":
        return quad_grid(params["a"], params["b"])
    if family == "rings":
        return nested_rings(params["k"])
    if family == "hardness":
        return hardness_example()[0]
    raise BadParam(f"unknown family {family!r}")
