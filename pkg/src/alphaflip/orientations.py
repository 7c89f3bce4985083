"""Orientations with prescribed outdegrees and their distributive lattice.

For a plane graph and a prescribed outdegree per vertex this module finds a
feasible orientation (unit-capacity flow), the rigid edges (same direction
in every such orientation), the essential cycles (bounded face boundaries of
the connected components of the non-rigid subgraph), the extremal
orientations, per-cycle potentials, lattice distance, and the exactly
enumerated state space with its flip adjacency.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .planegraph import PlaneGraph, trace_faces


class Infeasible(ValueError):
    """No orientation realizes the prescribed outdegrees."""


class CapExceeded(RuntimeError):
    """State enumeration hit the configured cap."""


class NotDirected(ValueError):
    """The cycle is not a directed cycle in the given orientation."""


class AlphaSpec:
    """Prescribed outdegree per vertex.

    The degree sum condition (total prescription equals the edge count) is
    checked as soon as the spec is bound to a graph.
    """

    def __init__(self, out_degrees: Mapping[int, int]):
        self._deg = {int(v): int(a) for v, a in out_degrees.items()}
        if any(a < 0 for a in self._deg.values()):
            raise Infeasible("negative prescribed outdegree")

    def __getitem__(self, v: int) -> int:
        return self._deg[v]

    def items(self):
        return self._deg.items()

    def as_dict(self) -> dict[int, int]:
        return dict(self._deg)

    def validate(self, graph: PlaneGraph) -> None:
        missing = set(graph.vertex_ids) - set(self._deg)
        if missing:
            raise Infeasible(f"no outdegree prescribed for vertices {sorted(missing)}")
        total = sum(self._deg[v] for v in graph.vertex_ids)
        if total != graph.n_edges:
            raise Infeasible(
                f"prescribed outdegrees sum to {total}, graph has {graph.n_edges} edges")
        for v in graph.vertex_ids:
            if self._deg[v] > graph.degree(v):
                raise Infeasible(f"vertex {v}: outdegree {self._deg[v]} exceeds degree")

    def __eq__(self, other):
        return isinstance(other, AlphaSpec) and self._deg == other._deg

    def __hash__(self):
        return hash(tuple(sorted(self._deg.items())))


class Orientation:
    """A direction for every edge, satisfying the lattice's outdegree spec.

    Directions are packed in an int: bit i set means edge i points from
    ``edges[i][0]`` to ``edges[i][1]``.  Instances are immutable values;
    equality and hashing use the bits (compare only within one lattice).
    """

    __slots__ = ("lattice", "bits", "_levels")

    def __init__(self, lattice: "Lattice", bits: int,
                 _levels: tuple[int, ...] | None = None):
        self.lattice = lattice
        self.bits = bits
        self._levels = _levels

    def direction(self, eid: int) -> tuple[int, int]:
        u, v = self.lattice.graph.edges[eid]
        return (u, v) if self.bits >> eid & 1 else (v, u)

    def out_edges(self, v: int) -> list[int]:
        return [e for e in self.lattice.graph.incident_edges(v)
                if self.direction(e)[0] == v]

    def outdegree(self, v: int) -> int:
        return len(self.out_edges(v))

    def __eq__(self, other):
        return (isinstance(other, Orientation)
                and other.lattice is self.lattice and other.bits == self.bits)

    def __hash__(self):
        return hash(self.bits)

    def __repr__(self):
        w = self.lattice.graph.n_edges
        return f"Orientation({self.bits:0{w}b})"


@dataclass(frozen=True)
class EssentialCycle:
    """A bounded face boundary of one component of the non-rigid subgraph.

    ``walk``/``edge_ids`` give the counterclockwise boundary walk; ``mask``
    collects the edge bits and ``ccw_bits`` is the bit pattern where every
    edge points along the walk.  A cycle is directed counterclockwise in an
    orientation x iff ``x.bits & mask == ccw_bits``, clockwise iff it equals
    ``ccw_bits ^ mask``.
    """

    index: int
    component: int
    walk: tuple[int, ...]
    edge_ids: tuple[int, ...]
    mask: int
    ccw_bits: int

    @property
    def degree(self) -> int:
        return len(self.edge_ids)

    def sense(self, x: Orientation) -> str | None:
        part = x.bits & self.mask
        if part == self.ccw_bits:
            return "ccw"
        if part == self.ccw_bits ^ self.mask:
            return "cw"
        return None

    def opposite_edge(self, eid: int) -> int:
        """The edge two walk positions away (4-cycles only)."""
        if len(self.edge_ids) != 4:
            raise ValueError("opposite edge defined only for 4-cycles")
        return self.edge_ids[(self.edge_ids.index(eid) + 2) % 4]


class StateSpace:
    """All orientations of a lattice plus the flip (cover graph) adjacency."""

    def __init__(self, lattice: "Lattice", states: list[int],
                 adjacency: list[list[tuple[int, int]]],
                 levels: list[tuple[int, ...]]):
        self.lattice = lattice
        self.states = states
        self.index = {b: i for i, b in enumerate(states)}
        self.adjacency = adjacency
        self.levels = levels

    def __len__(self) -> int:
        return len(self.states)

    def orientation(self, i: int) -> Orientation:
        return Orientation(self.lattice, self.states[i], self.levels[i])

    def orientations(self) -> Iterable[Orientation]:
        return (self.orientation(i) for i in range(len(self.states)))

    def bfs_distances(self, source: int) -> list[int]:
        dist = [-1] * len(self.states)
        dist[source] = 0
        q = deque([source])
        while q:
            i = q.popleft()
            for j, _ in self.adjacency[i]:
                if dist[j] < 0:
                    dist[j] = dist[i] + 1
                    q.append(j)
        return dist

    def to_json(self) -> str:
        import json
        w = self.lattice.graph.n_edges
        return json.dumps({
            "format": 1,
            "edges": [[u, v] for u, v in self.lattice.graph.edges],
            "states": [f"{b:0{w}b}" for b in self.states],
            "adjacency": [[[j, c] for j, c in nbrs] for nbrs in self.adjacency],
        }, sort_keys=True)

    def potentials_csv(self) -> str:
        m = len(self.lattice.essential_cycles())
        lines = ["state," + ",".join(f"cycle{c}" for c in range(m))]
        w = self.lattice.graph.n_edges
        for b, lv in zip(self.states, self.levels):
            lines.append(f"{b:0{w}b}," + ",".join(str(x) for x in lv))
        return "\n".join(lines) + "\n"


def _max_flow(n_nodes: int, arcs: list[tuple[int, int, int]], s: int, t: int):
    """Edmonds-Karp on an explicit arc list; returns (value, flow per arc).

    Arcs are scanned in input order during BFS, so results are deterministic.
    """
    head = [[] for _ in range(n_nodes)]
    cap = []
    to = []
    for u, v, c in arcs:
        head[u].append(len(cap)); to.append(v); cap.append(c)
        head[v].append(len(cap)); to.append(u); cap.append(0)
    total = 0
    while True:
        prev_arc = [-1] * n_nodes
        prev_arc[s] = -2
        q = deque([s])
        while q and prev_arc[t] == -1:
            u = q.popleft()
            for a in head[u]:
                if cap[a] > 0 and prev_arc[to[a]] == -1:
                    prev_arc[to[a]] = a
                    q.append(to[a])
        if prev_arc[t] == -1:
            break
        # unit capacities throughout, so each augmentation pushes 1
        v = t
        while v != s:
            a = prev_arc[v]
            cap[a] -= 1
            cap[a ^ 1] += 1
            v = to[a ^ 1]
        total += 1
    flows = [arcs[i][2] - cap[2 * i] for i in range(len(arcs))]
    return total, flows


def _scc(n: int, out_adj: Sequence[Sequence[int]]) -> list[int]:
    """Iterative Tarjan; returns component id per node."""
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(out_adj[v])):
                w = out_adj[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return comp


class Lattice:
    """The distributive lattice of all orientations of (graph, alpha).

    Reverting a clockwise cycle moves up; the minimum is the orientation
    without counterclockwise cycles.  Up and down moves along essential
    cycles connect the whole state space.
    """

    DEFAULT_CAP = 10 ** 6

    def __init__(self, graph: PlaneGraph, alpha: AlphaSpec | Mapping[int, int]):
        if not isinstance(alpha, AlphaSpec):
            alpha = AlphaSpec(alpha)
        alpha.validate(graph)
        self.graph = graph
        self.alpha = alpha
        self._feasible: Orientation | None = None
        self._rigid: frozenset[int] | None = None
        self._cycles: tuple[EssentialCycle, ...] | None = None
        self._edge_cycles: dict[int, tuple[int, ...]] | None = None
        self._min: Orientation | None = None
        self._max: Orientation | None = None
        self._space: StateSpace | None = None

    # -- feasibility ---------------------------------------------------------

    def feasible_orientation(self) -> Orientation:
        """Any orientation realizing alpha, via edge-chooses-tail max flow."""
        if self._feasible is not None:
            return self._feasible
        g = self.graph
        ids = g.vertex_ids
        vpos = {v: i for i, v in enumerate(ids)}
        E = g.n_edges
        # nodes: 0 = source, 1..E edge nodes, E+1..E+V vertex nodes, last = sink
        sink = E + len(ids) + 1
        arcs: list[tuple[int, int, int]] = []
        for i in range(E):
            arcs.append((0, 1 + i, 1))
        for i, (u, v) in enumerate(g.edges):
            arcs.append((1 + i, 1 + E + vpos[u], 1))
            arcs.append((1 + i, 1 + E + vpos[v], 1))
        for v in ids:
            arcs.append((1 + E + vpos[v], sink, self.alpha[v]))
        value, flows = _max_flow(sink + 1, arcs, 0, sink)
        if value != E:
            raise Infeasible("outdegree prescription admits no orientation")
        bits = 0
        for i, (u, v) in enumerate(g.edges):
            # the saturated arc marks the tail chosen for edge i
            if flows[E + 2 * i] == 1:
                bits |= 1 << i  # tail = u, stored direction
        self._feasible = Orientation(self, bits)
        return self._feasible

    def orientation_from_bits(self, bits: int) -> Orientation:
        x = Orientation(self, bits)
        for v in self.graph.vertex_ids:
            if x.outdegree(v) != self.alpha[v]:
                raise Infeasible(f"bits violate outdegree at vertex {v}")
        return x

    # -- rigidity and essential cycles ----------------------------------------

    def rigid_edges(self, x: Orientation | None = None) -> frozenset[int]:
        """Edges with the same direction in every orientation.

        An edge is non-rigid iff it lies on a directed cycle of any single
        orientation, so one strongly-connected-component pass suffices.
        """
        if self._rigid is not None:
            return self._rigid
        if x is None:
            x = self.feasible_orientation()
        g = self.graph
        ids = g.vertex_ids
        vpos = {v: i for i, v in enumerate(ids)}
        out_adj: list[list[int]] = [[] for _ in ids]
        for e in range(g.n_edges):
            t, h = x.direction(e)
            out_adj[vpos[t]].append(vpos[h])
        comp = _scc(len(ids), out_adj)
        rigid = frozenset(
            e for e, (u, v) in enumerate(g.edges) if comp[vpos[u]] != comp[vpos[v]])
        self._rigid = rigid
        return rigid

    def essential_cycles(self) -> tuple[EssentialCycle, ...]:
        """Bounded face boundaries of the components of the non-rigid subgraph.

        Each component keeps its inherited rotation system; its faces are
        traced in isolation, so nested components are handled per component.
        """
        if self._cycles is not None:
            return self._cycles
        g = self.graph
        rigid = self.rigid_edges()
        alive = [e for e in range(g.n_edges) if e not in rigid]
        # connected components over the surviving edges
        comp_of: dict[int, int] = {}
        n_comp = 0
        adj: dict[int, list[tuple[int, int]]] = {}
        for e in alive:
            u, v = g.edges[e]
            adj.setdefault(u, []).append((v, e))
            adj.setdefault(v, []).append((u, e))
        for start in sorted(adj):
            if start in comp_of:
                continue
            stack = [start]
            comp_of[start] = n_comp
            while stack:
                v = stack.pop()
                for u, _ in adj[v]:
                    if u not in comp_of:
                        comp_of[u] = n_comp
                        stack.append(u)
            n_comp += 1

        cycles: list[EssentialCycle] = []
        for c in range(n_comp):
            verts = {v for v, cc in comp_of.items() if cc == c}
            sub_edges = [e for e in alive if g.edges[e][0] in verts]
            coords = {v: g.coords(v) for v in verts}
            all_ids = list(range(len(sub_edges)))
            faces = trace_faces(coords, [g.edges[e] for e in sub_edges])
            for f in faces:
                if f.area <= 0:
                    continue  # the component's outer walk
                edge_ids = tuple(sub_edges[i] for i in f.edges)
                mask = 0
                ccw = 0
                for pos in range(len(edge_ids)):
                    e = edge_ids[pos]
                    a = f.vertices[pos]
                    mask |= 1 << e
                    if g.edges[e][0] == a:  # stored direction runs along the walk
                        ccw |= 1 << e
                cycles.append(EssentialCycle(len(cycles), c, f.vertices,
                                             edge_ids, mask, ccw))
            del all_ids
        self._cycles = tuple(cycles)
        self._edge_cycles = {}
        for cyc in cycles:
            for e in cyc.edge_ids:
                self._edge_cycles.setdefault(e, ())
                self._edge_cycles[e] = self._edge_cycles[e] + (cyc.index,)
        return self._cycles

    def cycles_of_edge(self, eid: int) -> tuple[int, ...]:
        """Essential cycles whose boundary uses the given edge (0, 1 or 2)."""
        self.essential_cycles()
        return self._edge_cycles.get(eid, ())

    # -- flips and extremal orientations --------------------------------------

    def flip(self, x: Orientation, cycle: EssentialCycle | int) -> Orientation:
        """Reverse a directed essential cycle."""
        if isinstance(cycle, int):
            cycle = self.essential_cycles()[cycle]
        sense = cycle.sense(x)
        if sense is None:
            raise NotDirected(f"cycle {cycle.index} is not directed")
        levels = None
        if x._levels is not None:
            lv = list(x._levels)
            lv[cycle.index] += 1 if sense == "cw" else -1
            levels = tuple(lv)
        return Orientation(self, x.bits ^ cycle.mask, levels)

    def extremal_orientation(self, which: str) -> Orientation:
        """'min': no counterclockwise essential cycle remains; 'max': symmetric.

        Repeatedly reverting the lowest-index reversible cycle is a
        deterministic schedule; the result is schedule-independent.
        """
        if which not in ("min", "max"):
            raise ValueError("which must be 'min' or 'max'")
        if which == "min" and self._min is not None:
            return self._min
        if which == "max" and self._max is not None:
            return self._max
        down = "ccw" if which == "min" else "cw"
        x = self.feasible_orientation()
        cycles = self.essential_cycles()
        changed = True
        while changed:
            changed = False
            for cyc in cycles:
                if cyc.sense(x) == down:
                    x = Orientation(self, x.bits ^ cyc.mask)
                    changed = True
        if which == "min":
            self._min = Orientation(self, x.bits,
                                    tuple([0] * len(cycles)))
            return self._min
        self._max = x
        return self._max

    def minimal(self) -> Orientation:
        return self.extremal_orientation("min")

    def maximal(self) -> Orientation:
        return self.extremal_orientation("max")

    # -- potentials and distance ----------------------------------------------

    def potentials(self, x: Orientation) -> tuple[int, ...]:
        """Per-cycle potential level: down-flips used by any descent to min."""
        if x._levels is not None:
            return x._levels
        cycles = self.essential_cycles()
        counts = [0] * len(cycles)
        bits = x.bits
        changed = True
        while changed:
            changed = False
            for cyc in cycles:
                if bits & cyc.mask == cyc.ccw_bits:
                    bits ^= cyc.mask
                    counts[cyc.index] += 1
                    changed = True
        mn = self.minimal()
        if bits != mn.bits:
            raise NotDirected("descent did not reach the minimal orientation")
        x._levels = tuple(counts)
        return x._levels

    def lattice_distance(self, x: Orientation, y: Orientation) -> int:
        lx = self.potentials(x)
        ly = self.potentials(y)
        return sum(abs(a - b) for a, b in zip(lx, ly))

    # -- enumeration -----------------------------------------------------------

    def enumerate(self, cap: int = DEFAULT_CAP) -> StateSpace:
        """All orientations by breadth-first flips from the minimum."""
        if self._space is not None:
            return self._space
        cycles = self.essential_cycles()
        mn = self.minimal()
        states = [mn.bits]
        levels = [tuple([0] * len(cycles))]
        index = {mn.bits: 0}
        adjacency: list[list[tuple[int, int]]] = [[]]
        q = deque([0])
        while q:
            i = q.popleft()
            bits = states[i]
            lv = levels[i]
            for cyc in cycles:
                part = bits & cyc.mask
                if part == cyc.ccw_bits:
                    delta = -1
                elif part == cyc.ccw_bits ^ cyc.mask:
                    delta = +1
                else:
                    continue
                nb = bits ^ cyc.mask
                j = index.get(nb)
                if j is None:
                    if len(states) >= cap:
                        raise CapExceeded(f"more than {cap} states")
                    j = len(states)
                    index[nb] = j
                    states.append(nb)
                    nlv = list(lv)
                    nlv[cyc.index] += delta
                    levels.append(tuple(nlv))
                    adjacency.append([])
                    q.append(j)
                adjacency[i].append((j, cyc.index))
        self._space = StateSpace(self, states, adjacency, levels)
        return self._space

    def enumerate_bruteforce(self, literal_limit: int = 16) -> set[int]:
        """Independent exhaustive oracle over all edge orientations.

        Up to ``literal_limit`` edges every one of the 2^|E| assignments is
        filtered literally; beyond that a depth-first search over edges with
        sound outdegree pruning enumerates exactly the same set.
        """
        g = self.graph
        E = g.n_edges
        alpha = {v: self.alpha[v] for v in g.vertex_ids}
        if E <= literal_limit:
            found = set()
            for bits in range(1 << E):
                out = dict.fromkeys(g.vertex_ids, 0)
                for e, (u, v) in enumerate(g.edges):
                    out[u if bits >> e & 1 else v] += 1
                if out == alpha:
                    found.add(bits)
            return found
        remaining = dict.fromkeys(g.vertex_ids, 0)
        for u, v in g.edges:
            remaining[u] += 1
            remaining[v] += 1
        found: set[int] = set()
        out = dict.fromkeys(g.vertex_ids, 0)

        def feasible(v: int) -> bool:
            return out[v] <= alpha[v] and out[v] + remaining[v] >= alpha[v]

        def rec(e: int, bits: int) -> None:
            if e == E:
                found.add(bits)
                return
            u, v = g.edges[e]
            remaining[u] -= 1
            remaining[v] -= 1
            for tail, bit in ((u, 1), (v, 0)):
                out[tail] += 1
                if feasible(u) and feasible(v):
                    rec(e + 1, bits | bit << e)
                out[tail] -= 1
            remaining[u] += 1
            remaining[v] += 1

        rec(0, 0)
        return found
