"""
Graph representation and shortest-path primitives.

DiGraph keeps both adjacency directions in CSR arrays (numpy int64) and
exposes cached tuple views for the Python-level BFS/Dijkstra loops used by
every tester. Distances are int64 with INF as the unreachable sentinel.
"""

import heapq
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

try:
    from .errors import (DuplicateEdge, GraphError, MissingColor, NotADag, SelfLoop,
                         VertexOutOfRange, WeightedInput)
except ImportError:
    from errors import (DuplicateEdge, GraphError, MissingColor, NotADag, SelfLoop,
                        VertexOutOfRange, WeightedInput)

logger = logging.getLogger(__name__)

INF = int(np.iinfo(np.int64).max)

Edge = Tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class DiGraph:
    """Immutable directed graph with nonnegative integer weights."""
    n: int
    out_ptr: np.ndarray
    out_dst: np.ndarray
    out_w: np.ndarray
    in_ptr: np.ndarray
    in_src: np.ndarray
    in_w: np.ndarray
    weighted: bool

    @property
    def m(self) -> int:
        return int(self.out_dst.shape[0])

    @cached_property
    def out_adj(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        return _tuple_view(self.out_ptr, self.out_dst, self.out_w)

    @cached_property
    def in_adj(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        return _tuple_view(self.in_ptr, self.in_src, self.in_w)

    @cached_property
    def out_targets(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(v for v, _ in row) for row in self.out_adj)

    @cached_property
    def in_sources(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(u for u, _ in row) for row in self.in_adj)

    def out_degree(self, v: int) -> int:
        return int(self.out_ptr[v + 1] - self.out_ptr[v])

    def in_degree(self, v: int) -> int:
        return int(self.in_ptr[v + 1] - self.in_ptr[v])

    def edge_sources(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.out_ptr))

    def edges(self) -> Iterator[Edge]:
        for u, row in enumerate(self.out_adj):
            for v, w in row:
                yield u, v, w

    def has_edge(self, u: int, v: int) -> bool:
        lo, hi = int(self.out_ptr[u]), int(self.out_ptr[u + 1])
        i = lo + int(np.searchsorted(self.out_dst[lo:hi], v))
        return i < hi and int(self.out_dst[i]) == v

    def __repr__(self) -> str:
        return f"DiGraph(n={self.n}, m={self.m}, weighted={self.weighted})"


def _tuple_view(ptr: np.ndarray, nbr: np.ndarray, w: np.ndarray):
    ptr_l, nbr_l, w_l = ptr.tolist(), nbr.tolist(), w.tolist()
    return tuple(
        tuple(zip(nbr_l[ptr_l[v]:ptr_l[v + 1]], w_l[ptr_l[v]:ptr_l[v + 1]]))
        for v in range(len(ptr_l) - 1)
    )


def _csr(n: int, key: np.ndarray, other: np.ndarray, w: np.ndarray):
    order = np.lexsort((other, key))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(key, minlength=n), out=ptr[1:])
    return ptr, other[order].astype(np.int64), w[order].astype(np.int64)


def _assemble(n: int, u: np.ndarray, v: np.ndarray, w: np.ndarray, weighted: bool) -> DiGraph:
    out_ptr, out_dst, out_w = _csr(n, u, v, w)
    in_ptr, in_src, in_w = _csr(n, v, u, w)
    return DiGraph(n, out_ptr, out_dst, out_w, in_ptr, in_src, in_w, weighted)


def build_graph(n: int, edges: Iterable[Sequence[int]],
                weighted: Optional[bool] = None) -> DiGraph:
    """
    Build a DiGraph from (u, v, w) triples; (u, v) pairs get weight 1.

    weighted defaults to "some weight differs from 1".
    """
    if n < 0:
        raise GraphError(f"vertex count must be nonnegative, got {n}")
    rows = [(e[0], e[1], e[2] if len(e) > 2 else 1) for e in edges]
    arr = np.asarray(rows, dtype=np.int64).reshape(-1, 3)
    u, v, w = arr[:, 0], arr[:, 1], arr[:, 2]

    bad = np.nonzero((u < 0) | (u >= n) | (v < 0) | (v >= n))[0]
    if bad.size:
        i = int(bad[0])
        culprit = int(u[i]) if not 0 <= u[i] < n else int(v[i])
        raise VertexOutOfRange(culprit, n)
    loops = np.nonzero(u == v)[0]
    if loops.size:
        raise SelfLoop(int(u[loops[0]]))
    negative = np.nonzero(w < 0)[0]
    if negative.size:
        i = int(negative[0])
        raise GraphError(f"negative weight {int(w[i])} on edge ({int(u[i])}, {int(v[i])})")

    keys = u * max(n, 1) + v
    sorted_keys = np.sort(keys, kind="stable")
    dup = np.nonzero(np.diff(sorted_keys) == 0)[0]
    if dup.size:
        key = int(sorted_keys[dup[0]])
        raise DuplicateEdge(key // n, key % n)

    has_non_unit = bool(np.any(w != 1))
    if weighted is None:
        weighted = has_non_unit
    elif not weighted and has_non_unit:
        raise GraphError("unweighted graph given a non-unit edge weight")
    return _assemble(n, u, v, w, weighted)


def _require_unweighted(g: DiGraph):
    if g.weighted:
        raise WeightedInput()


@dataclass(frozen=True)
class TopoOrder:
    """A topological permutation: order[rank] = vertex, pos[vertex] = rank."""
    order: Tuple[int, ...]
    pos: Tuple[int, ...]

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "TopoOrder":
        pos = [0] * len(order)
        for rank, v in enumerate(order):
            pos[v] = rank
        return cls(tuple(order), tuple(pos))

    @classmethod
    def identity(cls, n: int) -> "TopoOrder":
        ids = tuple(range(n))
        return cls(ids, ids)

    def __len__(self) -> int:
        return len(self.order)

    def before(self, u: int, v: int) -> bool:
        return self.pos[u] < self.pos[v]


def topological_sort(g: DiGraph) -> TopoOrder:
    """Kahn's algorithm with a min-id ready queue."""
    indeg = np.diff(g.in_ptr).tolist()
    ready = [v for v in range(g.n) if indeg[v] == 0]
    heapq.heapify(ready)
    order: List[int] = []
    targets = g.out_targets
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in targets[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != g.n:
        raise NotADag(f"graph contains a directed cycle ({g.n - len(order)} vertices unsorted)")
    return TopoOrder.from_order(order)


def _sssp_list(g: DiGraph, source: int, direction: str) -> List[int]:
    if direction not in ("out", "in"):
        raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")
    dist = [INF] * g.n
    dist[source] = 0
    if not g.weighted:
        nbrs = g.out_targets if direction == "out" else g.in_sources
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for v in nbrs[u]:
                if dist[v] == INF:
                    dist[v] = du
                    queue.append(v)
        return dist

    adj = g.out_adj if direction == "out" else g.in_adj
    heap = [(0, source)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for v, w in adj[u]:
            nd = du + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def sssp(g: DiGraph, source: int, direction: str = "out") -> np.ndarray:
    """Single-source distances from (out) or into (in) source; BFS when unweighted."""
    if not 0 <= source < g.n:
        raise VertexOutOfRange(source, g.n)
    return np.asarray(_sssp_list(g, source, direction), dtype=np.int64)


def min_distance_row(g: DiGraph, v: int) -> np.ndarray:
    """d_min(v, u) for every u, from one out- and one in-search."""
    return np.minimum(sssp(g, v, "out"), sssp(g, v, "in"))


def min_eccentricity(g: DiGraph, v: int) -> int:
    if g.n < 2:
        raise GraphError("min-eccentricity needs at least two vertices")
    return int(min_distance_row(g, v).max())


def farthest_by_min_distance(row: np.ndarray, mask: Optional[np.ndarray] = None) -> Tuple[int, int]:
    """(vertex, distance) maximizing row, optionally restricted to mask."""
    if mask is not None:
        candidates = np.nonzero(mask)[0]
        if candidates.size == 0:
            return -1, 0
        i = int(candidates[int(np.argmax(row[candidates]))])
    else:
        i = int(np.argmax(row))
    return i, int(row[i])


def is_weakly_connected(g: DiGraph) -> bool:
    if g.n <= 1:
        return True
    seen = [False] * g.n
    seen[0] = True
    stack = [0]
    outs, ins = g.out_targets, g.in_sources
    count = 1
    while stack:
        u = stack.pop()
        for nbrs in (outs[u], ins[u]):
            for v in nbrs:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
    return count == g.n


def max_weight(g: DiGraph) -> int:
    """M1: the largest edge weight (0 for an edgeless graph)."""
    return int(g.out_w.max()) if g.m else 0


class ClosedSubgraph(NamedTuple):
    graph: DiGraph
    vertex_map: Tuple[int, ...]


def induced_closed_subgraph(g: DiGraph, order: TopoOrder, lo: int, hi: int) -> ClosedSubgraph:
    """
    Subgraph on the vertices ranked lo..hi.

    New ids follow rank order, so the identity is a topological order of the
    result and vertex_map[new_id] is the original vertex.
    """
    if not 0 <= lo <= hi < g.n:
        raise GraphError(f"rank range [{lo}, {hi}] outside [0, {g.n})")
    return induced_subgraph(g, order.order[lo:hi + 1])


def induced_subgraph(g: DiGraph, vertices: Sequence[int]) -> ClosedSubgraph:
    """Subgraph on an arbitrary vertex list; new ids follow the list order."""
    members = np.asarray(vertices, dtype=np.int64)
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[members] = np.arange(members.shape[0], dtype=np.int64)
    src = new_id[g.edge_sources()]
    dst = new_id[g.out_dst]
    keep = (src >= 0) & (dst >= 0)
    sub = _assemble(members.shape[0], src[keep], dst[keep], g.out_w[keep], g.weighted)
    return ClosedSubgraph(sub, tuple(members.tolist()))


def relabel_by_rank(g: DiGraph, order: TopoOrder) -> ClosedSubgraph:
    """Copy of g whose vertex ids equal their ranks."""
    if g.n == 0:
        return ClosedSubgraph(g, ())
    return induced_closed_subgraph(g, order, 0, g.n - 1)


class Original(NamedTuple):
    v: int


class EdgeMid(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class SubdivisionMap:
    """
    G' with one midpoint per edge of G.

    Original vertices keep their ids; the midpoint of the i-th edge (CSR order)
    of G is vertex n + i.
    """
    graph: DiGraph
    n_original: int
    mid_edges: Tuple[Tuple[int, int], ...]

    def is_original(self, v: int) -> bool:
        return v < self.n_original

    def origin(self, v: int) -> Union[Original, EdgeMid]:
        if v < self.n_original:
            return Original(v)
        x, y = self.mid_edges[v - self.n_original]
        return EdgeMid(x, y)

    def extend_order(self, order: TopoOrder) -> TopoOrder:
        """Each midpoint v_{x,y} directly after x, ordered by the rank of y."""
        n = self.n_original
        mids_after = [[] for _ in range(n)]
        for i, (x, y) in enumerate(self.mid_edges):
            mids_after[x].append((order.pos[y], n + i))
        extended: List[int] = []
        for x in order.order:
            extended.append(x)
            extended.extend(mid for _, mid in sorted(mids_after[x]))
        return TopoOrder.from_order(extended)


def subdivide(g: DiGraph) -> SubdivisionMap:
    _require_unweighted(g)
    n, m = g.n, g.m
    src = g.edge_sources()
    mids = np.arange(n, n + m, dtype=np.int64)
    u = np.concatenate([src, mids])
    v = np.concatenate([mids, g.out_dst])
    w = np.ones(2 * m, dtype=np.int64)
    aux = _assemble(n + m, u, v, w, False)
    mid_edges = tuple(zip(src.tolist(), g.out_dst.tolist()))
    return SubdivisionMap(aux, n, mid_edges)


class Color(str, Enum):
    RED = "R"
    BLUE = "B"

    @property
    def opposite(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


@dataclass(frozen=True)
class ColorAssignment:
    """Red/blue label per vertex."""
    colors: Tuple[Color, ...]
    red_mask: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(Color(c) for c in self.colors))
        mask = np.fromiter((c is Color.RED for c in self.colors), dtype=bool, count=len(self.colors))
        object.__setattr__(self, "red_mask", mask)

    @classmethod
    def from_string(cls, letters: str) -> "ColorAssignment":
        return cls(tuple(Color(ch) for ch in letters))

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> Color:
        return self.colors[v]

    def is_red(self, v: int) -> bool:
        return self.colors[v] is Color.RED

    def reds(self) -> List[int]:
        return np.nonzero(self.red_mask)[0].tolist()

    def blues(self) -> List[int]:
        return np.nonzero(~self.red_mask)[0].tolist()

    def mask(self, color: Color) -> np.ndarray:
        return self.red_mask if color is Color.RED else ~self.red_mask

    def require_both(self):
        reds = int(self.red_mask.sum())
        if reds == 0 or reds == len(self.colors):
            raise MissingColor()

    def relabel(self, vertex_map: Sequence[int]) -> "ColorAssignment":
        return ColorAssignment(tuple(self.colors[v] for v in vertex_map))

    def as_string(self) -> str:
        return "".join(c.value for c in self.colors)


def max_red_blue_weight(g: DiGraph, colors: ColorAssignment) -> int:
    """M: the largest weight on an edge joining opposite colors (0 if none)."""
    if g.m == 0:
        return 0
    red = colors.red_mask
    cross = red[g.edge_sources()] != red[g.out_dst]
    return int(g.out_w[cross].max()) if cross.any() else 0


class Condensation(NamedTuple):
    graph: DiGraph
    colors: ColorAssignment
    component_of: Tuple[int, ...]


def scc_condense(g: DiGraph, colors: ColorAssignment) -> Condensation:
    """
    DAG of strongly connected components.

    A monochromatic component becomes one vertex of its color. A mixed one
    becomes x^R -> x^B where x^R takes every incoming edge and x^B every
    outgoing edge. Components are numbered by their smallest member.
    component_of maps each original vertex to its (red-side) condensed vertex.
    """
    nxg = nx.DiGraph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from((u, v) for u, v, _ in g.edges())
    components = sorted((sorted(c) for c in nx.strongly_connected_components(nxg)),
                        key=lambda c: c[0])

    head = [0] * g.n
    tail = [0] * g.n
    new_colors: List[Color] = []
    edges = set()
    for comp in components:
        kinds = {colors[v] for v in comp}
        entry = len(new_colors)
        if len(kinds) == 2:
            new_colors.extend([Color.RED, Color.BLUE])
            exit_ = entry + 1
            edges.add((entry, exit_))
        else:
            new_colors.append(kinds.pop())
            exit_ = entry
        for v in comp:
            head[v] = entry
            tail[v] = exit_

    for u, v, _ in g.edges():
        if head[u] != head[v]:
            edges.add((tail[u], head[v]))

    dag = build_graph(len(new_colors), sorted(edges), weighted=False)
    logger.debug(f"Condensed {g.n} vertices into {dag.n} ({len(components)} components)")
    return Condensation(dag, ColorAssignment(tuple(new_colors)), tuple(head))
