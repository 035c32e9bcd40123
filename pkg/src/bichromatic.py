"""
Bichromatic min-diameter in DAGs: separated testers, the recursive
(2, M)-tester with its binary search, and finiteness detection for DAGs and
general digraphs.
"""

import heapq
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

try:
    from .cover import NeighborhoodCover, build_cover
    from .errors import GraphError
    from .graph_core import (INF, Color, ColorAssignment, DiGraph, TopoOrder,
                             farthest_by_min_distance, induced_closed_subgraph,
                             is_weakly_connected, max_red_blue_weight, max_weight,
                             min_distance_row, relabel_by_rank, scc_condense, sssp,
                             topological_sort)
    from .mindiam import Verdict, VerdictKind
except ImportError:
    from cover import NeighborhoodCover, build_cover
    from errors import GraphError
    from graph_core import (INF, Color, ColorAssignment, DiGraph, TopoOrder,
                            farthest_by_min_distance, induced_closed_subgraph,
                            is_weakly_connected, max_red_blue_weight, max_weight,
                            min_distance_row, relabel_by_rank, scc_condense, sssp,
                            topological_sort)
    from mindiam import Verdict, VerdictKind

logger = logging.getLogger(__name__)

# m > n ** DENSITY_EXPONENT selects the dense tester and the rank-median split.
DENSITY_EXPONENT = 7 / 5


@dataclass(frozen=True)
class SeparatedView:
    """
    A 2-colored DAG relabelled by rank whose left side (ids < boundary) is
    one color and right side the other. vertex_map[i] is the caller's id of i.
    """
    graph: DiGraph
    colors: ColorAssignment
    boundary: int
    left_color: Color
    vertex_map: Tuple[int, ...]

    @property
    def left(self) -> range:
        return range(0, self.boundary)

    @property
    def right(self) -> range:
        return range(self.boundary, self.graph.n)

    @classmethod
    def from_ranked(cls, graph: DiGraph, colors: ColorAssignment,
                    vertex_map: Optional[Sequence[int]] = None) -> "SeparatedView":
        """View of a graph whose identity order is topological."""
        colors.require_both()
        left_color = colors[0]
        boundary = 0
        while boundary < graph.n and colors[boundary] is left_color:
            boundary += 1
        if any(colors[v] is left_color for v in range(boundary, graph.n)):
            raise GraphError("colors are not separated by the topological order")
        vmap = tuple(range(graph.n)) if vertex_map is None else tuple(vertex_map)
        return cls(graph, colors, boundary, left_color, vmap)

    @classmethod
    def build(cls, g: DiGraph, colors: ColorAssignment,
              order: Optional[TopoOrder] = None) -> "SeparatedView":
        """Find a topological order with one color entirely first, and relabel by it."""
        colors.require_both()
        candidates = [order] if order is not None else [
            _color_first_order(g, colors, Color.RED),
            _color_first_order(g, colors, Color.BLUE),
        ]
        for candidate in candidates:
            ranked = relabel_by_rank(g, candidate)
            ranked_colors = colors.relabel(ranked.vertex_map)
            try:
                return cls.from_ranked(ranked.graph, ranked_colors, ranked.vertex_map)
            except GraphError:
                continue
        raise GraphError("graph is not a separated DAG for these colors")


def _color_first_order(g: DiGraph, colors: ColorAssignment, first: Color) -> TopoOrder:
    # Kahn's algorithm preferring the given color, then smaller ids.
    indeg = [g.in_degree(v) for v in range(g.n)]
    ready = [(colors[v] is not first, v) for v in range(g.n) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        _, u = heapq.heappop(ready)
        order.append(u)
        for v in g.out_targets[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, (colors[v] is not first, v))
    if len(order) != g.n:
        return topological_sort(g)
    return TopoOrder.from_order(order)


@dataclass(frozen=True)
class OutsetResult:
    verdict: Verdict
    members: FrozenSet[int]
    cover: Optional[NeighborhoodCover]


def _map_verdict(verdict: Verdict, view: SeparatedView) -> Verdict:
    return verdict.mapped(view.vertex_map)


def _check_cover_vertices(view: SeparatedView, cover: NeighborhoodCover, D: int) -> Optional[Verdict]:
    g, colors = view.graph, view.colors
    for s in cover.S:
        row = min_distance_row(g, s)
        far, dist = farthest_by_min_distance(row, colors.mask(colors[s].opposite))
        if dist > D:
            logger.debug(f"Cover vertex {s} is {dist} > {D} from opposite color {far}")
            return Verdict.failed((s, far))
    return None


def small_outset(view: SeparatedView, D: int, k: float, direction: str = "out",
                 cover: Optional[NeighborhoodCover] = None,
                 check_cover: bool = True) -> OutsetResult:
    """
    Split one side into certified vertices and A' (direction "out": left
    side; "in": right side).

    Left vertices outside A' reach every opposite-colored vertex within 2D
    through a cover vertex; every a in A' has at most k same-colored
    vertices within distance D, all listed in its truncated neighborhood.
    Witnesses are in view-local ids.
    """
    if cover is None:
        cover = build_cover(view.graph, TopoOrder.identity(view.graph.n), D, D, k)
    if check_cover:
        failed = _check_cover_vertices(view, cover, D)
        if failed:
            return OutsetResult(failed, frozenset(), cover)

    members = set()
    if direction == "out":
        for a in view.left:
            hit = cover.out_hit(a)
            if hit is None or hit >= view.boundary:
                members.add(a)
    elif direction == "in":
        for b in view.right:
            hit = cover.in_hit(b)
            if hit is None or hit < view.boundary:
                members.add(b)
    else:
        raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")
    return OutsetResult(Verdict.passed(), frozenset(members), cover)


def _exhaustive_separated(view: SeparatedView, D: int) -> Verdict:
    g = view.graph
    right_mask = view.colors.mask(view.colors[view.boundary])
    worst = 0
    for a in view.left:
        far, dist = farthest_by_min_distance(sssp(g, a, "out"), right_mask)
        if dist > D:
            return _map_verdict(Verdict.failed((a, far)), view)
        worst = max(worst, dist)
    return Verdict.passed(bound=worst)


def _red_ball(view: SeparatedView, cover: NeighborhoodCover, a: int) -> List[Tuple[int, int]]:
    return [(a, 0)] + [(u, du) for u, du in cover.out_nbhd.get(a, ()) if u < view.boundary]


def separated_tester_sparse(view: SeparatedView, D: int, k: Optional[float] = None,
                            delta: Optional[float] = None) -> Verdict:
    """Pass => bichromatic min-diameter <= 2D; Fail => > D."""
    g = view.graph
    n, m = g.n, g.m
    k_raw = k if k is not None else (n ** (2 / 3) * m ** (-1 / 3) if m else float(n))
    delta_raw = delta if delta is not None else m ** (2 / 3) * n ** (-1 / 3)
    if k_raw < 1 or delta_raw < 1:
        return _exhaustive_separated(view, D)
    delta_cap = int(math.floor(delta_raw))

    outset = small_outset(view, D, k_raw)
    if outset.verdict.is_fail:
        return _map_verdict(outset.verdict, view)
    cover = outset.cover
    right_mask = view.colors.mask(view.colors[view.boundary])
    left_mask = ~right_mask

    heavy = [a for a in view.left if g.out_degree(a) >= delta_cap]
    for t in heavy:
        far, dist = farthest_by_min_distance(sssp(g, t, "out"), right_mask)
        if dist > D:
            return _map_verdict(Verdict.failed((t, far)), view)
    heavy_set = set(heavy)

    for a in sorted(outset.members):
        ball = _red_ball(view, cover, a)
        if any(u in heavy_set for u, _ in ball):
            continue
        far, dist = farthest_by_min_distance(sssp(g, a, "out"), right_mask)
        if dist > D:
            return _map_verdict(Verdict.failed((a, far)), view)
        # blue boundary of the red out-neighborhood
        frontier = sorted({x for u, _ in ball for x in g.out_targets[u] if x >= view.boundary})
        for t in frontier:
            far, dist = farthest_by_min_distance(sssp(g, t, "in"), left_mask)
            if dist > D:
                return _map_verdict(Verdict.failed((far, t)), view)
        return Verdict.passed(bound=2 * D)
    return Verdict.passed(bound=2 * D)


def separated_tester_dense(view: SeparatedView, D: int, k: Optional[float] = None) -> Verdict:
    """Pass => bichromatic min-diameter <= 2D; Fail => > D."""
    g = view.graph
    n, m = g.n, g.m
    k_raw = k if k is not None else math.sqrt(m / n)
    if k_raw < 1:
        return _exhaustive_separated(view, D)

    cover = build_cover(g, TopoOrder.identity(n), D, D, k_raw)
    left_part = small_outset(view, D, k_raw, "out", cover=cover)
    if left_part.verdict.is_fail:
        return _map_verdict(left_part.verdict, view)
    right_part = small_outset(view, D, k_raw, "in", cover=cover, check_cover=False)

    reach: Dict[int, set] = {}
    for a in left_part.members:
        frontier = set()
        for u, du in _red_ball(view, cover, a):
            for x, w in g.out_adj[u]:
                if x >= view.boundary and du + w <= D:
                    frontier.add(x)
        reach[a] = frontier

    arrivals: Dict[int, set] = {}
    for b in right_part.members:
        arrivals[b] = {b} | {u for u, _ in cover.in_nbhd.get(b, ()) if u >= view.boundary}

    for a in sorted(reach):
        for b in sorted(arrivals):
            if reach[a].isdisjoint(arrivals[b]):
                logger.debug(f"Dense tester: no blue boundary vertex links {a} to {b}")
                return _map_verdict(Verdict.failed((a, b)), view)
    return Verdict.passed(bound=2 * D)


def _is_dense(g: DiGraph) -> bool:
    return g.n > 0 and g.m > g.n ** DENSITY_EXPONENT


def _middle_rank(h: DiGraph, dense: bool) -> int:
    if dense:
        return (h.n + 1) // 2 - 1
    # smallest j such that at least half of the edges end at ranks <= j
    running = 0
    for j in range(h.n):
        running += h.in_degree(j)
        if 2 * running >= h.m:
            return j
    return h.n - 1


def _run_bounds(colors: ColorAssignment, j: int, n: int) -> Tuple[int, int]:
    lo = hi = j
    while lo > 0 and colors[lo - 1] is colors[j]:
        lo -= 1
    while hi < n - 1 and colors[hi + 1] is colors[j]:
        hi += 1
    return lo, hi


class _BichromRecursion:

    def __init__(self, D: int, M: int):
        self.D = D
        self.M = M

    def run(self, h: DiGraph, colors: ColorAssignment) -> Verdict:
        n = h.n
        reds = int(colors.red_mask.sum())
        if min(reds, n - reds) <= 1:
            return self._solve_small(h, colors)

        dense = _is_dense(h)
        j = _middle_rank(h, dense)
        b0, b1 = _run_bounds(colors, j, n)
        a0, a1 = _run_bounds(colors, b0 - 1, n) if b0 > 0 else (None, None)
        c0, c1 = _run_bounds(colors, b1 + 1, n) if b1 < n - 1 else (None, None)
        l = a0 - 1 if a0 is not None and a0 > 0 else None
        r = c1 + 1 if c1 is not None and c1 < n - 1 else None

        for x, y in ((l, a0), (a1, b0), (b1, c0), (c1, r)):
            if x is not None and y is not None and not h.has_edge(x, y):
                logger.debug(f"Consecutive opposite-colored pair ({x}, {y}) has no edge")
                return Verdict.infinite((x, y))

        tester = separated_tester_dense if dense else separated_tester_sparse
        ident = TopoOrder.identity(n)
        for lo, hi in ((a0, b1), (b0, c1)):
            if lo is None or hi is None:
                continue
            part = induced_closed_subgraph(h, ident, lo, hi)
            view = SeparatedView.from_ranked(part.graph, colors.relabel(part.vertex_map),
                                             part.vertex_map)
            verdict = tester(view, self.D)
            if verdict.is_fail:
                return verdict

        landmarks = sorted({x for x in (l, a0, a1, b0, b1, c0, c1, r) if x is not None})
        for x in landmarks:
            row = min_distance_row(h, x)
            far, dist = farthest_by_min_distance(row, colors.mask(colors[x].opposite))
            if dist == INF:
                return Verdict.infinite((x, far))
            if dist > self.D:
                return Verdict.failed((x, far))

        bound = 2 * self.D + self.M
        if b0 > 0:
            left = self._recurse(h, ident, colors, 0, b0 - 1)
            if not left.is_pass:
                return left
            bound = max(bound, left.bound or 0)
        if b1 < n - 1:
            right = self._recurse(h, ident, colors, b1 + 1, n - 1)
            if not right.is_pass:
                return right
            bound = max(bound, right.bound or 0)
        return Verdict.passed(bound=bound)

    def _recurse(self, h, ident, colors, lo, hi) -> Verdict:
        part = induced_closed_subgraph(h, ident, lo, hi)
        return self.run(part.graph, colors.relabel(part.vertex_map)).shifted(lo)

    def _solve_small(self, h: DiGraph, colors: ColorAssignment) -> Verdict:
        reds = colors.reds()
        blues = colors.blues()
        if not reds or not blues:
            return Verdict.passed(bound=0)
        v = reds[0] if len(reds) <= len(blues) else blues[0]
        row = min_distance_row(h, v)
        far, dist = farthest_by_min_distance(row, colors.mask(colors[v].opposite))
        if dist == INF:
            return Verdict.infinite((v, far))
        if dist > self.D:
            return Verdict.failed((v, far))
        return Verdict.passed(bound=dist)


def _ranked_colored(g: DiGraph, colors: ColorAssignment):
    if len(colors) != g.n:
        raise GraphError(f"{len(colors)} colors for {g.n} vertices")
    colors.require_both()
    ranked = relabel_by_rank(g, topological_sort(g))
    return ranked, colors.relabel(ranked.vertex_map)


def bichrom_tester(g: DiGraph, colors: ColorAssignment, D: int) -> Verdict:
    """
    Pass => bichromatic min-diameter <= 2D + M (M the largest red-blue edge
    weight); Fail => > D; Infinite => some red-blue pair is unreachable both ways.
    """
    ranked, ranked_colors = _ranked_colored(g, colors)
    M = max_red_blue_weight(g, colors)
    verdict = _BichromRecursion(D, M).run(ranked.graph, ranked_colors)
    return verdict.mapped(ranked.vertex_map)


@dataclass(frozen=True)
class BichromEstimate:
    value: int
    lower: int
    M: int
    m1: int
    probes: Tuple[Tuple[int, VerdictKind], ...] = field(default_factory=tuple)
    mode: str = "bichrom"
    timed_out: bool = False

    @property
    def is_infinite(self) -> bool:
        return self.value == INF

    @property
    def upper(self) -> int:
        return self.value

    def ratio_bound(self) -> Optional[float]:
        """Guaranteed value / optimum ratio, 2 + M / lower."""
        if self.is_infinite or self.lower <= 0:
            return None
        return 2 + self.M / self.lower


def approx_bichrom(g: DiGraph, colors: ColorAssignment,
                   timeout_ms: Optional[int] = None) -> BichromEstimate:
    """Binary search over D in [0, M1 * (n - 1)] with the recursive tester."""
    ranked, ranked_colors = _ranked_colored(g, colors)
    M = max_red_blue_weight(g, colors)
    m1 = max_weight(g)
    if not is_weakly_connected(g):
        logger.info("Graph is not weakly connected; bichromatic min-diameter is infinite")
        return BichromEstimate(INF, INF, M, m1)

    deadline = None if timeout_ms is None else time.monotonic() + timeout_ms / 1000
    top = m1 * (g.n - 1)
    lo, hi = -1, top + 1
    best: Optional[Verdict] = None
    probes: List[Tuple[int, VerdictKind]] = []
    while hi - lo > 1:
        D = (lo + hi) // 2
        verdict = _BichromRecursion(D, M).run(ranked.graph, ranked_colors)
        probes.append((D, verdict.kind))
        logger.info(f"Bichromatic probe D={D}: {verdict.kind.value}")
        if verdict.kind is VerdictKind.INFINITE:
            return BichromEstimate(INF, INF, M, m1, tuple(probes))
        if verdict.is_pass:
            hi, best = D, verdict
        else:
            lo = D
        if deadline is not None and hi - lo > 1 and time.monotonic() > deadline:
            logger.warning(f"Time limit reached after {len(probes)} probes; returning partial estimate "
                           f"with D in ({lo}, {hi}]")
            break

    timed_out = hi - lo > 1
    if best is None and not timed_out:
        return BichromEstimate(INF, INF, M, m1, tuple(probes))
    if best is None:
        return BichromEstimate(INF, lo + 1, M, m1, tuple(probes), timed_out=True)
    return BichromEstimate(best.bound, lo + 1, M, m1, tuple(probes), timed_out=timed_out)


def _monochromatic_blocks(colors: ColorAssignment) -> List[Tuple[int, int]]:
    blocks = []
    start = 0
    for v in range(1, len(colors) + 1):
        if v == len(colors) or colors[v] is not colors[start]:
            blocks.append((start, v - 1))
            start = v
    return blocks


def _reached_within(h: DiGraph, sources: Sequence[int], lo: int, hi: int, forward: bool) -> List[bool]:
    """BFS restricted to ids lo..hi; entry i tells whether lo + i was reached."""
    seen = [False] * (hi - lo + 1)
    stack = list(sources)
    for s in stack:
        seen[s - lo] = True
    nbrs = h.out_targets if forward else h.in_sources
    while stack:
        u = stack.pop()
        for v in nbrs[u]:
            if lo <= v <= hi and not seen[v - lo]:
                seen[v - lo] = True
                stack.append(v)
    return seen


def dag_bichrom_finite(g: DiGraph, colors: ColorAssignment,
                       order: Optional[TopoOrder] = None) -> bool:
    """Whether every red-blue pair of a DAG has a directed path one way or the other."""
    colors.require_both()
    order = order or topological_sort(g)
    ranked = relabel_by_rank(g, order)
    h, c = ranked.graph, colors.relabel(ranked.vertex_map)
    blocks = _monochromatic_blocks(c)

    for k in range(len(blocks) - 1):
        s0, e0 = blocks[k]
        s1, e1 = blocks[k + 1]
        color = c[s0]

        sources = [b for b in range(s1, e1 + 1)
                   if not any(s1 <= u <= e1 for u in h.in_sources[b])]
        source_set = set(sources)
        adjacent_to_all = [a for a in range(s0, e0 + 1)
                           if len(source_set.intersection(h.out_targets[a])) == len(source_set)]
        if not all(_reached_within(h, adjacent_to_all, s0, e0, forward=False)):
            logger.debug(f"Block {k}: some vertex cannot reach all of block {k + 1}")
            return False

        lo = s0 - 1 if k > 0 else s0
        hi = e1 + 1 if k + 2 < len(blocks) else e1
        if k > 0:
            reached = _reached_within(h, [lo], lo, hi, forward=True)
            if any(not reached[v - lo] for v in range(lo, hi + 1) if c[v] is color):
                return False
        if k + 2 < len(blocks):
            reaching = _reached_within(h, [hi], lo, hi, forward=False)
            if any(not reaching[v - lo] for v in range(lo, hi + 1) if c[v] is not color):
                return False
    return True


def bichrom_finite(g: DiGraph, colors: ColorAssignment) -> bool:
    """Finiteness for general digraphs via the condensation."""
    if len(colors) != g.n:
        raise GraphError(f"{len(colors)} colors for {g.n} vertices")
    colors.require_both()
    condensed = scc_condense(g, colors)
    return dag_bichrom_finite(condensed.graph, condensed.colors)
