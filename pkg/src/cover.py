"""
Greedy hitting sets and (k, (d_out, d_in))-neighborhood covers.
"""

import heapq
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

try:
    from .graph_core import DiGraph, TopoOrder
except ImportError:
    from graph_core import DiGraph, TopoOrder

logger = logging.getLogger(__name__)

Ball = Tuple[Tuple[int, int], ...]

# |S| <= COVER_SIZE_CONSTANT * (n / k) * ln n
COVER_SIZE_CONSTANT = 4


def greedy_hitting_set(sets: Sequence[Sequence[int]], n: int) -> List[int]:
    """
    Repeatedly take the vertex in the most uncovered sets (smallest id on ties).

    Returns the chosen vertices sorted.
    """
    membership: Dict[int, List[int]] = {}
    for i, members in enumerate(sets):
        if not members:
            raise ValueError(f"set {i} is empty and cannot be hit")
        for v in set(members):
            membership.setdefault(v, []).append(i)

    gain = {v: len(ids) for v, ids in membership.items()}
    heap = [(-count, v) for v, count in gain.items()]
    heapq.heapify(heap)
    covered = [False] * len(sets)
    remaining = len(sets)
    chosen: List[int] = []

    while remaining:
        neg, v = heapq.heappop(heap)
        if -neg != gain[v]:
            # stale entry
            heapq.heappush(heap, (-gain[v], v))
            continue
        chosen.append(v)
        for i in membership[v]:
            if covered[i]:
                continue
            covered[i] = True
            remaining -= 1
            for u in set(sets[i]):
                gain[u] -= 1
        gain[v] = 0

    return sorted(chosen)


def _truncated_ball(g: DiGraph, pos: Sequence[int], v: int, d: int, k: int, direction: str) -> Ball:
    # Vertices are settled in rank order (ascending for out, descending for in).
    # Every shortest path inside the ball only visits vertices settled earlier,
    # so a tentative distance is exact once its vertex reaches the heap top.
    adj = g.out_adj if direction == "out" else g.in_adj
    sign = 1 if direction == "out" else -1
    tentative = {v: 0}
    heap: List[Tuple[int, int]] = []
    for u, w in adj[v]:
        if w <= d and w < tentative.get(u, d + 1):
            if u not in tentative:
                heapq.heappush(heap, (sign * pos[u], u))
            tentative[u] = w

    ball: List[Tuple[int, int]] = []
    while heap and len(ball) < k:
        _, u = heapq.heappop(heap)
        du = tentative[u]
        ball.append((u, du))
        for x, w in adj[u]:
            nd = du + w
            if nd <= d and nd < tentative.get(x, d + 1):
                if x not in tentative:
                    heapq.heappush(heap, (sign * pos[x], x))
                tentative[x] = nd
    return tuple(ball)


def truncated_out_ball(g: DiGraph, order: TopoOrder, v: int, d: int, k: int) -> Ball:
    """The k left-most vertices u != v with d(v, u) <= d, with distances, by rank."""
    return _truncated_ball(g, order.pos, v, d, k, "out")


def truncated_in_ball(g: DiGraph, order: TopoOrder, v: int, d: int, k: int) -> Ball:
    """The k right-most vertices u != v with d(u, v) <= d, right-most first."""
    return _truncated_ball(g, order.pos, v, d, k, "in")


@dataclass(frozen=True)
class CoverReport:
    n: int
    k: int
    size: int
    size_bound: float
    bound_constant: int = COVER_SIZE_CONSTANT


@dataclass(frozen=True)
class NeighborhoodCover:
    """
    Hitting set S plus truncated neighborhoods.

    out_nbhd[v] lists (vertex, d(v, vertex)) left-most first and stops at the
    first member of S; in_nbhd[v] lists right-most first and stops at the
    first member of S. Vertices that were not sources have empty entries.
    """
    S: Tuple[int, ...]
    S_set: frozenset
    d_out: int
    d_in: int
    k: int
    out_nbhd: Dict[int, Ball]
    in_nbhd: Dict[int, Ball]
    report: CoverReport

    @property
    def thresholds(self) -> Tuple[int, int]:
        return self.d_out, self.d_in

    def out_hit(self, v: int) -> Optional[int]:
        """The S-member that truncated v's out-neighborhood, if any."""
        ball = self.out_nbhd.get(v, ())
        if ball and ball[-1][0] in self.S_set:
            return ball[-1][0]
        return None

    def in_hit(self, v: int) -> Optional[int]:
        ball = self.in_nbhd.get(v, ())
        if ball and ball[-1][0] in self.S_set:
            return ball[-1][0]
        return None


def _truncate(ball: Ball, hitters: frozenset) -> Ball:
    for i, (u, _) in enumerate(ball):
        if u in hitters:
            return ball[:i + 1]
    return ball


def clamp_cap(k: float, n: int) -> int:
    return max(1, min(int(math.floor(k)), max(n, 1)))


def build_cover(g: DiGraph, order: TopoOrder, d_out: int, d_in: int, k: float,
                sources: Optional[Iterable[int]] = None) -> NeighborhoodCover:
    """
    Build a (k, (d_out, d_in))-neighborhood cover of a DAG.

    sources limits which vertices get neighborhoods (all vertices by default);
    the hitting guarantee then holds for those vertices only.
    """
    k = clamp_cap(k, g.n)
    source_list = list(range(g.n)) if sources is None else list(sources)

    out_balls = {v: truncated_out_ball(g, order, v, d_out, k) for v in source_list}
    in_balls = {v: truncated_in_ball(g, order, v, d_in, k) for v in source_list}

    full = [[u for u, _ in ball] for ball in out_balls.values() if len(ball) == k]
    full += [[u for u, _ in ball] for ball in in_balls.values() if len(ball) == k]
    S = tuple(greedy_hitting_set(full, g.n)) if full else ()
    S_set = frozenset(S)

    out_nbhd = {v: _truncate(ball, S_set) for v, ball in out_balls.items()}
    in_nbhd = {v: _truncate(ball, S_set) for v, ball in in_balls.items()}

    bound = COVER_SIZE_CONSTANT * (g.n / k) * math.log(g.n) if g.n > 1 else 0.0
    report = CoverReport(n=g.n, k=k, size=len(S), size_bound=bound)
    if len(S) > bound:
        logger.warning(f"Cover size {len(S)} exceeds {bound:.1f} (n={g.n}, k={k})")
    logger.debug(f"Cover built: |S|={len(S)} from {len(full)} full balls "
                 f"(k={k}, d_out={d_out}, d_in={d_in})")
    return NeighborhoodCover(S, S_set, d_out, d_in, k, out_nbhd, in_nbhd, report)
