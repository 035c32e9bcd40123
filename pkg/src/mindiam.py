"""
Min-diameter approximation for unweighted DAGs.

Two modes share one recursive tester skeleton:
  half     cover thresholds (floor(D/2), ceil(D/2)); Pass => diameter <= ceil(3D/2)
  exact32  cover built on the edge-subdivided graph with threshold D in doubled
           units; Pass => diameter <= floor(3D/2)

Every tester works on a graph whose vertex ids equal their topological ranks,
so closed subgraphs are contiguous id ranges and witnesses only need an
offset to be translated back.
"""

import logging
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

try:
    from .cover import Ball, NeighborhoodCover, build_cover
    from .errors import CoverMismatch, GraphError
    from .graph_core import (INF, DiGraph, EdgeMid, SubdivisionMap, TopoOrder,
                             _require_unweighted, farthest_by_min_distance,
                             induced_closed_subgraph, is_weakly_connected, min_distance_row,
                             relabel_by_rank, sssp, subdivide, topological_sort)
except ImportError:
    from cover import Ball, NeighborhoodCover, build_cover
    from errors import CoverMismatch, GraphError
    from graph_core import (INF, DiGraph, EdgeMid, SubdivisionMap, TopoOrder,
                            _require_unweighted, farthest_by_min_distance,
                            induced_closed_subgraph, is_weakly_connected, min_distance_row,
                            relabel_by_rank, sssp, subdivide, topological_sort)

logger = logging.getLogger(__name__)

# Balls larger than this are intersected as int bitsets, smaller ones by sorted merge.
BITSET_MIN_SIZE = 64


class VerdictKind(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INFINITE = "INFINITE"


class Side(str, Enum):
    A = "A"
    B = "B"


class Mode(str, Enum):
    HALF = "half"
    EXACT32 = "exact32"


@dataclass(frozen=True)
class Verdict:
    """
    Tester outcome.

    bound is the upper bound a Pass certifies (the mode's guarantee, or the
    exact diameter when the whole input was solved by the base case).
    """
    kind: VerdictKind
    witness: Optional[Tuple[int, int]] = None
    side: Optional[Side] = None
    bound: Optional[int] = None

    @classmethod
    def passed(cls, bound: Optional[int] = None, side: Optional[Side] = None) -> "Verdict":
        return cls(VerdictKind.PASS, side=side, bound=bound)

    @classmethod
    def failed(cls, witness: Optional[Tuple[int, int]] = None) -> "Verdict":
        return cls(VerdictKind.FAIL, witness=witness)

    @classmethod
    def infinite(cls, witness: Optional[Tuple[int, int]] = None) -> "Verdict":
        return cls(VerdictKind.INFINITE, witness=witness)

    @property
    def is_pass(self) -> bool:
        return self.kind is VerdictKind.PASS

    @property
    def is_fail(self) -> bool:
        return self.kind is VerdictKind.FAIL

    def shifted(self, offset: int) -> "Verdict":
        if self.witness is None or offset == 0:
            return self
        u, v = self.witness
        return replace(self, witness=(u + offset, v + offset))

    def mapped(self, vertex_map: Sequence[int]) -> "Verdict":
        if self.witness is None:
            return self
        u, v = self.witness
        return replace(self, witness=(vertex_map[u], vertex_map[v]))


@dataclass(frozen=True)
class TesterParams:
    k: int
    interval_size: int
    base_case_threshold: int
    audit: bool = False

    def __post_init__(self):
        if self.k < 1 or self.interval_size < 1:
            raise ValueError(f"k and interval_size must be >= 1, got {self.k}, {self.interval_size}")

    @classmethod
    def for_graph(cls, n: int, m: int, mode: Mode = Mode.HALF, k: Optional[int] = None,
                  interval_size: Optional[int] = None,
                  base_case_threshold: Optional[int] = None,
                  audit: bool = False) -> "TesterParams":
        """Fill unset fields from the mode's formulas for an n-vertex m-edge graph."""
        if k is None:
            if mode is Mode.HALF:
                raw = m ** 0.25
            else:
                raw = m ** 0.75 / math.sqrt(n) if n else 1.0
            if raw < 1:
                logger.debug(f"k formula gave {raw:.3f}; clamped to 1")
            k = max(1, int(math.floor(raw)))
        if interval_size is None:
            if mode is Mode.HALF:
                interval_size = k * k
            else:
                interval_size = max(1, (n * k * k) // m) if m else 1
        if base_case_threshold is None:
            base_case_threshold = max(4 * k * k, 16)
        return cls(k=k, interval_size=interval_size,
                   base_case_threshold=base_case_threshold, audit=audit)


@dataclass(frozen=True)
class MinDiamEstimate:
    value: int
    lower: int
    upper: int
    mode: Mode
    probes: Tuple[Tuple[int, VerdictKind], ...] = field(default_factory=tuple)
    timed_out: bool = False

    @property
    def is_infinite(self) -> bool:
        return self.value == INF

    @classmethod
    def infinite(cls, mode: Mode, probes=()) -> "MinDiamEstimate":
        return cls(INF, INF, INF, mode, tuple(probes))


def partition_intervals(n: int, size: int) -> List[range]:
    """Consecutive rank intervals of the given size; the last absorbs the remainder."""
    size = max(1, min(size, n // 2)) if n >= 2 else 1
    count = max(1, n // size)
    intervals = [range(i * size, (i + 1) * size) for i in range(count - 1)]
    intervals.append(range((count - 1) * size, n))
    return intervals


class _BallIndex:
    """Closed truncated balls ({v} plus its neighborhood) ready for intersection."""

    def __init__(self, balls: Dict[int, Ball]):
        self._sorted: Dict[int, Tuple[int, ...]] = {}
        self._masks: Dict[int, int] = {}
        for v, ball in balls.items():
            members = tuple(sorted({v, *(u for u, _ in ball)}))
            self._sorted[v] = members
            if len(members) > BITSET_MIN_SIZE:
                mask = 0
                for u in members:
                    mask |= 1 << u
                self._masks[v] = mask

    def members(self, v: int) -> Tuple[int, ...]:
        return self._sorted.get(v, (v,))

    def intersects(self, other: "_BallIndex", a: int, b: int) -> bool:
        mask_a, mask_b = self._masks.get(a), other._masks.get(b)
        if mask_a is not None and mask_b is not None:
            return (mask_a & mask_b) != 0
        if mask_b is not None:
            return any((mask_b >> u) & 1 for u in self.members(a))
        if mask_a is not None:
            return any((mask_a >> u) & 1 for u in other.members(b))
        xs, ys = self.members(a), other.members(b)
        i = j = 0
        while i < len(xs) and j < len(ys):
            if xs[i] == ys[j]:
                return True
            if xs[i] < ys[j]:
                i += 1
            else:
                j += 1
        return False


def _check_thresholds(cover: NeighborhoodCover, expected: Tuple[int, int]):
    if cover.thresholds != expected:
        raise CoverMismatch(expected, cover.thresholds)


def _pairs_core(a_verts: Sequence[int], b_verts: Sequence[int], pos: Sequence[int],
                cover: NeighborhoodCover) -> Verdict:
    outs = _BallIndex({a: cover.out_nbhd.get(a, ()) for a in a_verts})
    ins = _BallIndex({b: cover.in_nbhd.get(b, ()) for b in b_verts})

    # left-most rank of a truncated in-neighborhood that contains an S-member
    in_escape = {}
    for b in b_verts:
        if cover.in_hit(b) is not None:
            in_escape[b] = pos[cover.in_nbhd[b][-1][0]]
    out_escape = {}
    for a in a_verts:
        if cover.out_hit(a) is not None:
            out_escape[a] = pos[cover.out_nbhd[a][-1][0]]

    for a in a_verts:
        pos_a = pos[a]
        escape_a = out_escape.get(a)
        for b in b_verts:
            if outs.intersects(ins, a, b):
                continue
            escape_b = in_escape.get(b)
            if escape_b is not None and pos_a < escape_b:
                continue
            if escape_a is not None and pos[b] > escape_a:
                continue
            logger.debug(f"All-pairs tester failed on ({a}, {b})")
            return Verdict.failed((a, b))
    return Verdict.passed()


def _ranks_to_vertices(order: TopoOrder, interval) -> List[int]:
    return [order.order[r] for r in interval]


def all_pairs_tester(g: DiGraph, order: TopoOrder, A: range, B: range, D: int,
                     cover: NeighborhoodCover) -> Verdict:
    """
    Check every a in A against every b in B (A, B are rank intervals, A before B).

    Pass => d_min(a, b) <= ceil(3D/2) for all pairs; Fail => min-diameter > D.
    """
    _check_thresholds(cover, (D // 2, (D + 1) // 2))
    return _pairs_core(_ranks_to_vertices(order, A), _ranks_to_vertices(order, B),
                       order.pos, cover)


class _Probe:
    """Cached min-eccentricity lookups (farthest vertex, distance) in one graph."""

    def __init__(self, g: DiGraph):
        self.g = g
        self._cache: Dict[int, Tuple[int, int]] = {}

    def __call__(self, v: int) -> Tuple[int, int]:
        hit = self._cache.get(v)
        if hit is None:
            hit = farthest_by_min_distance(min_distance_row(self.g, v))
            self._cache[v] = hit
        return hit


def _directional_core(a_verts: Sequence[int], last_b_pos: int, pos: Sequence[int],
                      cover: NeighborhoodCover, D: int,
                      probe_targets: Callable[[int], Sequence[int]],
                      probe: _Probe) -> Verdict:
    for a in a_verts:
        hit = cover.out_hit(a)
        if hit is not None and pos[hit] <= last_b_pos:
            continue
        for v in (a, *(u for u, _ in cover.out_nbhd.get(a, ()))):
            for t in probe_targets(v):
                far, dist = probe(t)
                if dist > D:
                    logger.debug(f"Directional tester: eccentricity of {t} is {dist} > {D}")
                    return Verdict.failed((t, far))
        return Verdict.passed(side=Side.B)
    return Verdict.passed(side=Side.A)


def directional_tester(g: DiGraph, order: TopoOrder, A: range, B: range, D: int,
                       cover: NeighborhoodCover, probe: Optional[_Probe] = None) -> Verdict:
    """
    Certify one side against everything beyond the other.

    Pass with side A => d(a, v) <= ceil(3D/2) for a in A and v right of B.
    Pass with side B => d(v, b) <= ceil(3D/2) for b in B and v left of A.
    """
    _check_thresholds(cover, (D // 2, (D + 1) // 2))
    if not len(A):
        return Verdict.passed(side=Side.A)
    last_b_pos = max(order.pos[v] for v in _ranks_to_vertices(order, B)) if len(B) else -1
    return _directional_core(_ranks_to_vertices(order, A), last_b_pos, order.pos, cover, D,
                             lambda v: (v,), probe or _Probe(g))


def all_pairs_tester_exact(sub: SubdivisionMap, order: TopoOrder, A: range, B: range, D: int,
                           cover: NeighborhoodCover) -> Verdict:
    """
    All-pairs tester on the subdivided graph.

    A and B are rank intervals of the original graph, whose ids are ranks;
    order is the extended order of the subdivided graph and cover has
    threshold D (doubled units) both ways.
    """
    _check_thresholds(cover, (D, D))
    return _pairs_core(list(A), list(B), order.pos, cover)


def directional_tester_exact(g: DiGraph, sub: SubdivisionMap, order: TopoOrder, A: range,
                             B: range, D: int, cover: NeighborhoodCover,
                             probe: Optional[_Probe] = None) -> Verdict:
    """Directional tester on the subdivided graph; midpoints v_{x,y} probe y in g."""
    _check_thresholds(cover, (D, D))
    if not len(A):
        return Verdict.passed(side=Side.A)
    last_b_pos = order.pos[B[-1]] if len(B) else -1

    def targets(v: int):
        origin = sub.origin(v)
        return (origin.y,) if isinstance(origin, EdgeMid) else (v,)

    return _directional_core(list(A), last_b_pos, order.pos, cover, D, targets,
                             probe or _Probe(g))


def _solve_exactly(h: DiGraph, D: int) -> Verdict:
    """Exact check on a rank-labelled DAG: d_min(u, v) = d(u, v) for u < v."""
    worst = 0
    for u in range(h.n - 1):
        row = sssp(h, u, "out")[u + 1:]
        far = int(row.argmax())
        dist = int(row[far])
        if dist > D:
            return Verdict.failed((u, u + 1 + far))
        worst = max(worst, dist)
    return Verdict.passed(bound=worst)


def _check_eccentricities(probe: _Probe, vertices, D: int) -> Optional[Verdict]:
    for s in vertices:
        far, dist = probe(s)
        if dist > D:
            logger.debug(f"Cover vertex {s} has eccentricity {dist} > {D}")
            return Verdict.failed((s, far))
    return None


def _audit_engulfed(h: DiGraph, engulfed: range, others: range, bound: int, forward: bool):
    for x in engulfed:
        if forward:
            row = sssp(h, x, "out")
        else:
            row = sssp(h, x, "in")
        worst = int(row[others.start:others.stop].max()) if len(others) else 0
        if worst > bound:
            raise AssertionError(
                f"amoeba invariant broken: vertex {x} is {worst} > {bound} from the opposite half"
            )


class _RecursiveTester:
    """Shared recursion: base case, per-level checks, amoeba sweep, halves."""

    def __init__(self, D: int, params: TesterParams, mode: Mode):
        self.D = D
        self.params = params
        self.mode = mode
        self.cross_bound = (3 * D + 1) // 2 if mode is Mode.HALF else (3 * D) // 2

    def run(self, h: DiGraph) -> Verdict:
        if h.n <= max(self.params.base_case_threshold, 1):
            return _solve_exactly(h, self.D)

        level = self._prepare(h)
        if isinstance(level, Verdict):
            return level
        pair_test, directional = level

        intervals = partition_intervals(h.n, self.params.interval_size)
        half = len(intervals) // 2
        left_span = range(0, intervals[half].start)
        right_span = range(intervals[half].start, h.n)
        i, j = half - 1, half
        while i >= 0 and j < len(intervals):
            A, B = intervals[i], intervals[j]
            verdict = pair_test(A, B)
            if verdict.is_fail:
                return verdict
            verdict = directional(A, B)
            if verdict.is_fail:
                return verdict
            if verdict.side is Side.A:
                if self.params.audit:
                    _audit_engulfed(h, A, right_span, self.cross_bound, forward=True)
                i -= 1
            else:
                if self.params.audit:
                    _audit_engulfed(h, B, left_span, self.cross_bound, forward=False)
                j += 1

        split = right_span.start
        left = self.run(induced_closed_subgraph(h, TopoOrder.identity(h.n), 0, split - 1).graph)
        if left.is_fail:
            return left
        right = self.run(induced_closed_subgraph(h, TopoOrder.identity(h.n), split, h.n - 1).graph)
        if right.is_fail:
            return right.shifted(split)
        return Verdict.passed(bound=max(self.cross_bound, left.bound or 0, right.bound or 0))

    def _prepare(self, h: DiGraph):
        D, k = self.D, self.params.k
        ident = TopoOrder.identity(h.n)
        probe = _Probe(h)

        if self.mode is Mode.HALF:
            cover = build_cover(h, ident, D // 2, (D + 1) // 2, k)
            failed = _check_eccentricities(probe, cover.S, D)
            if failed:
                return failed
            return (lambda A, B: all_pairs_tester(h, ident, A, B, D, cover),
                    lambda A, B: directional_tester(h, ident, A, B, D, cover, probe))

        sub = subdivide(h)
        order2 = sub.extend_order(ident)
        cover = build_cover(sub.graph, order2, D, D, k, sources=range(h.n))
        landmarks = set()
        for s in cover.S:
            origin = sub.origin(s)
            if isinstance(origin, EdgeMid):
                landmarks.update((origin.x, origin.y))
            else:
                landmarks.add(s)
        failed = _check_eccentricities(probe, sorted(landmarks), D)
        if failed:
            return failed
        return (lambda A, B: all_pairs_tester_exact(sub, order2, A, B, D, cover),
                lambda A, B: directional_tester_exact(h, sub, order2, A, B, D, cover, probe))


def _ranked(g: DiGraph):
    _require_unweighted(g)
    return relabel_by_rank(g, topological_sort(g))


def full_tester(g: DiGraph, D: int, params: Optional[TesterParams] = None) -> Verdict:
    """Pass => min-diameter <= ceil(3D/2); Fail => min-diameter > D."""
    ranked = _ranked(g)
    params = params or TesterParams.for_graph(g.n, g.m, Mode.HALF)
    return _RecursiveTester(D, params, Mode.HALF).run(ranked.graph).mapped(ranked.vertex_map)


def full_tester_exact32(g: DiGraph, D: int, params: Optional[TesterParams] = None) -> Verdict:
    """Pass => min-diameter <= floor(3D/2); Fail => min-diameter > D."""
    ranked = _ranked(g)
    params = params or TesterParams.for_graph(g.n, g.m, Mode.EXACT32)
    return _RecursiveTester(D, params, Mode.EXACT32).run(ranked.graph).mapped(ranked.vertex_map)


def _deadline(timeout_ms: Optional[int]) -> Optional[float]:
    return None if timeout_ms is None else time.monotonic() + timeout_ms / 1000


def _binary_search(g: DiGraph, mode: Mode, params: Optional[TesterParams],
                   timeout_ms: Optional[int] = None) -> MinDiamEstimate:
    if g.n < 2:
        raise GraphError("min-diameter needs at least two vertices")
    ranked = _ranked(g)
    if not is_weakly_connected(g):
        logger.info("Graph is not weakly connected; min-diameter is infinite")
        return MinDiamEstimate.infinite(mode)

    params = params or TesterParams.for_graph(g.n, g.m, mode)
    logger.info(f"Binary search ({mode.value}) on n={g.n}, m={g.m} with {params}")

    deadline = _deadline(timeout_ms)
    probes: List[Tuple[int, VerdictKind]] = []
    lo, hi = 0, g.n
    best: Optional[Verdict] = None
    while hi - lo > 1:
        D = (lo + hi) // 2
        verdict = _RecursiveTester(D, params, mode).run(ranked.graph)
        probes.append((D, verdict.kind))
        logger.info(f"Probe D={D}: {verdict.kind.value}")
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
        return MinDiamEstimate.infinite(mode, probes)
    if best is None:
        return MinDiamEstimate(INF, lo + 1, INF, mode, tuple(probes), timed_out=True)
    value = best.bound
    return MinDiamEstimate(value=value, lower=lo + 1, upper=value, mode=mode,
                           probes=tuple(probes), timed_out=timed_out)


def approx_mindiam_half(g: DiGraph, params: Optional[TesterParams] = None,
                        timeout_ms: Optional[int] = None) -> MinDiamEstimate:
    """Estimate v with D* <= v <= ceil(3D*/2)."""
    return _binary_search(g, Mode.HALF, params, timeout_ms)


def approx_mindiam_exact32(g: DiGraph, params: Optional[TesterParams] = None,
                           timeout_ms: Optional[int] = None) -> MinDiamEstimate:
    """Estimate v with D* <= v and 2v <= 3D*."""
    return _binary_search(g, Mode.EXACT32, params, timeout_ms)


def approx_mindiam(g: DiGraph, mode: Mode = Mode.HALF,
                   params: Optional[TesterParams] = None,
                   timeout_ms: Optional[int] = None) -> MinDiamEstimate:
    return _binary_search(g, Mode(mode), params, timeout_ms)
