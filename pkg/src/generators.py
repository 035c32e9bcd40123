"""
Instance generation: OV instances, lower-bound gadget graphs with their
certified diameters, and random weakly-connected DAGs and digraphs.

Every generator is a deterministic function of its parameters and seed.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

try:
    from .errors import BadDimension, InfeasibleParams
    from .graph_core import Color, ColorAssignment, DiGraph, build_graph
except ImportError:
    from errors import BadDimension, InfeasibleParams
    from graph_core import Color, ColorAssignment, DiGraph, build_graph

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class OvInstance:
    A: Tuple[Vector, ...]
    B: Tuple[Vector, ...]
    planted: bool
    d: int


@dataclass(frozen=True)
class Certificate:
    """Exact diameter claims of a gadget: yes_bound with an orthogonal pair, no_bound without."""
    yes_bound: int
    no_bound: int
    t: Optional[int] = None

    def expected(self, orthogonal: bool) -> int:
        return self.yes_bound if orthogonal else self.no_bound


@dataclass(frozen=True)
class GadgetGraph:
    graph: DiGraph
    colors: Optional[ColorAssignment]
    certificate: Certificate
    kind: str
    orthogonal: bool

    @property
    def expected_diameter(self) -> int:
        return self.certificate.expected(self.orthogonal)


def default_dimension(n: int) -> int:
    return max(2, math.ceil(2 * math.log2(max(n, 2))))


def gen_ov(n: int, d: Optional[int] = None, planted: bool = False, seed: int = 0) -> OvInstance:
    """
    n vectors per side. Ordinary vectors have bits 0 and 1 set, so no pair
    among them is orthogonal. A planted pair is a = (1, 0, ...) and
    b = (0, 1, ...) with b zero wherever a is one.
    """
    if n < 1:
        raise InfeasibleParams(f"need at least one vector per side, got n={n}")
    d = default_dimension(n) if d is None else d
    if d < 2:
        raise BadDimension(f"dimension must be at least 2, got {d}")

    rng = np.random.default_rng(seed)

    def ordinary() -> np.ndarray:
        bits = rng.integers(0, 2, size=d)
        bits[0] = bits[1] = 1
        return bits

    A = [ordinary() for _ in range(n)]
    B = [ordinary() for _ in range(n)]
    if planted:
        a = rng.integers(0, 2, size=d)
        a[0], a[1] = 1, 0
        b = rng.integers(0, 2, size=d) * (1 - a)
        b[0], b[1] = 0, 1
        A[int(rng.integers(0, n))] = a
        B[int(rng.integers(0, n))] = b

    return OvInstance(
        A=tuple(tuple(int(x) for x in v) for v in A),
        B=tuple(tuple(int(x) for x in v) for v in B),
        planted=planted,
        d=d,
    )


def has_orthogonal_pair(A: Sequence[Vector], B: Sequence[Vector]) -> bool:
    if not A or not B:
        return False
    return bool(np.any(np.asarray(A) @ np.asarray(B).T == 0))


def single_set_transform(ov: OvInstance) -> Tuple[Vector, ...]:
    """Append 10 to A and 01 to B, so only cross pairs can be orthogonal."""
    return tuple(v + (1, 0) for v in ov.A) + tuple(v + (0, 1) for v in ov.B)


def _active_indices(vectors: Sequence[Vector]) -> List[int]:
    if not vectors:
        return []
    return np.nonzero(np.asarray(vectors).any(axis=0))[0].tolist()


def gen_mindiam_lb(ov: Union[OvInstance, Sequence[Vector]], t: int) -> GadgetGraph:
    """
    Cyclic gadget for min-diameter: layers A_1..A_t of the single vector set,
    index vertices x_j, edges a_1 -> x_j and x_j -> a_t for a[j] = 1, chains
    a_i -> a_{i-1}, and A_2 -> I complete.

    Min-diameter is 2t+1 with an orthogonal pair and t+1 otherwise.
    """
    vectors = single_set_transform(ov) if isinstance(ov, OvInstance) else tuple(map(tuple, ov))
    n = len(vectors)
    if t < 2:
        raise InfeasibleParams(f"gadget needs t >= 2 (layer A_2 must exist), got t={t}")
    if n < 2 ** t:
        raise InfeasibleParams(f"gadget needs at least 2^t = {2 ** t} vectors, got {n}")

    active = _active_indices(vectors)
    index_id = {j: t * n + i for i, j in enumerate(active)}

    def layer(i: int, a: int) -> int:
        return (i - 1) * n + a

    edges = []
    for a, vec in enumerate(vectors):
        for j in active:
            if vec[j]:
                edges.append((layer(1, a), index_id[j], 1))
                edges.append((index_id[j], layer(t, a), 1))
            edges.append((layer(2, a), index_id[j], 1))
        for i in range(2, t + 1):
            edges.append((layer(i, a), layer(i - 1, a), 1))

    graph = build_graph(t * n + len(active), edges, weighted=False)
    orthogonal = has_orthogonal_pair(vectors, vectors)
    logger.debug(f"mindiam gadget: t={t}, {graph.n} vertices, {graph.m} edges, orthogonal={orthogonal}")
    return GadgetGraph(graph, None, Certificate(2 * t + 1, t + 1, t), "mindiam", orthogonal)


def gen_bichrom_dag_lb(ov: OvInstance, t: int) -> GadgetGraph:
    """
    Layered DAG for bichromatic min-diameter: red A; blue index layers
    I_0..I_t and vector layers B_1..B_t; A -> I_0 complete, matchings along
    I and B, a -> v_{t,j} for a[j] = 1 and v_{t,j} -> b_1 for b[j] = 1.

    Bichromatic min-diameter is 2t+1 with an orthogonal pair, at most t+1 otherwise.
    """
    if t < 1:
        raise InfeasibleParams(f"t must be at least 1, got {t}")
    nA, nB = len(ov.A), len(ov.B)
    active = _active_indices(ov.A + ov.B)
    width = len(active)

    def b_id(i: int, b: int) -> int:
        return nA + (i - 1) * nB + b

    def v_id(i: int, j: int) -> int:
        return nA + t * nB + i * width + j

    edges = []
    for a, vec in enumerate(ov.A):
        for jj, j in enumerate(active):
            edges.append((a, v_id(0, jj), 1))
            if vec[j]:
                edges.append((a, v_id(t, jj), 1))
    for i in range(t):
        for jj in range(width):
            edges.append((v_id(i, jj), v_id(i + 1, jj), 1))
    for b, vec in enumerate(ov.B):
        for jj, j in enumerate(active):
            if vec[j]:
                edges.append((v_id(t, jj), b_id(1, b), 1))
        for i in range(1, t):
            edges.append((b_id(i, b), b_id(i + 1, b), 1))

    n = nA + t * nB + (t + 1) * width
    colors = ColorAssignment((Color.RED,) * nA + (Color.BLUE,) * (n - nA))
    graph = build_graph(n, edges, weighted=False)
    return GadgetGraph(graph, colors, Certificate(2 * t + 1, t + 1, t), "bichrom-dag",
                       has_orthogonal_pair(ov.A, ov.B))


def gen_bichrom_unweighted_lb(ov: OvInstance) -> GadgetGraph:
    """
    Red A, blue B, I and x; a -> i iff a[i] = 1, i -> b iff b[i] = 1,
    I -> x and x -> A complete. Diameter at least 5 with an orthogonal pair, 2 otherwise.
    """
    nA, nB = len(ov.A), len(ov.B)
    active = _active_indices(ov.A + ov.B)
    i_base = nA + nB
    x = i_base + len(active)

    edges = []
    for jj, j in enumerate(active):
        for a, vec in enumerate(ov.A):
            if vec[j]:
                edges.append((a, i_base + jj, 1))
        for b, vec in enumerate(ov.B):
            if vec[j]:
                edges.append((i_base + jj, nA + b, 1))
        edges.append((i_base + jj, x, 1))
    edges.extend((x, a, 1) for a in range(nA))

    n = x + 1
    colors = ColorAssignment((Color.RED,) * nA + (Color.BLUE,) * (n - nA))
    graph = build_graph(n, edges, weighted=False)
    return GadgetGraph(graph, colors, Certificate(5, 2), "bichrom-unweighted",
                       has_orthogonal_pair(ov.A, ov.B))


def gen_bichrom_weighted_lb(ov: OvInstance, t: int) -> GadgetGraph:
    """
    Red A, blue B and I; a -> i weight t iff a[i] = 1, i -> b weight 1 iff
    b[i] = 1, i -> a weight t+1 for every pair. At least 3t+2 with an
    orthogonal pair, at most t+1 otherwise.
    """
    if t < 1:
        raise InfeasibleParams(f"t must be at least 1, got {t}")
    nA, nB = len(ov.A), len(ov.B)
    active = _active_indices(ov.A + ov.B)
    i_base = nA + nB

    edges = []
    for jj, j in enumerate(active):
        i = i_base + jj
        for a, vec in enumerate(ov.A):
            if vec[j]:
                edges.append((a, i, t))
            edges.append((i, a, t + 1))
        for b, vec in enumerate(ov.B):
            if vec[j]:
                edges.append((i, nA + b, 1))

    n = i_base + len(active)
    colors = ColorAssignment((Color.RED,) * nA + (Color.BLUE,) * (n - nA))
    graph = build_graph(n, edges, weighted=True)
    return GadgetGraph(graph, colors, Certificate(3 * t + 2, t + 1, t), "bichrom-weighted",
                       has_orthogonal_pair(ov.A, ov.B))


def _sample_pairs(rng: np.random.Generator, total: int, need: int, taken: set,
                  candidates_fn, draw_fn) -> None:
    """
    Add `need` fresh pairs to taken out of `total` possible ones.

    Rejection sampling when sparse; candidates_fn enumerates all pairs only
    when at least half of the free slots get filled.
    """
    if need <= 0:
        return
    free = total - len(taken)
    if need > free:
        raise InfeasibleParams(f"cannot place {need} more edges, only {free} slots left")
    if need * 2 > free:
        pool = [p for p in candidates_fn() if p not in taken]
        for idx in sorted(rng.choice(len(pool), size=need, replace=False).tolist()):
            taken.add(pool[idx])
        return
    while need:
        pair = draw_fn()
        if pair is not None and pair not in taken:
            taken.add(pair)
            need -= 1


def _colors_for(rng: np.random.Generator, n: int, red_fraction: float,
                by_rank: Optional[np.ndarray] = None) -> ColorAssignment:
    if by_rank is not None:
        reds = min(max(int(round(n * red_fraction)), 1), n - 1) if n >= 2 else n
        red = np.zeros(n, dtype=bool)
        red[by_rank[:reds]] = True
    else:
        red = rng.random(n) < red_fraction
        if n >= 2 and red.all():
            red[0] = False
        elif n >= 2 and not red.any():
            red[0] = True
    return ColorAssignment(tuple(Color.RED if r else Color.BLUE for r in red))


def gen_random_dag(n: int, m: int, seed: int, max_weight: int = 1, red_fraction: float = 0.5,
                   separated: bool = False, spine: bool = False) -> Tuple[DiGraph, ColorAssignment]:
    """
    Weakly connected DAG whose edges follow a random permutation.

    A random tree over the permutation guarantees weak connectivity; the
    remaining edges are sampled uniformly. spine=True uses the Hamiltonian
    path along the permutation instead of a random tree, which makes every
    pair comparable (finite min-diameter). separated=True colors the first
    ranks of the permutation red and the rest blue.
    """
    if n < 1:
        raise InfeasibleParams(f"n must be positive, got {n}")
    if m < n - 1 or m > n * (n - 1) // 2:
        raise InfeasibleParams(f"m={m} outside [{n - 1}, {n * (n - 1) // 2}] for n={n}")
    if max_weight < 1:
        raise InfeasibleParams(f"max_weight must be at least 1, got {max_weight}")

    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    taken = set()
    for i in range(1, n):
        taken.add((i - 1, i) if spine else (int(rng.integers(0, i)), i))

    def all_pairs():
        return [(i, j) for i in range(n) for j in range(i + 1, n)]

    def draw():
        i, j = rng.integers(0, n, size=2).tolist()
        return (min(i, j), max(i, j)) if i != j else None

    _sample_pairs(rng, n * (n - 1) // 2, m - len(taken), taken, all_pairs, draw)

    ranked = sorted(taken)
    weights = rng.integers(1, max_weight + 1, size=len(ranked)).tolist()
    edges = [(int(perm[i]), int(perm[j]), w) for (i, j), w in zip(ranked, weights)]
    graph = build_graph(n, edges, weighted=max_weight > 1)
    colors = _colors_for(rng, n, red_fraction, by_rank=perm if separated else None)
    return graph, colors


def gen_random_digraph(n: int, m: int, seed: int, max_weight: int = 1,
                       red_fraction: float = 0.5,
                       cycle_bias: float = 0.3) -> Tuple[DiGraph, ColorAssignment]:
    """
    Weakly connected digraph; each edge points against a hidden random order
    with probability cycle_bias, so cycle_bias=0 yields a DAG.
    """
    if n < 1:
        raise InfeasibleParams(f"n must be positive, got {n}")
    both_ways = 0 < cycle_bias < 1
    limit = n * (n - 1) if both_ways else n * (n - 1) // 2
    if m < n - 1 or m > limit:
        raise InfeasibleParams(f"m={m} outside [{n - 1}, {limit}] for n={n}")

    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)

    def orient(i: int, j: int):
        return (j, i) if rng.random() < cycle_bias else (i, j)

    taken = set()
    for j in range(1, n):
        taken.add(orient(int(rng.integers(0, j)), j))

    def all_pairs():
        forward = [(i, j) for i in range(n) for j in range(i + 1, n)]
        if cycle_bias >= 1:
            return [(j, i) for i, j in forward]
        if both_ways:
            forward += [(j, i) for i, j in forward]
        return forward

    def draw():
        i, j = rng.integers(0, n, size=2).tolist()
        if i == j:
            return None
        return orient(min(i, j), max(i, j))

    _sample_pairs(rng, limit, m - len(taken), taken, all_pairs, draw)

    ranked = sorted(taken)
    weights = rng.integers(1, max_weight + 1, size=len(ranked)).tolist()
    edges = [(int(perm[i]), int(perm[j]), w) for (i, j), w in zip(ranked, weights)]
    graph = build_graph(n, edges, weighted=max_weight > 1)
    return graph, _colors_for(rng, n, red_fraction)
