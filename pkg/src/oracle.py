"""
Exact ground truth by exhaustive shortest paths.
"""

import logging
from dataclasses import dataclass

import numpy as np

try:
    from .errors import GraphError, OracleTooLarge
    from .graph_core import INF, ColorAssignment, DiGraph, min_distance_row, sssp
except ImportError:
    from errors import GraphError, OracleTooLarge
    from graph_core import INF, ColorAssignment, DiGraph, min_distance_row, sssp

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_MAX_N = 2000


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """d[u, v] = shortest-path distance from u to v (INF if unreachable)."""
    d: np.ndarray

    @property
    def n(self) -> int:
        return int(self.d.shape[0])

    def __getitem__(self, key):
        return self.d[key]

    def min_distances(self) -> np.ndarray:
        return np.minimum(self.d, self.d.T)


def _guard(g: DiGraph, max_n: int):
    if g.n > max_n:
        logger.warning(f"Oracle refused a graph with n={g.n} (cap {max_n})")
        raise OracleTooLarge(g.n, max_n)


def apsp(g: DiGraph, max_n: int = DEFAULT_ORACLE_MAX_N) -> DistanceMatrix:
    _guard(g, max_n)
    d = np.empty((g.n, g.n), dtype=np.int64)
    for u in range(g.n):
        d[u] = sssp(g, u, "out")
    return DistanceMatrix(d)


def exact_min_diameter(g: DiGraph, max_n: int = DEFAULT_ORACLE_MAX_N) -> int:
    """Largest d_min over unordered pairs."""
    if g.n < 2:
        raise GraphError("min-diameter needs at least two vertices")
    return int(apsp(g, max_n).min_distances().max())


def exact_bichrom_min_diameter(g: DiGraph, colors: ColorAssignment,
                               max_n: int = DEFAULT_ORACLE_MAX_N) -> int:
    """Largest d_min over red-blue pairs."""
    colors.require_both()
    dmin = apsp(g, max_n).min_distances()
    return int(dmin[np.ix_(colors.red_mask, ~colors.red_mask)].max())


def exact_min_eccentricity(g: DiGraph, v: int) -> int:
    return int(min_distance_row(g, v).max())


def min_diameter_finite(g: DiGraph, max_n: int = DEFAULT_ORACLE_MAX_N) -> bool:
    return g.n < 2 or exact_min_diameter(g, max_n) != INF


def bichrom_finite_oracle(g: DiGraph, colors: ColorAssignment,
                          max_n: int = DEFAULT_ORACLE_MAX_N) -> bool:
    """Whether every red-blue pair has finite min-distance."""
    return exact_bichrom_min_diameter(g, colors, max_n) != INF
