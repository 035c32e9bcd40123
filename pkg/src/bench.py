"""
Seeded benchmark harness: random DAG and digraph instances, per-instance wall
time and probe counts for the estimators, single-pass timing for the finiteness
detectors, optional oracle comparison.
"""

import logging
import time
from typing import List, Optional, Sequence, Tuple

try:
    from .bichromatic import approx_bichrom, bichrom_finite, dag_bichrom_finite
    from .generators import gen_random_dag, gen_random_digraph
    from .mindiam import Mode, approx_mindiam
    from .oracle import bichrom_finite_oracle, exact_bichrom_min_diameter, exact_min_diameter
    from .report_models import BenchRecord
except ImportError:
    from bichromatic import approx_bichrom, bichrom_finite, dag_bichrom_finite
    from generators import gen_random_dag, gen_random_digraph
    from mindiam import Mode, approx_mindiam
    from oracle import bichrom_finite_oracle, exact_bichrom_min_diameter, exact_min_diameter
    from report_models import BenchRecord

logger = logging.getLogger(__name__)

BENCH_SIZES: Tuple[Tuple[int, int], ...] = ((50, 150), (200, 800), (1000, 4000), (5000, 20000))
BENCH_MODES = ("half", "exact32", "bichrom", "finite", "finite-dag")
FINITE_MODES = ("finite", "finite-dag")


def _bench_finite(seed: int, n: int, m: int, mode: str, oracle_max_n: int) -> BenchRecord:
    # value is 1 for finite, 0 for infinite; "finite" runs on a cyclic digraph
    if mode == "finite":
        g, colors = gen_random_digraph(n, m, seed=seed, cycle_bias=0.3)
        instance = f"digraph-{n}-{m}"
        detector = bichrom_finite
    else:
        g, colors = gen_random_dag(n, m, seed=seed, spine=seed % 2 == 0)
        instance = f"dag-{n}-{m}"
        detector = dag_bichrom_finite

    start = time.perf_counter()
    finite = int(detector(g, colors))
    wall = time.perf_counter() - start

    truth = int(bichrom_finite_oracle(g, colors, n)) if n <= oracle_max_n else None
    logger.info(f"{mode} n={n} m={m} seed={seed}: finite={bool(finite)} in {wall:.3f}s")
    return BenchRecord(instance=instance, seed=seed, n=n, m=m, mode=mode, value=finite,
                       lower=finite, probes=1, wall_time_s=round(wall, 6), oracle=truth)


def run_bench_instance(seed: int, n: int, m: int, mode: str, oracle_max_n: int = 0,
                       timeout_ms: Optional[int] = None) -> BenchRecord:
    """Time one estimate or finiteness pass; the oracle runs only when n <= oracle_max_n."""
    if mode in FINITE_MODES:
        return _bench_finite(seed, n, m, mode, oracle_max_n)
    bichromatic = mode == "bichrom"
    g, colors = gen_random_dag(n, m, seed=seed, max_weight=10 if bichromatic else 1, spine=True)

    start = time.perf_counter()
    if bichromatic:
        estimate = approx_bichrom(g, colors, timeout_ms=timeout_ms)
    else:
        estimate = approx_mindiam(g, Mode(mode), timeout_ms=timeout_ms)
    wall = time.perf_counter() - start

    truth = None
    if n <= oracle_max_n:
        truth = exact_bichrom_min_diameter(g, colors) if bichromatic else exact_min_diameter(g)

    logger.info(f"{mode} n={n} m={m} seed={seed}: value={estimate.value} "
                f"probes={len(estimate.probes)} in {wall:.3f}s")
    return BenchRecord(instance=f"dag-{n}-{m}", seed=seed, n=n, m=m, mode=mode,
                       value=estimate.value, lower=estimate.lower, probes=len(estimate.probes),
                       wall_time_s=round(wall, 6), oracle=truth)


def build_bench_tasks(seeds: Sequence[int], sizes: Sequence[Tuple[int, int]] = BENCH_SIZES,
                      modes: Sequence[str] = BENCH_MODES, oracle_max_n: int = 0,
                      timeout_ms: Optional[int] = None) -> List[tuple]:
    tasks = []
    for n, m in sizes:
        for mode in modes:
            for seed in seeds:
                tasks.append((f"bench-{mode}-{n}-{m}-{seed}", run_bench_instance,
                              (seed, n, m, mode, oracle_max_n, timeout_ms)))
    return tasks
