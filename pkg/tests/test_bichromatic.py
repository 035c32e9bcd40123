#!/usr/bin/env python3
"""
Tests for separated testers, the recursive bichromatic tester and the
finiteness detectors.
"""

import os
import random
import sys
import unittest
from pathlib import Path

# Add src to path for testing
src_path = str(Path(__file__).parent.parent / 'src')
sys.path.insert(0, src_path)

from bench import FINITE_MODES, run_bench_instance
from bichromatic import (BichromEstimate, SeparatedView, approx_bichrom, bichrom_finite,
                         bichrom_tester, dag_bichrom_finite, separated_tester_dense,
                         separated_tester_sparse, small_outset)
from errors import GraphError, MissingColor, NotADag
from generators import gen_random_dag, gen_random_digraph
from graph_core import INF, Color, ColorAssignment, build_graph, max_red_blue_weight
from mindiam import VerdictKind
from oracle import bichrom_finite_oracle, exact_bichrom_min_diameter


def path_graph(n, weight=1):
    return build_graph(n, [(i, i + 1, weight) for i in range(n - 1)])


def colored(letters):
    return ColorAssignment.from_string(letters)


def probe_values(truth):
    values = {0, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144}
    if truth != INF:
        values |= {truth - 1, truth, truth // 2, (truth - 1) // 2}
    return sorted(v for v in values if v >= 0)


class TestSeparatedView(unittest.TestCase):

    def test_red_first(self):
        view = SeparatedView.build(path_graph(4), colored("RRBB"))
        self.assertEqual(view.boundary, 2)
        self.assertIs(view.left_color, Color.RED)
        self.assertEqual(view.vertex_map, (0, 1, 2, 3))

    def test_blue_first(self):
        view = SeparatedView.build(path_graph(4), colored("BBRR"))
        self.assertIs(view.left_color, Color.BLUE)
        self.assertEqual(list(view.right), [2, 3])

    def test_relabels_by_separating_order(self):
        # 2 -> 0 and 3 -> 1: identity order is not topological
        g = build_graph(4, [(2, 0, 1), (3, 1, 1), (2, 1, 1)])
        view = SeparatedView.build(g, colored("BBRR"))
        self.assertIs(view.left_color, Color.RED)
        self.assertEqual(set(view.vertex_map[:2]), {2, 3})

    def test_not_separated(self):
        with self.assertRaises(GraphError):
            SeparatedView.build(path_graph(4), colored("RBRB"))

    def test_missing_color(self):
        with self.assertRaises(MissingColor):
            SeparatedView.build(path_graph(3), colored("RRR"))


class TestSmallOutset(unittest.TestCase):

    def setUp(self):
        self.view = SeparatedView.build(path_graph(4), colored("RRBB"))

    def test_members_on_path(self):
        result = small_outset(self.view, 3, 2)
        self.assertTrue(result.verdict.is_pass)
        self.assertTrue(result.members <= {0, 1})

    def test_fail_through_cover_vertex(self):
        result = small_outset(self.view, 1, 1)
        self.assertTrue(result.verdict.is_fail)
        self.assertEqual(result.verdict.witness, (0, 3))

    def test_small_side_passes_through(self):
        g = build_graph(3, [(0, 1, 1), (1, 2, 1)])
        view = SeparatedView.build(g, colored("RRB"))
        result = small_outset(view, 0, 5)
        self.assertEqual(result.members, frozenset({0, 1}))

    def test_in_direction(self):
        result = small_outset(self.view, 3, 2, direction="in")
        self.assertTrue(result.members <= {2, 3})

    def test_bad_direction(self):
        with self.assertRaises(ValueError):
            small_outset(self.view, 3, 2, direction="sideways")


class TestSeparatedTesters(unittest.TestCase):

    def test_path_examples(self):
        view = SeparatedView.build(path_graph(4), colored("RRBB"))
        for tester in (separated_tester_sparse, separated_tester_dense):
            self.assertTrue(tester(view, 3).is_pass)
            self.assertTrue(tester(view, 1).is_fail)

    def test_single_edge(self):
        view = SeparatedView.build(path_graph(2), colored("RB"))
        self.assertTrue(separated_tester_sparse(view, 1).is_pass)

    def test_complete_bipartite(self):
        edges = [(a, b, 1) for a in range(4) for b in range(4, 8)]
        view = SeparatedView.build(build_graph(8, edges), colored("RRRRBBBB"))
        self.assertTrue(separated_tester_dense(view, 1).is_pass)

    def test_unreachable_blue(self):
        view = SeparatedView.build(build_graph(3, [(0, 2, 1)]), colored("RRB"))
        verdict = separated_tester_dense(view, 3, k=1)
        self.assertTrue(verdict.is_fail)
        self.assertEqual(set(verdict.witness), {1, 2})

    def test_soundness_on_random_separated_dags(self):
        rng = random.Random(303)
        for i in range(150):
            n = rng.randint(3, 30)
            m = rng.randint(n - 1, min(4 * n, n * (n - 1) // 2))
            g, colors = gen_random_dag(n, m, seed=rng.randrange(10**6), max_weight=rng.choice([1, 10]),
                                       red_fraction=rng.uniform(0.2, 0.8), separated=True,
                                       spine=i % 3 != 0)
            view = SeparatedView.build(g, colors)
            truth = exact_bichrom_min_diameter(view.graph, view.colors)
            for D in probe_values(truth):
                for verdict in (separated_tester_sparse(view, D),
                                separated_tester_sparse(view, D, k=2, delta=2),
                                separated_tester_dense(view, D),
                                separated_tester_dense(view, D, k=2)):
                    if verdict.is_fail:
                        self.assertGreater(truth, D)
                    else:
                        self.assertEqual(verdict.kind, VerdictKind.PASS)
                        self.assertLessEqual(truth, 2 * D)

    def test_witnesses_use_caller_ids(self):
        g = build_graph(4, [(2, 0, 1), (3, 1, 1), (2, 1, 1)])
        view = SeparatedView.build(g, colored("BBRR"))
        verdict = separated_tester_sparse(view, 0)
        self.assertTrue(verdict.is_fail)
        u, v = verdict.witness
        self.assertIn(u, {2, 3})
        self.assertIn(v, {0, 1})


class TestBichromTester(unittest.TestCase):

    def test_path_examples(self):
        p4, colors = path_graph(4), colored("RRBB")
        self.assertTrue(bichrom_tester(p4, colors, 3).is_pass)
        self.assertTrue(bichrom_tester(p4, colors, 0).is_fail)

    def test_consecutive_gap_is_infinite(self):
        # ranks 1 (red) and 2 (blue) are consecutive with no edge between them
        g = build_graph(4, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)])
        verdict = bichrom_tester(g, colored("RRBB"), 5)
        self.assertEqual(verdict.kind, VerdictKind.INFINITE)

    def test_errors(self):
        with self.assertRaises(MissingColor):
            bichrom_tester(path_graph(3), colored("BBB"), 1)
        with self.assertRaises(NotADag):
            bichrom_tester(build_graph(2, [(0, 1, 1), (1, 0, 1)]), colored("RB"), 1)

    def test_soundness_on_random_dags(self):
        rng = random.Random(404)
        for i in range(120):
            n = rng.randint(2, 40)
            m = rng.randint(n - 1, min(4 * n, n * (n - 1) // 2))
            g, colors = gen_random_dag(n, m, seed=rng.randrange(10**6), max_weight=rng.choice([1, 10]),
                                       red_fraction=rng.uniform(0.2, 0.8), spine=i % 4 != 0)
            truth = exact_bichrom_min_diameter(g, colors)
            M = max_red_blue_weight(g, colors)
            for D in probe_values(truth):
                verdict = bichrom_tester(g, colors, D)
                if verdict.kind is VerdictKind.INFINITE:
                    self.assertEqual(truth, INF)
                elif verdict.is_fail:
                    self.assertGreater(truth, D)
                else:
                    self.assertLessEqual(truth, 2 * D + M)


class TestApproxBichrom(unittest.TestCase):

    def test_path(self):
        estimate = approx_bichrom(path_graph(4), colored("RRBB"))
        self.assertLessEqual(estimate.lower, 3)
        self.assertTrue(3 <= estimate.value <= 7)

    def test_single_weighted_edge(self):
        estimate = approx_bichrom(build_graph(2, [(0, 1, 5)]), colored("RB"))
        self.assertEqual(estimate.lower, 5)
        self.assertLessEqual(estimate.value, 15)
        self.assertEqual((estimate.M, estimate.m1), (5, 5))
        self.assertAlmostEqual(estimate.ratio_bound(), 3.0)

    def test_incomparable_pair(self):
        diamond = build_graph(4, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)])
        estimate = approx_bichrom(diamond, colored("RRBR"))
        self.assertTrue(estimate.is_infinite)
        self.assertIsNone(estimate.ratio_bound())

    def test_weakly_disconnected(self):
        estimate = approx_bichrom(build_graph(4, [(0, 1, 1), (2, 3, 1)]), colored("RBRB"))
        self.assertTrue(estimate.is_infinite)
        self.assertEqual(estimate.probes, ())

    def test_envelope(self):
        rng = random.Random(505)
        for i in range(300):
            n = rng.randint(2, 40)
            m = rng.randint(n - 1, min(4 * n, n * (n - 1) // 2))
            g, colors = gen_random_dag(n, m, seed=rng.randrange(10**6), max_weight=10,
                                       red_fraction=rng.uniform(0.2, 0.8), spine=i % 5 != 0)
            truth = exact_bichrom_min_diameter(g, colors)
            estimate = approx_bichrom(g, colors)
            self.assertIsInstance(estimate, BichromEstimate)
            if truth == INF:
                self.assertTrue(estimate.is_infinite)
                continue
            self.assertLessEqual(estimate.lower, truth)
            self.assertLessEqual(truth, estimate.value)
            self.assertLessEqual(estimate.value, 2 * truth + estimate.M)


class TestFiniteness(unittest.TestCase):

    def test_examples(self):
        # b2 -> r -> b1
        self.assertTrue(dag_bichrom_finite(build_graph(3, [(0, 1, 1), (1, 2, 1)]), colored("BRB")))
        # b -> r1 and r2 -> r1 leave b and r2 incomparable
        self.assertFalse(dag_bichrom_finite(build_graph(3, [(0, 1, 1), (2, 1, 1)]), colored("BRR")))
        self.assertTrue(dag_bichrom_finite(path_graph(4), colored("RRBB")))

    def test_general_digraphs(self):
        self.assertTrue(bichrom_finite(build_graph(2, [(0, 1, 1), (1, 0, 1)]), colored("RB")))
        two_cycles = build_graph(4, [(0, 1, 1), (1, 0, 1), (2, 3, 1), (3, 2, 1)])
        self.assertFalse(bichrom_finite(two_cycles, colored("RRBB")))
        # mixed cycle {0, 1} feeding blue sink 2, red 3 feeding the cycle
        mixed = build_graph(4, [(0, 1, 1), (1, 0, 1), (1, 2, 1), (3, 0, 1)])
        self.assertTrue(bichrom_finite(mixed, colored("RBBR")))

    def test_dag_detector_rejects_cycles(self):
        with self.assertRaises(NotADag):
            dag_bichrom_finite(build_graph(2, [(0, 1, 1), (1, 0, 1)]), colored("RB"))

    def test_agrees_with_oracle(self):
        rng = random.Random(606)
        for i in range(500):
            n = rng.randint(2, 25)
            bias = (0.0, 0.05, 0.2, 0.4)[i % 4]
            limit = n * (n - 1) if bias > 0 else n * (n - 1) // 2
            m = rng.randint(n - 1, min(3 * n, limit))
            g, colors = gen_random_digraph(n, m, seed=rng.randrange(10**6),
                                           red_fraction=rng.uniform(0.1, 0.9), cycle_bias=bias)
            expected = bichrom_finite_oracle(g, colors)
            self.assertEqual(bichrom_finite(g, colors), expected)
            if bias == 0.0:
                self.assertEqual(dag_bichrom_finite(g, colors), expected)

    def test_agrees_on_spined_and_sparse_dags(self):
        rng = random.Random(707)
        for i in range(200):
            n = rng.randint(2, 30)
            m = rng.randint(n - 1, min(2 * n, n * (n - 1) // 2))
            g, colors = gen_random_dag(n, m, seed=rng.randrange(10**6),
                                       red_fraction=rng.uniform(0.1, 0.9), spine=i % 2 == 0)
            self.assertEqual(dag_bichrom_finite(g, colors), bichrom_finite_oracle(g, colors))
            self.assertEqual(bichrom_finite(g, colors), dag_bichrom_finite(g, colors))


class TestFinitenessTiming(unittest.TestCase):

    @unittest.skipUnless(os.environ.get("MINDIAM_RUN_SLOW") == "1", "set MINDIAM_RUN_SLOW=1")
    def test_single_pass_is_linear_in_m(self):
        sizes = (10**3, 10**4, 10**5)
        for mode in FINITE_MODES:
            with self.subTest(mode=mode):
                seconds = [min(run_bench_instance(seed, m // 4, m, mode).wall_time_s
                               for seed in (1, 2, 3)) for m in sizes]
                slope = sum(t * m for t, m in zip(seconds, sizes)) / sum(m * m for m in sizes)
                for t, m in zip(seconds, sizes):
                    self.assertLessEqual(t, 2 * slope * m, f"m={m}: {t:.4f}s")
                    self.assertGreaterEqual(t, slope * m / 2, f"m={m}: {t:.4f}s")


if __name__ == '__main__':
    unittest.main()
