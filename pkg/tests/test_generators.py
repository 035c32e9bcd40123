#!/usr/bin/env python3
"""
Tests for OV instances, gadget certificates and random graph generators.
"""

import sys
import time
import unittest
from pathlib import Path

import numpy as np

# Add src to path for testing
src_path = str(Path(__file__).parent.parent / 'src')
sys.path.insert(0, src_path)

from bichromatic import SeparatedView
from errors import BadDimension, InfeasibleParams, NotADag
from generators import (default_dimension, gen_bichrom_dag_lb, gen_bichrom_unweighted_lb,
                        gen_bichrom_weighted_lb, gen_mindiam_lb, gen_ov, gen_random_dag,
                        gen_random_digraph, has_orthogonal_pair, single_set_transform)
from graph_core import is_weakly_connected, topological_sort
from oracle import exact_bichrom_min_diameter, exact_min_diameter

SIZES = (8, 16, 32)


class TestOv(unittest.TestCase):

    def test_planted_pair_is_orthogonal(self):
        for seed in range(20):
            ov = gen_ov(10, planted=True, seed=seed)
            self.assertTrue(has_orthogonal_pair(ov.A, ov.B))
            self.assertEqual({len(v) for v in ov.A + ov.B}, {ov.d})

    def test_unplanted_has_no_pair(self):
        for seed in range(20):
            ov = gen_ov(10, seed=seed)
            self.assertFalse(has_orthogonal_pair(ov.A, ov.B))

    def test_minimal_planted_pair(self):
        self.assertTrue(has_orthogonal_pair([(1, 0)], [(0, 1)]))
        self.assertFalse(has_orthogonal_pair([(1, 1)], [(1, 1)]))

    def test_deterministic(self):
        self.assertEqual(gen_ov(12, planted=True, seed=3), gen_ov(12, planted=True, seed=3))

    def test_dimension(self):
        self.assertEqual(default_dimension(16), 8)
        with self.assertRaises(BadDimension):
            gen_ov(4, d=1)

    def test_single_set_transform(self):
        ov = gen_ov(6, planted=True, seed=1)
        vectors = single_set_transform(ov)
        self.assertEqual(len(vectors), 12)
        A, B = vectors[:6], vectors[6:]
        self.assertFalse(has_orthogonal_pair(A, A))
        self.assertFalse(has_orthogonal_pair(B, B))
        self.assertTrue(has_orthogonal_pair(A, B))


class TestGadgetCertificates(unittest.TestCase):

    def test_mindiam_gadget(self):
        for t in (2, 3):
            for n in SIZES:
                for planted in (True, False):
                    gadget = gen_mindiam_lb(gen_ov(n, planted=planted, seed=n + t), t)
                    self.assertEqual(gadget.orthogonal, planted)
                    with self.assertRaises(NotADag):
                        topological_sort(gadget.graph)
                    self.assertEqual(exact_min_diameter(gadget.graph), gadget.expected_diameter)

    def test_mindiam_gadget_size(self):
        ov = gen_ov(8, seed=1)
        gadget = gen_mindiam_lb(ov, 2)
        active = int(np.asarray(single_set_transform(ov)).any(axis=0).sum())
        self.assertEqual(gadget.graph.n, 2 * 16 + active)
        self.assertLessEqual(active, ov.d + 2)

    def test_mindiam_gadget_preconditions(self):
        with self.assertRaises(InfeasibleParams):
            gen_mindiam_lb(gen_ov(8, seed=0), 1)
        with self.assertRaises(InfeasibleParams):
            gen_mindiam_lb(gen_ov(2, seed=0), 3)

    def test_bichrom_dag_gadget(self):
        for t in (1, 2, 3):
            for n in SIZES:
                for planted in (True, False):
                    gadget = gen_bichrom_dag_lb(gen_ov(n, planted=planted, seed=7 * n + t), t)
                    topological_sort(gadget.graph)
                    truth = exact_bichrom_min_diameter(gadget.graph, gadget.colors)
                    self.assertEqual(truth, gadget.expected_diameter)

    def test_bichrom_unweighted_gadget(self):
        for n in SIZES:
            yes = gen_bichrom_unweighted_lb(gen_ov(n, planted=True, seed=n))
            no = gen_bichrom_unweighted_lb(gen_ov(n, seed=n))
            self.assertGreaterEqual(exact_bichrom_min_diameter(yes.graph, yes.colors), 5)
            self.assertEqual(exact_bichrom_min_diameter(no.graph, no.colors), 2)
            for b in range(n, 2 * n):
                self.assertEqual(no.graph.out_degree(b), 0)

    def test_bichrom_weighted_gadget(self):
        for t in (1, 2, 3):
            for n in SIZES:
                yes = gen_bichrom_weighted_lb(gen_ov(n, planted=True, seed=n + 1), t)
                no = gen_bichrom_weighted_lb(gen_ov(n, seed=n + 1), t)
                self.assertGreaterEqual(exact_bichrom_min_diameter(yes.graph, yes.colors), 3 * t + 2)
                self.assertLessEqual(exact_bichrom_min_diameter(no.graph, no.colors), t + 1)

    def test_weighted_back_edges(self):
        ov = gen_ov(4, seed=2)
        gadget = gen_bichrom_weighted_lb(ov, 2)
        index_base = 8
        for i in range(index_base, gadget.graph.n):
            back = {a: w for a, w in gadget.graph.out_adj[i] if a < 4}
            self.assertEqual(back, {a: 3 for a in range(4)})


class TestRandomGraphs(unittest.TestCase):

    def test_dag_basics(self):
        g, colors = gen_random_dag(5, 4, seed=9)
        topological_sort(g)
        self.assertTrue(is_weakly_connected(g))
        self.assertFalse(g.weighted)
        self.assertEqual(len(colors), 5)

    def test_deterministic(self):
        first, _ = gen_random_dag(20, 50, seed=4, max_weight=6)
        second, _ = gen_random_dag(20, 50, seed=4, max_weight=6)
        self.assertEqual(list(first.edges()), list(second.edges()))

    def test_exact_edge_count(self):
        for n, m in ((2, 1), (10, 45), (30, 60), (12, 11)):
            g, _ = gen_random_dag(n, m, seed=n * m)
            self.assertEqual(g.m, m)

    def test_separated_and_spine(self):
        for seed in range(20):
            g, colors = gen_random_dag(15, 30, seed=seed, separated=True, spine=True)
            SeparatedView.build(g, colors)
            self.assertLess(exact_min_diameter(g), 15)

    def test_infeasible(self):
        with self.assertRaises(InfeasibleParams):
            gen_random_dag(5, 3, seed=0)
        with self.assertRaises(InfeasibleParams):
            gen_random_dag(5, 11, seed=0)

    def test_digraph_cycles(self):
        g, _ = gen_random_digraph(12, 40, seed=1, cycle_bias=0.5)
        self.assertTrue(is_weakly_connected(g))
        with self.assertRaises(NotADag):
            topological_sort(g)
        dag, _ = gen_random_digraph(12, 40, seed=1, cycle_bias=0.0)
        topological_sort(dag)

    def test_large_sparse_graphs(self):
        start = time.perf_counter()
        g, _ = gen_random_dag(20000, 80000, seed=1, spine=True)
        self.assertEqual((g.n, g.m), (20000, 80000))
        digraph, _ = gen_random_digraph(20000, 60000, seed=2, cycle_bias=0.3)
        self.assertEqual(digraph.m, 60000)
        self.assertLess(time.perf_counter() - start, 60.0)

    def test_fully_reversed_digraph(self):
        g, _ = gen_random_digraph(6, 15, seed=2, cycle_bias=1.0)
        self.assertEqual(g.m, 15)
        topological_sort(g)
        with self.assertRaises(InfeasibleParams):
            gen_random_digraph(6, 16, seed=2, cycle_bias=1.0)

    def test_colors_have_both(self):
        for seed in range(30):
            _, colors = gen_random_digraph(4, 5, seed=seed, red_fraction=0.95)
            self.assertTrue(0 < int(np.sum(colors.red_mask)) < 4)


if __name__ == '__main__':
    unittest.main()
