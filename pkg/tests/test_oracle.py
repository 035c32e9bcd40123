#!/usr/bin/env python3
"""
Tests for the exhaustive shortest-path oracle.
"""

import random
import sys
import unittest
from pathlib import Path

import networkx as nx
from hypothesis import given, settings, strategies as st

# Add src to path for testing
src_path = str(Path(__file__).parent.parent / 'src')
sys.path.insert(0, src_path)

from errors import GraphError, MissingColor, OracleTooLarge
from generators import gen_random_digraph
from graph_core import INF, ColorAssignment, build_graph
from oracle import (apsp, bichrom_finite_oracle, exact_bichrom_min_diameter,
                    exact_min_diameter, exact_min_eccentricity, min_diameter_finite)


def path_graph(n):
    return build_graph(n, [(i, i + 1, 1) for i in range(n - 1)])


DIAMOND = build_graph(4, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)])


class TestApsp(unittest.TestCase):

    def test_examples(self):
        self.assertEqual(apsp(path_graph(3))[0].tolist(), [0, 1, 2])
        self.assertEqual(apsp(DIAMOND)[1, 2], INF)
        self.assertEqual(apsp(build_graph(2, [(0, 1, 7)]))[0, 1], 7)

    def test_guard(self):
        with self.assertRaises(OracleTooLarge):
            apsp(path_graph(5), max_n=4)

    def test_matches_networkx(self):
        rng = random.Random(11)
        for _ in range(100):
            n = rng.randint(2, 20)
            g, _ = gen_random_digraph(n, rng.randint(n - 1, min(3 * n, n * (n - 1))),
                                      seed=rng.randrange(10**6), max_weight=9)
            nxg = nx.DiGraph()
            nxg.add_nodes_from(range(n))
            nxg.add_weighted_edges_from(g.edges())
            lengths = dict(nx.all_pairs_dijkstra_path_length(nxg))
            d = apsp(g)
            for u in range(n):
                for v in range(n):
                    self.assertEqual(d[u, v], lengths[u].get(v, INF))
            for u, v, w in g.edges():
                self.assertLessEqual(d[0, v], d[0, u] + w if d[0, u] != INF else INF)


class TestMinDiameter(unittest.TestCase):

    def test_examples(self):
        self.assertEqual(exact_min_diameter(path_graph(4)), 3)
        self.assertEqual(exact_min_diameter(DIAMOND), INF)
        self.assertEqual(exact_min_diameter(build_graph(2, [(0, 1, 2), (1, 0, 5)])), 2)
        self.assertFalse(min_diameter_finite(DIAMOND))
        self.assertTrue(min_diameter_finite(path_graph(4)))

    def test_needs_two_vertices(self):
        with self.assertRaises(GraphError):
            exact_min_diameter(build_graph(1, []))

    def test_eccentricity(self):
        self.assertEqual(exact_min_eccentricity(path_graph(5), 2), 2)
        self.assertEqual(exact_min_eccentricity(path_graph(5), 0), 4)

    @given(st.integers(min_value=0, max_value=10**6), st.permutations(list(range(8))))
    @settings(max_examples=40, deadline=None)
    def test_relabeling_invariance(self, seed, perm):
        g, _ = gen_random_digraph(8, 14, seed=seed, max_weight=5)
        relabelled = build_graph(8, [(perm[u], perm[v], w) for u, v, w in g.edges()],
                                 weighted=g.weighted)
        self.assertEqual(exact_min_diameter(g), exact_min_diameter(relabelled))


class TestBichromatic(unittest.TestCase):

    def test_examples(self):
        colors = ColorAssignment.from_string
        self.assertEqual(exact_bichrom_min_diameter(path_graph(2), colors("RB")), 1)
        self.assertEqual(exact_bichrom_min_diameter(path_graph(4), colors("RRBB")), 3)

    def test_same_color_pairs_ignored(self):
        # reds 1 and 2 are 9 apart, every red-blue pair is adjacent
        g = build_graph(3, [(0, 1, 1), (0, 2, 1), (1, 2, 9)])
        colors = ColorAssignment.from_string("BRR")
        self.assertEqual(exact_bichrom_min_diameter(g, colors), 1)
        self.assertEqual(exact_min_diameter(g), 9)
        self.assertTrue(bichrom_finite_oracle(g, colors))

    def test_missing_color(self):
        with self.assertRaises(MissingColor):
            exact_bichrom_min_diameter(path_graph(3), ColorAssignment.from_string("RRR"))

    def test_finiteness(self):
        self.assertFalse(bichrom_finite_oracle(DIAMOND, ColorAssignment.from_string("RRBB")))
        self.assertTrue(bichrom_finite_oracle(DIAMOND, ColorAssignment.from_string("RRRB")))


if __name__ == '__main__':
    unittest.main()
