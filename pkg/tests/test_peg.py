import math
import unittest

import numpy as np

from scripts.codes.binary_code import DegreeProfile, regular_family_profile, verify_nested
from scripts.codes.matrix import SparseBinaryMatrix
from scripts.codes.peg import EdgeGrower, epeg_construct, girth, has_four_cycle, peg_construct
from scripts.errors import ConstructionError
from scripts.RecipeService import build_lattice, load_recipe
from tests.TestBase import HAMMING_8_4, RECIPE_DIR, TestBase, slow_test


class TestGirth(TestBase):
    def test_four_cycle(self):
        m = SparseBinaryMatrix.from_dense(HAMMING_8_4)
        self.assertTrue(has_four_cycle(m))
        self.assertEqual(girth(m), 4)

    def test_six_cycle(self):
        m = SparseBinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        self.assertFalse(has_four_cycle(m))
        self.assertEqual(girth(m), 6)

    def test_forest(self):
        m = SparseBinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
        self.assertFalse(has_four_cycle(m))
        self.assertEqual(girth(m), math.inf)


class TestPeg(TestBase):
    def test_column_weight_and_determinism(self):
        first = peg_construct(64, 32, 3, seed=11)
        second = peg_construct(64, 32, 3, seed=11)
        self.assertEqual(first, second)
        self.assertEqual((first.rows, first.cols), (32, 64))
        self.assertArrayEqual(first.column_degrees(), np.full(64, 3))
        self.assertEqual(first.nnz, 192)

    def test_seed_changes_graph(self):
        self.assertNotEqual(peg_construct(64, 32, 3, seed=1), peg_construct(64, 32, 3, seed=2))

    def test_infeasible_requests(self):
        with self.assertRaises(ConstructionError):
            peg_construct(8, 4, 0, seed=0)
        with self.assertRaises(ConstructionError):
            peg_construct(8, 4, 5, seed=0)
        with self.assertRaises(ConstructionError):
            peg_construct(4, 8, 3, seed=0)

    def test_rate_half_graph_is_regular_and_four_cycle_free(self):
        m = peg_construct(504, 252, 3, seed=2024)
        self.assertArrayEqual(m.column_degrees(), np.full(504, 3))
        self.assertArrayEqual(m.row_degrees(), np.full(252, 6))
        self.assertFalse(has_four_cycle(m))
        self.assertGreaterEqual(girth(m), 6)

    def test_small_two_four_graphs_reach_girth_six(self):
        for seed in range(5):
            m = peg_construct(16, 8, 2, seed=seed)
            self.assertArrayEqual(m.column_degrees(), np.full(16, 2))
            self.assertArrayEqual(m.row_degrees(), np.full(8, 4))
            self.assertGreaterEqual(girth(m), 6, f"seed {seed}")

    def test_swaps_remove_four_cycles_and_keep_degrees(self):
        grower = EdgeGrower(4, 4, np.random.default_rng(0))
        for sym, checks in enumerate(((0, 1), (0, 1), (2, 3), (2, 3))):
            for chk in checks:
                grower.grow_edge(sym, chk)
        self.assertIsNotNone(grower.four_cycle())
        self.assertTrue(grower.break_four_cycles([(0, 4)]))
        m = grower.to_matrix()
        self.assertFalse(has_four_cycle(m))
        self.assertArrayEqual(m.column_degrees(), np.full(4, 2))
        self.assertArrayEqual(m.row_degrees(), np.full(4, 2))
        self.assertGreater(grower.swaps, 0)

    def test_shipped_n504_recipe_is_four_cycle_free(self):
        lat = build_lattice(load_recipe(RECIPE_DIR / "ldpc36_n504.json"))
        self.assertGreaterEqual(girth(lat.H.base), 6)
        self.assertArrayEqual(lat.H.base.row_degrees(), np.full(252, 6))

    @slow_test
    def test_shipped_n1008_recipe_is_four_cycle_free(self):
        lat = build_lattice(load_recipe(RECIPE_DIR / "ldpc36_n1008.json"))
        self.assertGreaterEqual(girth(lat.H.base), 6)
        self.assertArrayEqual(lat.H.base.row_degrees(), np.full(504, 6))


class TestEpeg(TestBase):
    def test_regular_family_chain(self):
        profile = regular_family_profile(1, 16)
        chain = epeg_construct(1, 16, profile.r_levels, profile, seed=7)
        basis = chain.shared_basis
        self.assertEqual(chain.r_levels, (8, 12))
        self.assertTrue(verify_nested(chain))
        self.assertArrayEqual(basis.prefix(8).column_degrees(), np.full(16, 2))
        self.assertArrayEqual(basis.column_degrees(), np.full(16, 3))
        self.assertArrayEqual(basis.row_degrees(), np.full(12, 4))

    def test_random_chains_are_nested(self):
        for n in (16, 32):
            profile = regular_family_profile(1, n)
            for seed in range(50):
                chain = epeg_construct(1, n, profile.r_levels, profile, seed=seed)
                self.assertTrue(verify_nested(chain), f"n={n} seed={seed}")
                self.assertArrayEqual(chain.shared_basis.prefix(profile.r_levels[0]).column_degrees(),
                                      np.full(n, 2))

    def test_same_seed_same_chain(self):
        profile = regular_family_profile(1, 32)
        first = epeg_construct(1, 32, profile.r_levels, profile, seed=3)
        second = epeg_construct(1, 32, profile.r_levels, profile, seed=3)
        self.assertEqual(first.shared_basis, second.shared_basis)

    def test_single_level(self):
        profile = DegreeProfile((3,), 6, (8,))
        chain = epeg_construct(0, 16, (8,), profile, seed=5)
        self.assertArrayEqual(chain.shared_basis.column_degrees(), np.full(16, 3))
        self.assertArrayEqual(chain.shared_basis.row_degrees(), np.full(8, 6))

    def test_edge_count_mismatch(self):
        profile = DegreeProfile((2, 3), 4, (8, 14))
        with self.assertRaises(ConstructionError):
            epeg_construct(1, 16, (8, 14), profile, seed=0)

    def test_malformed_row_counts(self):
        profile = regular_family_profile(1, 16)
        with self.assertRaises(ConstructionError):
            epeg_construct(1, 16, (8,), profile, seed=0)
        with self.assertRaises(ConstructionError):
            epeg_construct(1, 16, (12, 8), profile, seed=0)
        with self.assertRaises(ConstructionError):
            epeg_construct(1, 16, (8, 13), profile, seed=0)

    @slow_test
    def test_three_level_family(self):
        profile = regular_family_profile(2, 64)
        chain = epeg_construct(2, 64, profile.r_levels, profile, seed=9)
        self.assertEqual(chain.r_levels, (16, 24, 32))
        self.assertArrayEqual(chain.shared_basis.column_degrees(), np.full(64, 4))
        self.assertTrue(verify_nested(chain))


if __name__ == "__main__":
    unittest.main()
