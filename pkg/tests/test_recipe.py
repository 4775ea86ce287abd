import json
import os
import tempfile
import unittest

from scripts.RecipeService import (Recipe, build_lattice, format_recipe, load_lattice_source, load_recipe,
                                   parse_recipe, save_recipe)
from scripts.errors import ConstructionError, RecipeError
from scripts.lattice.geometry import exact_log2_volume
from tests.TestBase import RECIPE_DIR, TestBase, slow_test


class TestRecipeParsing(TestBase):
    def assertBadField(self, data, field):
        with self.assertRaises(RecipeError) as ctx:
            parse_recipe(json.dumps(data))
        self.assertEqual(ctx.exception.field, field)
        self.assertIn(field, str(ctx.exception))

    def test_bad_fields_are_named(self):
        self.assertBadField({"family": "construction-x"}, "family")
        self.assertBadField({"family": "regular-family", "n": 16, "seed": 1}, "a")
        self.assertBadField({"family": "regular-family", "a": 1, "n": "16", "seed": 1}, "n")
        self.assertBadField({"family": "construction-a", "n": 16}, "seed")
        self.assertBadField({"family": "construction-a", "code_path": "x.alist", "a": 1}, "a")
        self.assertBadField({"family": "construction-a", "n": 16, "seed": 1, "colour": 3}, "colour")
        self.assertBadField({"family": "construction-dprime", "n": 16, "a": 1, "seed": 1}, "r_levels")
        self.assertBadField({"family": "construction-a", "code_path": 5}, "code_path")
        self.assertBadField([], "recipe")

    def test_invalid_json(self):
        with self.assertRaises(RecipeError) as ctx:
            parse_recipe("{not json")
        self.assertEqual(ctx.exception.field, "recipe")

    def test_serialization(self):
        recipe = parse_recipe('{"family": "construction-dprime", "n": 16, "a": 1, "r_levels": [8, 12], '
                              '"symbol_degree": [2, 3], "check_degree": 4, "seed": 3}')
        self.assertEqual(recipe.r_levels, (8, 12))
        self.assertEqual(parse_recipe(format_recipe(recipe)), recipe)
        self.assertNotIn("a", Recipe("construction-a", n=8, seed=1).to_dict())

    def test_relative_code_path(self):
        recipe = load_recipe(RECIPE_DIR / "e8.json")
        self.assertTrue(os.path.isabs(recipe.code_path))
        self.assertTrue(recipe.code_path.endswith("hamming_8_4.alist"))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "copy.json")
            save_recipe(path, recipe)
            self.assertEqual(load_recipe(path), recipe)


class TestBuildLattice(TestBase):
    def test_e8_recipe(self):
        lat = build_lattice(load_recipe(RECIPE_DIR / "e8.json"))
        self.assertEqual((lat.n, lat.levels, lat.log2_det), (8, 1, 4))

    def test_regular_family_recipe(self):
        lat = build_lattice(load_recipe(RECIPE_DIR / "regular_a1_n16.json"))
        self.assertEqual((lat.n, lat.levels, lat.r_levels, lat.log2_det), (16, 2, (8, 12), 20))
        self.assertEqual(lat.H.to_dense().shape, (12, 16))

    def test_shipped_rate_half_recipes(self):
        for n in (504, 1008, 2000, 6000, 10000):
            recipe = load_recipe(RECIPE_DIR / f"ldpc36_n{n}.json")
            self.assertEqual(recipe, Recipe("construction-a", n=n, symbol_degree=3, check_degree=6, seed=2024))

    def test_redundant_e8_recipe(self):
        lat = build_lattice(load_recipe(RECIPE_DIR / "e8_redundant.json"))
        self.assertEqual((lat.n, lat.r_levels, exact_log2_volume(lat)), (8, (14,), 4))

    @slow_test
    def test_n2000_recipe_builds(self):
        lat = build_lattice(load_recipe(RECIPE_DIR / "ldpc36_n2000.json"))
        self.assertEqual(lat.r_levels, (1000,))
        self.assertArrayEqual(lat.H.base.column_degrees(), [3] * 2000)
        self.assertArrayEqual(lat.H.base.row_degrees(), [6] * 1000)

    def test_generated_construction_a(self):
        lat = build_lattice(Recipe("construction-a", n=32, seed=4))
        self.assertEqual(lat.r_levels, (16,))
        self.assertArrayEqual(lat.H.base.column_degrees(), [3] * 32)

    def test_generated_dprime(self):
        recipe = parse_recipe('{"family": "construction-dprime", "n": 16, "a": 1, "r_levels": [8, 12], '
                              '"symbol_degree": [2, 3], "check_degree": 4, "seed": 3}')
        lat = build_lattice(recipe)
        self.assertEqual(lat.r_levels, (8, 12))

    def test_dprime_from_lattice_file(self):
        lat = build_lattice(load_recipe(RECIPE_DIR / "two_level_n16_file.json"))
        self.assertEqual(lat.r_levels, (8, 12))
        self.assertLess(exact_log2_volume(lat), lat.log2_det)

    def test_infeasible_recipes(self):
        with self.assertRaises(ConstructionError):
            build_lattice(Recipe("construction-a", n=10, symbol_degree=3, check_degree=4, seed=1))
        with self.assertRaises(ConstructionError):
            build_lattice(Recipe("regular-family", n=18, a=1, seed=1))
        with self.assertRaises(RecipeError):
            build_lattice(Recipe("construction-dprime", n=16, a=1, r_levels=(8,), symbol_degree=(2, 3),
                                 check_degree=4, seed=1))

    def test_load_lattice_source(self):
        lat, text = load_lattice_source(RECIPE_DIR / "e8.json")
        self.assertEqual(lat.n, 8)
        self.assertIn("construction-a", text)


if __name__ == "__main__":
    unittest.main()
