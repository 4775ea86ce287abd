import math
import os
import tempfile
import unittest

import numpy as np

from scripts import config
from scripts.ChannelService import analytic_scalar_pe, sigma_from_vnr, vnr_from_sigma
from scripts.RecipeService import build_lattice, load_recipe
from scripts.SimulationService import (PointResult, SimulationService, SweepConfig, format_csv, format_metadata,
                                       run_point, run_sweep, write_csv, write_metadata)
from scripts.decode.common import DecoderConfig
from scripts.errors import ConfigError, UnsupportedDecoderError
from scripts.sim.worker import BatchCounts
from tests.TestBase import RECIPE_DIR, TestBase, slow_test


def sweep(grid=(2.0,), **kwargs):
    settings = dict(lattice_source="e8", vnr_grid=grid, decoder=DecoderConfig(algorithm="min-sum"),
                    min_word_errors=10, max_trials=600, master_seed=5, workers=1, batch_size=32)
    settings.update(kwargs)
    return SweepConfig(**settings)


class TestSweepConfig(TestBase):
    def test_validation(self):
        for kwargs in ({"vnr_grid": ()}, {"min_word_errors": 0}, {"max_trials": 5},
                       {"workers": 0}, {"batch_size": 0}, {"master_seed": -1}):
            with self.assertRaises(ConfigError):
                sweep(**kwargs)

    def test_grid_is_normalized(self):
        self.assertEqual(sweep(grid=[1, 2]).vnr_grid, (1.0, 2.0))


class TestBatchCounts(TestBase):
    def test_merge_adds(self):
        total = BatchCounts()
        total.merge(BatchCounts(32, 3, 7, 40, 1))
        total.merge(BatchCounts(16, 1, 2, 20, 0))
        self.assertEqual(total, BatchCounts(48, 4, 9, 60, 1))


class TestRunPoint(TestBase):
    def test_worker_count_does_not_change_results(self):
        lat = self.e8()
        single = run_point(lat, sweep(workers=1), 1.0)
        pooled = run_point(lat, sweep(workers=4), 1.0)
        self.assertEqual(single.counts, pooled.counts)
        self.assertEqual(single.row(), pooled.row())

    def test_stops_after_first_batch_with_enough_errors(self):
        lat = self.e8()
        for workers in (1, 3):
            result = run_point(lat, sweep(min_word_errors=1, workers=workers), -6.0)
            self.assertEqual(result.trials, 32)
            self.assertGreaterEqual(result.word_errors, 1)

    def test_trial_cap(self):
        result = run_point(self.e8(), sweep(max_trials=100, workers=2), 25.0)
        self.assertEqual(result.trials, 100)
        self.assertEqual(result.word_errors, 0)
        self.assertEqual(result.wer, 0.0)
        self.assertEqual(result.mean_iterations, 1.0)

    def test_point_statistics(self):
        result = run_point(self.e8(), sweep(), 0.0)
        low, high = result.wilson_interval()
        self.assertLessEqual(low, result.wer)
        self.assertGreaterEqual(high, result.wer)
        self.assertAlmostEqual(result.nep, 2.0 * result.wer / 8)
        self.assertLessEqual(result.ser, result.wer)
        self.assertAlmostEqual(result.sigma, sigma_from_vnr(self.e8(), 0.0))
        self.assertEqual(result.seed, "5:0")

    def test_random_members_mode(self):
        result = run_point(self.e8(), sweep(random_members=True, max_trials=64), 3.0)
        self.assertEqual(result.trials, 64)

    def test_multi_level_needs_ml(self):
        with self.assertRaises(UnsupportedDecoderError):
            run_point(self.two_level_n16(), sweep(), 1.0)

    def test_scalar_lattice_matches_analytic_error_rate(self):
        lat = self.scalar_lattice()
        cfg = sweep(decoder=DecoderConfig(algorithm="ml"), min_word_errors=8000, max_trials=8000,
                    batch_size=1000)
        vnr_db = 1.0
        result = run_point(lat, cfg, vnr_db)
        expected = analytic_scalar_pe(sigma_from_vnr(lat, vnr_db))
        tolerance = 4.0 * math.sqrt(expected * (1.0 - expected) / result.trials)
        self.assertAlmostEqual(result.wer, expected, delta=tolerance)


class TestRunSweep(TestBase):
    def test_signals_and_ordering(self):
        service = SimulationService(workers=2)
        finished, status = [], []
        service.point_finished.connect(finished.append)
        service.status_update.connect(status.append)
        result = service.run_sweep(self.e8(), sweep(grid=(3.0, 0.0), workers=2))
        self.assertEqual([p.vnr_db for p in result.points], [3.0, 0.0])
        self.assertEqual([row[0] for row in result.rows()], [0.0, 3.0])
        self.assertEqual(len(finished), 2)
        self.assertEqual(set(finished[0]), set(config.CSV_COLUMNS))
        self.assertEqual(len(status), 2)

    def test_csv_and_metadata(self):
        lat = self.e8()
        result = run_sweep(lat, sweep(grid=(0.0, 1.0)))
        text = format_csv(result)
        lines = text.splitlines()
        self.assertEqual(lines[0], ",".join(config.CSV_COLUMNS))
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[1].startswith("0.0,"))
        self.assertTrue(lines[1].endswith(",5:0"))

        metadata = format_metadata(result, lat, '{"family": "construction-a"}')
        self.assertIn("master_seed: 5", metadata)
        self.assertIn("decoder: algorithm=min-sum", metadata)
        self.assertIn("transmission: zero word", metadata)
        self.assertIn('  {"family": "construction-a"}', metadata)

        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "sweep.csv")
            write_csv(path, result)
            write_metadata(path + ".meta.txt", result, lat)
            with open(path, newline='') as f:
                self.assertEqual(f.read(), text)
            self.assertTrue(os.path.exists(path + ".meta.txt"))

    def test_word_error_rate_does_not_rise_with_vnr(self):
        result = run_sweep(self.e8(), sweep(grid=(0.0, 1.0, 2.0, 3.0, 4.0), min_word_errors=50, max_trials=3000,
                                            batch_size=100))
        intervals = [p.wilson_interval() for p in result.points]
        for (_, high), (next_low, _) in zip(intervals, intervals[1:]):
            self.assertLessEqual(next_low, high)
        self.assertLess(result.points[-1].wer, result.points[0].wer)

    def test_reruns_are_identical(self):
        lat = self.e8()
        first = format_csv(run_sweep(lat, sweep(grid=(0.0, 2.0), workers=1)))
        second = format_csv(run_sweep(lat, sweep(grid=(0.0, 2.0), workers=3)))
        self.assertEqual(first, second)


class TestOracleCompare(TestBase):
    def test_oracle_never_loses(self):
        service = SimulationService()
        report = service.oracle_compare(self.e8(), sweep(batch_size=50), 1.0, 200)
        self.assertEqual(report.trials, 200)
        self.assertEqual(report.oracle_losses, 0)
        self.assertLessEqual(report.oracle_word_errors, report.trials)

    def test_needs_an_iterative_decoder(self):
        with self.assertRaises(ConfigError):
            SimulationService().oracle_compare(self.e8(), sweep(decoder=DecoderConfig(algorithm="ml")), 1.0, 10)


@slow_test
class TestAcceptance(TestBase):
    def test_wilson_interval_coverage(self):
        rng = np.random.default_rng(3)
        trials = 400
        for p in (0.05, 0.3):
            covered = 0
            for _ in range(2000):
                errors = int(rng.binomial(trials, p))
                point = PointResult(0.0, 1.0, 8, BatchCounts(trials, errors, errors, trials, 0), "0:0")
                low, high = point.wilson_interval()
                covered += low <= p <= high
            self.assertGreater(covered / 2000, 0.92, f"p={p}")
            self.assertLess(covered / 2000, 0.98, f"p={p}")

    def test_scalar_lattice_sweep_matches_theory(self):
        lat = self.scalar_lattice()
        cfg = sweep(lattice_source="2Z", decoder=DecoderConfig(algorithm="ml"), min_word_errors=100_000,
                    max_trials=100_000, batch_size=5000, workers=4)
        for index, sigma in enumerate((0.4, 0.5, 0.7)):
            result = run_point(lat, cfg, vnr_from_sigma(lat, sigma), index)
            expected = analytic_scalar_pe(result.sigma)
            standard_error = math.sqrt(expected * (1.0 - expected) / result.trials)
            self.assertEqual(result.trials, 100_000)
            self.assertLessEqual(abs(result.wer - expected), 3.0 * standard_error, f"sigma={sigma}")

    def test_redundant_e8_decoders_track_the_oracle(self):
        lat = self.e8_redundant()
        for algorithm in ("min-sum", "sum-product"):
            cfg = sweep(lattice_source="e8_redundant", decoder=DecoderConfig(algorithm=algorithm), master_seed=1,
                        batch_size=2000)
            report = SimulationService().oracle_compare(lat, cfg, 4.0, 100_000)
            self.assertEqual(report.oracle_losses, 0, algorithm)
            self.assertGreater(report.oracle_word_errors, 0, algorithm)
            self.assertLessEqual(report.iterative_word_errors, 2 * report.oracle_word_errors, algorithm)

    def test_rate_half_lattices_reach_low_error_rates(self):
        settings = dict(decoder=DecoderConfig(algorithm="sum-product"), min_word_errors=100, max_trials=40_000,
                        master_seed=1, workers=8, batch_size=256)
        large = build_lattice(load_recipe(RECIPE_DIR / "ldpc36_n1008.json"))
        grid = tuple(0.5 * i for i in range(8))
        result = run_sweep(large, sweep(grid=grid, lattice_source="ldpc36_n1008", **settings))
        points = result.points

        intervals = [p.wilson_interval() for p in points]
        for (_, high), (next_low, _) in zip(intervals, intervals[1:]):
            self.assertLessEqual(next_low, high)
        self.assertTrue(any(p.nep <= 1e-4 for p in points))
        for p in points:
            self.assertGreaterEqual(p.mean_iterations, 1.0)
            self.assertLessEqual(p.mean_iterations, 25.0)

        small = build_lattice(load_recipe(RECIPE_DIR / "ldpc36_n504.json"))
        reference = run_point(small, sweep(grid=(3.5,), lattice_source="ldpc36_n504", **settings), 3.5)
        self.assertLess(points[-1].nep, reference.nep)

    def test_rate_half_lattice_sweep_is_worker_independent(self):
        lat = build_lattice(load_recipe(RECIPE_DIR / "ldpc36_n504.json"))
        settings = dict(grid=(3.0, 3.5), lattice_source="ldpc36_n504", min_word_errors=50, max_trials=20000,
                        decoder=DecoderConfig(algorithm="sum-product"), batch_size=256)
        first = format_csv(run_sweep(lat, sweep(workers=1, **settings)))
        second = format_csv(run_sweep(lat, sweep(workers=8, **settings)))
        self.assertEqual(first, second)


if __name__ == "__main__":
    unittest.main()
