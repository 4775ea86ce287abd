import math
import unittest

import numpy as np

from scripts.ChannelService import (ChannelConfig, ChannelService, TrialOutcome, analytic_scalar_pe, awgn_sample,
                                    nep, random_member, sigma_from_vnr, trial_rng, vnr_from_sigma, vnr_linear,
                                    zero_word_justification)
from scripts.decode.oracle import ml_oracle_batch
from scripts.errors import ConfigError
from scripts.lattice.construction import is_member
from tests.TestBase import TestBase


class TestNoiseLevels(TestBase):
    def test_vnr_linear(self):
        self.assertAlmostEqual(vnr_linear(10.0), 10.0)
        self.assertAlmostEqual(vnr_linear(0.0), 1.0)

    def test_scalar_lattice_sigma(self):
        # 2Z has volume 2, so det^(2/n) = 4
        sigma = sigma_from_vnr(self.scalar_lattice(), 0.0)
        self.assertAlmostEqual(sigma, math.sqrt(4.0 / (2.0 * math.pi * math.e)))

    def test_vnr_round_trip(self):
        lat = self.e8()
        for vnr_db in (-1.0, 0.0, 2.5, 7.0):
            self.assertAlmostEqual(vnr_from_sigma(lat, sigma_from_vnr(lat, vnr_db)), vnr_db)

    def test_exact_volume_sets_the_noise(self):
        lat = self.three_level_n4()
        expected = math.sqrt(2.0 ** (2.0 * 5 / 4) / (2.0 * math.pi * math.e))
        self.assertAlmostEqual(sigma_from_vnr(lat, 0.0), expected)

    def test_invalid_inputs(self):
        with self.assertRaises(ConfigError):
            sigma_from_vnr(self.e8(), math.inf)
        with self.assertRaises(ConfigError):
            vnr_from_sigma(self.e8(), 0.0)
        with self.assertRaises(ConfigError):
            ChannelConfig.for_lattice(self.e8(), math.nan)

    def test_error_rates(self):
        self.assertAlmostEqual(nep(0.5, 8), 0.125)
        with self.assertRaises(ConfigError):
            nep(1.5, 8)
        self.assertAlmostEqual(analytic_scalar_pe(1.0), 0.31731050786291415)
        with self.assertRaises(ConfigError):
            analytic_scalar_pe(0.0)


class TestRandomness(TestBase):
    def test_trial_streams(self):
        first = trial_rng(7, 0, 3).standard_normal(4)
        self.assertArrayEqual(first, trial_rng(7, 0, 3).standard_normal(4))
        self.assertFalse(np.array_equal(first, trial_rng(7, 0, 4).standard_normal(4)))
        self.assertFalse(np.array_equal(first, trial_rng(7, 1, 3).standard_normal(4)))
        self.assertFalse(np.array_equal(first, trial_rng(8, 0, 3).standard_normal(4)))

    def test_awgn(self):
        x = np.zeros(20000)
        r = awgn_sample(x, 0.5, trial_rng(1, 0, 0))
        self.assertAlmostEqual(float(r.std()), 0.5, delta=0.02)
        self.assertAlmostEqual(float(r.mean()), 0.0, delta=0.02)
        with self.assertRaises(ConfigError):
            awgn_sample(x, -1.0, trial_rng(1, 0, 0))

    def test_noise_moments_and_independence(self):
        sigma = 0.7
        count = 1_000_000
        e = awgn_sample(np.zeros(count), sigma, trial_rng(21, 4, 9))
        self.assertLess(abs(float(e.mean())), 5.0 * sigma / math.sqrt(count))
        self.assertLess(abs(float(e.var()) - sigma ** 2), 5.0 * sigma ** 2 * math.sqrt(2.0 / count))
        lag_one = float(np.corrcoef(e[:-1], e[1:])[0, 1])
        self.assertLess(abs(lag_one), 5.0 / math.sqrt(count))

    def test_neighbouring_trials_are_uncorrelated(self):
        firsts = np.array([trial_rng(2, 0, t).standard_normal() for t in range(20000)])
        lag_one = float(np.corrcoef(firsts[:-1], firsts[1:])[0, 1])
        self.assertLess(abs(lag_one), 5.0 / math.sqrt(len(firsts)))

    def test_scalar_lattice_error_rate_matches_theory(self):
        lat = self.scalar_lattice()
        trials = 100_000
        for index, sigma in enumerate((0.4, 0.5, 0.7)):
            received = awgn_sample(np.zeros((trials, 1)), sigma, trial_rng(31, index, 0))
            points, _ = ml_oracle_batch(lat, received)
            measured = float(np.mean(points[:, 0] != 0))
            expected = analytic_scalar_pe(sigma)
            standard_error = math.sqrt(expected * (1.0 - expected) / trials)
            self.assertLessEqual(abs(measured - expected), 3.0 * standard_error, f"sigma={sigma}")

    def test_random_members(self):
        rng = trial_rng(3, 0, 0)
        for lat in (self.e8(), self.three_level_n4(), self.two_level_n16()):
            for _ in range(5):
                self.assertTrue(is_member(lat, random_member(lat, rng)), repr(lat))


class TestChannelService(TestBase):
    def service(self, random_members=False, seed=11):
        lat = self.e8()
        return ChannelService(lat, ChannelConfig.for_lattice(lat, 2.0), seed, random_members)

    def test_zero_word_default(self):
        sent, received = self.service().transmit(0, 0, 5)
        self.assertArrayEqual(sent, np.zeros((5, 8)))
        self.assertEqual(received.shape, (5, 8))
        self.assertIn("geometrically uniform", zero_word_justification())

    def test_batches_do_not_depend_on_their_split(self):
        service = self.service(random_members=True)
        sent, received = service.transmit(2, 0, 8)
        part_sent, part_received = service.transmit(2, 5, 3)
        self.assertArrayEqual(part_sent, sent[5:])
        self.assertArrayEqual(part_received, received[5:])

    def test_outcomes(self):
        sent = np.array([[0, 0, 0], [1, 1, 0]])
        decoded = np.array([[0, 0, 0], [1, -1, 2]])
        word_errors, symbol_errors = ChannelService.outcomes(sent, decoded)
        self.assertArrayEqual(word_errors, [False, True])
        self.assertArrayEqual(symbol_errors, [0, 2])

    def test_trial_outcome_consistency(self):
        TrialOutcome(True, 2, 3, True)
        with self.assertRaises(ValueError):
            TrialOutcome(False, 1, 3, True)


if __name__ == "__main__":
    unittest.main()
