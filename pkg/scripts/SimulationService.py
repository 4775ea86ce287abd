import csv
import io
import logging
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PyQt6.QtCore import QObject, QThreadPool, pyqtSignal
from scipy.stats import binomtest

from . import config
from .ChannelService import ChannelConfig, ChannelService, nep, zero_word_justification
from .decode.common import DecoderConfig
from .decode.dispatch import decode_batch
from .decode.oracle import ml_oracle_batch
from .errors import ConfigError, UnsupportedDecoderError
from .lattice.geometry import tanner_graph
from .sim.worker import BatchCounts, BatchTask, BatchWorker, PointContext, run_batch

logger = logging.getLogger('Simulation')


@dataclass(frozen=True)
class SweepConfig:
    lattice_source: str
    vnr_grid: tuple
    decoder: DecoderConfig = field(default_factory=DecoderConfig)
    min_word_errors: int = config.MIN_WORD_ERRORS
    max_trials: int = config.MAX_TRIALS
    master_seed: int = 0
    workers: int = config.WORKERS
    batch_size: int = config.BATCH_SIZE
    random_members: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'vnr_grid', tuple(float(v) for v in self.vnr_grid))
        if not self.vnr_grid:
            raise ConfigError("VNR grid is empty")
        if self.min_word_errors < 1:
            raise ConfigError("min_word_errors must be at least 1")
        if self.max_trials < self.min_word_errors:
            raise ConfigError("max_trials must be at least min_word_errors")
        if self.workers < 1 or self.batch_size < 1:
            raise ConfigError("workers and batch_size must be positive")
        if self.master_seed < 0:
            raise ConfigError("The master seed must be a non-negative integer")


@dataclass(frozen=True)
class PointResult:
    vnr_db: float
    sigma: float
    n: int
    counts: BatchCounts
    seed: str

    @property
    def trials(self):
        return self.counts.trials

    @property
    def word_errors(self):
        return self.counts.word_errors

    @property
    def symbol_errors(self):
        return self.counts.symbol_errors

    @property
    def wer(self):
        return self.word_errors / self.trials

    @property
    def ser(self):
        """Fraction of coordinates where the decoded point differs from the sent one"""
        return self.symbol_errors / (self.trials * self.n)

    @property
    def nep(self):
        return nep(self.wer, self.n)

    @property
    def mean_iterations(self):
        return self.counts.iteration_sum / self.trials

    def wilson_interval(self, confidence=config.CONFIDENCE_LEVEL):
        ci = binomtest(self.word_errors, self.trials).proportion_ci(confidence_level=confidence, method='wilson')
        return float(ci.low), float(ci.high)

    def row(self):
        low, high = self.wilson_interval()
        return (self.vnr_db, self.sigma, self.trials, self.word_errors, self.symbol_errors, self.wer, self.ser,
                self.nep, self.mean_iterations, low, high, self.seed)


@dataclass(frozen=True)
class SimResult:
    points: tuple
    config: SweepConfig

    def rows(self):
        return [p.row() for p in sorted(self.points, key=lambda p: p.vnr_db)]


@dataclass(frozen=True)
class OracleReport:
    trials: int
    iterative_word_errors: int
    oracle_word_errors: int
    disagreements: int
    oracle_losses: int          # trials where the oracle's point was farther than the iterative one

    @property
    def iterative_wer(self):
        return self.iterative_word_errors / self.trials

    @property
    def oracle_wer(self):
        return self.oracle_word_errors / self.trials


def _format_value(value):
    return repr(float(value)) if isinstance(value, (float, np.floating)) else str(value)


def format_csv(result):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(config.CSV_COLUMNS)
    for row in result.rows():
        writer.writerow([_format_value(v) for v in row])
    return buffer.getvalue()


def write_csv(path, result):
    with open(path, 'w', newline='') as f:
        f.write(format_csv(result))
    logger.info(f"Wrote {len(result.points)} sweep points to {path}")


def version_string():
    """git describe of the source tree, or the package version outside a checkout"""
    try:
        described = subprocess.run(['git', 'describe', '--tags', '--always', '--dirty'],
                                   cwd=Path(__file__).resolve().parent, capture_output=True,
                                   text=True, timeout=5)
        if described.returncode == 0 and described.stdout.strip():
            return described.stdout.strip()
    except (OSError, subprocess.SubprocessError) as e:
        logger.debug(f"git describe unavailable: {e}")
    return config.VERSION


def format_metadata(result, lat, recipe_text=None):
    cfg = result.config
    degrees = lat.H.base.column_degrees()
    row_degrees = lat.H.base.row_degrees()
    lines = [
        f"version: {version_string()}",
        f"lattice_source: {cfg.lattice_source}",
        f"n: {lat.n}",
        f"levels: {lat.levels}",
        f"r_levels: {','.join(str(r) for r in lat.r_levels)}",
        f"symbol_degrees: {int(degrees.min()) if len(degrees) else 0}..{int(degrees.max()) if len(degrees) else 0}",
        f"check_degrees: {int(row_degrees.min()) if len(row_degrees) else 0}.."
        f"{int(row_degrees.max()) if len(row_degrees) else 0}",
        f"decoder: {cfg.decoder.describe()}",
        f"stopping_rule: min_word_errors={cfg.min_word_errors} max_trials={cfg.max_trials} "
        f"batch_size={cfg.batch_size}",
        f"master_seed: {cfg.master_seed}",
        f"workers: {cfg.workers}",
        f"transmission: {'random members' if cfg.random_members else 'zero word'}",
        f"rng: {config.RNG_DESCRIPTION}",
        f"vnr_formula: {config.VNR_FORMULA_VERSION}",
        "ser_definition: fraction of coordinates where the decoded point differs from the sent point",
        f"zero_word: {zero_word_justification()}",
    ]
    if recipe_text:
        lines.append("recipe:")
        lines.extend(f"  {line}" for line in recipe_text.strip().splitlines())
    return "\n".join(lines) + "\n"


def write_metadata(path, result, lat, recipe_text=None):
    with open(path, 'w') as f:
        f.write(format_metadata(result, lat, recipe_text))


class SimulationService(QObject):
    """
    Seeded Monte Carlo engine over fixed-size trial batches

    Batches are merged strictly in batch order and the stopping rule is
    checked after every merge, so the counts depend only on the master seed
    and the batch size, never on the number of workers.
    """

    point_finished = pyqtSignal(dict)   # Emitted after each sweep point
    status_update = pyqtSignal(str)     # Emitted for progress messages
    error = pyqtSignal(str)             # Emitted when a point fails

    def __init__(self, workers=None):
        super().__init__()
        self.pool = QThreadPool()
        if workers:
            self.pool.setMaxThreadCount(workers)

    def _check_decoder(self, lat, cfg):
        if cfg.decoder.algorithm != "ml" and lat.a != 0:
            raise UnsupportedDecoderError("Iterative decoders are implemented for 1-level lattices only")

    def _run_wave(self, context, tasks, workers):
        if workers == 1 or len(tasks) == 1:
            return [run_batch(context, task) for task in tasks]
        runners = [BatchWorker(context, task) for task in tasks]
        for runner in runners:
            self.pool.start(runner)
        self.pool.waitForDone()
        for runner in runners:
            if runner.error is not None:
                raise runner.error
        return [runner.result for runner in runners]

    def run_point(self, lat, cfg, vnr_db, point_index=0, graph=None):
        """
        Trials at one VNR until word_errors >= W_min or trials == T_max

        Returns:
            PointResult
        """
        self._check_decoder(lat, cfg)
        graph = graph or tanner_graph(lat)
        channel = ChannelService(lat, ChannelConfig.for_lattice(lat, vnr_db), cfg.master_seed, cfg.random_members)
        context = PointContext(lat, graph, channel, cfg.decoder)

        total = BatchCounts()
        batch_index = 0
        done = False
        while not done:
            tasks = []
            planned = total.trials
            for _ in range(cfg.workers):
                if planned >= cfg.max_trials:
                    break
                count = min(cfg.batch_size, cfg.max_trials - planned)
                tasks.append(BatchTask(point_index, batch_index, planned, count))
                planned += count
                batch_index += 1
            if not tasks:
                break
            for counts in self._run_wave(context, tasks, cfg.workers):
                total.merge(counts)
                if total.word_errors >= cfg.min_word_errors or total.trials >= cfg.max_trials:
                    done = True
                    break
            logger.debug(f"Point {point_index}: {total.trials} trials, {total.word_errors} word errors")

        result = PointResult(float(vnr_db), channel.sigma, lat.n, total, f"{cfg.master_seed}:{point_index}")
        logger.info(f"VNR {vnr_db} dB: {result.trials} trials, WER {result.wer:.3e}, NEP {result.nep:.3e}, "
                    f"mean iterations {result.mean_iterations:.2f}")
        return result

    def run_sweep(self, lat, cfg):
        """Runs every grid point in order; per-point failures are collected and raised together"""
        self._check_decoder(lat, cfg)
        graph = tanner_graph(lat)
        points = []
        failures = []
        for index, vnr_db in enumerate(cfg.vnr_grid):
            self.status_update.emit(f"Simulating VNR {vnr_db} dB ({index + 1}/{len(cfg.vnr_grid)})")
            try:
                point = self.run_point(lat, cfg, vnr_db, index, graph)
            except ValueError as e:
                self.error.emit(str(e))
                failures.append(f"{vnr_db} dB: {e}")
                continue
            points.append(point)
            self.point_finished.emit(dict(zip(config.CSV_COLUMNS, point.row())))
        if failures:
            raise ConfigError("Sweep points failed: " + "; ".join(failures))
        return SimResult(tuple(points), cfg)

    def oracle_compare(self, lat, cfg, vnr_db, trials):
        """
        Paired trials through the iterative decoder and the ML oracle

        Both decoders see the same noise; an oracle point farther from the
        received word than the iterative one would be a harness bug.
        """
        if cfg.decoder.algorithm == "ml":
            raise ConfigError("oracle-check compares an iterative decoder with the oracle; pick min-sum or sum-product")
        self._check_decoder(lat, cfg)
        graph = tanner_graph(lat)
        channel = ChannelService(lat, ChannelConfig.for_lattice(lat, vnr_db), cfg.master_seed, cfg.random_members)

        iterative_errors = oracle_errors = disagreements = losses = 0
        for first in range(0, trials, cfg.batch_size):
            count = min(cfg.batch_size, trials - first)
            sent, received = channel.transmit(0, first, count)
            decoded = decode_batch(lat, graph, received, channel.sigma, cfg.decoder)
            iterative = decoded.points
            oracle, oracle_distance = ml_oracle_batch(lat, received)
            iterative_distance = ((received - iterative) ** 2).sum(axis=1)

            iterative_errors += int((iterative != sent).any(axis=1).sum())
            oracle_errors += int((oracle != sent).any(axis=1).sum())
            disagreements += int((iterative != oracle).any(axis=1).sum())
            # only converged outputs are lattice points the oracle has to beat
            losses += int(((oracle_distance > iterative_distance + 1e-9) & decoded.converged).sum())

        report = OracleReport(trials, iterative_errors, oracle_errors, disagreements, losses)
        if losses:
            logger.error(f"ML oracle lost {losses} paired trials by distance")
        logger.info(f"Oracle check at {vnr_db} dB: iterative WER {report.iterative_wer:.3e}, "
                    f"oracle WER {report.oracle_wer:.3e}, disagreements {disagreements}")
        return report


def run_point(lat, cfg, vnr_db, point_index=0):
    return SimulationService(cfg.workers).run_point(lat, cfg, vnr_db, point_index)


def run_sweep(lat, cfg):
    return SimulationService(cfg.workers).run_sweep(lat, cfg)


def oracle_compare(lat, cfg, vnr_db, trials):
    return SimulationService(cfg.workers).oracle_compare(lat, cfg, vnr_db, trials)
