import logging
from dataclasses import dataclass, fields

import numpy as np
from PyQt6.QtCore import QRunnable

from ..decode.dispatch import decode_batch

logger = logging.getLogger('Simulation')


@dataclass(frozen=True)
class BatchTask:
    point_index: int
    batch_index: int
    first_trial: int
    count: int


@dataclass
class BatchCounts:
    """Integer tallies of one batch; merging is plain addition"""
    trials: int = 0
    word_errors: int = 0
    symbol_errors: int = 0
    iteration_sum: int = 0
    unconverged: int = 0

    def merge(self, other):
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))


@dataclass(frozen=True)
class PointContext:
    """Read-only state shared by every batch of one sweep point"""
    lat: object
    graph: object
    channel: object
    decoder: object


def run_batch(context, task):
    sent, received = context.channel.transmit(task.point_index, task.first_trial, task.count)
    output = decode_batch(context.lat, context.graph, received, context.channel.sigma, context.decoder)
    word_errors, symbol_errors = context.channel.outcomes(sent, output.points)
    return BatchCounts(
        trials=task.count,
        word_errors=int(word_errors.sum()),
        symbol_errors=int(symbol_errors.sum()),
        iteration_sum=int(np.asarray(output.iterations).sum()),
        unconverged=int((~np.asarray(output.converged)).sum()),
    )


class BatchWorker(QRunnable):
    """
    Runs one trial batch on the thread pool

    The result (or the exception) stays on the worker for the caller to
    collect after the pool is done.
    """

    def __init__(self, context, task):
        super().__init__()
        self.setAutoDelete(False)
        self.context = context
        self.task = task
        self.result = None
        self.error = None

    def run(self):
        try:
            self.result = run_batch(self.context, self.task)
        except Exception as e:
            logger.error(f"Error in batch {self.task.batch_index} of point {self.task.point_index}: {e}",
                         exc_info=True)
            self.error = e
