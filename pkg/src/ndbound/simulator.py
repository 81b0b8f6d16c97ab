"""Monte Carlo estimate of the discovery time.

Replications are grouped in fixed blocks of ``BLOCK`` consecutive indices.
Block ``b`` draws from a generator seeded by ``SeedSequence(seed,
spawn_key=(b,))``, so the values for replication ``r`` depend only on
``(seed, r)`` and never on how blocks are spread over workers. Block results
are concatenated in index order before any reduction.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import TimeModel, validate
from .errors import SlotCapExceeded, TooFewReps, ValidationError

BLOCK = 8192
MIN_REPS = 100
SLOT_CAP = 10**9
Z95 = 1.96


@dataclass(frozen=True)
class SimulationReport:
    mean: float
    std_error: float
    ci95_low: float
    ci95_high: float
    reps: int
    model: TimeModel
    seed: int

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "ci95_low": self.ci95_low,
            "ci95_high": self.ci95_high,
            "reps": self.reps,
            "model": self.model.value,
            "seed": self.seed,
        }


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _simulate_block(p: np.ndarray, model: TimeModel, seed: int, block: int, size: int) -> np.ndarray:
    rng = _block_rng(seed, block)
    if model is TimeModel.CONTINUOUS_EXPONENTIAL:
        return rng.exponential(1.0 / p, size=(size, p.size)).max(axis=1)
    # slot of the first Bernoulli(p_j) success, sampled directly
    slots = rng.geometric(p, size=(size, p.size)).max(axis=1)
    if slots.max() > SLOT_CAP:
        raise SlotCapExceeded(SLOT_CAP)
    return slots.astype(float)


def sample_discovery_times(p, model, reps: int, seed: int, workers: int = 1) -> np.ndarray:
    """Per-replication discovery times, in replication order."""
    p = validate(p)
    model = TimeModel.parse(model)
    if not 0 <= seed < 2**64:
        raise ValidationError(f"seed={seed} is not a 64-bit unsigned integer")
    arr = p.as_array()
    jobs = [(b, min(BLOCK, reps - b * BLOCK)) for b in range(math.ceil(reps / BLOCK))]
    if workers <= 1:
        parts = [_simulate_block(arr, model, seed, b, size) for b, size in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _simulate_block(arr, model, seed, *job), jobs))
    return np.concatenate(parts)


def simulate_discovery(p, model="exponential", reps: int = 100_000, seed: int = 42, workers: int = 1) -> SimulationReport:
    """Sample mean, standard error and normal 95% interval of the discovery time.

    ``exponential``: neighbor ``j`` is found after an Exp(rate ``p_j``) wait;
    ``slotted``: at the first slot in which a Bernoulli(``p_j``) trial
    succeeds. The replication time is the last of these.
    """
    if reps < MIN_REPS:
        raise TooFewReps(reps, MIN_REPS)
    model = TimeModel.parse(model)
    times = sample_discovery_times(p, model, reps, seed, workers)
    mean = float(np.mean(times))
    std = float(np.std(times, ddof=1))
    se = std / math.sqrt(reps)
    return SimulationReport(mean, se, mean - Z95 * se, mean + Z95 * se, reps, model, seed)
