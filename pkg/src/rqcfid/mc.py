"""Monte Carlo driver: per-trial seed derivation and mean/stderr aggregation."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .seeding import Seed


@dataclass(frozen=True)
class Estimate:
    """Sample mean with standard error (sample std / sqrt(n))."""

    mean: float
    stderr: float
    n: int
    seed: Seed

    def z_against(self, reference: float) -> float:
        """Signed z-score of the mean against a noise-free reference."""
        if self.stderr == 0.0:
            if self.mean == reference:
                return 0.0
            return float("inf") if self.mean > reference else float("-inf")
        return float((self.mean - reference) / self.stderr)


def _run_chunk(trial: Callable[[Seed], float], seed: Seed, indices) -> list[float]:
    return [trial(seed.child(i)) for i in indices]


def estimate(trial: Callable[[Seed], float], n: int, seed: Seed,
             workers: Optional[int] = None) -> Estimate:
    """Run n independent trials with derived seeds seed.child(0..n-1).

    Deterministic given (trial, n, seed): trial i always sees the same derived
    seed, and aggregation runs in ascending trial order, so parallel and
    serial execution return identical Estimates.  `trial` must be picklable
    when workers > 1.
    """
    if n < 2:
        raise ValueError("need n >= 2 trials for a standard error")
    values = np.empty(n)
    if workers is None or workers <= 1:
        for i in range(n):
            values[i] = trial(seed.child(i))
    else:
        chunks = np.array_split(np.arange(n), min(workers * 4, n))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [(chunk, pool.submit(_run_chunk, trial, seed, list(chunk)))
                       for chunk in chunks if len(chunk)]
            for chunk, fut in futures:
                values[chunk] = fut.result()
    return Estimate(mean=float(values.mean()),
                    stderr=float(values.std(ddof=1) / np.sqrt(n)),
                    n=n, seed=seed)
