"""
Seeded job fan-out for Monte Carlo sweeps.

Each job receives its own SeedSequence child; results come back sorted by
job id whatever order the workers finish in.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, Tuple, TypeVar

import numpy as np
import structlog

logger = structlog.get_logger(__name__)

P = TypeVar("P")
R = TypeVar("R")


def job_seeds(seed: int, n: int) -> List[int]:
    """n independent 64-bit seeds spawned from one run seed."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def fan_out(
    fn: Callable[[P, int], R],
    params: Sequence[P],
    seed: int,
    max_workers: int = 4,
) -> List[Tuple[int, R]]:
    """
    Run fn(param, job_seed) for every param on a thread pool.

    Args:
        fn: Job body; must only use the generator built from its seed
        params: One entry per job
        seed: Run seed the job seeds are spawned from
        max_workers: Pool size

    Returns:
        (job id, result) pairs in job-id order
    """
    seeds = job_seeds(seed, len(params))
    logger.debug("Fanning out jobs", jobs=len(params), max_workers=max_workers)
    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        futures = {pool.submit(fn, param, s): i for i, (param, s) in enumerate(zip(params, seeds))}
        results = [(job_id, future.result()) for future, job_id in futures.items()]
    return sorted(results, key=lambda item: item[0])
