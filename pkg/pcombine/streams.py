"""Block-indexed random streams.

Replications are cut into fixed-size blocks; block b always draws from
Philox(SeedSequence(master_seed, spawn_key=(b,))), so results depend on the
master seed and block size only, never on how blocks are scheduled.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, TypeVar

import numpy as np

from pcombine.settings import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")

TINY = np.finfo(float).tiny


def block_generator(master_seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(master_seed, spawn_key=(block,)))
    )


def block_sizes(replications: int, block_size: int) -> list[int]:
    full, rest = divmod(replications, block_size)
    return [block_size] * full + ([rest] if rest else [])


def uniforms(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniforms on (0, 1); exact zeros are lifted to the smallest normal float."""
    return np.maximum(rng.random(shape), TINY)


def map_blocks(
    work: Callable[[np.random.Generator, int], T],
    replications: int,
    master_seed: int,
    block_size: int,
    workers: Optional[int] = None,
) -> list[T]:
    """Run work(rng, n) for each block and return the results in block order."""
    workers = get_settings().monte_carlo.workers if workers is None else workers
    sizes = block_sizes(replications, block_size)

    def run(block: int) -> T:
        return work(block_generator(master_seed, block), sizes[block])

    if workers <= 1 or len(sizes) == 1:
        return [run(b) for b in range(len(sizes))]
    logger.debug(f"Running {len(sizes)} blocks on {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run, range(len(sizes))))
