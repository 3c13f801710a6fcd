"""Parallel sweeps over grid points and ray launches."""

from __future__ import annotations

import asyncio
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
import logging
import os
from typing import TypeVar

from numpy.typing import ArrayLike

from .const import DEFAULT_STEP, DEFAULT_STEPS, ENV_THREADS
from .exceptions import NonNullLaunchError
from .geometrize import MetricField
from .raytrace import Trajectory, trace_ray

_LOGGER = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def max_workers() -> int:
    """Executor size: GEOMOPT_THREADS when set to a positive integer, else the CPU count."""
    default = os.cpu_count() or 1
    value = os.environ.get(ENV_THREADS)
    if value is None:
        return default
    try:
        workers = int(value)
    except ValueError:
        workers = 0
    if workers < 1:
        _LOGGER.warning("Ignoring %s=%r, using %s threads", ENV_THREADS, value, default)
        return default
    return workers


async def async_map_points(
    func: Callable[[T], R], items: Iterable[T], *, workers: int | None = None
) -> list[R]:
    """Apply func to every item on a thread pool; results keep the input order."""
    loop = asyncio.get_running_loop()
    work = list(items)
    size = workers or max_workers()
    _LOGGER.debug("Sweeping %s items on %s threads", len(work), size)
    with ThreadPoolExecutor(max_workers=size) as executor:
        return await asyncio.gather(
            *[loop.run_in_executor(executor, func, item) for item in work]
        )


async def async_trace_each(
    metric_field: MetricField,
    launches: Sequence[tuple[ArrayLike, ArrayLike]],
    step: float = DEFAULT_STEP,
    n_steps: int = DEFAULT_STEPS,
    *,
    workers: int | None = None,
) -> list[Trajectory | None]:
    """Trace (x0, k0) launches in parallel; a launch off the light cone gives None in its slot."""

    def trace(item: tuple[int, tuple[ArrayLike, ArrayLike]]) -> Trajectory | None:
        i, (x0, k0) = item
        try:
            return trace_ray(metric_field, x0, k0, step, n_steps)
        except NonNullLaunchError as err:
            _LOGGER.warning("Skipping launch %s: %s", i, err)
            return None

    return await async_map_points(trace, list(enumerate(launches)), workers=workers)


def map_points(
    func: Callable[[T], R], items: Iterable[T], *, workers: int | None = None
) -> list[R]:
    """Blocking form of async_map_points."""
    return asyncio.run(async_map_points(func, items, workers=workers))
