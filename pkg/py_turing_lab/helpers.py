__all__ = ["map_in_threads", "parse_float_list", "format_float"]

import functools
from typing import Any, Callable, Sequence

import anyio
import numpy as np


async def map_in_threads(
    func: Callable[..., Any], items: Sequence[Any], workers: int = 1
) -> list[Any]:
    """
    Run `func(item)` for every item in worker threads, at most `workers` at a
    time. Results come back in input order whatever the completion order. If
    calls fail, the exception of the earliest failing item is re-raised once
    every call has finished.
    """
    limiter = anyio.CapacityLimiter(max(1, workers))
    results: list[Any] = [None] * len(items)
    errors: dict[int, BaseException] = {}

    async def run_one(index: int, item: Any):
        try:
            results[index] = await anyio.to_thread.run_sync(
                functools.partial(func, item), limiter=limiter
            )
        except Exception as err:
            errors[index] = err

    async with anyio.create_task_group() as task_group:
        for index, item in enumerate(items):
            task_group.start_soon(run_one, index, item)
    if errors:
        raise errors[min(errors)]
    return results


def parse_float_list(text: str) -> list[float]:
    """
    Either comma-separated reals or a `start:stop:count` linspace with both
    ends included.
    """
    text = text.strip()
    if ":" in text:
        start, stop, count = (part.strip() for part in text.split(":"))
        return np.linspace(float(start), float(stop), int(count)).tolist()
    return [float(part) for part in text.split(",") if part.strip()]


def format_float(value: float) -> str:
    """Shortest text that reads back to the same double"""
    return repr(float(value))
