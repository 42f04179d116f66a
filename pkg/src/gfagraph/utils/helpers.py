from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

T = TypeVar("T")

# upper bound on gathered elements per row chunk
_CHUNK_ELEMENTS = 1 << 21


def roundHalfAway(values: ArrayLike) -> NDArray:
    """
    Round to the nearest integer, halves away from zero (``2.5 -> 3``, ``-2.5 -> -3``).

    Parameters
    ----------
    values : ArrayLike
        Real values.

    Returns
    -------
    NDArray
        The rounded values as floats.
    """
    values = np.asarray(values, dtype=np.float64)
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def chunkBounds(numberRows: int, rowWidth: int) -> list[tuple[int, int]]:
    """
    Split ``numberRows`` rows into contiguous ``(start, stop)`` chunks so that a chunk
    holds roughly ```_CHUNK_ELEMENTS``` values when every row has ``rowWidth`` values.
    """
    rowsPerChunk = max(1, _CHUNK_ELEMENTS // max(1, rowWidth))
    return [
        (start, min(start + rowsPerChunk, numberRows))
        for start in range(0, numberRows, rowsPerChunk)
    ]


def mapRowChunks(
    func: Callable[[int, int], T],
    numberRows: int,
    rowWidth: int,
    threads: int = 1,
) -> list[T]:
    """
    Apply ``func(start, stop)`` to every row chunk and return the results in chunk order.

    The chunking only depends on ``numberRows`` and ``rowWidth``. The number of threads
    changes the scheduling but never the result, because results are gathered by index.

    Parameters
    ----------
    func : Callable[[int, int], T]
        The function processing the rows ``start`` to ``stop - 1``.
    numberRows : int
        The number of rows.
    rowWidth : int
        The number of values per row, used to size the chunks.
    threads : int
        The number of worker threads. Values below 2 run sequentially.

    Returns
    -------
    list[T]
        One result per chunk, ordered by ``start``.
    """
    bounds = chunkBounds(numberRows, rowWidth)
    if threads is None or threads < 2 or len(bounds) < 2:
        return [func(start, stop) for start, stop in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(func, start, stop) for start, stop in bounds]
        return [future.result() for future in futures]
