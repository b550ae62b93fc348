import json
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Hashable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV: str = "FP2_WORKERS"

PLUS: str = "+"
MINUS: str = "-"


def vertex_key(vertex: Hashable) -> tuple[Any, ...]:
    """
    Total order on heterogeneous vertex ids: ints before strings before tuples,
    tuples compared recursively.
    """
    if isinstance(vertex, bool):
        return (0, int(vertex))
    if isinstance(vertex, int):
        return (0, vertex)
    if isinstance(vertex, str):
        return (1, vertex)
    if isinstance(vertex, (tuple, frozenset)):
        items = vertex if isinstance(vertex, tuple) else sorted(vertex, key=vertex_key)
        return (2, tuple(vertex_key(item) for item in items))
    return (3, repr(vertex))


def sort_vertices(vertices: Iterable[Hashable]) -> list[Hashable]:
    return sorted(vertices, key=vertex_key)


def format_vertex(vertex: Hashable) -> str:
    if isinstance(vertex, str):
        return vertex
    if isinstance(vertex, tuple):
        return "(" + ",".join(format_vertex(item) for item in vertex) + ")"
    if isinstance(vertex, frozenset):
        return "{" + ",".join(format_vertex(item) for item in sort_vertices(vertex)) + "}"
    return str(vertex)


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def worker_count() -> int:
    raw = os.getenv(WORKERS_ENV, "1")
    try:
        workers = int(raw)
    except ValueError as e:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from e
    if workers < 1:
        raise ValueError(f"{WORKERS_ENV} must be at least 1, got {workers}")
    return workers


def parallel_map(func: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """
    Map a module level function over items, in worker processes when
    FP2_WORKERS > 1. Result order follows the input order.
    """
    workers = min(worker_count(), max(len(items), 1))
    if workers == 1:
        return [func(item) for item in items]
    chunksize = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunksize))
