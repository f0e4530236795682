"""Pattern search on a dyadic integer lattice with a front-archive base set.

The box [lower, upper] is mapped to the integer lattice [0, 2^N]^n so that
sampling steps are exact; step widths are powers of two that halve when the
base set stalls.  Objective values are memoized per lattice point, and the
base set for the next iteration is the union of leading Pareto fronts of the
current bases and samples (see :mod:`mopsearch.fronts`).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .fronts import hall_of_fame, presort_gyrm

GridPoint = tuple[int, ...]


@dataclass(frozen=True)
class GridSpec:
    """Search box with dyadic lattice resolution 2^N per dimension."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    resolution_exponent: int

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))
        if len(self.lower) != len(self.upper) or not self.lower:
            raise ValueError("lower/upper bounds must be nonempty and of equal length")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("lower bounds must be strictly below upper bounds")
        if self.resolution_exponent < 1:
            raise ValueError("resolution exponent must be >= 1")

    @property
    def n_dims(self) -> int:
        return len(self.lower)

    @property
    def side(self) -> int:
        return 2 ** self.resolution_exponent

    def center(self) -> GridPoint:
        return (self.side // 2,) * self.n_dims

    def to_params(self, point: Sequence[int]) -> np.ndarray:
        """Map a lattice point to box coordinates, exact at both endpoints."""
        side = self.side
        out = np.empty(self.n_dims)
        for i, s in enumerate(point):
            if s == 0:
                out[i] = self.lower[i]
            elif s == side:
                out[i] = self.upper[i]
            else:
                out[i] = self.lower[i] + (s / side) * (self.upper[i] - self.lower[i])
        return out


class EvalCache:
    """Insert-once map from lattice point to objective tuple.

    Lattice points are exact integer keys, so revisited points are never
    re-evaluated.  Tracks unique evaluations, lookup hits and how many stored
    results were infeasible (barrier) values.
    """

    def __init__(self):
        self._store: dict[GridPoint, tuple[float, ...]] = {}
        self.hits = 0
        self.infeasible_results = 0

    @property
    def unique_evaluations(self) -> int:
        return len(self._store)

    def __contains__(self, key: GridPoint) -> bool:
        return key in self._store

    def __getitem__(self, key: GridPoint) -> tuple[float, ...]:
        return self._store[key]

    def lookup(self, key: GridPoint) -> tuple[float, ...] | None:
        val = self._store.get(key)
        if val is not None:
            self.hits += 1
        return val

    def store(self, key: GridPoint, value: tuple[float, ...]) -> None:
        if key in self._store:
            raise KeyError(f"lattice point {key} already evaluated")
        self._store[key] = value
        if any(not math.isfinite(v) for v in value):
            self.infeasible_results += 1


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    n_bases: int
    n_samples: int
    widths: tuple[int, ...]
    unique_evaluations: int
    cache_hits: int
    infeasible_results: int
    event: str  # "moved" | "halved:<dim>" | "stopped" | "budget"


@dataclass
class SearchResult:
    """Final carriers of the first-level front, their parameters and images."""

    grid_points: list[GridPoint]
    params: np.ndarray
    images: list[tuple[float, ...]]
    front: list[tuple[float, ...]]
    trace: list[TraceRecord] = field(repr=False)
    cache: EvalCache = field(repr=False)


def sample_pattern(
    bases: Iterable[GridPoint],
    widths: Sequence[int],
    spec: GridSpec,
    visited: set[GridPoint],
) -> list[GridPoint]:
    """Axis-aligned +/- width neighbors of every base that fall inside the
    lattice box and were never visited.  Deterministic order: bases
    lexicographically, then dimension, then +step before -step.
    """
    side = spec.side
    out: list[GridPoint] = []
    seen: set[GridPoint] = set()
    for b in sorted(bases):
        for i in range(spec.n_dims):
            for step in (widths[i], -widths[i]):
                c = b[i] + step
                if c < 0 or c > side:
                    continue
                s = b[:i] + (c,) + b[i + 1:]
                if s in visited or s in seen:
                    continue
                seen.add(s)
                out.append(s)
    return out


def _evaluate_batch(
    objective: Callable[[np.ndarray], Sequence[float]],
    spec: GridSpec,
    points: Sequence[GridPoint],
    cache: EvalCache,
    workers: int,
) -> None:
    xs = [spec.to_params(s) for s in points]
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(objective, xs))
    else:
        raw = [objective(x) for x in xs]
    for s, r in zip(points, raw):
        val = tuple(float(v) for v in r)
        if any(math.isnan(v) for v in val):
            raise ValueError(f"objective returned NaN at lattice point {s}")
        cache.store(s, val)


def pattern_search(
    objective: Callable[[np.ndarray], Sequence[float]],
    spec: GridSpec,
    hof_threshold: int,
    budget: int | None = None,
    weights: Sequence[float] | None = None,
    workers: int = 1,
) -> SearchResult:
    """Run the multi-objective pattern search until the maximum step width
    reaches one (or the evaluation budget is exhausted).

    ``hof_threshold`` is the minimum number of archived front values carried
    between iterations; ``budget`` caps unique (cache-miss) objective
    evaluations, counting barrier-rejected points.  Identical inputs produce
    bit-identical results; batches may evaluate concurrently via ``workers``
    without affecting the outcome.
    """
    if hof_threshold < 1:
        raise ValueError("hof_threshold must be >= 1")
    if budget is not None and budget < 1:
        raise ValueError("budget must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")

    widths = [spec.side // 2] * spec.n_dims
    bases: list[GridPoint] = [spec.center()]
    visited: set[GridPoint] = set(bases)
    cache = EvalCache()
    trace: list[TraceRecord] = []
    iteration = 0
    selected_points: list[GridPoint] = bases
    selected_values: list[tuple[float, ...]] = []

    while True:
        iteration += 1
        samples = sample_pattern(bases, widths, spec, visited)
        visited.update(samples)
        pool = list(bases) + samples

        to_eval = [s for s in pool if cache.lookup(s) is None]
        truncated = False
        if budget is not None:
            room = budget - cache.unique_evaluations
            if len(to_eval) > room:
                to_eval = to_eval[:room]
                truncated = True
        _evaluate_batch(objective, spec, to_eval, cache, workers)

        evaluated = [s for s in pool if s in cache]
        values = [cache[s] for s in evaluated]
        chosen = hall_of_fame(values, hof_threshold, weights)
        archive = {values[i] for i in chosen}
        selected_points = [s for s, v in zip(evaluated, values) if v in archive]
        selected_values = [v for v in values if v in archive]

        event: str
        stop = False
        if truncated:
            event = "budget"
            stop = True
        elif set(selected_points) != set(bases):
            bases = sorted(selected_points)
            event = "moved"
        elif max(widths) == 1:
            event = "stopped"
            stop = True
        else:
            j = widths.index(max(widths))
            widths[j] //= 2
            event = f"halved:{j}"
        trace.append(TraceRecord(
            iteration=iteration,
            n_bases=len(bases),
            n_samples=len(samples),
            widths=tuple(widths),
            unique_evaluations=cache.unique_evaluations,
            cache_hits=cache.hits,
            infeasible_results=cache.infeasible_results,
            event=event,
        ))
        if stop:
            break

    # final first-level reduction of the archive and of its carriers
    front_local = presort_gyrm(selected_values, weights)
    front = []
    seen: set[tuple[float, ...]] = set()
    for i in front_local:
        if selected_values[i] not in seen:
            seen.add(selected_values[i])
            front.append(selected_values[i])
    carriers = sorted(
        {s for s in selected_points if cache[s] in seen},
        key=lambda s: (cache[s], s),
    )
    params = np.array([spec.to_params(s) for s in carriers]).reshape(len(carriers), spec.n_dims)
    return SearchResult(
        grid_points=carriers,
        params=params,
        images=[cache[s] for s in carriers],
        front=front,
        trace=trace,
        cache=cache,
    )
