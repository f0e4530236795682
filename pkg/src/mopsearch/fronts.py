"""Dominance tests, non-dominated sorting and Pareto front utilities.

A point is a tuple of objective values to be minimized.  Constraint-violating
points follow the extreme-barrier convention: every component is +inf, so any
finite point dominates them and duplicate barrier points collapse to one.
"""
from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

Point = Sequence[float]


class ImagePoint(tuple):
    """Objective vector; an all-+inf tuple encodes an infeasible point."""

    __slots__ = ()

    @classmethod
    def of(cls, *values: float) -> "ImagePoint":
        return cls(float(v) for v in values)

    @classmethod
    def infeasible(cls, n_objectives: int = 2) -> "ImagePoint":
        return cls((math.inf,) * n_objectives)

    @property
    def feasible(self) -> bool:
        return all(map(math.isfinite, self))


def dominates(a: Point, b: Point) -> bool:
    """True when ``a`` dominates-or-equals ``b`` (componentwise a <= b).

    +inf <= +inf holds, so a barrier point dominates another barrier point;
    this is what removes duplicate infeasible entries during reduction.
    """
    if len(a) != len(b):
        raise ValueError("points have mismatching numbers of objectives")
    return all(x <= y for x, y in zip(a, b))


def _as_array(points: Sequence[Point]) -> np.ndarray:
    vals = np.asarray(points, dtype=float)
    if vals.ndim != 2:
        raise ValueError("points must share one number of objectives")
    return vals


def _gyrm_pass(vals: np.ndarray) -> list[int]:
    """One reduction pass over rows of ``vals``; see :func:`gyrm`."""
    kept: list[int] = []
    kept_vals = np.empty_like(vals)
    k = 0
    for i in range(len(vals)):
        p = vals[i]
        if k and bool(np.any(np.all(kept_vals[:k] <= p, axis=1))):
            continue
        kept_vals[k] = p
        k += 1
        kept.append(i)
    return kept


def gyrm(points: Sequence[Point]) -> list[int]:
    """Single reduction pass: keep a point iff no previously kept point
    dominates-or-equals it.

    Returns indices into ``points``.  The result is always a superset of the
    non-dominated set; it is exact when the input is sorted ascending by a
    positive weighted sum of the objectives.
    """
    if len(points) == 0:
        return []
    return _gyrm_pass(_as_array(points))


def _validate_weights(weights: Sequence[float] | None, m: int) -> np.ndarray:
    if weights is None:
        return np.ones(m)
    w = np.asarray(weights, dtype=float)
    if w.shape != (m,):
        raise ValueError(f"expected {m} weights, got shape {w.shape}")
    if np.any(~(w > 0.0)):
        raise ValueError("presort weights must be strictly positive")
    return w


def _sorted_order(vals: np.ndarray, weights: Sequence[float] | None) -> np.ndarray:
    w = _validate_weights(weights, vals.shape[1])
    # inf * positive weight stays inf, so barrier points sort last; the
    # stable sort keeps insertion order among ties
    keys = vals @ w
    return np.argsort(keys, kind="stable")


def weighted_sum_order(points: Sequence[Point], weights: Sequence[float] | None = None) -> list[int]:
    """Stable ascending order by the weighted objective sum.

    Infeasible (all-+inf) points sort last; ties keep insertion order.
    """
    if len(points) == 0:
        return []
    return [int(i) for i in _sorted_order(_as_array(points), weights)]


def presort_gyrm(points: Sequence[Point], weights: Sequence[float] | None = None) -> list[int]:
    """Exact non-dominated filter: presort by a positive weighted sum, then gyrm.

    Returns one representative index per distinct surviving value, in presort
    order.  Cost is O(p log p + p * |output|), output-sensitive.
    """
    if len(points) == 0:
        return []
    vals = _as_array(points)
    order = _sorted_order(vals, weights)
    local = _gyrm_pass(vals[order])
    return [int(order[j]) for j in local]


def _distinct_in_order(vals: np.ndarray, order: np.ndarray) -> list[int]:
    seen: set[tuple[float, ...]] = set()
    out = []
    for i in order:
        key = tuple(vals[i])
        if key not in seen:
            seen.add(key)
            out.append(int(i))
    return out


def pareto_fronts(
    points: Sequence[Point],
    weights: Sequence[float] | None = None,
    levels: int | None = None,
) -> list[list[int]]:
    """Peel successive Pareto fronts: front i is the non-dominated set of what
    remains after removing fronts 1..i-1.

    Works on distinct values (duplicates collapse onto their representative).
    The presort is performed once and reused by every level.  Stops after
    ``levels`` fronts, or when nothing remains.
    """
    if levels is not None and levels < 1:
        raise ValueError("levels must be >= 1")
    if len(points) == 0:
        return []
    vals = _as_array(points)
    remaining = _distinct_in_order(vals, _sorted_order(vals, weights))
    fronts: list[list[int]] = []
    while remaining and (levels is None or len(fronts) < levels):
        local = _gyrm_pass(vals[remaining])
        fronts.append([remaining[j] for j in local])
        taken = set(local)
        remaining = [idx for j, idx in enumerate(remaining) if j not in taken]
    return fronts


def hall_of_fame(
    points: Sequence[Point],
    threshold: int,
    weights: Sequence[float] | None = None,
) -> list[int]:
    """Union of leading Pareto fronts, grown level by level until it holds at
    least min(threshold, #distinct values) points.

    Returns representative indices (one per distinct value), fronts
    concatenated in level order.  The first front is always included.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    if len(points) == 0:
        return []
    vals = _as_array(points)
    remaining = _distinct_in_order(vals, _sorted_order(vals, weights))
    target = min(threshold, len(remaining))
    selected: list[int] = []
    while len(selected) < target:
        local = _gyrm_pass(vals[remaining])
        selected.extend(remaining[j] for j in local)
        taken = set(local)
        remaining = [idx for j, idx in enumerate(remaining) if j not in taken]
    return selected


def staircase(points: Sequence[Point]) -> list[tuple[float, float]]:
    """Right-then-down vertex chain through a mutually non-dominated
    bi-objective value set.

    Every vertex is weakly dominated by an input point, so the polyline stays
    inside the attainable region extended by the positive orthant.
    """
    for p in points:
        if len(p) != 2:
            raise ValueError("staircase interpolation requires exactly 2 objectives")
    vals = sorted({(float(p[0]), float(p[1])) for p in points})
    if not vals:
        return []
    verts = [vals[0]]
    for (_, y0), (x1, y1) in zip(vals, vals[1:]):
        verts.append((x1, y0))
        verts.append((x1, y1))
    return verts
