"""Gaussian damage distribution and per-element stiffness scaling.

Damage is parameterized by three numbers: total severity D (the weight of the
distribution), center mu [m] and extent sigma [m].  Integrating the density
over each element and rescaling by the structure length yields per-element
stiffness scaling factors; a lower bound on those factors is the feasibility
constraint handled by the search's extreme barrier.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class DamageParams:
    """Damage severity D (dimensionless weight), center mu [m], extent
    sigma [m]."""

    severity: float
    center: float
    extent: float

    def __post_init__(self):
        if self.severity < 0.0:
            raise ValueError("severity must be >= 0")
        if self.extent < 0.0:
            raise ValueError("extent must be >= 0")

    @classmethod
    def from_vector(cls, x) -> "DamageParams":
        d, mu, sigma = (float(v) for v in x)
        return cls(severity=d, center=mu, extent=sigma)

    def as_vector(self) -> tuple[float, float, float]:
        return (self.severity, self.center, self.extent)


@dataclass(frozen=True)
class DamageBox:
    """Search box: D in [0, max_severity], mu and sigma in [0, length];
    feasibility requires every stiffness factor to stay >= theta_min."""

    max_severity: float
    length: float
    theta_min: float

    def __post_init__(self):
        if not 0.0 < self.max_severity <= 1.0:
            raise ValueError("max_severity must be in (0, 1]")
        if self.length <= 0.0:
            raise ValueError("length must be > 0")
        if not 0.0 < self.theta_min < 1.0:
            raise ValueError("theta_min must be in (0, 1)")

    def bounds(self) -> tuple[tuple[float, float], ...]:
        return ((0.0, self.max_severity), (0.0, self.length), (0.0, self.length))

    def contains(self, params: DamageParams) -> bool:
        return all(lo <= v <= hi
                   for v, (lo, hi) in zip(params.as_vector(), self.bounds()))


def damage_pdf(s: float, params: DamageParams) -> float:
    """Damage density at position s [1/m]; undefined for sigma = 0."""
    if params.extent == 0.0:
        raise ValueError("density undefined for sigma = 0; use damage_cdf")
    z = (float(s) - params.center) / params.extent
    return params.severity / (params.extent * math.sqrt(2.0 * math.pi)) * math.exp(-0.5 * z * z)


def damage_cdf(s: float, params: DamageParams) -> float:
    """Accumulated damage weight up to position s, in [0, D].

    Evaluated through the standard library's erf (absolute error well below
    1e-12).  sigma = 0 degenerates to a step of height D at mu, with value
    D/2 exactly at the center.
    """
    s = float(s)
    if params.extent == 0.0:
        if s < params.center:
            return 0.0
        if s > params.center:
            return params.severity
        return 0.5 * params.severity
    z = (s - params.center) / params.extent
    return params.severity * 0.5 * (1.0 + math.erf(z / _SQRT2))


def theta(node_positions, params: DamageParams) -> np.ndarray:
    """Per-element stiffness scaling factors.

    Element e spanning [s_{e-1}, s_e] receives factor
    1 - L * (F(s_e) - F(s_{e-1})) / l_e, i.e. the smooth distribution becomes
    element-wise constant with the same weight.  Values can drop to or below
    zero; feasibility is checked separately by :func:`constraints`.
    """
    s = np.asarray(node_positions, dtype=float)
    if s.ndim != 1 or len(s) < 2:
        raise ValueError("need at least two node positions")
    total = s[-1] - s[0]
    cdf = np.array([damage_cdf(v, params) for v in s])
    return 1.0 - total * np.diff(cdf) / np.diff(s)


class ConstraintCheck(NamedTuple):
    margin: float  # min_e (theta_e - theta_min)
    feasible: bool  # margin >= 0 (boundary counts as feasible)


def constraints(theta_values, theta_min: float) -> ConstraintCheck:
    """Collapse the per-element bounds into their worst margin."""
    margin = float(np.min(np.asarray(theta_values)) - theta_min)
    return ConstraintCheck(margin=margin, feasible=margin >= 0.0)
