"""Bi-objective model-updating error for damage location.

Four data sets are involved: measured healthy/damaged (fixed inputs) and
simulated healthy/damaged.  Only the simulated damaged state varies with the
damage parameters.  Errors are formed from damaged-minus-healthy differences
within each family, which cancels any static mismatch between measurement and
simulation.  Infeasible parameter vectors are rejected by the extreme barrier
before the eigensolve runs.
"""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field

import numpy as np

from .beams import BeamModel
from .damage import DamageBox, DamageParams, constraints, theta
from .fronts import ImagePoint
from .modal import EigenSolveError, ModalResult, SensorLayout, modal_analysis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UpdatingStates:
    """The three fixed states of the updating problem plus the model that
    generates the variable fourth one.

    ``measured_healthy``/``measured_damaged`` come from identification (or a
    synthetic twin); ``simulated_healthy`` is computed once with all stiffness
    factors at one.
    """

    model: BeamModel
    layout: SensorLayout
    measured_healthy: ModalResult
    measured_damaged: ModalResult
    simulated_healthy: ModalResult

    def __post_init__(self):
        k = self.simulated_healthy.n_modes
        m = self.simulated_healthy.n_sensors
        for name in ("measured_healthy", "measured_damaged"):
            result: ModalResult = getattr(self, name)
            if result.n_modes != k or result.n_sensors != m:
                raise ValueError(f"{name} has mismatching mode or sensor count")
        if m != self.layout.n_sensors:
            raise ValueError("sensor layout size differs from stored mode shapes")

    @property
    def n_modes(self) -> int:
        return self.simulated_healthy.n_modes

    @classmethod
    def build(cls, model: BeamModel, layout: SensorLayout,
              measured_healthy: ModalResult, measured_damaged: ModalResult,
              n_modes: int) -> "UpdatingStates":
        healthy = modal_analysis(model, np.ones(model.n_elements), layout, n_modes)
        return cls(model=model, layout=layout,
                   measured_healthy=measured_healthy,
                   measured_damaged=measured_damaged,
                   simulated_healthy=healthy)


def eps_f(states: UpdatingStates, simulated_damaged: ModalResult) -> float:
    """Eigenfrequency error: rms mismatch of the relative frequency shifts of
    simulation vs measurement."""
    f_s1 = simulated_damaged.frequencies
    f_s0 = states.simulated_healthy.frequencies
    f_m1 = states.measured_damaged.frequencies
    f_m0 = states.measured_healthy.frequencies
    if np.any(f_s0 == 0.0) or np.any(f_m0 == 0.0):
        raise ValueError("healthy reference contains a zero frequency")
    resid = (f_s1 - f_s0) / f_s0 - (f_m1 - f_m0) / f_m0
    return float(np.sqrt(np.sum(resid**2)))


def eps_m(states: UpdatingStates, simulated_damaged: ModalResult) -> float:
    """Mode shape error: rms mismatch of the shape-difference vectors of
    simulation vs measurement; shapes must be unit-norm and sign-aligned to
    their respective healthy reference."""
    d_sim = simulated_damaged.mode_shapes - states.simulated_healthy.mode_shapes
    d_meas = states.measured_damaged.mode_shapes - states.measured_healthy.mode_shapes
    if d_sim.shape != d_meas.shape:
        raise ValueError("mode shape arrays have mismatching dimensions")
    return float(np.sqrt(np.sum((d_sim - d_meas) ** 2)))


@dataclass
class ObjectiveCounters:
    """Thread-safe evaluation bookkeeping."""

    evaluations: int = 0
    solver_calls: int = 0
    barrier_short_circuits: int = 0
    solver_failures: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def bump(self, name: str) -> None:
        with self._lock:
            setattr(self, name, getattr(self, name) + 1)


class DamageObjective:
    """Callable mapping a damage parameter vector to an image point.

    Infeasible vectors (some stiffness factor below the bound) return the
    barrier point without touching the eigensolver; eigensolver failures are
    logged, counted separately and also mapped to the barrier point so the
    search can continue.  Safe for concurrent calls with distinct inputs.
    """

    def __init__(self, states: UpdatingStates, box: DamageBox):
        if abs(box.length - states.model.length) > 1e-9 * states.model.length:
            raise ValueError("damage box length differs from model length")
        self.states = states
        self.box = box
        self.counters = ObjectiveCounters()

    def __call__(self, x) -> ImagePoint:
        return self.evaluate(DamageParams.from_vector(x))

    def evaluate(self, params: DamageParams) -> ImagePoint:
        self.counters.bump("evaluations")
        scalings = theta(self.states.model.node_positions, params)
        if not constraints(scalings, self.box.theta_min).feasible:
            self.counters.bump("barrier_short_circuits")
            return ImagePoint.infeasible(2)
        self.counters.bump("solver_calls")
        try:
            damaged = modal_analysis(
                self.states.model, scalings, self.states.layout,
                self.states.n_modes, reference=self.states.simulated_healthy)
        except EigenSolveError as exc:
            self.counters.bump("solver_failures")
            logger.warning("eigensolve failed at %s: %s", params, exc)
            return ImagePoint.infeasible(2)
        return ImagePoint.of(eps_f(self.states, damaged),
                             eps_m(self.states, damaged))


def make_synthetic_measurement(
    model: BeamModel,
    layout: SensorLayout,
    true_params: DamageParams,
    box: DamageBox,
    n_modes: int,
    noise_freq: float = 0.0,
    noise_shape: float = 0.0,
    seed: int = 0,
) -> tuple[ModalResult, ModalResult]:
    """Generate measured healthy/damaged states from the simulator itself.

    With zero noise the healthy state equals the simulated healthy state
    bitwise and the true parameters attain a (numerically) zero residual.
    ``noise_freq`` perturbs each frequency multiplicatively; ``noise_shape``
    adds a Gaussian vector of expected norm equal to that fraction of the
    (unit) shape norm, followed by renormalization.  Draws are seeded and the
    draw order is fixed, so outputs are reproducible.
    """
    if not box.contains(true_params):
        raise ValueError("true damage parameters outside the search box")
    scalings = theta(model.node_positions, true_params)
    if not constraints(scalings, box.theta_min).feasible:
        raise ValueError("true damage parameters are infeasible")
    healthy = modal_analysis(model, np.ones(model.n_elements), layout, n_modes)
    damaged = modal_analysis(model, scalings, layout, n_modes, reference=healthy)
    if noise_freq == 0.0 and noise_shape == 0.0:
        return healthy, damaged
    rng = np.random.default_rng(seed)
    return (_perturb(healthy, rng, noise_freq, noise_shape),
            _perturb(damaged, rng, noise_freq, noise_shape))


def _perturb(result: ModalResult, rng: np.random.Generator,
             noise_freq: float, noise_shape: float) -> ModalResult:
    freqs = result.frequencies * (1.0 + noise_freq * rng.standard_normal(result.n_modes))
    scale = noise_shape / np.sqrt(result.n_sensors)
    shapes = result.mode_shapes + scale * rng.standard_normal(result.mode_shapes.shape)
    shapes = shapes / np.linalg.norm(shapes, axis=1, keepdims=True)
    return ModalResult(frequencies=freqs, mode_shapes=shapes,
                       eigenvalues=(2.0 * np.pi * freqs) ** 2)
