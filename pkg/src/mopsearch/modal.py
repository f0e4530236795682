"""Modal analysis of assembled beam systems.

Solves the symmetric-definite generalized eigenproblem (K - w^2 M) u = 0,
gathers mode shapes at sensor positions, normalizes them to unit length and
fixes their sign.  Because eigenvector signs are arbitrary and mode order can
swap under stiffness changes, results can be paired and sign-aligned against
a reference state so that differences between states are meaningful.
"""
from __future__ import annotations

import csv
import math
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .beams import AssembledSystem, BeamModel, assemble

logger = logging.getLogger(__name__)


class EigenSolveError(RuntimeError):
    """Factorization / eigensolve failure; ``pivot`` is the offending leading
    minor index when the mass matrix is not positive definite."""

    def __init__(self, message: str, pivot: int | None = None):
        super().__init__(message)
        self.pivot = pivot


class DegenerateModeError(RuntimeError):
    """A gathered mode shape vanished at every sensor."""


@dataclass(frozen=True)
class SensorLayout:
    """Sensor node indices; defines which translational DoFs are observed."""

    nodes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(i) for i in self.nodes))
        if not self.nodes:
            raise ValueError("sensor layout needs at least one node")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("sensor nodes must be distinct")

    @property
    def n_sensors(self) -> int:
        return len(self.nodes)

    def gather_rows(self, system: AssembledSystem) -> np.ndarray:
        """Rows of the system matrices observed by the sensors."""
        rows = []
        for node in self.nodes:
            if not 0 <= node < len(system.dof_of_node):
                raise ValueError(f"sensor node {node} does not exist")
            row = system.dof_of_node[node]
            if row < 0:
                raise ValueError(f"sensor node {node} is clamped")
            rows.append(row)
        return np.asarray(rows)


@dataclass(frozen=True)
class ModalResult:
    """Eigenfrequencies [Hz], unit-norm gathered mode shapes (one row per
    mode) and the raw squared circular frequencies [rad^2/s^2]."""

    frequencies: np.ndarray
    mode_shapes: np.ndarray
    eigenvalues: np.ndarray

    @property
    def n_modes(self) -> int:
        return len(self.frequencies)

    @property
    def n_sensors(self) -> int:
        return self.mode_shapes.shape[1]


_REFINE_TARGET = 1e-10
_REFINE_STEPS = 4


def _lu_band_matrix(k_bands: np.ndarray, m_bands: np.ndarray, shift: float) -> np.ndarray:
    """K - shift*M in the diagonal-ordered form used by solve_banded."""
    bw, dim = k_bands.shape[0] - 1, k_bands.shape[1]
    ab = np.zeros((2 * bw + 1, dim))
    for d in range(min(bw, dim - 1) + 1):
        row = (k_bands[d] - shift * m_bands[d])[:dim - d]
        ab[bw + d, :dim - d] = row
        if d:
            ab[bw - d, d:] = row
    return ab


def _refine_pair(system: AssembledSystem, m_dense: np.ndarray, k_dense: np.ndarray,
                 value: float, vector: np.ndarray) -> tuple[float, np.ndarray]:
    """Inverse iteration with Rayleigh-quotient updates.

    The plain Cholesky-reduction solve loses absolute accuracy ~eps*lambda_max
    on the low eigenvalues, which grows like the fourth power of the mesh
    density; a few shifted banded solves restore it.  Steps that fail (exactly
    singular shift) or do not reduce the residual leave the pair unchanged.
    """
    bw = system.k_bands.shape[0] - 1
    ku = k_dense @ vector
    resid = np.linalg.norm(ku - value * (m_dense @ vector))
    scale = np.linalg.norm(ku)
    for _ in range(_REFINE_STEPS):
        if resid <= _REFINE_TARGET * scale:
            break
        ab = _lu_band_matrix(system.k_bands, system.m_bands, value)
        try:
            w = scipy.linalg.solve_banded((bw, bw), ab, m_dense @ vector)
        except scipy.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(w)):
            break
        mw = m_dense @ w
        norm_m = math.sqrt(float(w @ mw))
        if norm_m == 0.0:
            break
        w = w / norm_m
        kw = k_dense @ w
        new_value = float(w @ kw)
        new_resid = np.linalg.norm(kw - new_value * (m_dense @ w))
        new_scale = np.linalg.norm(kw)
        if new_resid * scale >= resid * new_scale:
            break
        improved_a_lot = new_resid * scale < 0.25 * resid * new_scale
        value, vector, resid, scale = new_value, w, new_resid, new_scale
        if not improved_a_lot:  # at the float64 floor
            break
    return value, vector


def solve_generalized_eig(system: AssembledSystem, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Lowest ``count`` eigenpairs of (K, M), eigenvalues ascending,
    eigenvectors M-orthonormal, residuals well below 1e-8 relative.

    A dense symmetric-definite solve provides starting pairs that are then
    polished by shifted inverse iteration.  Raises :class:`EigenSolveError`
    carrying the pivot index when M fails its Cholesky factorization.
    """
    if not 1 <= count <= system.dim:
        raise ValueError(f"count must be in 1..{system.dim}, got {count}")
    try:
        scipy.linalg.cholesky_banded(system.m_bands, lower=True)
    except scipy.linalg.LinAlgError as exc:
        pivot = _leading_minor_index(str(exc))
        raise EigenSolveError(f"mass matrix not positive definite: {exc}", pivot) from exc
    k = system.k_dense()
    m = system.m_dense()
    try:
        if count == system.dim:
            vals, vecs = scipy.linalg.eigh(k, m)
        else:
            vals, vecs = scipy.linalg.eigh(k, m, subset_by_index=(0, count - 1))
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - pre-checked above
        raise EigenSolveError(str(exc)) from exc
    vals = vals[:count].copy()
    vecs = vecs[:, :count].copy()
    for j in range(count):
        vals[j], vecs[:, j] = _refine_pair(system, m, k, float(vals[j]), vecs[:, j])
    order = np.argsort(vals, kind="stable")
    return vals[order], vecs[:, order]


def _leading_minor_index(message: str) -> int | None:
    head = message.split("-th", 1)[0].strip()
    try:
        return int(head)
    except ValueError:
        return None


def gather_normalize(vector: np.ndarray, layout: SensorLayout,
                     system: AssembledSystem) -> np.ndarray:
    """Select the sensor components of a full eigenvector and scale the
    result to unit length."""
    gathered = np.asarray(vector)[layout.gather_rows(system)]
    norm = np.linalg.norm(gathered)
    if norm == 0.0:
        raise DegenerateModeError("mode vanishes at every sensor position")
    return gathered / norm


def align_sign(shape: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Flip ``shape`` when its inner product with ``reference`` is negative;
    an exactly zero inner product keeps the input."""
    return -shape if float(shape @ reference) < 0.0 else shape


def _canonical_sign(shape: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(shape)))
    return -shape if shape[i] < 0.0 else shape


def pair_to_reference(shapes: np.ndarray, reference_shapes: np.ndarray) -> list[int]:
    """Greedy assignment of computed modes to reference modes by maximal
    absolute shape correlation, processing reference modes in descending
    order.  Returns ``perm`` with perm[r] = computed index mapped to r."""
    k = len(reference_shapes)
    perm = [-1] * k
    free = set(range(k))
    for r in range(k - 1, -1, -1):
        best = max(free, key=lambda c: (abs(float(shapes[c] @ reference_shapes[r])), -c))
        perm[r] = best
        free.remove(best)
    return perm


def modal_analysis(model: BeamModel, theta, layout: SensorLayout, n_modes: int,
                   reference: ModalResult | None = None) -> ModalResult:
    """Assemble, solve and post-process one structural state.

    Without a reference, modes come in ascending frequency order with the
    largest-magnitude shape component made positive.  With a reference, modes
    are matched to the reference modes by shape correlation (guarding against
    mode crossing) and sign-aligned to them; exactly repeated eigenvalues fall
    back to plain frequency order.
    """
    system = assemble(model, theta)
    vals, vecs = solve_generalized_eig(system, n_modes)
    shapes = np.array([gather_normalize(vecs[:, j], layout, system)
                       for j in range(n_modes)])
    if reference is None:
        shapes = np.array([_canonical_sign(s) for s in shapes])
        order = list(range(n_modes))
    else:
        if reference.n_modes != n_modes or reference.n_sensors != shapes.shape[1]:
            raise ValueError("reference has mismatching mode or sensor count")
        if len(np.unique(vals)) < len(vals):
            logger.warning("exactly repeated eigenvalues; keeping frequency order")
            order = list(range(n_modes))
        else:
            order = pair_to_reference(shapes, reference.mode_shapes)
        shapes = np.array([align_sign(shapes[j], reference.mode_shapes[r])
                           for r, j in enumerate(order)])
    vals = vals[order]
    freqs = np.sqrt(np.maximum(vals, 0.0)) / (2.0 * np.pi)
    return ModalResult(frequencies=freqs, mode_shapes=shapes, eigenvalues=vals)


def write_modal_csv(result: ModalResult, path) -> None:
    """One row per mode: frequency, then the shape entries."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frequency"] +
                        [f"phi_{i + 1}" for i in range(result.n_sensors)])
        for f, shape in zip(result.frequencies, result.mode_shapes):
            writer.writerow([repr(float(f))] + [repr(float(v)) for v in shape])


def read_modal_csv(path) -> ModalResult:
    """Inverse of :func:`write_modal_csv`; eigenvalues are reconstructed from
    the frequencies."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0] != "frequency":
        raise ValueError(f"{path}: not a modal result file")
    freqs, shapes = [], []
    for row in rows[1:]:
        freqs.append(float(row[0]))
        shapes.append([float(v) for v in row[1:]])
    frequencies = np.asarray(freqs)
    return ModalResult(
        frequencies=frequencies,
        mode_shapes=np.asarray(shapes),
        eigenvalues=(2.0 * np.pi * frequencies) ** 2,
    )
