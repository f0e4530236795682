"""Planar bending finite elements for slender beams.

Two-node elements with a lateral displacement and a rotation per node, DoF
ordered (u_1, psi_1, u_2, psi_2) per element and (u_0, psi_0, u_1, psi_1, ...)
globally, which keeps the assembled matrices block-tridiagonal with symmetric
bandwidth 3.  Shear-rigid (classical) and shear-flexible elements share the
assembly path; shear flexibility enters through the dimensionless parameter
phi = 12 E I / (kappa G A l^2).

Units are SI throughout: m, kg, s, Pa.
"""
from __future__ import annotations

import enum
from functools import lru_cache
from dataclasses import dataclass

import numpy as np


class BeamTheory(enum.Enum):
    EULER_BERNOULLI = "euler-bernoulli"
    TIMOSHENKO = "timoshenko"


class Boundary(enum.Enum):
    CLAMPED = "clamped"  # both DoFs fixed at node 0
    FREE = "free"


@dataclass(frozen=True)
class SectionMaterial:
    """Per-element cross section and material.

    ``youngs_modulus`` is the undamaged modulus; damage scales it at assembly
    time.  ``extra_linear_density`` [kg/m] is added on top of density*area for
    non-structural mass (sensors, screws, coatings).  ``shear_modulus`` and
    ``shear_constant`` are only needed for shear-flexible elements.
    """

    youngs_modulus: float
    density: float
    area: float
    area_moment: float
    shear_modulus: float | None = None
    shear_constant: float | None = None
    extra_linear_density: float = 0.0

    def __post_init__(self):
        if self.youngs_modulus <= 0.0:
            raise ValueError("youngs_modulus must be > 0")
        if self.density <= 0.0:
            raise ValueError("density must be > 0")
        if self.area <= 0.0:
            raise ValueError("area must be > 0")
        if self.area_moment <= 0.0:
            raise ValueError("area_moment must be > 0")
        if self.shear_modulus is not None and self.shear_modulus <= 0.0:
            raise ValueError("shear_modulus must be > 0")
        if self.shear_constant is not None and self.shear_constant <= 0.0:
            raise ValueError("shear_constant must be > 0")
        if self.extra_linear_density < 0.0:
            raise ValueError("extra_linear_density must be >= 0")

    @classmethod
    def rectangular(cls, youngs_modulus: float, density: float,
                    width: float, thickness: float, **kwargs) -> "SectionMaterial":
        """Derive area = w*t and area moment = w*t^3/12 from a rectangle."""
        if width <= 0.0 or thickness <= 0.0:
            raise ValueError("width and thickness must be > 0")
        return cls(
            youngs_modulus=youngs_modulus,
            density=density,
            area=width * thickness,
            area_moment=width * thickness**3 / 12.0,
            **kwargs,
        )

    @property
    def linear_density(self) -> float:
        """Mass per unit length including non-structural extras [kg/m]."""
        return self.density * self.area + self.extra_linear_density


@dataclass(frozen=True)
class BeamModel:
    """A discretized beam: nodes, per-element sections, lumped masses.

    ``point_masses`` attach to the translational DoF of a node (no rotary
    inertia).  ``boundary`` CLAMPED removes both DoFs of node 0.
    """

    node_positions: tuple[float, ...]
    sections: tuple[SectionMaterial, ...]
    theory: BeamTheory = BeamTheory.EULER_BERNOULLI
    boundary: Boundary = Boundary.CLAMPED
    point_masses: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "node_positions",
                           tuple(float(s) for s in self.node_positions))
        object.__setattr__(self, "sections", tuple(self.sections))
        object.__setattr__(self, "point_masses",
                           tuple((int(i), float(m)) for i, m in self.point_masses))
        n = len(self.node_positions) - 1
        if n < 1:
            raise ValueError("need at least two nodes")
        if any(b <= a for a, b in zip(self.node_positions, self.node_positions[1:])):
            raise ValueError("node positions must be strictly increasing")
        if len(self.sections) != n:
            raise ValueError(f"expected {n} sections, got {len(self.sections)}")
        for i, m in self.point_masses:
            if not 0 <= i <= n:
                raise ValueError(f"point mass node {i} out of range 0..{n}")
            if m < 0.0:
                raise ValueError("point masses must be >= 0")
        if self.theory is BeamTheory.TIMOSHENKO:
            for e, sm in enumerate(self.sections):
                if sm.shear_modulus is None or sm.shear_constant is None:
                    raise ValueError(
                        f"element {e + 1}: shear modulus/constant required for Timoshenko")

    @property
    def n_elements(self) -> int:
        return len(self.sections)

    @property
    def length(self) -> float:
        return self.node_positions[-1] - self.node_positions[0]

    @property
    def element_lengths(self) -> np.ndarray:
        s = np.asarray(self.node_positions)
        return s[1:] - s[:-1]


@dataclass(frozen=True)
class ElementMatrices:
    """4x4 element stiffness [N/m scale] and mass [kg scale], symmetric."""

    stiffness: np.ndarray
    mass: np.ndarray


def eb_element_matrices(section: SectionMaterial, length: float,
                        youngs_modulus: float | None = None) -> ElementMatrices:
    """Closed-form shear-rigid element matrices.

    ``youngs_modulus`` overrides the section's undamaged value (used for
    damage scaling); the mass matrix uses the full linear density.
    """
    e_mod = section.youngs_modulus if youngs_modulus is None else youngs_modulus
    if length <= 0.0:
        raise ValueError("element length must be > 0")
    if e_mod <= 0.0:
        raise ValueError("effective Young's modulus must be > 0")
    l = length
    k = e_mod * section.area_moment / l**3 * np.array([
        [12.0, 6 * l, -12.0, 6 * l],
        [6 * l, 4 * l**2, -6 * l, 2 * l**2],
        [-12.0, -6 * l, 12.0, -6 * l],
        [6 * l, 2 * l**2, -6 * l, 4 * l**2],
    ])
    m = l * section.linear_density / 420.0 * np.array([
        [156.0, 22 * l, 54.0, -13 * l],
        [22 * l, 4 * l**2, 13 * l, -3 * l**2],
        [54.0, 13 * l, 156.0, -22 * l],
        [-13 * l, -3 * l**2, -22 * l, 4 * l**2],
    ])
    return ElementMatrices(stiffness=k, mass=m)


def timoshenko_phi(section: SectionMaterial, length: float,
                   youngs_modulus: float | None = None) -> float:
    """Shear flexibility parameter phi = 12 E I / (kappa G A l^2), >= 0."""
    e_mod = section.youngs_modulus if youngs_modulus is None else youngs_modulus
    if section.shear_modulus is None or section.shear_constant is None:
        raise ValueError("section lacks shear modulus/constant")
    denom = section.shear_constant * section.shear_modulus * section.area * length**2
    if denom <= 0.0:
        raise ValueError("kappa * G * A * l^2 must be > 0")
    if e_mod < 0.0:
        raise ValueError("effective Young's modulus must be >= 0")
    return 12.0 * e_mod * section.area_moment / denom


def _timoshenko_mass_parts(section: SectionMaterial, length: float,
                           phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Translational and rotary-inertia mass matrix parts."""
    l = length
    p = phi
    m1 = 312 + 588 * p + 280 * p**2
    m2 = (44 + 77 * p + 35 * p**2) * l
    m3 = 108 + 252 * p + 140 * p**2
    m4 = -(26 + 63 * p + 35 * p**2) * l
    m5 = (8 + 14 * p + 7 * p**2) * l**2
    m6 = -(6 + 14 * p + 7 * p**2) * l**2
    m7 = 36.0
    m8 = (3 - 15 * p) * l
    m9 = (4 + 5 * p + 10 * p**2) * l**2
    m10 = (-1 - 5 * p + 5 * p**2) * l**2
    translational = section.linear_density * l / (840 * (1 + p)**2) * np.array([
        [m1, m2, m3, m4],
        [m2, m5, -m4, m6],
        [m3, -m4, m1, -m2],
        [m4, m6, -m2, m5],
    ])
    rotary = section.density * section.area_moment / (30 * (1 + p)**2 * l) * np.array([
        [m7, m8, -m7, m8],
        [m8, m9, -m8, m10],
        [-m7, -m8, m7, -m8],
        [m8, m10, -m8, m9],
    ])
    return translational, rotary


def timoshenko_element_matrices(section: SectionMaterial, length: float,
                                youngs_modulus: float | None = None) -> ElementMatrices:
    """Closed-form shear-flexible element matrices (reduced two-DoF-per-node
    formulation); the mass matrix is the sum of the translational and
    rotary-inertia parts.  At phi = 0 the stiffness equals the shear-rigid one.
    """
    e_mod = section.youngs_modulus if youngs_modulus is None else youngs_modulus
    if length <= 0.0:
        raise ValueError("element length must be > 0")
    if e_mod <= 0.0:
        raise ValueError("effective Young's modulus must be > 0")
    l = length
    p = timoshenko_phi(section, length, e_mod)
    k = e_mod * section.area_moment / ((1 + p) * l**3) * np.array([
        [12.0, 6 * l, -12.0, 6 * l],
        [6 * l, (4 + p) * l**2, -6 * l, (2 - p) * l**2],
        [-12.0, -6 * l, 12.0, -6 * l],
        [6 * l, (2 - p) * l**2, -6 * l, (4 + p) * l**2],
    ])
    translational, rotary = _timoshenko_mass_parts(section, length, p)
    return ElementMatrices(stiffness=k, mass=translational + rotary)


def shape_functions(theory: BeamTheory, phi: float, length: float,
                    xi: float) -> np.ndarray:
    """The four interpolation values at local coordinate xi in [0, length].

    For the shear-rigid theory phi is ignored (taken as 0).  The two
    translational values always sum to one.
    """
    if not 0.0 <= xi <= length:
        raise ValueError(f"xi={xi} outside element [0, {length}]")
    p = 0.0 if theory is BeamTheory.EULER_BERNOULLI else float(phi)
    if p < 0.0:
        raise ValueError("phi must be >= 0")
    l = length
    z = xi / l
    c = 1.0 / (1.0 + p)
    return np.array([
        c * (1 + p - p * z - 3 * z**2 + 2 * z**3),
        l * c * ((2 + p) / 2 * z - (4 + p) / 2 * z**2 + z**3),
        c * (p * z + 3 * z**2 - 2 * z**3),
        l * c * (-p / 2 * z - (2 - p) / 2 * z**2 + z**3),
    ])


BANDWIDTH = 3  # symmetric half-bandwidth of the assembled block-tridiagonal system


@dataclass(frozen=True)
class AssembledSystem:
    """Global stiffness/mass in symmetric lower-banded storage.

    ``bands[k, i]`` holds A[i+k, i] for k = 0..3; entries with i+k >= dim are
    zero padding.  ``dof_of_node[i]`` is the row of node i's translational
    DoF, -1 when removed by the boundary condition (the rotation row is the
    following one).
    """

    k_bands: np.ndarray
    m_bands: np.ndarray
    dof_of_node: np.ndarray

    @property
    def dim(self) -> int:
        return self.k_bands.shape[1]

    def k_dense(self) -> np.ndarray:
        return _band_to_dense(self.k_bands)

    def m_dense(self) -> np.ndarray:
        return _band_to_dense(self.m_bands)


def _band_to_dense(bands: np.ndarray) -> np.ndarray:
    dim = bands.shape[1]
    a = np.zeros((dim, dim))
    a.flat[:: dim + 1] = bands[0]
    for k in range(1, min(bands.shape[0], dim)):
        d = bands[k, :dim - k]
        a.flat[k * dim:: dim + 1] = d                            # k-th subdiagonal
        a.flat[k: k + (dim - k) * (dim + 1): dim + 1] = d        # mirrored superdiagonal
    return a


def _add_block(bands: np.ndarray, offset: int, block: np.ndarray) -> None:
    for i in range(4):
        for j in range(i + 1):
            bands[i - j, offset + j] += block[i, j]


@lru_cache(maxsize=4)
def _eb_assembly_template(model: BeamModel) -> tuple[np.ndarray, np.ndarray]:
    """Per-model cache for shear-rigid assembly: undamaged element stiffness
    blocks (n, 4, 4) and the full banded mass matrix (theta-independent)."""
    n = model.n_elements
    full = 2 * len(model.node_positions)
    k_blocks = np.empty((n, 4, 4))
    m_bands = np.zeros((BANDWIDTH + 1, full))
    lengths = model.element_lengths
    for e, sm in enumerate(model.sections):
        em = eb_element_matrices(sm, lengths[e])
        k_blocks[e] = em.stiffness
        _add_block(m_bands, 2 * e, em.mass)
    for node, mass in model.point_masses:
        m_bands[0, 2 * node] += mass
    k_blocks.setflags(write=False)
    m_bands.setflags(write=False)
    return k_blocks, m_bands


def assemble(model: BeamModel, theta) -> AssembledSystem:
    """Assemble the global system with per-element stiffness scaling theta.

    The effective modulus of element e is theta[e] times the undamaged one;
    for shear-flexible elements this also shifts phi and hence the mass
    matrix.  Point masses land on translational diagonal entries.  A clamped
    boundary removes the first two rows and columns.
    """
    th = np.asarray(theta, dtype=float)
    if th.shape != (model.n_elements,):
        raise ValueError(
            f"theta must have {model.n_elements} entries, got shape {th.shape}")
    if np.any(th <= 0.0):
        raise ValueError("theta entries must be > 0")

    n = model.n_elements
    full = 2 * (len(model.node_positions))
    if model.theory is BeamTheory.EULER_BERNOULLI:
        # stiffness is elementwise linear in theta, mass independent of it
        k_blocks, m_template = _eb_assembly_template(model)
        k_bands = np.zeros((BANDWIDTH + 1, full))
        for d in range(4):
            for j in range(4 - d):
                k_bands[d, j:j + 2 * n:2] += th * k_blocks[:, j + d, j]
        m_bands = m_template.copy()
    else:
        k_bands = np.zeros((BANDWIDTH + 1, full))
        m_bands = np.zeros((BANDWIDTH + 1, full))
        lengths = model.element_lengths
        for e, sm in enumerate(model.sections):
            em = timoshenko_element_matrices(sm, lengths[e], th[e] * sm.youngs_modulus)
            _add_block(k_bands, 2 * e, em.stiffness)
            _add_block(m_bands, 2 * e, em.mass)
        for node, mass in model.point_masses:
            m_bands[0, 2 * node] += mass

    dof_of_node = 2 * np.arange(len(model.node_positions))
    if model.boundary is Boundary.CLAMPED:
        k_bands = k_bands[:, 2:].copy()
        m_bands = m_bands[:, 2:].copy()
        dof_of_node = dof_of_node - 2
        dof_of_node[0] = -1
    return AssembledSystem(k_bands=k_bands, m_bands=m_bands, dof_of_node=dof_of_node)
