import numpy as np
import pytest

from mopsearch import (
    BeamModel,
    BeamTheory,
    Boundary,
    SectionMaterial,
    assemble,
    eb_element_matrices,
    shape_functions,
    timoshenko_element_matrices,
    timoshenko_phi,
)
from mopsearch.beams import _timoshenko_mass_parts

from conftest import rect_section, uniform_cantilever

GAUSS_X, GAUSS_W = np.polynomial.legendre.leggauss(6)


def quadrature_matrices(section, length, phi, youngs_modulus=None):
    """6-point Gauss integration of the defining stiffness/mass integrals."""
    e_mod = section.youngs_modulus if youngs_modulus is None else youngs_modulus
    l, p = length, phi
    c = 1.0 / (1.0 + p)
    xs = (GAUSS_X + 1.0) * l / 2.0
    ws = GAUSS_W * l / 2.0
    k = np.zeros((4, 4))
    m = np.zeros((4, 4))
    d3 = c * np.array([12 / l**3, 6 / l**2, -12 / l**3, 6 / l**2])
    for x, w in zip(xs, ws):
        z = x / l
        n = np.array([
            c * (1 + p - p * z - 3 * z**2 + 2 * z**3),
            l * c * ((2 + p) / 2 * z - (4 + p) / 2 * z**2 + z**3),
            c * (p * z + 3 * z**2 - 2 * z**3),
            l * c * (-p / 2 * z - (2 - p) / 2 * z**2 + z**3),
        ])
        d1 = np.array([
            c * (-p - 6 * z + 6 * z**2) / l,
            c * ((2 + p) / 2 - (4 + p) * z + 3 * z**2),
            c * (p + 6 * z - 6 * z**2) / l,
            c * (-p / 2 - (2 - p) * z + 3 * z**2),
        ])
        d2 = np.array([
            c * (-6 + 12 * z) / l**2,
            c * (-(4 + p) + 6 * z) / l,
            c * (6 - 12 * z) / l**2,
            c * (-(2 - p) + 6 * z) / l,
        ])
        ei = e_mod * section.area_moment
        k += w * (ei * np.outer(d2, d2) + ei * p * l**2 / 12 * np.outer(d3, d3))
        g = p * l**2 / 12 * d3 + d1
        m += w * (section.linear_density * np.outer(n, n)
                  + section.density * section.area_moment * np.outer(g, g))
    return k, m


class TestEulerBernoulliElement:
    def test_rigid_translation_null_vector(self):
        em = eb_element_matrices(rect_section(), 0.37)
        assert np.array_equal(em.stiffness @ np.array([1.0, 0.0, 1.0, 0.0]),
                              np.zeros(4))

    def test_rigid_rotation_null_vector(self):
        l = 0.37
        em = eb_element_matrices(rect_section(), l)
        v = np.array([0.0, 1.0, l, 1.0])
        assert np.max(np.abs(em.stiffness @ v)) < 1e-6 * np.max(np.abs(em.stiffness))

    def test_null_space_is_exactly_rank_two(self):
        l = 0.52
        em = eb_element_matrices(rect_section(), l)
        basis = np.array([[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, l, 1.0]]).T
        q, _ = np.linalg.qr(np.hstack([basis, np.eye(4)]))
        complement = q[:, 2:]
        reduced = complement.T @ em.stiffness @ complement
        assert np.all(np.linalg.eigvalsh(reduced) > 0.0)

    def test_translation_mass_is_total_mass(self):
        section = rect_section(extra_linear_density=0.4)
        l = 0.81
        em = eb_element_matrices(section, l)
        t = np.array([1.0, 0.0, 1.0, 0.0])
        assert t @ em.mass @ t == pytest.approx(section.linear_density * l, rel=1e-14)

    def test_symmetry_exact(self):
        em = eb_element_matrices(rect_section(), 0.2)
        assert np.array_equal(em.stiffness, em.stiffness.T)
        assert np.array_equal(em.mass, em.mass.T)

    def test_effective_modulus_scales_stiffness(self):
        section = rect_section()
        base = eb_element_matrices(section, 0.3)
        scaled = eb_element_matrices(section, 0.3, youngs_modulus=0.5 * section.youngs_modulus)
        assert np.allclose(scaled.stiffness, 0.5 * base.stiffness, rtol=1e-15)
        assert np.array_equal(scaled.mass, base.mass)

    @pytest.mark.parametrize("length,modulus", [(0.0, 1e9), (-1.0, 1e9), (0.1, 0.0), (0.1, -2.0)])
    def test_invalid_inputs(self, length, modulus):
        with pytest.raises(ValueError):
            eb_element_matrices(rect_section(), length, youngs_modulus=modulus)


class TestTimoshenkoPhi:
    def test_zero_modulus_gives_zero(self):
        assert timoshenko_phi(rect_section(shear=True), 0.3, youngs_modulus=0.0) == 0.0

    def test_quadratic_length_scaling(self):
        section = rect_section(shear=True)
        assert timoshenko_phi(section, 0.8) == pytest.approx(
            timoshenko_phi(section, 0.4) / 4.0, rel=1e-14)

    def test_solid_circular_brace_value(self):
        # solid circular 10 mm strut of a lattice mast: E = 210 GPa,
        # G = E / 2.6, kappa = 0.9, element length 0.4/3 m; expected value
        # evaluated independently from 12 E I / (kappa G A l^2)
        d = 10e-3
        section = SectionMaterial(
            youngs_modulus=210e9, density=8670.0,
            area=np.pi * d**2 / 4, area_moment=np.pi * d**4 / 64,
            shear_modulus=210e9 / 2.6, shear_constant=0.9)
        assert timoshenko_phi(section, 0.4 / 3) == pytest.approx(0.0121875, rel=1e-12)

    def test_missing_shear_data(self):
        with pytest.raises(ValueError):
            timoshenko_phi(rect_section(), 0.3)


class TestTimoshenkoElement:
    def test_zero_phi_stiffness_reduces_to_eb(self):
        # kappa*G -> inf drives phi -> 0
        section = rect_section(shear=True)
        stiff = SectionMaterial(
            youngs_modulus=section.youngs_modulus, density=section.density,
            area=section.area, area_moment=section.area_moment,
            shear_modulus=1e30, shear_constant=1.0)
        em_t = timoshenko_element_matrices(stiff, 0.25)
        em_eb = eb_element_matrices(section, 0.25)
        assert np.allclose(em_t.stiffness, em_eb.stiffness, rtol=1e-12)

    def test_zero_phi_mass_parts(self):
        section = rect_section(shear=True)
        translational, rotary = _timoshenko_mass_parts(section, 0.25, 0.0)
        em_eb = eb_element_matrices(section, 0.25)
        assert np.allclose(translational, em_eb.mass, rtol=1e-13)
        l = 0.25
        scale = section.density * section.area_moment / (30 * l)
        expected_rotary = scale * np.array([
            [36.0, 3 * l, -36.0, 3 * l],
            [3 * l, 4 * l**2, -3 * l, -l**2],
            [-36.0, -3 * l, 36.0, -3 * l],
            [3 * l, -l**2, -3 * l, 4 * l**2],
        ])
        assert np.allclose(rotary, expected_rotary, rtol=1e-13)

    def test_rigid_translation_null_vector(self):
        em = timoshenko_element_matrices(rect_section(shear=True), 0.4)
        assert np.array_equal(em.stiffness @ np.array([1.0, 0.0, 1.0, 0.0]),
                              np.zeros(4))

    def test_mass_matches_quadrature(self):
        section = rect_section(shear=True, extra_linear_density=0.2)
        length = 0.33
        phi = timoshenko_phi(section, length)
        _, m_quad = quadrature_matrices(section, length, phi)
        em = timoshenko_element_matrices(section, length)
        assert np.allclose(em.mass, m_quad, rtol=1e-10)

    def test_quadrature_equivalence_random_sections(self):
        # module invariant: closed forms match the defining integrals
        rng = np.random.default_rng(7)
        for _ in range(1000):
            section = SectionMaterial(
                youngs_modulus=rng.uniform(1e9, 3e11),
                density=rng.uniform(500, 10000),
                area=rng.uniform(1e-5, 1e-2),
                area_moment=rng.uniform(1e-10, 1e-4),
                shear_modulus=rng.uniform(1e9, 2e11),
                shear_constant=rng.uniform(0.4, 1.2),
                extra_linear_density=rng.uniform(0.0, 2.0),
            )
            length = rng.uniform(0.01, 2.0)
            phi = timoshenko_phi(section, length)
            k_quad, m_quad = quadrature_matrices(section, length, phi)
            em = timoshenko_element_matrices(section, length)
            assert np.allclose(em.stiffness, k_quad, rtol=1e-9)
            assert np.allclose(em.mass, m_quad, rtol=1e-9)
            em_eb = eb_element_matrices(section, length)
            k_eb, _ = quadrature_matrices(section, length, 0.0)
            assert np.allclose(em_eb.stiffness, k_eb, rtol=1e-9)


class TestShapeFunctions:
    def test_left_node_interpolation(self):
        assert np.allclose(shape_functions(BeamTheory.EULER_BERNOULLI, 0.0, 0.3, 0.0),
                           [1.0, 0.0, 0.0, 0.0], atol=1e-15)

    def test_right_node_interpolation(self):
        assert np.allclose(shape_functions(BeamTheory.TIMOSHENKO, 0.7, 0.3, 0.3),
                           [0.0, 0.0, 1.0, 0.0], atol=1e-15)

    def test_eb_midpoint_values(self):
        l = 0.42
        vals = shape_functions(BeamTheory.EULER_BERNOULLI, 0.0, l, l / 2)
        assert vals == pytest.approx([0.5, l / 8, 0.5, -l / 8], rel=1e-14)

    @pytest.mark.parametrize("phi", [0.0, 0.4, 2.5])
    def test_translational_partition_of_unity(self, phi):
        for xi in np.linspace(0.0, 0.9, 7):
            vals = shape_functions(BeamTheory.TIMOSHENKO, phi, 0.9, xi)
            assert vals[0] + vals[2] == pytest.approx(1.0, abs=1e-13)

    def test_outside_element_rejected(self):
        with pytest.raises(ValueError):
            shape_functions(BeamTheory.EULER_BERNOULLI, 0.0, 0.3, 0.31)
        with pytest.raises(ValueError):
            shape_functions(BeamTheory.EULER_BERNOULLI, 0.0, 0.3, -1e-9)


class TestAssemble:
    def test_single_element_clamped_is_bottom_block(self):
        model = uniform_cantilever(n_elements=1, length=0.6)
        system = assemble(model, [1.0])
        em = eb_element_matrices(model.sections[0], 0.6)
        assert np.array_equal(system.k_dense(), em.stiffness[2:, 2:])
        assert np.array_equal(system.m_dense(), em.mass[2:, 2:])

    def test_unit_theta_matches_undamaged(self, small_beam):
        a = assemble(small_beam, np.ones(small_beam.n_elements))
        b = assemble(small_beam, np.ones(small_beam.n_elements))
        assert np.array_equal(a.k_bands, b.k_bands)

    def test_total_mass_bookkeeping_free_boundary(self):
        masses = ((0, 0.5), (3, 0.25), (10, 1.5))
        model = uniform_cantilever(n_elements=10, length=1.3, boundary=Boundary.FREE,
                                   point_masses=masses,
                                   extra_linear_density=0.7)
        system = assemble(model, np.ones(10))
        t = np.zeros(system.dim)
        t[system.dof_of_node] = 1.0
        expected = (model.sections[0].linear_density * 1.3
                    + sum(m for _, m in masses))
        assert t @ system.m_dense() @ t == pytest.approx(expected, rel=1e-12)

    def test_stiffness_linear_in_theta(self, small_beam):
        n = small_beam.n_elements
        theta = np.ones(n)
        theta[4] = 0.35
        damaged = assemble(small_beam, theta)
        base = assemble(small_beam, np.ones(n))
        diff = base.k_dense() - damaged.k_dense()
        em = eb_element_matrices(small_beam.sections[4],
                                 float(small_beam.element_lengths[4]))
        block = np.zeros_like(diff)
        o = 2 * 4 - 2  # clamped offset
        block[o:o + 4, o:o + 4] = (1.0 - 0.35) * em.stiffness
        assert np.allclose(diff, block, rtol=1e-12, atol=1e-6 * np.abs(diff).max())
        assert np.array_equal(damaged.m_dense(), base.m_dense())

    def test_theta_enters_timoshenko_mass(self):
        model = uniform_cantilever(n_elements=4, theory=BeamTheory.TIMOSHENKO)
        theta = np.array([1.0, 0.5, 1.0, 1.0])
        assert not np.array_equal(assemble(model, theta).m_bands,
                                  assemble(model, np.ones(4)).m_bands)

    def test_bandwidth_three(self, small_beam):
        system = assemble(small_beam, np.ones(small_beam.n_elements))
        k = system.k_dense()
        for offset in range(4, system.dim):
            assert np.array_equal(np.diagonal(k, offset), np.zeros(system.dim - offset))

    def test_symmetry_exact(self, small_beam):
        system = assemble(small_beam, np.ones(small_beam.n_elements))
        assert np.array_equal(system.k_dense(), system.k_dense().T)
        assert np.array_equal(system.m_dense(), system.m_dense().T)

    def test_clamped_stiffness_positive_definite(self, small_beam, rng):
        theta = rng.uniform(0.2, 1.0, small_beam.n_elements)
        system = assemble(small_beam, theta)
        np.linalg.cholesky(system.k_dense())  # raises if indefinite
        np.linalg.cholesky(system.m_dense())

    def test_point_mass_on_translational_diagonal(self):
        model = uniform_cantilever(n_elements=3, point_masses=((2, 0.9),))
        with_mass = assemble(model, np.ones(3)).m_dense()
        bare = assemble(uniform_cantilever(n_elements=3), np.ones(3)).m_dense()
        diff = with_mass - bare
        assert diff[2, 2] == pytest.approx(0.9, rel=1e-12)  # node 2 -> row 2 after clamping
        diff[2, 2] = 0.0
        assert np.array_equal(diff, np.zeros_like(diff))

    def test_theta_validation(self, small_beam):
        n = small_beam.n_elements
        with pytest.raises(ValueError):
            assemble(small_beam, np.ones(n - 1))
        theta = np.ones(n)
        theta[0] = 0.0
        with pytest.raises(ValueError):
            assemble(small_beam, theta)


class TestModelValidation:
    def test_decreasing_nodes_rejected(self):
        with pytest.raises(ValueError):
            BeamModel(node_positions=(0.0, 0.2, 0.1),
                      sections=(rect_section(),) * 2)

    def test_point_mass_node_out_of_range(self):
        with pytest.raises(ValueError):
            uniform_cantilever(n_elements=3, point_masses=((4, 1.0),))

    def test_timoshenko_requires_shear_data(self):
        with pytest.raises(ValueError):
            BeamModel(node_positions=(0.0, 0.5, 1.0),
                      sections=(rect_section(),) * 2,
                      theory=BeamTheory.TIMOSHENKO)

    def test_section_invariants(self):
        with pytest.raises(ValueError):
            SectionMaterial(youngs_modulus=0.0, density=1.0, area=1.0, area_moment=1.0)
        with pytest.raises(ValueError):
            SectionMaterial(youngs_modulus=1.0, density=1.0, area=1.0,
                            area_moment=1.0, extra_linear_density=-0.1)
