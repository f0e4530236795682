import hypothesis
import numpy as np
import pytest

from mopsearch import BeamModel, BeamTheory, Boundary, SectionMaterial

hypothesis.settings.register_profile("ci", deadline=None)
hypothesis.settings.load_profile("ci")


STEEL = dict(youngs_modulus=210e9, density=7850.0)


def rect_section(width=0.05, thickness=0.01, shear=False, **kwargs):
    extra = {}
    if shear:
        extra = dict(shear_modulus=210e9 / 2.6, shear_constant=5.0 / 6.0)
    return SectionMaterial.rectangular(width=width, thickness=thickness,
                                       **STEEL, **extra, **kwargs)


def uniform_cantilever(n_elements=20, length=1.0, theory=BeamTheory.EULER_BERNOULLI,
                       boundary=Boundary.CLAMPED, point_masses=(), **section_kwargs):
    section = rect_section(shear=theory is BeamTheory.TIMOSHENKO, **section_kwargs)
    positions = tuple(length * i / n_elements for i in range(n_elements + 1))
    return BeamModel(node_positions=positions,
                     sections=(section,) * n_elements,
                     theory=theory, boundary=boundary,
                     point_masses=tuple(point_masses))


@pytest.fixture(scope="session")
def small_beam():
    return uniform_cantilever(n_elements=12)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)
