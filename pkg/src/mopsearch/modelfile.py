"""Beam model description files (TOML).

A model file declares the mesh, the base material/section, optional additive
reinforcement layers over element ranges, lumped masses and a default sensor
layout.  Expanding the file yields explicit per-element section properties,
so laboratory structures and synthetic variants share one code path.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .beams import BeamModel, BeamTheory, Boundary, SectionMaterial

_TOP_KEYS = {"beam", "material", "section", "reinforcements", "point_masses", "sensors"}
_BEAM_KEYS = {"theory", "boundary", "length", "n_elements", "node_positions"}
_MATERIAL_KEYS = {"youngs_modulus", "density", "shear_modulus", "shear_constant"}
_SECTION_KEYS = {"width", "thickness", "area", "area_moment", "extra_linear_density"}
_REINF_KEYS = {"elements", "width", "thickness", "area", "area_moment", "plates"}
_MASS_KEYS = {"node", "mass"}
_SENSOR_KEYS = {"nodes"}


class ModelFileError(ValueError):
    """Model file rejected; ``errors`` lists every violation."""

    def __init__(self, source: str, errors: list[str]):
        self.errors = list(errors)
        super().__init__(f"{source}: " + "; ".join(self.errors))


@dataclass(frozen=True)
class LoadedModel:
    model: BeamModel
    sensor_nodes: tuple[int, ...] | None


def _check_keys(table: dict, allowed: set[str], where: str, errors: list[str]) -> None:
    for key in table:
        if key not in allowed:
            errors.append(f"unknown key '{key}' in [{where}]")


def _section_geometry(table: dict, where: str, errors: list[str]) -> tuple[float, float]:
    """Resolve (area, area_moment) from either explicit values or a
    width/thickness rectangle."""
    has_rect = "width" in table or "thickness" in table
    has_explicit = "area" in table or "area_moment" in table
    if has_rect and has_explicit:
        errors.append(f"[{where}]: give width/thickness or area/area_moment, not both")
        return 1.0, 1.0
    if has_rect:
        if "width" not in table or "thickness" not in table:
            errors.append(f"[{where}]: width and thickness must both be given")
            return 1.0, 1.0
        w, t = float(table["width"]), float(table["thickness"])
        return w * t, w * t**3 / 12.0
    if "area" not in table or "area_moment" not in table:
        errors.append(f"[{where}]: area and area_moment must both be given")
        return 1.0, 1.0
    return float(table["area"]), float(table["area_moment"])


def parse_model(data: dict, source: str = "<model>") -> LoadedModel:
    errors: list[str] = []
    _check_keys(data, _TOP_KEYS, "top level", errors)
    beam = data.get("beam", {})
    material = data.get("material", {})
    section = data.get("section", {})
    _check_keys(beam, _BEAM_KEYS, "beam", errors)
    _check_keys(material, _MATERIAL_KEYS, "material", errors)
    _check_keys(section, _SECTION_KEYS, "section", errors)

    theory_name = beam.get("theory", "euler-bernoulli")
    try:
        theory = BeamTheory(theory_name)
    except ValueError:
        errors.append(f"unknown beam theory '{theory_name}'")
        theory = BeamTheory.EULER_BERNOULLI
    boundary_name = beam.get("boundary", "clamped")
    try:
        boundary = Boundary(boundary_name)
    except ValueError:
        errors.append(f"unknown boundary '{boundary_name}'")
        boundary = Boundary.CLAMPED

    if "node_positions" in beam:
        if "length" in beam or "n_elements" in beam:
            errors.append("[beam]: node_positions excludes length/n_elements")
        positions = [float(v) for v in beam["node_positions"]]
    else:
        length = beam.get("length")
        n_elem = beam.get("n_elements")
        if length is None or n_elem is None:
            errors.append("[beam]: need length and n_elements (or node_positions)")
            length, n_elem = 1.0, 1
        if int(n_elem) < 1 or float(length) <= 0:
            errors.append("[beam]: length must be > 0 and n_elements >= 1")
            length, n_elem = 1.0, 1
        positions = [float(length) * i / int(n_elem) for i in range(int(n_elem) + 1)]
    n_elements = len(positions) - 1

    for key in ("youngs_modulus", "density"):
        if key not in material:
            errors.append(f"[material]: missing {key}")
    base_area, base_moment = _section_geometry(section, "section", errors)
    extra_rho = float(section.get("extra_linear_density", 0.0))

    area = [base_area] * n_elements
    moment = [base_moment] * n_elements
    for idx, layer in enumerate(data.get("reinforcements", [])):
        where = f"reinforcements[{idx}]"
        _check_keys(layer, _REINF_KEYS, where, errors)
        if "elements" not in layer:
            errors.append(f"[{where}]: missing elements range")
            continue
        rng = layer["elements"]
        if not (isinstance(rng, list) and len(rng) == 2):
            errors.append(f"[{where}]: elements must be [first, last] (1-based)")
            continue
        first, last = int(rng[0]), int(rng[1])
        if not (1 <= first <= last <= n_elements):
            errors.append(f"[{where}]: elements {first}..{last} outside 1..{n_elements}")
            continue
        layer_area, layer_moment = _section_geometry(layer, where, errors)
        plates = int(layer.get("plates", 1))
        if plates < 1:
            errors.append(f"[{where}]: plates must be >= 1")
            continue
        for e in range(first - 1, last):
            area[e] += plates * layer_area
            moment[e] += plates * layer_moment

    point_masses = []
    for idx, pm in enumerate(data.get("point_masses", [])):
        where = f"point_masses[{idx}]"
        _check_keys(pm, _MASS_KEYS, where, errors)
        if "node" not in pm or "mass" not in pm:
            errors.append(f"[{where}]: need node and mass")
            continue
        node, mass = int(pm["node"]), float(pm["mass"])
        if not 0 <= node <= n_elements:
            errors.append(f"[{where}]: node {node} outside 0..{n_elements}")
            continue
        if mass < 0:
            errors.append(f"[{where}]: mass must be >= 0")
            continue
        point_masses.append((node, mass))

    sensors = data.get("sensors", {})
    _check_keys(sensors, _SENSOR_KEYS, "sensors", errors)
    sensor_nodes = None
    if "nodes" in sensors:
        sensor_nodes = tuple(int(v) for v in sensors["nodes"])
        for node in sensor_nodes:
            if not 0 <= node <= n_elements:
                errors.append(f"[sensors]: node {node} outside 0..{n_elements}")

    if errors:
        raise ModelFileError(source, errors)

    sections = tuple(
        SectionMaterial(
            youngs_modulus=float(material["youngs_modulus"]),
            density=float(material["density"]),
            area=area[e],
            area_moment=moment[e],
            shear_modulus=(float(material["shear_modulus"])
                           if "shear_modulus" in material else None),
            shear_constant=(float(material["shear_constant"])
                            if "shear_constant" in material else None),
            extra_linear_density=extra_rho,
        )
        for e in range(n_elements)
    )
    try:
        model = BeamModel(
            node_positions=tuple(positions),
            sections=sections,
            theory=theory,
            boundary=boundary,
            point_masses=tuple(point_masses),
        )
    except ValueError as exc:
        raise ModelFileError(source, [str(exc)]) from exc
    return LoadedModel(model=model, sensor_nodes=sensor_nodes)


def load_model(path: str | Path) -> LoadedModel:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ModelFileError(str(path), [f"cannot read file: {exc}"]) from exc
    except tomllib.TOMLDecodeError as exc:
        raise ModelFileError(str(path), [f"invalid TOML: {exc}"]) from exc
    return parse_model(data, source=str(path))


def make_cantilever_model() -> LoadedModel:
    """The packaged 241-element laboratory cantilever description."""
    ref = resources.files("mopsearch").joinpath("data/cantilever.toml")
    with ref.open("rb") as fh:
        data = tomllib.load(fh)
    return parse_model(data, source="builtin:cantilever")


BUILTIN_MODELS = {"cantilever": make_cantilever_model}
