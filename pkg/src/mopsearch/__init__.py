"""Multi-objective pattern search and vibration-based damage location."""

from .beams import (
    AssembledSystem,
    BeamModel,
    BeamTheory,
    Boundary,
    ElementMatrices,
    SectionMaterial,
    assemble,
    eb_element_matrices,
    shape_functions,
    timoshenko_element_matrices,
    timoshenko_phi,
)
from .damage import DamageBox, DamageParams, constraints, damage_cdf, damage_pdf, theta
from .fronts import (
    ImagePoint,
    dominates,
    gyrm,
    hall_of_fame,
    pareto_fronts,
    presort_gyrm,
    staircase,
)
from .modal import (
    DegenerateModeError,
    EigenSolveError,
    ModalResult,
    SensorLayout,
    align_sign,
    gather_normalize,
    modal_analysis,
    read_modal_csv,
    solve_generalized_eig,
    write_modal_csv,
)
from .modelfile import load_model, make_cantilever_model
from .objective import (
    DamageObjective,
    UpdatingStates,
    eps_f,
    eps_m,
    make_synthetic_measurement,
)
from .search import EvalCache, GridSpec, SearchResult, pattern_search, sample_pattern

__version__ = "0.1.0"

__all__ = [
    "AssembledSystem", "BeamModel", "BeamTheory", "Boundary", "ElementMatrices",
    "SectionMaterial", "assemble", "eb_element_matrices", "shape_functions",
    "timoshenko_element_matrices", "timoshenko_phi",
    "DamageBox", "DamageParams", "constraints", "damage_cdf", "damage_pdf", "theta",
    "ImagePoint", "dominates", "gyrm", "hall_of_fame", "pareto_fronts",
    "presort_gyrm", "staircase",
    "DegenerateModeError", "EigenSolveError", "ModalResult", "SensorLayout",
    "align_sign", "gather_normalize", "modal_analysis", "read_modal_csv",
    "solve_generalized_eig", "write_modal_csv",
    "load_model", "make_cantilever_model",
    "DamageObjective", "UpdatingStates", "eps_f", "eps_m",
    "make_synthetic_measurement",
    "EvalCache", "GridSpec", "SearchResult", "pattern_search", "sample_pattern",
]
