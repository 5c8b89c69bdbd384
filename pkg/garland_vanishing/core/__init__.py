from .cochains import (
    CochainNormContext,
    EuclideanNorm,
    TwistedCochain,
    UniformNorm,
    differential_d,
    codifferential_delta,
    localize,
    project_PL,
    project_PL_dual,
    restrict,
)
from .cohomology import (
    CohomologyReport,
    cohomology_dimensions,
    h1_dimension,
    per_link_inequality_check,
)
from .complex_core import LinkComplex, SimplicialComplex, build_complex, link
from .errors import GarlandError
from .group_action import Group, close_group, orbit_data, trivial_group
from .representations import (
    Representation,
    close_representation,
    conjugate,
    contragredient,
    trivial_representation,
    uniform_bound,
)
from .spectral import LinkGraph, SpectralReport, evaluate_criterion, kappa2, lambda1

__all__ = [
    "CochainNormContext",
    "CohomologyReport",
    "EuclideanNorm",
    "GarlandError",
    "Group",
    "LinkComplex",
    "LinkGraph",
    "Representation",
    "SimplicialComplex",
    "SpectralReport",
    "TwistedCochain",
    "UniformNorm",
    "build_complex",
    "close_group",
    "close_representation",
    "codifferential_delta",
    "cohomology_dimensions",
    "conjugate",
    "contragredient",
    "differential_d",
    "evaluate_criterion",
    "h1_dimension",
    "kappa2",
    "lambda1",
    "link",
    "localize",
    "orbit_data",
    "per_link_inequality_check",
    "project_PL",
    "project_PL_dual",
    "restrict",
    "trivial_group",
    "trivial_representation",
    "uniform_bound",
]
