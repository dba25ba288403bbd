"""Curvature toolkit for admissible surfaces in simply isotropic 3-space.

The ambient geometry carries the degenerate metric ds^2 = dx^2 + dy^2;
surfaces whose tangent planes stay Euclidean admit an isotropic Gaussian
curvature K and mean curvature H.  This package differentiates surfaces
with exact second-order jets, specializes to factorable (product) graphs
x = f(y) g(z) and y = f(x) g(z), carries the complete catalog of
constant-K and constant-H factorable families (including two defined only
through ODE trajectories), and probes numerically for surfaces with a
constant curvature ratio.
"""

from .errors import (
    BlowUp,
    DomainError,
    InvalidConstants,
    IsocurvError,
    NotAdmissible,
    RadicandNonpositive,
    RegularityError,
    UnsupportedFunction,
)
from .expr import ParseDiagnostic, ParseError, eval_jet, eval_scalar, parse, to_string
from .factorable import (
    BUILTIN_EXAMPLES,
    CLOSED_FORM_FAMILY_IDS,
    FAMILY_IDS,
    PHI2,
    PHI3,
    CompareReport,
    ExampleSurface,
    FactorableSpec,
    FamilySpec,
    RatioProbeReport,
    TabulatedFunction,
    VerifyReport,
    compare_types,
    curvature_grid,
    family_claim,
    gauss_curvature_factorable,
    instantiate_family,
    make_patch,
    mean_curvature_factorable,
    ode_generate_cmc,
    ode_generate_k0,
    ratio_probe,
    verify_family,
    verify_spec,
)
from .geometry import (
    AdmissibilityReport,
    Curvatures,
    FundamentalForms,
    GridSpec,
    IsotropicMotion,
    Rectangle,
    SurfacePatch,
    admissibility_check,
    apply_motion,
    curvatures,
    curvatures_at,
    fundamental_forms,
)
from .jets import Jet2, constant, seed

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport",
    "BUILTIN_EXAMPLES",
    "BlowUp",
    "CLOSED_FORM_FAMILY_IDS",
    "CompareReport",
    "Curvatures",
    "DomainError",
    "ExampleSurface",
    "FAMILY_IDS",
    "FactorableSpec",
    "FamilySpec",
    "FundamentalForms",
    "GridSpec",
    "InvalidConstants",
    "IsocurvError",
    "IsotropicMotion",
    "Jet2",
    "NotAdmissible",
    "PHI2",
    "PHI3",
    "ParseDiagnostic",
    "ParseError",
    "RadicandNonpositive",
    "RatioProbeReport",
    "Rectangle",
    "RegularityError",
    "SurfacePatch",
    "TabulatedFunction",
    "UnsupportedFunction",
    "VerifyReport",
    "admissibility_check",
    "apply_motion",
    "compare_types",
    "constant",
    "curvature_grid",
    "curvatures",
    "curvatures_at",
    "eval_jet",
    "eval_scalar",
    "family_claim",
    "fundamental_forms",
    "gauss_curvature_factorable",
    "instantiate_family",
    "make_patch",
    "mean_curvature_factorable",
    "ode_generate_cmc",
    "ode_generate_k0",
    "parse",
    "ratio_probe",
    "seed",
    "to_string",
    "verify_family",
    "verify_spec",
]
