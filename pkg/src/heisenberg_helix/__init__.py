"""Constant-angle (helix) surfaces in the Lorentzian Heisenberg group H3(tau)."""

from .ambient import Tau, covariant_derivative, cross, inner, killing_residual, nabla_frame, riemann_formula, riemann_table
from .config import RunConfig, config_from_mapping, load_config, preset_mapping
from .errors import (
    DegenerateMetric,
    GeometryError,
    HopfCylinder,
    InvalidSpec,
    NonFiniteEta,
    NullNormal,
    SingularBasis,
    SingularLambda,
)
from .helix import (
    ClosedForms,
    HelixSpec,
    ProfileCurve,
    closed_forms,
    construct,
    example_family,
    example_profile,
    example_spec,
    lambda_ode_residual,
    load_profile_csv,
    profile_from_eta,
    validate_profile,
)
from .mesh import write_mesh
from .numerics import ToleranceConfig
from .surface import (
    Causal,
    Immersion,
    causal_type,
    codazzi_residual,
    gauss_curvature_extrinsic,
    gauss_curvature_intrinsic,
    shape_operator,
    structure_residuals,
    surface_frame,
)
from .verify import VerificationReport, verify_config, verify_spec

__version__ = "0.1.0"
