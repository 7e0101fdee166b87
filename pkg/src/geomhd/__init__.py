"""geomhd: closed-form solution families of the geopotential forecast and
nonlinear MHD equations, verified through exact third-order jet residuals."""

from .chains import (
    ChainFunction,
    FrobeniusSeries,
    drift_laplacian,
    frobenius_coefficients,
    frobenius_eval,
    radial_laplacian,
)
from .errors import (
    AccuracyError,
    ConfigError,
    ConstraintError,
    DomainError,
    GeomhdError,
    ParameterError,
    ParseError,
    SingularityError,
    UsageError,
)
from .expr import diff_expr, eval_expr_jet, eval_value, parse_expr, to_source
from .fields import (
    Grid,
    ResidualReport,
    ScalarField,
    fd_residual,
    field_from_expr,
    residual_geo,
    residual_mhd1,
    residual_mhd2,
    verify_on_grid,
)
from .geo import GeoFamilyA, GeoFamilyB, build_geo_A, build_geo_B
from .jets import Jet, compose_univariate, extract_partial
from .mhd import (
    MhdFamilyA,
    MhdFamilyB,
    MhdFamilyC,
    MhdFamilyD,
    build_mhd_A,
    build_mhd_B,
    build_mhd_C,
    build_mhd_D,
    sigma_for_case,
)
from .quadrature import CumulativeIntegral, integrate_adaptive
from .symmetry import (
    GeoGauge,
    GeoScale,
    GeoTranslate,
    MhdRotateMinus,
    MhdRotatePlus,
    MhdScaleSpace,
    MhdScaleTime,
    MhdShearX,
    MhdShearY,
    MhdTranslate,
    apply_geo,
    apply_mhd,
)

__version__ = "0.1.0"
