"""Configuration schema: from a plain dict (usually JSON) to built fields.

Schema keys::

    equation    "geo" | "mhd"
    family      geo_A | geo_B | geo_expr | mhd_A | mhd_B | mhd_C | mhd_D | mhd_expr
    constants   family-specific numbers (k, c, d, c0, a1, a2, case, branch, ...)
    params      parameter-function expressions as strings
    modes       geo_A: list of [a, b, phase, amplitude];
                mhd_B: {"alpha1": [...], "alpha2": [...], "beta1": [...], "beta2": [...]}
    transforms  ordered list of {"kind": ..., parameters...}
    grid        {"var": [lo, hi, count], ...}  (defaults per family)
    tolerance   relative residual threshold (default 1e-8; geo_A default 1e-7)

The explicit-field families geo_expr / mhd_expr take the field itself as an
expression string (params: H, resp. phi and psi) and exist for harness
plumbing: golden CSVs and negative controls.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import geo, mhd, symmetry
from .errors import ConfigError, ConstraintError, ParseError
from .expr import Const, Expr, parse_expr
from .fields import GEO_VARS, MHD_VARS, Grid, ScalarField, field_from_expr

DEFAULT_TOLERANCE = 1e-8
GEO_A_TOLERANCE = 1e-7  # quadrature-backed
DEFAULT_QUAD_TOL = 1e-12
DEFAULT_SERIES_CAP = 40
DEFAULT_AXIS = (-1.0, 1.0, 5)

FAMILY_CATALOG = (
    # name, equation, source tag, parameter slots, constraints
    (
        "geo_A",
        "geo",
        "Theorem 2.1",
        "constants k,c,d,c0; theta(t); modes (a_i,b_i,c_i,d_i)",
        "(c,d) ≠ (0,0); (a_i,b_i) ≠ (0,0)",
    ),
    (
        "geo_B",
        "geo",
        "Theorem 2.2 / Remark 2.3",
        "constants k,b,c; optional alpha(t), beta(t)",
        "log branch (c ≠ 0) excludes (x+alpha)^2+y^2 ≈ 0",
    ),
    (
        "geo_expr",
        "geo",
        "explicit field",
        "params H(t,x,y)",
        "none",
    ),
    (
        "mhd_A",
        "mhd",
        "Proposition 3.1",
        "sigma(t,z), theta(t,z), tau(t,z)",
        "none",
    ),
    (
        "mhd_B",
        "mhd",
        "Theorem 3.2, cases 1-3",
        "constants case,a1,a2,c,branch; lambda(t,z); envelope modes in varpi",
        "branch radicand E ≥ 2|c|; cases 2-3 need z > 0 (case 3 also t > 0); "
        "radial chain denominators must not vanish",
    ),
    (
        "mhd_C",
        "mhd",
        "Proposition 3.3",
        "F(w,varpi), G(w,varpi); variant planar|radial",
        "none",
    ),
    (
        "mhd_D",
        "mhd",
        "transformed family (printed form; verdict documented by the harness)",
        "F,G(w,varpi); alpha(w); sigma,tau,lambda(t,z); epsilon ±1",
        "none",
    ),
    (
        "mhd_expr",
        "mhd",
        "explicit fields",
        "params phi(t,x,y,z), psi(t,x,y,z)",
        "none",
    ),
)

FAMILY_NAMES = tuple(row[0] for row in FAMILY_CATALOG)


@dataclass(frozen=True)
class BuiltInstance:
    equation: str  # 'geo' | 'mhd'
    family: str
    label: str
    fields: object  # ScalarField or (phi, psi)
    grid: Grid
    tolerance: float
    k: float | None


def _expr_param(params: Mapping, name: str, allowed, default: str | None = "0") -> Expr:
    raw = params.get(name, default)
    if raw is None:
        raise ConfigError(f"missing parameter expression {name!r}")
    if not isinstance(raw, str):
        raise ConfigError(f"parameter {name!r} must be an expression string")
    return parse_expr(raw, allowed)


def _number(constants: Mapping, name: str, default=None) -> float:
    v = constants.get(name, default)
    if v is None:
        raise ConfigError(f"missing constant {name!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"constant {name!r} must be a number")
    return float(v)


def _grid(cfg: Mapping, variables, exclude=None) -> Grid:
    spec = cfg.get("grid", {})
    if not isinstance(spec, Mapping):
        raise ConfigError("grid must be a mapping of variable -> [lo, hi, count]")
    unknown = set(spec) - set(variables)
    if unknown:
        raise ConfigError(f"grid variables {sorted(unknown)} not in {variables}")
    ranges = {}
    for v in variables:
        axis = spec.get(v, DEFAULT_AXIS)
        try:
            lo, hi, count = axis
        except (TypeError, ValueError):
            raise ConfigError(f"grid axis {v!r} must be [lo, hi, count]") from None
        ranges[v] = (float(lo), float(hi), int(count))
    return Grid.from_ranges(ranges, exclude)


def _modes_geo(cfg: Mapping):
    modes = cfg.get("modes", [])
    out = []
    for i, row in enumerate(modes):
        try:
            a, b, phase, amp = (float(v) for v in row)
        except (TypeError, ValueError):
            raise ConfigError(
                f"mode {i} must be [a, b, phase, amplitude], got {row!r}"
            ) from None
        out.append((a, b, phase, amp))
    return tuple(out)


def _modes_mhd(cfg: Mapping, key: str):
    modes = cfg.get("modes", {})
    if not isinstance(modes, Mapping):
        raise ConfigError("mhd_B modes must be a mapping of ladder lists")
    out = []
    for raw in modes.get(key, ()):  # list position = ladder length
        if not isinstance(raw, str):
            raise ConfigError(f"{key} entries must be expression strings")
        out.append(parse_expr(raw, {"varpi"}))
    return tuple(out)


def _transforms(cfg: Mapping, equation: str):
    out = []
    for i, row in enumerate(cfg.get("transforms", ())):
        if not isinstance(row, Mapping) or "kind" not in row:
            raise ConfigError(f"transform {i} must be a mapping with a 'kind'")
        kind = row["kind"]
        try:
            if equation == "geo":
                if kind == "translate":
                    out.append(symmetry.GeoTranslate(_number(row, "a", 0.0), _number(row, "b", 0.0)))
                elif kind == "scale":
                    out.append(symmetry.GeoScale(_number(row, "c")))
                elif kind == "gauge":
                    out.append(
                        symmetry.GeoGauge(
                            _expr_param(row, "alpha", {"t"}),
                            _expr_param(row, "beta", {"t"}),
                        )
                    )
                else:
                    raise ConfigError(f"unknown geo transform kind {kind!r}")
            else:
                if kind == "translate":
                    out.append(symmetry.MhdTranslate(_number(row, "a", 0.0), _number(row, "b", 0.0)))
                elif kind == "scale_time":
                    out.append(symmetry.MhdScaleTime(_number(row, "c")))
                elif kind == "scale_space":
                    out.append(symmetry.MhdScaleSpace(_number(row, "c")))
                elif kind == "shear_x":
                    out.append(
                        symmetry.MhdShearX(
                            _expr_param(row, "sigma", {"t", "z"}),
                            _expr_param(row, "tau", {"t", "z"}),
                        )
                    )
                elif kind == "shear_y":
                    out.append(symmetry.MhdShearY(_expr_param(row, "sigma", {"t", "z"})))
                elif kind == "rotate_plus":
                    out.append(symmetry.MhdRotatePlus(_expr_param(row, "alpha", {"w"})))
                elif kind == "rotate_minus":
                    out.append(symmetry.MhdRotateMinus(_expr_param(row, "beta", {"w"})))
                else:
                    raise ConfigError(f"unknown mhd transform kind {kind!r}")
        except KeyError as err:
            raise ConfigError(f"transform {i} is missing {err}") from None
    return out


def build_instance(cfg: Mapping) -> BuiltInstance:
    """Validate a config dict, build the field(s), apply transforms, wire the grid."""
    if not isinstance(cfg, Mapping):
        raise ConfigError("configuration must be a mapping")
    family = cfg.get("family")
    if family not in FAMILY_NAMES:
        raise ConfigError(f"unknown family {family!r}; expected one of {FAMILY_NAMES}")
    equation = "geo" if family.startswith("geo") else "mhd"
    declared = cfg.get("equation", equation)
    if declared != equation:
        raise ConfigError(f"family {family} belongs to equation {equation!r}, not {declared!r}")
    constants = cfg.get("constants", {})
    params = cfg.get("params", {})
    if not isinstance(constants, Mapping) or not isinstance(params, Mapping):
        raise ConfigError("constants and params must be mappings")

    tolerance = float(cfg.get("tolerance", GEO_A_TOLERANCE if family == "geo_A" else DEFAULT_TOLERANCE))
    exclude = None
    k = None

    if family == "geo_A":
        k = _number(constants, "k")
        spec = geo.GeoFamilyA(
            k=k,
            theta=_expr_param(params, "theta", {"t"}),
            c=_number(constants, "c"),
            d=_number(constants, "d"),
            c0=_number(constants, "c0"),
            modes=_modes_geo(cfg),
            base_point=_number(constants, "t0", 0.0),
            quad_tol=_number(constants, "quad_tol", DEFAULT_QUAD_TOL),
        )
        fields = geo.build_geo_A(spec)
        label = fields.label
    elif family == "geo_B":
        k = _number(constants, "k")
        spec = geo.GeoFamilyB(
            k=k,
            b=_number(constants, "b"),
            c=_number(constants, "c"),
            alpha=_expr_param(params, "alpha", {"t"}),
            beta=_expr_param(params, "beta", {"t"}),
            max_terms=int(_number(constants, "series_cap", DEFAULT_SERIES_CAP)),
        )
        fields = geo.build_geo_B(spec)
        exclude = spec.exclusion()
        label = fields.label
    elif family == "geo_expr":
        k = _number(constants, "k", 1.0)
        H = _expr_param(params, "H", set(GEO_VARS), default=None)
        fields = field_from_expr(H, GEO_VARS, f"geo field {params['H']!r}")
        label = fields.label
    elif family == "mhd_A":
        spec = mhd.MhdFamilyA(
            sigma=_expr_param(params, "sigma", {"t", "z"}),
            theta=_expr_param(params, "theta", {"t", "z"}),
            tau=_expr_param(params, "tau", {"t", "z"}),
        )
        fields = mhd.build_mhd_A(spec)
        label = "mhd_A"
    elif family == "mhd_B":
        branch = constants.get("branch", "plus")
        if branch not in mhd.BRANCHES:
            raise ConfigError(f"branch must be one of {mhd.BRANCHES}, got {branch!r}")
        spec = mhd.MhdFamilyB(
            case=int(_number(constants, "case")),
            a1=_number(constants, "a1"),
            a2=_number(constants, "a2"),
            c=_number(constants, "c"),
            branch=branch,
            lam=_expr_param(params, "lambda", {"t", "z"}),
            alpha1=_modes_mhd(cfg, "alpha1"),
            alpha2=_modes_mhd(cfg, "alpha2"),
            beta1=_modes_mhd(cfg, "beta1"),
            beta2=_modes_mhd(cfg, "beta2"),
        )
        fields = mhd.build_mhd_B(spec)
        exclude = spec.exclusion()
        label = fields[0].label.removesuffix(" phi")
    elif family == "mhd_C":
        variant = cfg.get("constants", {}).get("variant", "planar")
        spec = mhd.MhdFamilyC(
            F=_expr_param(params, "F", {"w", "varpi"}),
            G=_expr_param(params, "G", {"w", "varpi"}),
            variant=variant,
        )
        fields = mhd.build_mhd_C(spec)
        label = f"mhd_C({variant})"
    elif family == "mhd_D":
        spec = mhd.MhdFamilyD(
            F=_expr_param(params, "F", {"w", "varpi"}),
            G=_expr_param(params, "G", {"w", "varpi"}),
            alpha=_expr_param(params, "alpha", {"w"}),
            sigma=_expr_param(params, "sigma", {"t", "z"}),
            tau=_expr_param(params, "tau", {"t", "z"}),
            lam=_expr_param(params, "lambda", {"t", "z"}),
            epsilon=int(_number(constants, "epsilon", 1.0)),
        )
        fields = mhd.build_mhd_D(spec)
        label = "mhd_D (printed form)"
    elif family == "mhd_expr":
        phi = _expr_param(params, "phi", set(MHD_VARS), default=None)
        psi = _expr_param(params, "psi", set(MHD_VARS), default=None)
        fields = (
            field_from_expr(phi, MHD_VARS, "mhd phi"),
            field_from_expr(psi, MHD_VARS, "mhd psi"),
        )
        label = "mhd explicit pair"
    else:  # pragma: no cover - guarded by FAMILY_NAMES check
        raise ConfigError(f"unhandled family {family!r}")

    for tr in _transforms(cfg, equation):
        if equation == "geo":
            fields = symmetry.apply_geo(tr, fields)
        else:
            fields = symmetry.apply_mhd(tr, fields)
        label = f"{type(tr).__name__}∘{label}"

    variables = GEO_VARS if equation == "geo" else MHD_VARS
    grid = _grid(cfg, variables, exclude)
    return BuiltInstance(
        equation=equation,
        family=family,
        label=label,
        fields=fields,
        grid=grid,
        tolerance=tolerance,
        k=k,
    )
