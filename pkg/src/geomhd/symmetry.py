"""Solution-to-solution transformations.

Each transform acts on fields as a black box: coordinates are remapped (with
jets composed through the map, so the chain rule is exact) and additive gauge
terms are appended.  The printed forms are implemented verbatim, including the
two scale transforms whose printed amplitude factors do not close on
cross-term-rich solutions; the closure harness records those verdicts rather
than patching the formulas (see the acceptance suite).

Geopotential transforms:
    translate(a, b):  H(t+a, x, y+b)
    scale(c):         c^3 H(t/c, c x, c y)
    gauge(alpha, beta):  H(t, x+alpha, y) + alpha' y + beta

MHD transforms (acting on (phi, psi) pairs):
    translate(a, b):  f(t+a, x, y, z+b)
    scale_time(c):    c^-1 f(c t, x, y, c z)
    scale_space(c):   c^-2 f(t, c x, c y, z)
    shear_x(sigma, tau):  phi(t, x+sigma, y, z) + sigma_t y + tau_t
                          psi(t, x+sigma, y, z) + sigma_z y + tau_z
    shear_y(sigma):   phi(t, x, y+sigma, z) - sigma_t x   (psi with sigma_z)
    rotate_plus(alpha), rotate_minus(beta): rotation of (x, y) by angle
        2 alpha(t+z) resp. 2 beta(t-z) plus the quadratic gauge term
        +alpha'(x^2+y^2) on both components, resp. +beta' on phi and
        -beta' on psi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .errors import ConstraintError
from .expr import Const, Expr, diff_expr, eval_jet, eval_value, free_vars
from .fields import ScalarField
from .jets import Jet


def _expr_jet(e: Expr, env) -> Jet:
    probe = next(iter(env.values()))
    return eval_jet(e, env, probe.vars, probe.order)


def _check_profile(e: Expr, allowed: set[str], what: str):
    extra = free_vars(e) - allowed
    if extra:
        raise ConstraintError(
            f"{what} may only depend on {sorted(allowed)}, found {sorted(extra)}"
        )


# -- geopotential -------------------------------------------------------------------


@dataclass(frozen=True)
class GeoTranslate:
    a: float
    b: float


@dataclass(frozen=True)
class GeoScale:
    c: float

    def __post_init__(self):
        if self.c == 0.0:
            raise ConstraintError("scale parameter must be nonzero")


@dataclass(frozen=True)
class GeoGauge:
    alpha: Expr = dc_field(default_factory=lambda: Const(0.0))
    beta: Expr = dc_field(default_factory=lambda: Const(0.0))

    def __post_init__(self):
        _check_profile(self.alpha, {"t"}, "alpha")
        _check_profile(self.beta, {"t"}, "beta")


GeoTransform = GeoTranslate | GeoScale | GeoGauge


def apply_geo(tr: GeoTransform, H: ScalarField) -> ScalarField:
    if isinstance(tr, GeoTranslate):
        a, b = tr.a, tr.b

        def jet_env(env):
            return H.jet_env({"t": env["t"] + a, "x": env["x"], "y": env["y"] + b})

        def value(p):
            return H.value({"t": p["t"] + a, "x": p["x"], "y": p["y"] + b})

        label = f"translate({a:g},{b:g})∘{H.label}"

    elif isinstance(tr, GeoScale):
        c = tr.c
        amp = c**3

        def jet_env(env):
            return amp * H.jet_env(
                {"t": env["t"] / c, "x": c * env["x"], "y": c * env["y"]}
            )

        def value(p):
            return amp * H.value({"t": p["t"] / c, "x": c * p["x"], "y": c * p["y"]})

        label = f"scale({c:g})∘{H.label}"

    elif isinstance(tr, GeoGauge):
        alpha, beta = tr.alpha, tr.beta
        alpha1 = diff_expr(alpha, "t")

        def jet_env(env):
            aj = _expr_jet(alpha, env)
            shifted = H.jet_env({"t": env["t"], "x": env["x"] + aj, "y": env["y"]})
            return shifted + _expr_jet(alpha1, env) * env["y"] + _expr_jet(beta, env)

        def value(p):
            a = eval_value(alpha, p)
            return (
                H.value({"t": p["t"], "x": p["x"] + a, "y": p["y"]})
                + eval_value(alpha1, p) * p["y"]
                + eval_value(beta, p)
            )

        label = f"gauge∘{H.label}"

    else:
        raise ConstraintError(f"unknown geopotential transform {tr!r}")

    return ScalarField(H.vars, label, jet_env, value)


# -- MHD ------------------------------------------------------------------------------


@dataclass(frozen=True)
class MhdTranslate:
    a: float
    b: float


@dataclass(frozen=True)
class MhdScaleTime:
    c: float

    def __post_init__(self):
        if self.c == 0.0:
            raise ConstraintError("scale parameter must be nonzero")


@dataclass(frozen=True)
class MhdScaleSpace:
    c: float

    def __post_init__(self):
        if self.c == 0.0:
            raise ConstraintError("scale parameter must be nonzero")


@dataclass(frozen=True)
class MhdShearX:
    sigma: Expr
    tau: Expr = dc_field(default_factory=lambda: Const(0.0))

    def __post_init__(self):
        _check_profile(self.sigma, {"t", "z"}, "sigma")
        _check_profile(self.tau, {"t", "z"}, "tau")


@dataclass(frozen=True)
class MhdShearY:
    sigma: Expr

    def __post_init__(self):
        _check_profile(self.sigma, {"t", "z"}, "sigma")


@dataclass(frozen=True)
class MhdRotatePlus:
    alpha: Expr  # one-variable profile in w, applied at w = t + z

    def __post_init__(self):
        _check_profile(self.alpha, {"w"}, "alpha")


@dataclass(frozen=True)
class MhdRotateMinus:
    beta: Expr  # one-variable profile in w, applied at w = t - z

    def __post_init__(self):
        _check_profile(self.beta, {"w"}, "beta")


MhdTransform = (
    MhdTranslate
    | MhdScaleTime
    | MhdScaleSpace
    | MhdShearX
    | MhdShearY
    | MhdRotatePlus
    | MhdRotateMinus
)


def _remap(field: ScalarField, label: str, jet_map, value_map, jet_extra=None, value_extra=None):
    def jet_env(env):
        out = field.jet_env(jet_map(env))
        if jet_extra is not None:
            out = out + jet_extra(env)
        return out

    def value(p):
        out = field.value(value_map(p))
        if value_extra is not None:
            out = out + value_extra(p)
        return out

    return ScalarField(field.vars, f"{label}∘{field.label}", jet_env, value)


def _rotation(pair, profile: Expr, arg_sign: float, quad_signs: tuple[float, float], label: str):
    phi, psi = pair
    rate = diff_expr(profile, "w")
    out = []
    for f, qsign in zip((phi, psi), quad_signs):

        def jet_env(env, f=f, qsign=qsign):
            w = env["t"] + arg_sign * env["z"]
            aj = eval_jet(profile, {"w": w}, w.vars, w.order)
            theta = 2.0 * aj
            ct, st = theta.cos(), theta.sin()
            xr = env["x"] * ct + env["y"] * st
            yr = -1.0 * env["x"] * st + env["y"] * ct
            mapped = {"t": env["t"], "x": xr, "y": yr, "z": env["z"]}
            gauge = eval_jet(rate, {"w": w}, w.vars, w.order) * (
                env["x"] * env["x"] + env["y"] * env["y"]
            )
            return f.jet_env(mapped) + qsign * gauge

        def value(p, f=f, qsign=qsign):
            w = p["t"] + arg_sign * p["z"]
            theta = 2.0 * eval_value(profile, {"w": w})
            ct, st = math.cos(theta), math.sin(theta)
            mapped = {
                "t": p["t"],
                "x": p["x"] * ct + p["y"] * st,
                "y": -p["x"] * st + p["y"] * ct,
                "z": p["z"],
            }
            gauge = eval_value(rate, {"w": w}) * (p["x"] ** 2 + p["y"] ** 2)
            return f.value(mapped) + qsign * gauge

        out.append(ScalarField(f.vars, f"{label}∘{f.label}", jet_env, value))
    return tuple(out)


def apply_mhd(tr: MhdTransform, pair) -> tuple[ScalarField, ScalarField]:
    phi, psi = pair

    if isinstance(tr, MhdTranslate):
        a, b = tr.a, tr.b

        def jmap(env):
            return {"t": env["t"] + a, "x": env["x"], "y": env["y"], "z": env["z"] + b}

        def vmap(p):
            return {"t": p["t"] + a, "x": p["x"], "y": p["y"], "z": p["z"] + b}

        lbl = f"translate({a:g},{b:g})"
        return (_remap(phi, lbl, jmap, vmap), _remap(psi, lbl, jmap, vmap))

    if isinstance(tr, MhdScaleTime):
        c = tr.c

        def jmap(env):
            return {"t": c * env["t"], "x": env["x"], "y": env["y"], "z": c * env["z"]}

        def vmap(p):
            return {"t": c * p["t"], "x": p["x"], "y": p["y"], "z": c * p["z"]}

        lbl = f"scale_time({c:g})"
        out = []
        for f in (phi, psi):
            g = _remap(f, lbl, jmap, vmap)
            out.append(
                ScalarField(
                    g.vars,
                    g.label,
                    lambda env, g=g: g.jet_env(env) / c,
                    lambda p, g=g: g.value(p) / c,
                )
            )
        return tuple(out)

    if isinstance(tr, MhdScaleSpace):
        c = tr.c

        def jmap(env):
            return {"t": env["t"], "x": c * env["x"], "y": c * env["y"], "z": env["z"]}

        def vmap(p):
            return {"t": p["t"], "x": c * p["x"], "y": c * p["y"], "z": p["z"]}

        lbl = f"scale_space({c:g})"
        out = []
        for f in (phi, psi):
            g = _remap(f, lbl, jmap, vmap)
            out.append(
                ScalarField(
                    g.vars,
                    g.label,
                    lambda env, g=g: g.jet_env(env) / (c * c),
                    lambda p, g=g: g.value(p) / (c * c),
                )
            )
        return tuple(out)

    if isinstance(tr, MhdShearX):
        sigma, tau = tr.sigma, tr.tau
        out = []
        for f, s in ((phi, "t"), (psi, "z")):
            sigma_d = diff_expr(sigma, s)
            tau_d = diff_expr(tau, s)

            def jet_env(env, f=f, sigma_d=sigma_d, tau_d=tau_d):
                sj = _expr_jet(sigma, env)
                mapped = {
                    "t": env["t"],
                    "x": env["x"] + sj,
                    "y": env["y"],
                    "z": env["z"],
                }
                return (
                    f.jet_env(mapped)
                    + _expr_jet(sigma_d, env) * env["y"]
                    + _expr_jet(tau_d, env)
                )

            def value(p, f=f, sigma_d=sigma_d, tau_d=tau_d):
                s_val = eval_value(sigma, p)
                mapped = {"t": p["t"], "x": p["x"] + s_val, "y": p["y"], "z": p["z"]}
                return (
                    f.value(mapped)
                    + eval_value(sigma_d, p) * p["y"]
                    + eval_value(tau_d, p)
                )

            out.append(ScalarField(f.vars, f"shear_x∘{f.label}", jet_env, value))
        return tuple(out)

    if isinstance(tr, MhdShearY):
        sigma = tr.sigma
        out = []
        for f, s in ((phi, "t"), (psi, "z")):
            sigma_d = diff_expr(sigma, s)

            def jet_env(env, f=f, sigma_d=sigma_d):
                sj = _expr_jet(sigma, env)
                mapped = {
                    "t": env["t"],
                    "x": env["x"],
                    "y": env["y"] + sj,
                    "z": env["z"],
                }
                return f.jet_env(mapped) - _expr_jet(sigma_d, env) * env["x"]

            def value(p, f=f, sigma_d=sigma_d):
                s_val = eval_value(sigma, p)
                mapped = {"t": p["t"], "x": p["x"], "y": p["y"] + s_val, "z": p["z"]}
                return f.value(mapped) - eval_value(sigma_d, p) * p["x"]

            out.append(ScalarField(f.vars, f"shear_y∘{f.label}", jet_env, value))
        return tuple(out)

    if isinstance(tr, MhdRotatePlus):
        return _rotation(pair, tr.alpha, +1.0, (1.0, 1.0), "rotate_plus")

    if isinstance(tr, MhdRotateMinus):
        return _rotation(pair, tr.beta, -1.0, (1.0, -1.0), "rotate_minus")

    raise ConstraintError(f"unknown MHD transform {tr!r}")
