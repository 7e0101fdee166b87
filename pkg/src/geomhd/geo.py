"""Geopotential solution families.

Family A (traveling modes): with a free time profile theta(t) and constants
``k, c, c0, d``, set ``beta(t) = c (k c theta + c0 t) + d`` and
``w = c x + beta y``.  Then

    H = (k c theta' + c0)/2 * y^2 + theta'' * w
        + 1/(c^2 + beta^2) * sum_i d_i exp(A_i + a_i w) sin(b_i w + c_i + B_i)

with amplitude/phase factors driven by the cumulative integral
``I(t) = int dt / (c^2 + beta^2)``:  ``A_i = k c a_i/(a_i^2+b_i^2) I`` and
``B_i = -k c b_i/(a_i^2+b_i^2) I``.  Constraints: ``(c, d) != (0, 0)`` and
``(a_i, b_i) != (0, 0)`` per mode.

Family B (steady radial profile): ``H = (alpha' - 1) y + beta
+ xi((x+alpha)^2 + y^2)`` where xi is the logarithmic Frobenius series from
:mod:`geomhd.chains`; ``alpha = beta = 0`` gives the steady solution, smooth
time profiles give its gauge-shifted non-steady variant.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .chains import FrobeniusSeries
from .errors import ConstraintError, DomainError, UsageError
from .expr import (
    Call,
    Const,
    Expr,
    Integral,
    Var,
    diff_expr,
    eval_jet,
    eval_value,
    free_vars,
)
from .fields import GEO_VARS, ScalarField, field_from_expr

ORIGIN_MARGIN = 1e-6  # radial coordinate floor for the logarithmic branch


def _check_profile(e: Expr, allowed: set[str], what: str):
    extra = free_vars(e) - allowed
    if extra:
        raise ConstraintError(f"{what} may only depend on {sorted(allowed)}, found {sorted(extra)}")


@dataclass(frozen=True)
class GeoFamilyA:
    k: float
    theta: Expr
    c: float
    d: float
    c0: float
    modes: tuple[tuple[float, float, float, float], ...]
    base_point: float = 0.0
    quad_tol: float = 1e-12

    def __post_init__(self):
        if self.c == 0.0 and self.d == 0.0:
            raise ConstraintError("(c,d) ≠ (0,0) is required (Theorem 2.1)")
        for i, (a, b, *_rest) in enumerate(self.modes):
            if a == 0.0 and b == 0.0:
                raise ConstraintError(
                    f"(a_i,b_i) ≠ (0,0) is required (Theorem 2.1); mode {i} violates it"
                )
        _check_profile(self.theta, {"t"}, "theta")


def build_geo_A(spec: GeoFamilyA) -> ScalarField:
    """Assemble the traveling-mode solution as one shared expression tree."""
    t, x, y = Var("t"), Var("x"), Var("y")
    k, c, c0, d = spec.k, spec.c, spec.c0, spec.d
    theta = spec.theta
    theta1 = diff_expr(theta, "t")
    theta2 = diff_expr(theta1, "t")

    beta = c * (k * c * theta + c0 * t) + d
    w = c * x + beta * y
    denom = c * c + beta * beta
    mu = (k * c * theta1 + c0) / 2

    H: Expr = mu * (y * y) + theta2 * w
    if spec.modes:
        kc = k * c
        if kc != 0.0:
            integral = Integral(
                Const(1.0) / denom, "t", spec.base_point, spec.quad_tol
            )
        else:
            integral = Const(0.0)
        total: Expr = Const(0.0)
        for a, b, phase, amp in spec.modes:
            r2 = a * a + b * b
            amp_exp = (kc * a / r2) * integral + a * w
            phase_arg = b * w + phase + (-kc * b / r2) * integral
            total = total + amp * Call("exp", amp_exp) * Call("sin", phase_arg)
        H = H + total / denom
    return field_from_expr(H, GEO_VARS, _label_geo_a(spec))


def _label_geo_a(spec: GeoFamilyA) -> str:
    return (
        f"geo_A(k={spec.k:g}, c={spec.c:g}, d={spec.d:g}, c0={spec.c0:g}, "
        f"{len(spec.modes)} mode(s))"
    )


@dataclass(frozen=True)
class GeoFamilyB:
    k: float
    b: float
    c: float
    alpha: Expr = dc_field(default_factory=lambda: Const(0.0))
    beta: Expr = dc_field(default_factory=lambda: Const(0.0))
    max_terms: int = 40
    tail_tol: float = 1e-16

    def __post_init__(self):
        _check_profile(self.alpha, {"t"}, "alpha")
        _check_profile(self.beta, {"t"}, "beta")

    @property
    def series(self) -> FrobeniusSeries:
        return FrobeniusSeries(self.k, self.b, self.c, self.max_terms, self.tail_tol)

    def exclusion(self):
        """Grid predicate excluding the log singularity (no-op when c == 0)."""
        if self.c == 0.0:
            return None
        alpha = self.alpha

        def excluded(point):
            a = eval_value(alpha, {"t": point.get("t", 0.0)})
            r2 = (point["x"] + a) ** 2 + point["y"] ** 2
            return r2 <= ORIGIN_MARGIN

        return excluded


def build_geo_B(spec: GeoFamilyB) -> ScalarField:
    series = spec.series
    alpha, beta = spec.alpha, spec.beta
    alpha1 = diff_expr(alpha, "t")

    def jet_env(env):
        tj = env["t"]
        vars, order = tj.vars, tj.order
        aj = eval_jet(alpha, env, vars, order)
        a1j = eval_jet(alpha1, env, vars, order)
        bj = eval_jet(beta, env, vars, order)
        shifted = env["x"] + aj
        u = shifted * shifted + env["y"] * env["y"]
        if series.has_log and u.value <= ORIGIN_MARGIN:
            raise DomainError(
                f"radial coordinate {u.value!r} too close to the origin for the log branch"
            )
        return (a1j - 1.0) * env["y"] + bj + series.jet(u)

    def value(point):
        a = eval_value(alpha, point)
        a1 = eval_value(alpha1, point)
        b = eval_value(beta, point)
        u = (point["x"] + a) ** 2 + point["y"] ** 2
        if series.has_log and u <= ORIGIN_MARGIN:
            raise DomainError(
                f"radial coordinate {u!r} too close to the origin for the log branch"
            )
        return (a1 - 1.0) * point["y"] + b + series.value(u)

    label = f"geo_B(k={spec.k:g}, b={spec.b:g}, c={spec.c:g})"
    return ScalarField(GEO_VARS, label, jet_env, value)
