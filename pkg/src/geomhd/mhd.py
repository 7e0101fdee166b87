"""MHD stream/flux potential solution families.

Family A (shear modes): for free profiles sigma, theta, tau of (t, z),

    phi = sigma_t x y + theta_t e^sigma x + tau_t e^-sigma y + theta_t tau
    psi = sigma_z x y + theta_z e^sigma x + tau_z e^-sigma y + theta_z tau.

Family B (separated ladders): pick a scale profile ``E(t, z)`` from one of
three cases (pure exponential, exponential times power of z, power of t times
power of z); ``sigma`` solves ``e^{2 sigma} + c^2 e^{-2 sigma} = E`` with a
plus/minus square-root branch, and the moving coordinate is
``w = e^sigma x + c e^-sigma y``.  A two-slot potential ``F(t, z, w)`` is built
from products of chain functions: each mode supplies an envelope ``f(w)`` and a
ladder length ``L``, contributing ``f(w) * sum_r T_r(t) Z_{L-r}(z)``.  The
chain lowering identities make every such ladder sum an exact solution of the
per-case reduced wave equation, and

    phi = sigma_t x y + lambda_t w + F_t(t, z, w)
    psi = sigma_z x y + lambda_z w + F_z(t, z, w)

with slot partials F_t, F_z taken before substituting w.

Family C (d'Alembert pairs): for any envelopes F, G of (w, varpi),

    phi = F_w(t+z, v) + G_w(t-z, v),   psi = F_w(t+z, v) - G_w(t-z, v)

with ``v = x`` (planar) or ``v = x^2 + y^2`` (radial).

Family D ships the printed rotated/sheared variant of the planar pair as-is;
whether it verifies is a documented harness finding, not an assumption (the
verified route to such solutions is composing symmetry transforms onto
family C).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .chains import ChainFunction
from .errors import ConstraintError, UsageError
from .expr import (
    Call,
    Const,
    Expr,
    Var,
    diff_expr,
    eval_expr_jet,
    eval_value,
    free_vars,
    neg,
    substitute,
)
from .fields import MHD_VARS, ScalarField, field_from_expr

SQRT_MARGIN = 1e-6  # keep the branch radicand strictly positive on grids


def _check_profile(e: Expr, allowed: set[str], what: str):
    extra = free_vars(e) - allowed
    if extra:
        raise ConstraintError(
            f"{what} may only depend on {sorted(allowed)}, found {sorted(extra)}"
        )


# -- family A --------------------------------------------------------------------


@dataclass(frozen=True)
class MhdFamilyA:
    sigma: Expr
    theta: Expr
    tau: Expr

    def __post_init__(self):
        for e, name in ((self.sigma, "sigma"), (self.theta, "theta"), (self.tau, "tau")):
            _check_profile(e, {"t", "z"}, name)


def build_mhd_A(spec: MhdFamilyA) -> tuple[ScalarField, ScalarField]:
    x, y = Var("x"), Var("y")
    sigma, theta, tau = spec.sigma, spec.theta, spec.tau
    grow = Call("exp", sigma)
    decay = Call("exp", neg(sigma))

    def potential(s: str) -> Expr:
        ds = lambda e: diff_expr(e, s)
        return (
            ds(sigma) * (x * y)
            + ds(theta) * grow * x
            + ds(tau) * decay * y
            + ds(theta) * tau
        )

    phi = field_from_expr(potential("t"), MHD_VARS, "mhd_A phi")
    psi = field_from_expr(potential("z"), MHD_VARS, "mhd_A psi")
    return phi, psi


# -- family B: scale profiles and sigma branches -----------------------------------

CASES = (1, 2, 3)
BRANCHES = ("plus", "minus")


def scale_expr(case: int, a1: float, a2: float) -> Expr:
    """The separated scale profile E(t, z) for each case."""
    t, z = Var("t"), Var("z")
    if case == 1:
        return Call("exp", a1 * t + a2 * z)
    if case == 2:
        return Call("exp", a1 * t) * _pow(z, a2)
    if case == 3:
        return _pow(t, a1) * _pow(z, a2)
    raise UsageError(f"case must be one of {CASES}, got {case!r}")


def _pow(base: Expr, exponent: float) -> Expr:
    from .expr import pow_

    return pow_(base, Const(float(exponent)))


def sigma_expr(case: int, a1: float, a2: float, c: float, branch: str) -> Expr:
    """sigma(t, z) solving  e^{2 sigma} + c^2 e^{-2 sigma} = E  on the given branch.

    The minus branch is evaluated as ``2 c^2 / (E + sqrt(E^2 - 4 c^2))``, which
    is the same quantity as ``E - sqrt(E^2 - 4 c^2)`` without the cancellation
    that would otherwise dominate for small ``|c|``.
    """
    if branch not in BRANCHES:
        raise UsageError(f"branch must be one of {BRANCHES}, got {branch!r}")
    E = scale_expr(case, a1, a2)
    root = Call("sqrt", E * E - 4.0 * c * c)
    outer = E + root
    if branch == "plus":
        return 0.5 * (Call("ln", outer) - math.log(2.0))
    return 0.5 * Call("ln", (2.0 * c * c) / outer)


def sigma_for_case(
    case: int, a1: float, a2: float, c: float, branch: str, t: float, z: float
) -> float:
    return eval_value(sigma_expr(case, a1, a2, c, branch), {"t": t, "z": z})


def scale_value(case: int, a1: float, a2: float, t: float, z: float) -> float:
    if case == 1:
        return math.exp(a1 * t + a2 * z)
    if case == 2:
        return math.exp(a1 * t) * z**a2
    return t**a1 * z**a2


# -- family B: ladder potentials ----------------------------------------------------


@dataclass(frozen=True)
class MhdFamilyB:
    """Mode lists are tuples of envelope expressions in ``varpi``; the list
    position is the ladder length, so ``alpha1[i]`` multiplies the complete
    ladder sum of length i built from branch-1 time chains and branch-1
    z-chains (betas use branch-2 z-chains)."""

    case: int
    a1: float
    a2: float
    c: float
    branch: str
    lam: Expr = dc_field(default_factory=lambda: Const(0.0))
    alpha1: tuple[Expr, ...] = ()
    alpha2: tuple[Expr, ...] = ()
    beta1: tuple[Expr, ...] = ()
    beta2: tuple[Expr, ...] = ()

    def __post_init__(self):
        if self.case not in CASES:
            raise ConstraintError(f"case must be one of {CASES} (Theorem 3.2)")
        if self.branch not in BRANCHES:
            raise ConstraintError(f"branch must be one of {BRANCHES}")
        _check_profile(self.lam, {"t", "z"}, "lambda")
        for name, modes in self.mode_lists():
            for e in modes:
                _check_profile(e, {"varpi"}, f"{name} envelope")
        # Realize every chain element now so vanishing denominators surface
        # as construction errors, not evaluation surprises.
        for eps, zbranch, length, _ in self._ladders():
            for r in range(length + 1):
                self._t_chain(eps, r)
                self._z_chain(zbranch, length - r)

    def mode_lists(self):
        return (
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
        )

    def _ladders(self):
        for eps, zbranch, modes in (
            (1, 1, self.alpha1),
            (2, 1, self.alpha2),
            (1, 2, self.beta1),
            (2, 2, self.beta2),
        ):
            for length, envelope in enumerate(modes):
                yield eps, zbranch, length, envelope

    def _t_chain(self, branch: int, index: int) -> ChainFunction:
        family = "radial" if self.case == 3 else "drift"
        return ChainFunction(family, branch, self.a1, index)

    def _z_chain(self, branch: int, index: int) -> ChainFunction:
        family = "drift" if self.case == 1 else "radial"
        return ChainFunction(family, branch, self.a2, index)

    def ladder_potential(self) -> Expr:
        """The two-slot potential F(t, z, varpi) as a sum of ladder products."""
        total: Expr = Const(0.0)
        for eps, zbranch, length, envelope in self._ladders():
            ladder: Expr = Const(0.0)
            for r in range(length + 1):
                tpart = self._t_chain(eps, r).expr("t")
                zpart = self._z_chain(zbranch, length - r).expr("z")
                ladder = ladder + tpart * zpart
            total = total + envelope * ladder
        return total

    def sigma(self) -> Expr:
        return sigma_expr(self.case, self.a1, self.a2, self.c, self.branch)

    def exclusion(self):
        """Grid predicate for the branch radicand and fractional-power domains."""
        case, a1, a2, c = self.case, self.a1, self.a2, self.c

        def excluded(point):
            t, z = point["t"], point["z"]
            if case >= 2 and z <= SQRT_MARGIN:
                return True
            if case == 3 and t <= SQRT_MARGIN:
                return True
            return scale_value(case, a1, a2, t, z) < 2.0 * abs(c) + SQRT_MARGIN

        return excluded


def build_mhd_B(spec: MhdFamilyB) -> tuple[ScalarField, ScalarField]:
    x, y = Var("x"), Var("y")
    sigma = spec.sigma()
    moving = Call("exp", sigma) * x + spec.c * Call("exp", neg(sigma)) * y
    potential = spec.ladder_potential()

    def one(s: str) -> Expr:
        slot = substitute(diff_expr(potential, s), {"varpi": moving})
        return diff_expr(sigma, s) * (x * y) + diff_expr(spec.lam, s) * moving + slot

    label = (
        f"mhd_B(case {spec.case}, a1={spec.a1:g}, a2={spec.a2:g}, "
        f"c={spec.c:g}, {spec.branch})"
    )
    phi = field_from_expr(one("t"), MHD_VARS, label + " phi")
    psi = field_from_expr(one("z"), MHD_VARS, label + " psi")
    return phi, psi


def reduced_residual(spec: MhdFamilyB, t: float, z: float, w: float) -> tuple[float, float]:
    """Residual of the per-case reduced wave equation for the assembled ladder
    potential, checked in slot space (varpi held fixed).  Returns (residual,
    largest term magnitude)."""
    potential = spec.ladder_potential()
    j = eval_expr_jet(potential, {"t": t, "z": z, "varpi": w}, ("t", "z"), 2)
    f_t = j.partial({"t": 1})
    f_z = j.partial({"z": 1})
    f_tt = j.partial({"t": 2})
    f_zz = j.partial({"z": 2})
    t_coef = spec.a1 / t if spec.case == 3 else spec.a1
    z_coef = spec.a2 if spec.case == 1 else spec.a2 / z
    terms = (f_tt, t_coef * f_t, -f_zz, -z_coef * f_z)
    return math.fsum(terms), max(abs(v) for v in terms)


# -- family C ---------------------------------------------------------------------


@dataclass(frozen=True)
class MhdFamilyC:
    F: Expr
    G: Expr
    variant: str = "planar"  # or "radial"

    def __post_init__(self):
        if self.variant not in ("planar", "radial"):
            raise ConstraintError(f"variant must be planar or radial, got {self.variant!r}")
        _check_profile(self.F, {"w", "varpi"}, "F")
        _check_profile(self.G, {"w", "varpi"}, "G")


def build_mhd_C(spec: MhdFamilyC) -> tuple[ScalarField, ScalarField]:
    t, x, y, z = Var("t"), Var("x"), Var("y"), Var("z")
    v = x if spec.variant == "planar" else x * x + y * y
    forward = substitute(diff_expr(spec.F, "w"), {"w": t + z, "varpi": v})
    backward = substitute(diff_expr(spec.G, "w"), {"w": t - z, "varpi": v})
    label = f"mhd_C({spec.variant})"
    phi = field_from_expr(forward + backward, MHD_VARS, label + " phi")
    psi = field_from_expr(forward - backward, MHD_VARS, label + " psi")
    return phi, psi


# -- family D (printed transformed form, verdict left to the harness) ---------------


@dataclass(frozen=True)
class MhdFamilyD:
    F: Expr
    G: Expr
    alpha: Expr = dc_field(default_factory=lambda: Const(0.0))
    sigma: Expr = dc_field(default_factory=lambda: Const(0.0))
    tau: Expr = dc_field(default_factory=lambda: Const(0.0))
    lam: Expr = dc_field(default_factory=lambda: Const(0.0))
    epsilon: int = 1

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ConstraintError("epsilon must be +1 or -1")
        _check_profile(self.F, {"w", "varpi"}, "F")
        _check_profile(self.G, {"w", "varpi"}, "G")
        _check_profile(self.alpha, {"w"}, "alpha")
        for e, name in ((self.sigma, "sigma"), (self.tau, "tau"), (self.lam, "lambda")):
            _check_profile(e, {"t", "z"}, name)


def build_mhd_D(spec: MhdFamilyD) -> tuple[ScalarField, ScalarField]:
    t, x, y, z = Var("t"), Var("x"), Var("y"), Var("z")
    eps = float(spec.epsilon)
    angle_arg = t + eps * z
    alpha_at = substitute(spec.alpha, {"w": angle_arg})
    alpha_rate = substitute(diff_expr(spec.alpha, "w"), {"w": angle_arg})
    xs = x + spec.sigma
    yt = y + spec.tau
    rotated = xs * Call("cos", 2.0 * alpha_at) + yt * Call("sin", 2.0 * alpha_at)
    quad = xs * xs + yt * yt
    forward = substitute(diff_expr(spec.F, "w"), {"w": t + z, "varpi": rotated})
    backward = substitute(diff_expr(spec.G, "w"), {"w": t - z, "varpi": rotated})
    linear = (
        diff_expr(spec.sigma, "t") * yt
        - diff_expr(spec.tau, "t") * x
        + diff_expr(spec.lam, "t")
    )
    phi = forward + alpha_rate * quad + linear + backward
    psi = forward + eps * alpha_rate * quad + linear - backward
    return (
        field_from_expr(phi, MHD_VARS, "mhd_D phi"),
        field_from_expr(psi, MHD_VARS, "mhd_D psi"),
    )
