"""Series and chain-function building blocks for the solution families.

Two kinds of objects live here:

* ``FrobeniusSeries`` — the logarithmic power series
  ``xi(u) = sum_i u^i (a_i + b_i ln u)`` whose coefficients obey the coupled
  recurrence ``(i+1)^2 a_{i+1} + 2 (i+1) b_{i+1} = (k/4) a_i`` and
  ``(i+1)^2 b_{i+1} = (k/4) b_i``.  Every such series satisfies the radial
  reduction ``xi' + u xi'' = (k/4) xi`` of the geopotential equation; for
  ``b_0 = 0`` it collapses to the modified-Bessel profile ``a_0 I_0(sqrt(k u))``.

* ``ChainFunction`` — closed-form families lowered step by step by one of two
  second-order operators: the drift Laplacian ``a d/ds + d^2/ds^2`` or the
  radial Laplacian ``d^2/ds^2 + (a/s) d/ds``.  Index 0 is annihilated and
  index i maps to index i-1, which is what makes separated products of chains
  telescope into exact solutions of the reduced MHD wave equations.

The recurrence is ground truth for the series coefficients; the closed form
``a_i = (k/4)^i / (i!)^2 * (a_0 - 2 b_0 H_i)`` (``H_i`` the harmonic numbers)
is kept in the test suite as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

from .errors import DomainError, ParameterError, UsageError
from .expr import (
    Call,
    Const,
    Expr,
    Var,
    eval_expr_jet,
    eval_value,
    mul,
    neg,
    pow_,
)
from .jets import Jet, compose_univariate

_DENOMINATOR_FLOOR = 1e-9


def frobenius_coefficients(k: float, a0: float, b0: float, n: int) -> list[tuple[float, float]]:
    """First ``n+1`` coefficient pairs ``(a_i, b_i)`` by forward recurrence."""
    if n < 0:
        raise UsageError("coefficient count must be non-negative")
    q = k / 4.0
    out = [(float(a0), float(b0))]
    a, b = float(a0), float(b0)
    for i in range(n):
        j = i + 1
        b_next = q * b / (j * j)
        a_next = (q * a - 2.0 * j * b_next) / (j * j)
        out.append((a_next, b_next))
        a, b = a_next, b_next
    return out


@dataclass(frozen=True)
class FrobeniusSeries:
    """Truncated evaluation of the logarithmic series, value and jet variants."""

    k: float
    a0: float
    b0: float
    max_terms: int = 40
    tail_tol: float = 1e-16

    @cached_property
    def coefficients(self) -> list[tuple[float, float]]:
        return frobenius_coefficients(self.k, self.a0, self.b0, self.max_terms)

    @property
    def has_log(self) -> bool:
        return self.b0 != 0.0

    def _check_domain(self, u: float):
        if self.has_log and u <= 0.0:
            raise DomainError(
                f"logarithmic series needs a positive argument, got {u!r}"
            )

    def value(self, u: float) -> float:
        self._check_domain(u)
        log_u = math.log(u) if self.has_log else 0.0
        acc = 0.0
        power = 1.0
        for a, b in self.coefficients:
            term = power * (a + b * log_u)
            acc += term
            if abs(term) <= self.tail_tol * max(abs(acc), 1.0):
                break
            power *= u
        return acc

    def taylor(self, u: float, order: int) -> list[float]:
        """Taylor coefficients of the series about `u`, from univariate jets."""
        self._check_domain(u)
        base = Jet.variable("_u", u, ("_u",), order)
        log_jet = base.log() if self.has_log else None
        acc = Jet.constant(0.0, ("_u",), order)
        power = Jet.constant(1.0, ("_u",), order)
        for a, b in self.coefficients:
            term = power * a if log_jet is None else power * (a + b * log_jet)
            acc = acc + term
            if abs(term.value) <= self.tail_tol * max(abs(acc.value), 1.0):
                break
            power = power * base
        return [float(c) for c in acc.coeffs]

    def jet(self, u: Jet) -> Jet:
        return compose_univariate(self.taylor(u.value, u.order), u)


def frobenius_eval(series: FrobeniusSeries, u: float) -> float:
    return series.value(u)


# -- chain functions -------------------------------------------------------------


def _drift_poly(a: float, branch: int, index: int) -> list[float]:
    """Polynomial coefficients (in s^m) of the drift chain at `index`.

    Generated by enforcing the lowering identity step by step: with sign +a
    (branch 1) the polynomial p_i solves ``a p' + p'' = p_{i-1}``; branch 2
    carries the factor e^{-as} and its polynomial solves ``q'' - a q' = q_{i-1}``.
    Both solves are triangular in the coefficients and fix the free constant to
    zero, which reproduces the usual closed sums at low index.
    """
    sign = 1.0 if branch == 1 else -1.0
    coeffs = [1.0]
    for i in range(1, index + 1):
        prev = coeffs
        cur = [0.0] * (i + 1)
        for m in range(i, 0, -1):
            upper = (m + 1) * m * cur[m + 1] if m + 1 <= i else 0.0
            d = prev[m - 1] if m - 1 < len(prev) else 0.0
            cur[m] = (d - upper) / (sign * a * m)
        coeffs = cur
    return coeffs


@dataclass(frozen=True)
class ChainFunction:
    """One member of a lowering chain.

    ``family`` selects the operator the chain belongs to (``'drift'`` for
    ``a d_s + d_s^2``, ``'radial'`` for ``d_s^2 + (a/s) d_s``), ``branch`` the
    starting element (1: starts from the constant 1; 2: starts from the decaying
    exponential resp. the power ``s^(1-a)``), ``index`` the position in the chain.
    """

    family: str
    branch: int
    a: float
    index: int

    def __post_init__(self):
        if self.family not in ("drift", "radial"):
            raise UsageError(f"unknown chain family {self.family!r}")
        if self.branch not in (1, 2):
            raise UsageError(f"chain branch must be 1 or 2, got {self.branch!r}")
        if self.index < 0:
            raise UsageError("chain index must be non-negative")
        if self.index > 12:
            raise UsageError("chain index capped at 12 to bound rounding growth")
        if self.family == "radial":
            for r in range(1, self.index + 1):
                factor = (
                    self.a + 2 * r - 1 if self.branch == 1 else 2 * r + 1 - self.a
                )
                if abs(factor) <= _DENOMINATOR_FLOOR:
                    raise ParameterError(
                        f"radial chain denominator factor vanishes at r={r} "
                        f"for a={self.a!r}"
                    )

    def expr(self, var: str = "s") -> Expr:
        """Closed form as an expression in `var`."""
        s = Var(var)
        i, a = self.index, self.a
        if self.family == "drift":
            if a == 0.0:
                if self.branch == 1:
                    return pow_(s, Const(float(2 * i))) / math.factorial(2 * i)
                return pow_(s, Const(float(2 * i + 1))) / math.factorial(2 * i + 1)
            poly: Expr = Const(0.0)
            for m, coef in enumerate(_drift_poly(a, self.branch, i)):
                if coef != 0.0:
                    poly = poly + coef * pow_(s, Const(float(m)))
            if self.branch == 1:
                return poly
            return Call("exp", neg(mul(Const(a), s))) * poly
        # radial family
        if self.branch == 1:
            if i == 0:
                return Const(1.0)
            denom = 2.0**i * math.factorial(i)
            for r in range(1, i + 1):
                denom *= a + 2 * r - 1
            return pow_(s, Const(float(2 * i))) / denom
        denom = 2.0**i * math.factorial(i)
        for r in range(1, i + 1):
            denom *= 2 * r + 1 - a
        return pow_(s, Const(2 * i + 1 - a)) / denom

    def __call__(self, s: float) -> float:
        return eval_value(self.expr(), {"s": s})

    def jet(self, s: float, order: int = 2) -> Jet:
        return eval_expr_jet(self.expr(), {"s": s}, ("s",), order)


def chain_eval(c: ChainFunction, s: float) -> float:
    return c(s)


def drift_laplacian(a: float, f: Callable[[float], Jet], s: float) -> float:
    """Apply ``a f' + f''`` at `s`; `f` must return a jet of order >= 2."""
    j = f(s)
    if j.order < 2:
        raise UsageError("drift_laplacian needs an order-2 jet")
    fp = j.partial((1,))
    fpp = j.partial((2,))
    return a * fp + fpp


def radial_laplacian(a: float, f: Callable[[float], Jet], s: float) -> float:
    """Apply ``f'' + (a/s) f'`` at `s != 0`."""
    if s == 0.0:
        raise DomainError("radial operator is singular at s = 0")
    j = f(s)
    if j.order < 2:
        raise UsageError("radial_laplacian needs an order-2 jet")
    fp = j.partial((1,))
    fpp = j.partial((2,))
    return fpp + (a / s) * fp
