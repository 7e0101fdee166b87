"""Truncated multivariate Taylor arithmetic (jets).

A ``Jet`` holds the Taylor coefficients of a smooth function about a point,
up to a fixed total degree, over a fixed ordered tuple of variables: the
coefficient of the multi-index ``m`` equals the partial derivative
``d^m f / m!`` at the expansion point.  Composing elementary operations on
jets therefore yields *exact* mixed partial derivatives (no truncation error
below the cutoff degree), which is what the residual operators rely on.

Storage is dense in graded-lexicographic order; with at most four variables
and degree three that is 35 coefficients, so dense wins over any sparse
bookkeeping.  Jets are immutable values and every operation is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, SingularityError, UsageError


def _monomials_of_degree(nvars: int, degree: int):
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for head in range(degree, -1, -1):
        for tail in _monomials_of_degree(nvars - 1, degree - head):
            yield (head,) + tail


@lru_cache(maxsize=None)
class _Table:
    """Per-(nvars, order) monomial enumeration and product index triples."""

    def __init__(self, nvars: int, order: int):
        self.nvars = nvars
        self.order = order
        self.monomials = [
            m for deg in range(order + 1) for m in _monomials_of_degree(nvars, deg)
        ]
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self.size = len(self.monomials)
        ii, jj, kk = [], [], []
        for i, a in enumerate(self.monomials):
            da = sum(a)
            for j, b in enumerate(self.monomials):
                if da + sum(b) <= order:
                    ii.append(i)
                    jj.append(j)
                    kk.append(self.index[tuple(p + q for p, q in zip(a, b))])
        self.prod_left = np.asarray(ii, dtype=np.intp)
        self.prod_right = np.asarray(jj, dtype=np.intp)
        self.prod_out = np.asarray(kk, dtype=np.intp)
        self.factorials = np.array(
            [math.prod(math.factorial(e) for e in m) for m in self.monomials],
            dtype=float,
        )


@dataclass(frozen=True, eq=False)
class Jet:
    """Dense truncated Taylor expansion; treat as an immutable value."""

    vars: tuple[str, ...]
    order: int
    coeffs: np.ndarray

    # -- construction ------------------------------------------------------

    @staticmethod
    def constant(value: float, vars: Sequence[str], order: int) -> "Jet":
        table = _Table(len(vars), order)
        coeffs = np.zeros(table.size)
        coeffs[0] = value
        return Jet(tuple(vars), order, coeffs)

    @staticmethod
    def variable(name: str, value: float, vars: Sequence[str], order: int) -> "Jet":
        """Jet of the coordinate function `name` about the point `value`."""
        vars = tuple(vars)
        if name not in vars:
            raise UsageError(f"variable {name!r} is not among jet variables {vars}")
        table = _Table(len(vars), order)
        coeffs = np.zeros(table.size)
        coeffs[0] = value
        if order >= 1:
            unit = tuple(1 if v == name else 0 for v in vars)
            coeffs[table.index[unit]] = 1.0
        return Jet(vars, order, coeffs)

    def _table(self) -> _Table:
        return _Table(len(self.vars), self.order)

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.vars != self.vars or other.order != self.order:
                raise UsageError(
                    f"jet mismatch: {other.vars}/order {other.order} vs "
                    f"{self.vars}/order {self.order}"
                )
            return other
        return Jet.constant(float(other), self.vars, self.order)

    # -- ring operations ----------------------------------------------------

    @property
    def value(self) -> float:
        """Value of the represented function at the expansion point."""
        return float(self.coeffs[0])

    def __add__(self, other):
        other = self._lift(other)
        return Jet(self.vars, self.order, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return Jet(self.vars, self.order, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Jet(self.vars, self.order, -self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.vars, self.order, self.coeffs * float(other))
        other = self._lift(other)
        t = self._table()
        out = np.bincount(
            t.prod_out,
            weights=self.coeffs[t.prod_left] * other.coeffs[t.prod_right],
            minlength=t.size,
        )
        return Jet(self.vars, self.order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.vars, self.order, self.coeffs / float(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * float(other)

    def __pow__(self, exponent: float):
        return jet_pow(self, exponent)

    def reciprocal(self) -> "Jet":
        c = self.value
        if c == 0.0:
            raise SingularityError("division by a jet with zero constant term")
        series = [(-1.0) ** k / c ** (k + 1) for k in range(self.order + 1)]
        return compose_univariate(series, self)

    # -- calculus -----------------------------------------------------------

    def partial(self, multi_index) -> float:
        """Partial derivative ``d^m f`` at the expansion point.

        `multi_index` is either an order tuple aligned with `vars` or a
        mapping ``{var: order}`` (absent variables mean order zero).
        """
        if isinstance(multi_index, Mapping):
            unknown = set(multi_index) - set(self.vars)
            if unknown:
                raise UsageError(f"unknown variables in multi-index: {sorted(unknown)}")
            multi_index = tuple(int(multi_index.get(v, 0)) for v in self.vars)
        m = tuple(int(e) for e in multi_index)
        if len(m) != len(self.vars) or any(e < 0 for e in m):
            raise UsageError(f"bad multi-index {m} for variables {self.vars}")
        if sum(m) > self.order:
            raise UsageError(f"multi-index {m} exceeds jet order {self.order}")
        t = self._table()
        i = t.index[m]
        return float(self.coeffs[i] * t.factorials[i])

    # -- elementary functions -------------------------------------------------

    def exp(self) -> "Jet":
        e = math.exp(self.value)
        series = [e / math.factorial(k) for k in range(self.order + 1)]
        return compose_univariate(series, self)

    def log(self) -> "Jet":
        c = self.value
        if c <= 0.0:
            raise DomainError(f"log of non-positive value {c!r}")
        series = [math.log(c)] + [
            (-1.0) ** (k + 1) / (k * c**k) for k in range(1, self.order + 1)
        ]
        return compose_univariate(series, self)

    def sqrt(self) -> "Jet":
        c = self.value
        if c <= 0.0:
            raise DomainError(f"sqrt of non-positive value {c!r}")
        series = [math.sqrt(c)]
        for k in range(1, self.order + 1):
            series.append(series[-1] * (0.5 - (k - 1)) / (k * c))
        return compose_univariate(series, self)

    def sin(self) -> "Jet":
        return self._circular(math.sin(self.value), math.cos(self.value))

    def cos(self) -> "Jet":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._circular(c, -s)

    def tan(self) -> "Jet":
        c = math.cos(self.value)
        if c == 0.0:
            raise DomainError("tan at an odd multiple of pi/2")
        return self.sin() / self.cos()

    def _circular(self, f0: float, f1: float) -> "Jet":
        cycle = (f0, f1, -f0, -f1)
        series = [cycle[k % 4] / math.factorial(k) for k in range(self.order + 1)]
        return compose_univariate(series, self)


def compose_univariate(series: Iterable[float], u: Jet) -> Jet:
    """Evaluate ``f(u)`` from the Taylor series of ``f`` about ``u.value``.

    `series` lists the Taylor coefficients ``f^(k)(c)/k!`` with ``c = u.value``;
    entries beyond the jet order are ignored.  Horner evaluation in ``u - c``
    keeps truncation exact.
    """
    series = list(series)[: u.order + 1]
    if not series:
        raise UsageError("empty composition series")
    du = u - u.value
    acc = Jet.constant(series[-1], u.vars, u.order)
    for c in reversed(series[:-1]):
        acc = acc * du + c
    return acc


def jet_pow(u: Jet, exponent: float) -> Jet:
    """Real power ``u**a``: repeated products for integer ``a``,
    ``exp(a*log u)`` otherwise (which requires a positive base)."""
    a = float(exponent)
    if a == int(a):
        n = int(a)
        if n == 0:
            return Jet.constant(1.0, u.vars, u.order)
        base = u if n > 0 else u.reciprocal()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out
    if u.value <= 0.0:
        raise DomainError(
            f"non-integer power {a!r} of non-positive base {u.value!r}"
        )
    return (u.log() * a).exp()


# Spec-level functional aliases (the methods above are the primary surface).

def jet_variable(name, value, vars, order):
    return Jet.variable(name, value, vars, order)


def jet_add(a: Jet, b: Jet) -> Jet:
    return a + b


def jet_sub(a: Jet, b: Jet) -> Jet:
    return a - b


def jet_mul(a: Jet, b: Jet) -> Jet:
    return a * b


def jet_div(a: Jet, b: Jet) -> Jet:
    return a / b


def extract_partial(j: Jet, multi_index) -> float:
    return j.partial(multi_index)
