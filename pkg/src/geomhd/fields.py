"""Scalar fields, PDE residual operators, grids, and verification reports.

A :class:`ScalarField` wraps two evaluation paths over the same closed form:
an order-3 jet path (exact derivatives, used by the residual operators) and a
plain value path (used by the finite-difference cross-check).  The geopotential
residual is

    (H_xx + H_yy)_t + H_x (H_xx + H_yy)_y - H_y (H_xx + H_yy)_x - k H_x

and the MHD pair residuals are

    psi_t + phi_x psi_y - phi_y psi_x - phi_z
    (L phi)_t + phi_x (L phi)_y - phi_y (L phi)_x
        - (L psi)_z - psi_x (L psi)_y + psi_y (L psi)_x,   L = d_xx + d_yy.

Relative residuals are normalized per point by the largest additive term
magnitude (floored at 1), so exponentially growing exact solutions still
verify cleanly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping, Sequence

from .errors import DomainError, UsageError
from .expr import Expr, eval_jet, eval_value, free_vars
from .jets import Jet

ORDER = 3  # residuals read third mixed partials
GEO_VARS = ("t", "x", "y")
MHD_VARS = ("t", "x", "y", "z")


@dataclass(frozen=True)
class ScalarField:
    """Deterministic map from a space-time point to a value or an order-3 jet."""

    vars: tuple[str, ...]
    label: str
    jet_env: Callable[[Mapping[str, Jet]], Jet]
    value: Callable[[Mapping[str, float]], float]

    def jet(self, point: Mapping[str, float], order: int = ORDER) -> Jet:
        env = {
            v: Jet.variable(v, float(point[v]), self.vars, order) for v in self.vars
        }
        return self.jet_env(env)


def field_from_expr(e: Expr, vars: Sequence[str], label: str) -> ScalarField:
    vars = tuple(vars)
    extra = free_vars(e) - set(vars)
    if extra:
        raise UsageError(f"field expression references {sorted(extra)} outside {vars}")

    def jet_env(env):
        any_jet = next(iter(env.values()))
        return eval_jet(e, env, any_jet.vars, any_jet.order)

    def value(point):
        return eval_value(e, point)

    return ScalarField(vars, label, jet_env, value)


# -- residual operators -----------------------------------------------------------

Partials = Callable[[Mapping[str, int]], float]


def _geo_terms(p: Partials, k: float) -> tuple[float, ...]:
    lap_t = p({"t": 1, "x": 2}) + p({"t": 1, "y": 2})
    lap_x = p({"x": 3}) + p({"x": 1, "y": 2})
    lap_y = p({"x": 2, "y": 1}) + p({"y": 3})
    h_x = p({"x": 1})
    h_y = p({"y": 1})
    return (lap_t, h_x * lap_y, -h_y * lap_x, -k * h_x)


def _mhd1_terms(pphi: Partials, ppsi: Partials) -> tuple[float, ...]:
    return (
        ppsi({"t": 1}),
        pphi({"x": 1}) * ppsi({"y": 1}),
        -pphi({"y": 1}) * ppsi({"x": 1}),
        -pphi({"z": 1}),
    )


def _mhd2_terms(pphi: Partials, ppsi: Partials) -> tuple[float, ...]:
    def lap_d(p: Partials, v: str) -> float:
        return p({v: 1, "x": 2}) + p({v: 1, "y": 2})

    def lap_mixed(p: Partials, v: str) -> float:
        if v == "x":
            return p({"x": 3}) + p({"x": 1, "y": 2})
        return p({"x": 2, "y": 1}) + p({"y": 3})

    return (
        lap_d(pphi, "t"),
        pphi({"x": 1}) * lap_mixed(pphi, "y"),
        -pphi({"y": 1}) * lap_mixed(pphi, "x"),
        -lap_d(ppsi, "z"),
        -ppsi({"x": 1}) * lap_mixed(ppsi, "y"),
        ppsi({"y": 1}) * lap_mixed(ppsi, "x"),
    )


def _jet_partials(field: ScalarField, point) -> Partials:
    j = field.jet(point)
    return j.partial


def residual_geo(H: ScalarField, k: float, point) -> float:
    """Geopotential residual at one point, all partials from a single jet."""
    return math.fsum(_geo_terms(_jet_partials(H, point), k))


def residual_mhd1(phi: ScalarField, psi: ScalarField, point) -> float:
    return math.fsum(_mhd1_terms(_jet_partials(phi, point), _jet_partials(psi, point)))


def residual_mhd2(phi: ScalarField, psi: ScalarField, point) -> float:
    return math.fsum(_mhd2_terms(_jet_partials(phi, point), _jet_partials(psi, point)))


# -- finite-difference oracle -------------------------------------------------------

# 4th-order central stencils: offset -> weight (divide by step**order).
_STENCILS = {
    0: ((0, 1.0),),
    1: ((-2, 1 / 12), (-1, -2 / 3), (1, 2 / 3), (2, -1 / 12)),
    2: ((-2, -1 / 12), (-1, 4 / 3), (0, -5 / 2), (1, 4 / 3), (2, -1 / 12)),
    3: (
        (-3, 1 / 8),
        (-2, -1.0),
        (-1, 13 / 8),
        (1, -13 / 8),
        (2, 1.0),
        (3, -1 / 8),
    ),
}


def fd_partial(
    value: Callable[[Mapping[str, float]], float],
    point: Mapping[str, float],
    multi_index: Mapping[str, int],
    step: float = 1e-2,
) -> float:
    """Mixed partial by tensor products of 4th-order central differences."""
    active = [(v, o) for v, o in multi_index.items() if o > 0]
    for _, o in active:
        if o not in _STENCILS:
            raise UsageError(f"finite differences support orders 0..3, got {o}")
    total = 0.0
    scale = step ** sum(o for _, o in active)
    for combo in product(*(_STENCILS[o] for _, o in active)):
        shifted = dict(point)
        weight = 1.0
        for (var, _), (offset, w) in zip(active, combo):
            shifted[var] = shifted[var] + offset * step
            weight *= w
        total += weight * value(shifted)
    return total / scale


def _fd_partials(field: ScalarField, point, step: float) -> Partials:
    return lambda mi: fd_partial(field.value, point, mi, step)


def fd_residual(fields, equation: str, point, step: float = 1e-2, k: float | None = None) -> float:
    """Recompute a residual from plain field values only (no jets).

    `equation` is one of ``'geo'``, ``'mhd1'``, ``'mhd2'``.  Domain errors from
    stencil points propagate so callers can skip the point.
    """
    if equation == "geo":
        if k is None:
            raise UsageError("geo residual needs k")
        return math.fsum(_geo_terms(_fd_partials(fields, point, step), k))
    phi, psi = fields
    if equation == "mhd1":
        return math.fsum(
            _mhd1_terms(_fd_partials(phi, point, step), _fd_partials(psi, point, step))
        )
    if equation == "mhd2":
        return math.fsum(
            _mhd2_terms(_fd_partials(phi, point, step), _fd_partials(psi, point, step))
        )
    raise UsageError(f"unknown equation tag {equation!r}")


# -- grids and reports ----------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Cartesian product grid with an optional exclusion predicate.

    `axes` maps variables (in evaluation order) to ``(lo, hi, count)``; the
    predicate returns True for points to skip (domain holes).
    """

    axes: tuple[tuple[str, float, float, int], ...]
    exclude: Callable[[Mapping[str, float]], bool] | None = None

    def __post_init__(self):
        for var, lo, hi, count in self.axes:
            if count < 1:
                raise UsageError(f"axis {var!r} needs at least one point")
            if lo > hi:
                raise UsageError(f"axis {var!r} has lo > hi")

    @staticmethod
    def from_ranges(ranges: Mapping[str, tuple[float, float, int]], exclude=None) -> "Grid":
        return Grid(tuple((v, *r) for v, r in ranges.items()), exclude)

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(v for v, *_ in self.axes)

    @property
    def size(self) -> int:
        n = 1
        for *_, count in self.axes:
            n *= count
        return n

    def _ticks(self, lo: float, hi: float, count: int) -> list[float]:
        if count == 1:
            return [lo]
        h = (hi - lo) / (count - 1)
        return [lo + i * h for i in range(count)]

    def points(self):
        """Row-major sweep in axis order (last axis fastest)."""
        axes = [(v, self._ticks(lo, hi, n)) for v, lo, hi, n in self.axes]
        names = [v for v, _ in axes]
        for combo in product(*(ticks for _, ticks in axes)):
            yield dict(zip(names, combo))

    def with_exclusion(self, predicate) -> "Grid":
        if self.exclude is None:
            return Grid(self.axes, predicate)
        old = self.exclude
        return Grid(self.axes, lambda p: old(p) or predicate(p))


@dataclass(frozen=True)
class EquationStats:
    equation: str
    max_abs: float
    rms: float
    rel_max: float
    passed: bool


@dataclass(frozen=True)
class ResidualReport:
    stats: tuple[EquationStats, ...]
    evaluated: int
    skipped: int
    excluded: int
    skipped_examples: tuple[str, ...]
    tolerance: float
    passed: bool
    vacuous: bool


class ResidualAccumulator:
    """Order-independent aggregation; merging chunks equals a single pass."""

    _MAX_EXAMPLES = 10

    def __init__(self, equations: Sequence[str]):
        self.equations = tuple(equations)
        self.samples: dict[str, list[tuple[float, float]]] = {
            eq: [] for eq in self.equations
        }
        self.skipped: list[str] = []
        self.n_skipped = 0
        self.n_excluded = 0

    def add_point(self, values: Mapping[str, tuple[float, float]]):
        for eq in self.equations:
            self.samples[eq].append(values[eq])

    def add_skip(self, reason: str):
        self.n_skipped += 1
        if len(self.skipped) < self._MAX_EXAMPLES:
            self.skipped.append(reason)

    def add_excluded(self):
        self.n_excluded += 1

    def merge(self, other: "ResidualAccumulator") -> "ResidualAccumulator":
        if other.equations != self.equations:
            raise UsageError("cannot merge accumulators for different equations")
        out = ResidualAccumulator(self.equations)
        for eq in self.equations:
            out.samples[eq] = self.samples[eq] + other.samples[eq]
        out.skipped = (self.skipped + other.skipped)[: self._MAX_EXAMPLES]
        out.n_skipped = self.n_skipped + other.n_skipped
        out.n_excluded = self.n_excluded + other.n_excluded
        return out

    def report(self, tol: float) -> ResidualReport:
        stats = []
        evaluated = 0
        for eq in self.equations:
            rows = self.samples[eq]
            evaluated = len(rows)
            if rows:
                max_abs = max(abs(r) for r, _ in rows)
                rms = math.sqrt(math.fsum(r * r for r, _ in rows) / len(rows))
                rel_max = max(abs(r) / max(scale, 1.0) for r, scale in rows)
            else:
                max_abs = rms = rel_max = 0.0
            stats.append(
                EquationStats(eq, max_abs, rms, rel_max, bool(rows) and rel_max <= tol)
            )
        vacuous = evaluated == 0
        passed = (not vacuous) and all(s.passed for s in stats)
        return ResidualReport(
            stats=tuple(stats),
            evaluated=evaluated,
            skipped=self.n_skipped,
            excluded=self.n_excluded,
            skipped_examples=tuple(self.skipped),
            tolerance=tol,
            passed=passed,
            vacuous=vacuous,
        )


def _point_samples(fields, k, point) -> dict[str, tuple[float, float]]:
    if isinstance(fields, ScalarField):
        terms = _geo_terms(_jet_partials(fields, point), k)
        return {"geo": (math.fsum(terms), max(abs(t) for t in terms))}
    phi, psi = fields
    pphi = _jet_partials(phi, point)
    ppsi = _jet_partials(psi, point)
    t1 = _mhd1_terms(pphi, ppsi)
    t2 = _mhd2_terms(pphi, ppsi)
    return {
        "mhd1": (math.fsum(t1), max(abs(t) for t in t1)),
        "mhd2": (math.fsum(t2), max(abs(t) for t in t2)),
    }


def verify_on_grid(fields, grid: Grid, tol: float, k: float | None = None) -> ResidualReport:
    """Evaluate the applicable residual operator(s) at every admissible grid point.

    `fields` is a single :class:`ScalarField` (geopotential; `k` required) or a
    ``(phi, psi)`` pair (MHD).  Domain errors at individual points are counted
    as skips, excluded points separately.  The report passes iff the relative
    max residual of every equation is within `tol` on a non-empty point set.
    """
    if isinstance(fields, ScalarField):
        if k is None:
            raise UsageError("geopotential verification needs k")
        equations = ("geo",)
    else:
        phi, psi = fields
        if not isinstance(phi, ScalarField) or not isinstance(psi, ScalarField):
            raise UsageError("expected a ScalarField or a (phi, psi) pair")
        equations = ("mhd1", "mhd2")

    acc = ResidualAccumulator(equations)
    for point in grid.points():
        if grid.exclude is not None and grid.exclude(point):
            acc.add_excluded()
            continue
        try:
            acc.add_point(_point_samples(fields, k, point))
        except DomainError as err:
            acc.add_skip(f"{_fmt_point(point)}: {err}")
    return acc.report(tol)


def _fmt_point(point: Mapping[str, float]) -> str:
    return "(" + ", ".join(f"{k}={v:.6g}" for k, v in point.items()) + ")"
