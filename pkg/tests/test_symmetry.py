import math
import random

import pytest

from geomhd.errors import ConstraintError
from geomhd.expr import Const, parse_expr
from geomhd.fields import GEO_VARS, MHD_VARS, Grid, field_from_expr, verify_on_grid
from geomhd.geo import GeoFamilyA, build_geo_A
from geomhd.mhd import MhdFamilyA, build_mhd_A
from geomhd.symmetry import (
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

GEO_GRID = Grid.from_ranges({v: (-1, 1, 4) for v in GEO_VARS})
MHD_GRID = Grid.from_ranges({v: (-1, 1, 4) for v in MHD_VARS})


def geo_instance():
    return build_geo_A(
        GeoFamilyA(
            k=1.2,
            theta=parse_expr("sin(t)", {"t"}),
            c=0.8,
            d=0.5,
            c0=0.3,
            modes=((0.6, 1.1, 0.4, 1.0),),
        )
    )


def mhd_instance():
    return build_mhd_A(
        MhdFamilyA(
            parse_expr("t*z", {"t", "z"}),
            parse_expr("t+z", {"t", "z"}),
            parse_expr("z^2", {"t", "z"}),
        )
    )


def tz(src):
    return parse_expr(src, {"t", "z"})


# -- pointwise behaviour ----------------------------------------------------------------


def test_geo_translate_identity():
    H = geo_instance()
    T = apply_geo(GeoTranslate(0.0, 0.0), H)
    for p in ({"t": 0.2, "x": -0.3, "y": 0.8}, {"t": -1.0, "x": 0.0, "y": 0.0}):
        assert T.value(p) == H.value(p)
        assert T.jet(p).coeffs == pytest.approx(H.jet(p).coeffs, rel=1e-14)


def test_geo_scale_on_linear_field():
    H = field_from_expr(parse_expr("y", set(GEO_VARS)), GEO_VARS, "y")
    S = apply_geo(GeoScale(2.0), H)
    p = {"t": 0.4, "x": 0.1, "y": 0.7}
    assert S.value(p) == pytest.approx(16.0 * p["y"])  # c^3 * (c y) = 16 y
    assert verify_on_grid(S, GEO_GRID, 1e-10, k=1.0).passed


def test_geo_scale_zero_rejected():
    with pytest.raises(ConstraintError):
        GeoScale(0.0)


def test_geo_gauge_additive_terms():
    H = field_from_expr(parse_expr("0", set(GEO_VARS)), GEO_VARS, "0")
    G = apply_geo(GeoGauge(parse_expr("t^2", {"t"}), parse_expr("sin(t)", {"t"})), H)
    p = {"t": 0.5, "x": 0.0, "y": 2.0}
    assert G.value(p) == pytest.approx(2 * 0.5 * 2.0 + math.sin(0.5))


def test_mhd_translate_zero_pair():
    z = field_from_expr(parse_expr("0", set(MHD_VARS)), MHD_VARS, "0")
    pair = apply_mhd(MhdTranslate(0.7, -0.4), (z, z))
    assert pair[0].value({"t": 0, "x": 0, "y": 0, "z": 0}) == 0.0


def test_mhd_shear_x_gauge_terms():
    z = field_from_expr(parse_expr("0", set(MHD_VARS)), MHD_VARS, "0")
    phi, psi = apply_mhd(MhdShearX(tz("z^2"), Const(0.0)), (z, z))
    p = {"t": 0.1, "x": 0.2, "y": 0.5, "z": 0.8}
    assert phi.value(p) == 0.0  # sigma_t = 0
    assert psi.value(p) == pytest.approx(2 * p["z"] * p["y"])


def test_mhd_rotation_constant_angle_preserves_residuals():
    pair = mhd_instance()
    rotated = apply_mhd(MhdRotatePlus(parse_expr("0.4", {"w"})), pair)
    assert verify_on_grid(rotated, MHD_GRID, 1e-8).passed


# -- group laws -------------------------------------------------------------------------


def test_translate_composition():
    H = geo_instance()
    one = apply_geo(GeoTranslate(0.2, -0.1), apply_geo(GeoTranslate(0.3, 0.4), H))
    both = apply_geo(GeoTranslate(0.5, 0.3), H)
    for p in ({"t": 0.1, "x": 0.2, "y": 0.3}, {"t": -0.4, "x": 0.8, "y": -0.2}):
        assert one.value(p) == pytest.approx(both.value(p), abs=1e-12)


def test_scale_composition():
    H = geo_instance()
    one = apply_geo(GeoScale(2.0), apply_geo(GeoScale(-1.5), H))
    both = apply_geo(GeoScale(-3.0), H)
    for p in ({"t": 0.1, "x": 0.2, "y": 0.3}, {"t": -0.4, "x": 0.8, "y": -0.2}):
        assert one.value(p) == pytest.approx(both.value(p), abs=1e-12)


def test_identity_elements():
    H = geo_instance()
    p = {"t": 0.15, "x": -0.6, "y": 0.25}
    for tr in (GeoTranslate(0.0, 0.0), GeoScale(1.0), GeoGauge(Const(0.0), Const(0.0))):
        assert apply_geo(tr, H).value(p) == pytest.approx(H.value(p), abs=1e-13)
    pair = mhd_instance()
    q = {"t": 0.15, "x": -0.6, "y": 0.25, "z": 0.4}
    for tr in (
        MhdTranslate(0.0, 0.0),
        MhdScaleTime(1.0),
        MhdScaleSpace(1.0),
        MhdShearX(Const(0.0), Const(0.0)),
        MhdShearY(Const(0.0)),
        MhdRotatePlus(Const(0.0)),
        MhdRotateMinus(Const(0.0)),
    ):
        out = apply_mhd(tr, pair)
        assert out[0].value(q) == pytest.approx(pair[0].value(q), abs=1e-13)
        assert out[1].value(q) == pytest.approx(pair[1].value(q), abs=1e-13)


# -- closure (documented verdicts; see the acceptance suite for the findings table) ------


GEO_CLOSURE = [
    (GeoTranslate(0.4, -0.3), True),
    (GeoGauge(parse_expr("0.3*sin(t)", {"t"}), parse_expr("t^2", {"t"})), True),
    (GeoScale(-1.0), True),
    # printed amplitude c^3 does not close for generic c on solutions with
    # nonzero Jacobian cross terms (finding; c^-3 would close)
    (GeoScale(2.0), False),
]


def test_geo_closure_verdicts():
    H = geo_instance()
    for tr, want_pass in GEO_CLOSURE:
        rep = verify_on_grid(apply_geo(tr, H), GEO_GRID, 1e-7, k=1.2)
        assert rep.passed == want_pass, tr


MHD_CLOSURE = [
    (MhdTranslate(0.3, -0.2), True),
    (MhdScaleSpace(2.0), True),
    (MhdShearX(tz("t*z"), tz("sin(z)")), True),
    (MhdShearY(tz("z^2+t")), True),
    (MhdRotatePlus(parse_expr("0.3*w", {"w"})), True),
    (MhdRotateMinus(parse_expr("0.2*sin(w)", {"w"})), True),
    (MhdScaleTime(-1.0), True),
    # printed amplitude c^-1 does not close for generic c (finding; the
    # closing amplitude is c)
    (MhdScaleTime(2.0), False),
]


def test_mhd_closure_verdicts():
    pair = mhd_instance()
    for tr, want_pass in MHD_CLOSURE:
        rep = verify_on_grid(apply_mhd(tr, pair), MHD_GRID, 1e-8)
        assert rep.passed == want_pass, tr


def test_closure_composition_chain():
    # stacking verified transforms keeps the pair verified
    pair = mhd_instance()
    pair = apply_mhd(MhdShearX(tz("t*z"), tz("z")), pair)
    pair = apply_mhd(MhdRotatePlus(parse_expr("0.2*w", {"w"})), pair)
    pair = apply_mhd(MhdTranslate(0.1, 0.2), pair)
    assert verify_on_grid(pair, MHD_GRID, 1e-8).passed
