import math
import random

import pytest

from geomhd.errors import ConstraintError, DomainError, ParameterError
from geomhd.expr import Const, parse_expr
from geomhd.fields import (
    MHD_VARS,
    Grid,
    fd_residual,
    residual_mhd1,
    residual_mhd2,
    verify_on_grid,
)
from geomhd.mhd import (
    MhdFamilyA,
    MhdFamilyB,
    MhdFamilyC,
    MhdFamilyD,
    build_mhd_A,
    build_mhd_B,
    build_mhd_C,
    build_mhd_D,
    reduced_residual,
    scale_value,
    sigma_for_case,
)

GRID = Grid.from_ranges({v: (-1, 1, 4) for v in MHD_VARS})
P = {"t": 0.3, "x": 0.5, "y": -0.4, "z": 0.7}


def tz(src):
    return parse_expr(src, {"t", "z"})


def fw(src):
    return parse_expr(src, {"w", "varpi"})


# -- family A ----------------------------------------------------------------------


def test_family_a_zero_profiles():
    phi, psi = build_mhd_A(MhdFamilyA(Const(0.0), Const(0.0), Const(0.0)))
    assert phi.value(P) == 0.0 and psi.value(P) == 0.0


def test_family_a_quadratic_time_profile():
    phi, psi = build_mhd_A(MhdFamilyA(Const(0.0), tz("t^2"), Const(0.0)))
    assert phi.value(P) == pytest.approx(2 * P["t"] * P["x"])
    assert psi.value(P) == 0.0
    assert residual_mhd1(phi, psi, P) == 0.0


def test_family_a_polynomial_instance_verifies():
    pair = build_mhd_A(MhdFamilyA(tz("t*z"), tz("t+z"), tz("z^2")))
    rep = verify_on_grid(pair, GRID, 1e-9)
    assert rep.passed


def test_family_a_cross_validates_with_differences():
    pair = build_mhd_A(MhdFamilyA(tz("t*z"), tz("t+z"), tz("z^2")))
    r = random.Random(13)
    for _ in range(5):
        p = {v: r.uniform(-1, 1) for v in MHD_VARS}
        for eq, op in (("mhd1", residual_mhd1), ("mhd2", residual_mhd2)):
            assert op(*pair, p) == pytest.approx(
                fd_residual(pair, eq, p, step=1e-2), rel=1e-5, abs=1e-5
            )


def test_family_a_perturbed_is_rejected():
    # scaling the xy coefficient of phi by 1.01 must break the verification
    from geomhd.expr import Var, diff_expr, Call, neg
    from geomhd.fields import field_from_expr

    sigma, theta, tau = tz("t*z"), tz("t+z"), tz("z^2")
    x, y = Var("x"), Var("y")
    grow, decay = Call("exp", sigma), Call("exp", neg(sigma))
    phi_bad = field_from_expr(
        1.01 * diff_expr(sigma, "t") * (x * y)
        + diff_expr(theta, "t") * grow * x
        + diff_expr(tau, "t") * decay * y
        + diff_expr(theta, "t") * tau,
        MHD_VARS,
        "tampered phi",
    )
    _, psi = build_mhd_A(MhdFamilyA(sigma, theta, tau))
    rep = verify_on_grid((phi_bad, psi), GRID, 1e-8)
    assert not rep.passed


# -- sigma branches -----------------------------------------------------------------


def test_sigma_reduces_cleanly_without_coupling():
    # c = 0 on the plus branch collapses to half the log of the scale profile
    for t, z in ((0.3, 0.8), (1.2, -0.4)):
        got = sigma_for_case(1, 0.7, -0.4, 0.0, "plus", t, z)
        assert got == pytest.approx(0.5 * (0.7 * t - 0.4 * z), rel=1e-12)


def test_sigma_defining_relation_all_cases():
    r = random.Random(17)
    for case in (1, 2, 3):
        for branch in ("plus", "minus"):
            for _ in range(100):
                a1, a2 = r.uniform(-1, 1), r.uniform(-1, 1)
                c = r.uniform(-0.3, 0.3)
                if branch == "minus" and c == 0.0:
                    c = 0.1
                t = r.uniform(0.5, 2.0)
                z = r.uniform(0.5, 2.0)
                E = scale_value(case, a1, a2, t, z)
                if E < 2.0 * abs(c) + 1e-3:
                    continue
                s = sigma_for_case(case, a1, a2, c, branch, t, z)
                lhs = math.exp(2 * s) + c * c * math.exp(-2 * s)
                assert lhs == pytest.approx(E, rel=1e-12)


def test_sigma_fixed_point_example():
    s = sigma_for_case(1, 0.0, 0.0, 0.25, "plus", 0.4, -1.1)
    assert s == pytest.approx(0.5 * math.log((1.0 + math.sqrt(0.75)) / 2.0), rel=1e-12)
    assert math.exp(2 * s) + 0.0625 * math.exp(-2 * s) == pytest.approx(1.0, rel=1e-12)


def test_sigma_domain_error_inside_radicand():
    with pytest.raises(DomainError):
        sigma_for_case(1, 0.0, 0.0, 1.0, "plus", 0.0, 0.0)  # E^2 - 4c^2 = -3


def test_sigma_minus_branch_needs_coupling():
    with pytest.raises(DomainError):
        sigma_for_case(1, 0.0, 0.0, 0.0, "minus", 0.2, 0.2)  # ln 0


# -- family B ----------------------------------------------------------------------


def b_spec(**kw):
    base = dict(case=1, a1=0.0, a2=0.0, c=0.25, branch="plus", lam=Const(0.0))
    base.update(kw)
    return MhdFamilyB(**base)


def test_family_b_all_zero_modes():
    phi, psi = build_mhd_B(b_spec())
    assert phi.value(P) == 0.0 and psi.value(P) == 0.0


def test_family_b_slotless_envelope_is_inert():
    # a ladder of length zero contributes f(varpi) to the potential; both slot
    # derivatives vanish, so the pair is identically zero
    phi, psi = build_mhd_B(b_spec(alpha1=(parse_expr("varpi^2", {"varpi"}),)))
    assert phi.value(P) == 0.0 and psi.value(P) == 0.0


def test_family_b_acceptance_instance():
    spec = b_spec(a1=1.0, a2=0.0, c=0.1, alpha1=(Const(0.0), parse_expr("sin(varpi)", {"varpi"})))
    pair = build_mhd_B(spec)
    grid = Grid.from_ranges(
        {"t": (1, 2, 5), "x": (-1, 1, 5), "y": (-1, 1, 5), "z": (0, 1, 5)},
        exclude=spec.exclusion(),
    )
    rep = verify_on_grid(pair, grid, 1e-8)
    assert rep.passed and rep.evaluated == 625


def test_family_b_reduced_equation_all_cases(shipped):
    # the assembled ladder potential satisfies the per-case reduced wave
    # equation in slot space
    from geomhd.config import build_instance
    from geomhd.instances import SHIPPED

    r = random.Random(29)
    for name in SHIPPED:
        if "mhd_B" not in name:
            continue
        cfg = SHIPPED[name]
        cons = cfg["constants"]
        spec = MhdFamilyB(
            case=cons["case"],
            a1=cons["a1"],
            a2=cons["a2"],
            c=cons["c"],
            branch=cons["branch"],
            lam=tz(cfg["params"]["lambda"]),
            alpha1=tuple(parse_expr(s, {"varpi"}) for s in cfg["modes"].get("alpha1", [])),
            alpha2=tuple(parse_expr(s, {"varpi"}) for s in cfg["modes"].get("alpha2", [])),
            beta1=tuple(parse_expr(s, {"varpi"}) for s in cfg["modes"].get("beta1", [])),
            beta2=tuple(parse_expr(s, {"varpi"}) for s in cfg["modes"].get("beta2", [])),
        )
        for _ in range(10):
            t = r.uniform(0.5, 1.5)
            z = r.uniform(0.5, 1.5)
            w = r.uniform(-2.0, 2.0)
            res, scale = reduced_residual(spec, t, z, w)
            assert abs(res) <= 1e-9 * max(scale, 1.0), name


def test_family_b_case_validation():
    with pytest.raises(ConstraintError):
        b_spec(case=4)
    with pytest.raises(ConstraintError):
        b_spec(branch="middle")


def test_family_b_denominator_guard_at_construction():
    # case 2 uses radial chains in z: a2 = -1 kills the first factor
    with pytest.raises(ParameterError):
        b_spec(case=2, a2=-1.0, alpha1=(Const(0.0), Const(1.0)))


def test_family_b_exclusion_predicate():
    spec = b_spec(case=3, a1=2.0, a2=2.0, c=0.05)
    excl = spec.exclusion()
    assert excl({"t": 0.0, "x": 0, "y": 0, "z": 1.0})  # t <= margin
    assert excl({"t": 1.0, "x": 0, "y": 0, "z": 0.1})  # E too small
    assert not excl({"t": 1.0, "x": 0, "y": 0, "z": 1.0})


def test_family_b_fd_cross_check():
    spec = b_spec(a1=1.0, a2=0.0, c=0.1, alpha1=(Const(0.0), parse_expr("sin(varpi)", {"varpi"})))
    pair = build_mhd_B(spec)
    r = random.Random(43)
    for _ in range(5):
        p = {"t": r.uniform(1.2, 1.8), "x": r.uniform(-1, 1), "y": r.uniform(-1, 1), "z": r.uniform(0.2, 0.8)}
        for eq, op in (("mhd1", residual_mhd1), ("mhd2", residual_mhd2)):
            jr = op(*pair, p)
            fr = fd_residual(pair, eq, p, step=1e-2)
            assert jr == pytest.approx(fr, rel=1e-5, abs=1e-5)


# -- family C ----------------------------------------------------------------------


def test_family_c_planar_example():
    phi, psi = build_mhd_C(MhdFamilyC(fw("w^2"), Const(0.0), "planar"))
    assert phi.value(P) == pytest.approx(2 * (P["t"] + P["z"]))
    assert psi.value(P) == pytest.approx(2 * (P["t"] + P["z"]))
    assert residual_mhd1(phi, psi, P) == pytest.approx(0.0, abs=1e-14)


def test_family_c_radial_example():
    phi, psi = build_mhd_C(MhdFamilyC(Const(0.0), fw("w*varpi"), "radial"))
    r2 = P["x"] ** 2 + P["y"] ** 2
    assert phi.value(P) == pytest.approx(r2)
    assert psi.value(P) == pytest.approx(-r2)
    assert residual_mhd1(phi, psi, P) == pytest.approx(0.0, abs=1e-14)
    assert residual_mhd2(phi, psi, P) == pytest.approx(0.0, abs=1e-14)


def test_family_c_zero_pair():
    phi, psi = build_mhd_C(MhdFamilyC(Const(0.0), Const(0.0)))
    assert phi.value(P) == 0.0 and psi.value(P) == 0.0


def test_family_c_both_variants_verify():
    for variant, F, G in (
        ("planar", "w^2 + w*varpi", "cos(w)*varpi"),
        ("radial", "w^3", "w*varpi"),
    ):
        pair = build_mhd_C(MhdFamilyC(fw(F), fw(G), variant))
        assert verify_on_grid(pair, GRID, 1e-8).passed, variant


# -- family D (printed form; verdicts are findings) -----------------------------------


def test_family_d_identity_matches_family_c():
    d_pair = build_mhd_D(MhdFamilyD(fw("w^2"), Const(0.0)))
    c_pair = build_mhd_C(MhdFamilyC(fw("w^2"), Const(0.0), "planar"))
    for p in (P, {"t": -0.2, "x": 1.0, "y": 0.1, "z": 0.9}):
        assert d_pair[0].value(p) == pytest.approx(c_pair[0].value(p), rel=1e-12)
        assert d_pair[1].value(p) == pytest.approx(c_pair[1].value(p), rel=1e-12)
    assert verify_on_grid(d_pair, GRID, 1e-8).passed


def test_family_d_printed_lambda_term_fails():
    # documented finding: the printed psi carries a t-derivative of lambda,
    # which does not verify (the composed symmetry route uses lambda_z there)
    pair = build_mhd_D(MhdFamilyD(Const(0.0), Const(0.0), lam=tz("t*z")))
    rep = verify_on_grid(pair, GRID, 1e-8)
    assert not rep.passed
    assert rep.stats[0].max_abs == pytest.approx(1.0, abs=1e-10)


def test_family_d_printed_full_form_fails():
    pair = build_mhd_D(
        MhdFamilyD(
            fw("w^2"),
            fw("w*varpi"),
            alpha=parse_expr("0.3*w", {"w"}),
            sigma=tz("t*z"),
            tau=tz("z^2"),
            lam=tz("t+z"),
        )
    )
    assert not verify_on_grid(pair, GRID, 1e-8).passed


def test_family_d_epsilon_validation():
    with pytest.raises(ConstraintError):
        MhdFamilyD(Const(0.0), Const(0.0), epsilon=2)
