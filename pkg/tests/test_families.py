import math

import numpy as np
import pytest

from yamabe.errors import FamilyConstructionError
from yamabe.families import (almost_soliton_lightlike, default_lightlike_frame,
                             default_spacelike_frame, family_thm15,
                             family_thm16, family_thm17, family_thm18,
                             phase_portrait, riccati_general_solution,
                             riccati_residual)
from yamabe.lambertw import lambert_w
from yamabe.numerics import CachedAntiderivative, central_d2
from yamabe.profiles import Interval, Profile, grid_points
from yamabe.soliton import certify, classify

HALF_PI = 0.5 * math.pi


class TestFrames:
    def test_spacelike_default(self):
        sig, direction = default_spacelike_frame(5)
        assert sig.epsilon == (1,) * 5
        assert direction.alpha == (1.0, 0.0, 0.0, 0.0, 0.0)
        assert direction.norm == 1.0

    def test_lightlike_default(self):
        sig, direction = default_lightlike_frame(4)
        assert sig.epsilon == (-1, 1, 1, 1)
        assert direction.norm == 0.0
        assert direction.causal == "lightlike"


class TestElementaryFamily:
    def test_reproduces_linear_branch_catalog_profiles(self):
        spec = family_thm16(1.0, 1.0, xi_range=(1.0, 100.0))
        phi_ref = Profile.from_expression("sqrt(xi/20)", (0.0, math.inf))
        f_ref = Profile.from_expression("sqrt(20/xi)", (0.0, math.inf))
        h_ref = Profile.from_expression("20*ln(xi)", (0.0, math.inf))
        worst = 0.0
        for xi in np.linspace(1.0, 100.0, 120):
            xi = float(xi)
            worst = max(worst,
                        abs(spec.phi.value(xi) - phi_ref.value(xi)),
                        abs(spec.f.value(xi) - f_ref.value(xi)),
                        abs(spec.h.value(xi) - h_ref.value(xi)))
        assert worst < 1e-9

    def test_arctan_branch(self):
        spec = family_thm16(1.0, 2.0, k3=-0.05, xi_range=(1.0, 25.0))
        assert spec.label == "elementary-family"
        # phi^2 = sqrt(-k1/(20 k3)) tan(w xi)
        r = math.sqrt(1.0 / 1.0)
        w = math.sqrt(1.0 * 1.0) / 20.0
        for xi in (2.0, 9.0, 20.0):
            assert spec.phi.value(xi) ** 2 == pytest.approx(
                r * math.tan(w * xi), rel=1e-12)
            assert spec.f.value(xi) == pytest.approx(2.0 / spec.phi.value(xi))

    def test_arctan_branch_validity_window(self):
        # the tangent blows up at w*sigma = pi/2, i.e. xi = 10 pi here
        with pytest.raises(FamilyConstructionError,
                           match="validity interval"):
            family_thm16(1.0, 1.0, k3=-0.05, xi_range=(1.0, 40.0))

    @pytest.mark.parametrize("branch", ["inner", "outer"])
    def test_hyperbolic_branches_certify(self, branch):
        spec = family_thm16(1.0, 1.0, k3=0.05, xi_range=(0.5, 30.0),
                            branch=branch)
        b = math.sqrt(1.0 / 1.0)
        w = 1.0 / 20.0
        xi = 7.0
        expected = b * math.tanh(w * xi) if branch == "inner" \
            else b / math.tanh(w * xi)
        assert spec.phi.value(xi) ** 2 == pytest.approx(expected, rel=1e-12)

    def test_inner_branch_stays_below_turning_value(self):
        spec = family_thm16(1.0, 1.0, k3=0.05, xi_range=(0.5, 30.0))
        cap = 1.0 / (20.0 * 0.05)
        assert all(spec.phi.value(float(x)) ** 4 < cap
                   for x in np.linspace(0.6, 29.0, 50))

    def test_negative_k1_reflection(self):
        neg = family_thm16(-1.0, 1.0, xi_range=(-50.0, -1.0))
        pos = family_thm16(1.0, 1.0, xi_range=(1.0, 50.0))
        for xi in (2.0, 11.0, 40.0):
            assert neg.phi.value(-xi) == pytest.approx(pos.phi.value(xi),
                                                       rel=1e-12)
            assert neg.h.value(-xi) == pytest.approx(pos.h.value(xi),
                                                     rel=1e-12)
            assert neg.h.d1(-xi) == pytest.approx(-pos.h.d1(xi), rel=1e-12)

    def test_h_matches_independent_quadrature_of_its_slope(self):
        spec = family_thm16(1.0, 1.0, k3=-0.05, xi_range=(1.0, 25.0))
        integral = CachedAntiderivative(
            lambda x: 1.0 / spec.phi.value(x) ** 2, 5.0)
        for xi in (2.0, 12.0, 24.0):
            assert spec.h.value(xi) - spec.h.value(5.0) == pytest.approx(
                integral(xi), abs=1e-8)

    def test_dimension_sum_enforced(self):
        with pytest.raises(FamilyConstructionError,
                           match=r"n \+ d = 6"):
            family_thm16(1.0, 1.0, xi_range=(1.0, 5.0), n=4, d=3)

    def test_nonzero_constants_enforced(self):
        with pytest.raises(FamilyConstructionError, match="nonzero"):
            family_thm16(0.0, 1.0, xi_range=(1.0, 5.0))

    def test_branch_name_validated(self):
        with pytest.raises(FamilyConstructionError, match="branch"):
            family_thm16(1.0, 1.0, k3=0.05, xi_range=(1.0, 5.0),
                         branch="middle")

    def test_lightlike_alpha_rejected(self):
        sig, direction = default_lightlike_frame(5)
        with pytest.raises(FamilyConstructionError, match="lightlike"):
            family_thm16(1.0, 1.0, xi_range=(1.0, 5.0), sig=sig,
                         alpha=direction.alpha)


class TestLambertFamily:
    KW = dict(lambda_f=-0.5, xi_range=(-0.5, 1.0))

    def test_constructs_and_certifies(self):
        spec = family_thm15(1.0, 1.0, -0.2, **self.KW)
        assert spec.label == "lambert-family(q=statement)"
        report = certify(spec)
        assert report.verdict == "certified"

    def test_anchor_value(self):
        spec = family_thm15(1.0, 1.0, -0.2, k4=0.3, lambda_f=-0.5,
                            xi_range=(-0.45, 0.6), phi0=1.1)
        assert spec.phi.value(-0.3) == pytest.approx(1.1, abs=1e-12)

    def test_slope_satisfies_lambert_relation(self):
        # phi' = -(q/p)(1 + W(k3 e^{-p^2/(4 q phi^4)})) phi^3, rebuilt here
        # from scratch
        k1, k2, k3 = 1.0, 1.0, -0.2
        spec = family_thm15(k1, k2, k3, **self.KW)
        p, q = k1 / 10.0, -0.5 / (10.0 * k2 ** 2)
        for xi in (-0.4, 0.0, 0.5, 0.9):
            phi = spec.phi.value(xi)
            w = lambert_w(k3 * math.exp(-p * p / (4.0 * q * phi ** 4)))
            expected = -(q / p) * (1.0 + w) * phi ** 3
            assert spec.phi.d1(xi) == pytest.approx(expected, rel=1e-9)

    def test_quadrature_and_ode_paths_agree(self):
        qd = family_thm15(1.0, 1.0, -0.2, **self.KW)
        od = family_thm15(1.0, 1.0, -0.2, construction="ode", **self.KW)
        for xi in np.linspace(-0.45, 0.95, 29):
            xi = float(xi)
            assert abs(qd.phi.value(xi) - od.phi.value(xi)) < 1e-10
            assert abs(qd.phi.d1(xi) - od.phi.d1(xi)) < 1e-9
            assert abs(qd.phi.d2(xi) - od.phi.d2(xi)) < 1e-8

    def test_k3_zero_closed_form(self):
        spec = family_thm15(1.0, 1.0, 0.0, lambda_f=-0.5,
                            xi_range=(-0.2, 0.5))
        p, q = 0.1, -0.05
        for xi in (-0.15, 0.0, 0.45):
            expected = (1.0 + (2.0 * q / p) * xi) ** -0.5
            assert spec.phi.value(xi) == pytest.approx(expected, rel=1e-12)

    def test_k3_zero_sign_consistency_window(self):
        # 1/phi^2 = 1 - (xi + k4) crosses zero at xi = 1
        with pytest.raises(FamilyConstructionError,
                           match="leaves the positive axis"):
            family_thm15(1.0, 1.0, 0.0, lambda_f=-0.5, xi_range=(-0.2, 1.5))

    def test_second_derivative_against_stencil(self):
        # d2 comes through the Lambert chain rule; the stencil only sees
        # values
        spec = family_thm15(1.0, 1.0, -0.2, **self.KW)
        for xi in (-0.3, 0.2, 0.8):
            fd = central_d2(spec.phi.value, xi, step=1e-4)
            assert spec.phi.d2(xi) == pytest.approx(fd, abs=1e-6)

    def test_lower_branch_accepted(self):
        spec = family_thm15(1.0, 1.0, -0.2, lambda_f=-0.5,
                            xi_range=(-0.1, 0.1), w_branch="lower")
        assert spec.phi.value(0.0) == pytest.approx(1.0, abs=1e-12)

    def test_proof_variant_fails_certification(self):
        with pytest.raises(FamilyConstructionError, match="residual"):
            family_thm15(1.0, 1.0, 0.0, lambda_f=-0.5,
                         xi_range=(-0.2, 0.05), q_variant="proof")

    def test_range_beyond_maximal_interval(self):
        with pytest.raises(FamilyConstructionError,
                           match="could not bracket phi|maximal interval"):
            family_thm15(1.0, 1.0, -0.2, lambda_f=-0.5, xi_range=(-0.5, 8.0))

    def test_parameter_validation(self):
        with pytest.raises(FamilyConstructionError, match=r"n \+ d = 6"):
            family_thm15(1.0, 1.0, 0.1, lambda_f=-0.5, xi_range=(0.0, 1.0),
                         n=4, d=3)
        with pytest.raises(FamilyConstructionError, match="nonzero"):
            family_thm15(0.0, 1.0, 0.1, lambda_f=-0.5, xi_range=(0.0, 1.0))
        with pytest.raises(FamilyConstructionError, match="own family"):
            family_thm15(1.0, 1.0, 0.1, lambda_f=0.0, xi_range=(0.0, 1.0))
        with pytest.raises(FamilyConstructionError, match="q_variant"):
            family_thm15(1.0, 1.0, 0.1, lambda_f=-0.5, xi_range=(0.0, 1.0),
                         q_variant="paper")


SEC_DOMAIN = (-HALF_PI, HALF_PI)


def sec_profile():
    return Profile.from_expression("sec(xi)", SEC_DOMAIN)


class TestRiccati:
    def test_constant_solution_for_secant(self):
        z = Profile.constant(-0.5, SEC_DOMAIN)
        worst = max(abs(riccati_residual(z, sec_profile(), 4, 3, x))
                    for x in grid_points(Interval(-1.4, 1.4), 64))
        assert worst < 1e-14

    def test_residual_spot_value(self):
        z = Profile.constant(0.3, SEC_DOMAIN)
        assert riccati_residual(z, sec_profile(), 4, 3, 0.0) == pytest.approx(
            -0.16, abs=1e-12)

    def test_general_solution_still_solves(self):
        z0 = Profile.constant(-0.5, SEC_DOMAIN)
        phi = sec_profile()
        z = riccati_general_solution(z0, phi, 4, 3, 2.5, (-1.4, 1.4))
        worst = max(abs(riccati_residual(z, phi, 4, 3, x))
                    for x in grid_points(Interval(-1.3, 1.3), 48))
        assert worst < 1e-10
        assert z.value(0.0) != z0.value(0.0)

    def test_none_or_infinite_c_returns_z0(self):
        z0 = Profile.constant(-0.5, SEC_DOMAIN)
        phi = sec_profile()
        assert riccati_general_solution(z0, phi, 4, 3, None, (-1.0, 1.0)) is z0
        assert riccati_general_solution(z0, phi, 4, 3, math.inf,
                                        (-1.0, 1.0)) is z0

    def test_denominator_crossing_reported(self):
        z0 = Profile.constant(-0.5, SEC_DOMAIN)
        with pytest.raises(FamilyConstructionError, match="denominator"):
            riccati_general_solution(z0, sec_profile(), 4, 3, -0.1,
                                     (-1.4, 1.4))


class TestConstantPotentialFamily:
    def test_reproduces_secant_catalog_warping_up_to_scale(self):
        spec = family_thm17(sec_profile(), Profile.constant(-0.5, SEC_DOMAIN),
                            1.0, xi_range=(-1.45, 1.45), n=4, d=3)
        assert spec.label == "constant-potential-family"
        reference = Profile.from_expression("sqrt(2*sec(xi)*exp(xi))")
        # C = 1 lands on the same solution in a different global gauge;
        # lambda_F = 0 makes the residuals invariant under constant
        # rescalings of f, so the family fixes only the shape
        for xi in (-1.3, -0.4, 0.0, 0.7, 1.4):
            assert 2.0 * spec.f.value(xi) == pytest.approx(
                reference.value(xi), rel=1e-12)

    def test_h_is_constant_and_class_trivial(self):
        spec = family_thm17(sec_profile(), Profile.constant(-0.5, SEC_DOMAIN),
                            1.0, xi_range=(-1.0, 1.0), n=4, d=3)
        assert spec.h.d1(0.3) == 0.0
        assert classify(spec).soliton_class == "trivial"

    def test_riccati_derived_input_certifies(self):
        z0 = Profile.constant(-0.5, SEC_DOMAIN)
        phi = sec_profile()
        z = riccati_general_solution(z0, phi, 4, 3, 3.0, (-1.2, 1.2))
        spec = family_thm17(phi, z, 2.0, xi_range=(-1.1, 1.1), n=4, d=3)
        assert certify(spec).verdict == "certified"

    def test_non_solution_zp_rejected(self):
        with pytest.raises(FamilyConstructionError,
                           match="Riccati equation"):
            family_thm17(sec_profile(), Profile.constant(0.3, SEC_DOMAIN),
                         1.0, xi_range=(-1.0, 1.0), n=4, d=3)

    def test_nonpositive_inner_term_rejected(self):
        with pytest.raises(FamilyConstructionError, match="nonpositive"):
            family_thm17(sec_profile(), Profile.constant(-0.5, SEC_DOMAIN),
                         -50.0, xi_range=(-1.0, 1.0), n=4, d=3)

    def test_fiber_curvature_must_vanish(self):
        with pytest.raises(FamilyConstructionError, match="scalar-flat"):
            family_thm17(sec_profile(), Profile.constant(-0.5, SEC_DOMAIN),
                         1.0, xi_range=(-1.0, 1.0), n=4, d=3, lambda_f=1.0)

    def test_dimensions_free_of_sum_constraint(self):
        # unlike the n + d = 6 families this one accepts any n >= 3, d >= 1;
        # phi = const is a Riccati solution with z_p = 0
        flat = Profile.constant(1.0, (-2.0, 2.0))
        spec = family_thm17(flat, Profile.constant(0.0, (-2.0, 2.0)), 3.0,
                            xi_range=(-1.5, 1.5), n=5, d=2)
        assert certify(spec).verdict == "certified"


class TestLightlikeFamilies:
    GROW = "exp(0.2*xi)"

    def test_thm18_certifies_any_positive_profiles(self):
        phi = Profile.from_expression(self.GROW)
        f = Profile.from_expression("2 + sin(xi)")
        spec = family_thm18(phi, f, 1.0, xi_range=(-3.0, 3.0))
        assert spec.label == "lightlike-family"
        assert spec.direction.causal == "lightlike"
        assert certify(spec).verdict == "certified"

    def test_thm18_h_slope(self):
        phi = Profile.from_expression(self.GROW)
        spec = family_thm18(phi, phi, 1.0, xi_range=(-3.0, 3.0))
        for xi in (-2.0, 0.0, 2.5):
            assert spec.h.d1(xi) == pytest.approx(
                1.0 / phi.value(xi) ** 2, rel=1e-12)

    def test_thm18_requires_lightlike_alpha(self):
        phi = Profile.from_expression(self.GROW)
        sig, _ = default_lightlike_frame(4)
        with pytest.raises(FamilyConstructionError, match="lightlike"):
            family_thm18(phi, phi, 1.0, xi_range=(-1.0, 1.0), sig=sig,
                         alpha=(0.0, 1.0, 0.0, 0.0))

    def test_almost_soliton_rho_profile(self):
        phi = Profile.from_expression(self.GROW)
        f = Profile.from_expression("exp(-0.1*xi)")
        spec = almost_soliton_lightlike(phi, f, 1.0, -2.0,
                                        xi_range=(-2.0, 2.0))
        assert spec.label == "almost-lightlike-family"
        assert spec.is_almost
        assert classify(spec).soliton_class == "almost"
        for xi in (-1.5, 0.0, 1.2):
            assert spec.rho.value(xi) == pytest.approx(
                -2.0 / f.value(xi) ** 2, rel=1e-14)
            fd = central_d2(spec.rho.value, xi, step=1e-4)
            assert spec.rho.d2(xi) == pytest.approx(fd, abs=1e-6)
        assert certify(spec).verdict == "certified"


class TestPhasePortrait:
    def test_statuses_and_row_shape(self):
        trajs = phase_portrait([(1.0, 0.5)], (-0.3, 0.3), lambda_f=-6.0)
        (traj,) = trajs
        assert traj.status == "ok"
        assert traj.rows.shape[1] == 3
        assert np.all(np.diff(traj.rows[:, 0]) >= 0.0)
        assert traj.rows[0, 0] == -0.3 and traj.rows[-1, 0] == 0.3

    def test_stationary_point(self):
        trajs = phase_portrait([(1.5, 0.0)], (-1.0, 1.0), lambda_f=0.0)
        assert trajs[0].status == "stationary"
        assert np.allclose(trajs[0].rows[:, 1], 1.5)
        assert np.all(trajs[0].rows[:, 2] == 0.0)

    def test_positivity_loss(self):
        # the cubic friction term makes |phi'| grow like phi^-3 on a falling
        # branch, so the default 1e-9 floor is shadowed by the escape event;
        # a raised floor catches the crossing while phi' is still moderate
        trajs = phase_portrait([(0.5, -3.0)], (0.0, 2.0), k1=-1.0,
                               lambda_f=0.0, phi_floor=0.05, start_xi=0.0)
        assert trajs[0].status == "positivity-loss"

    def test_nonpositive_start_short_circuits(self):
        trajs = phase_portrait([(-1.0, 0.0)], (-1.0, 1.0))
        assert trajs[0].status == "positivity-loss"
        assert trajs[0].rows.shape == (0, 3)

    def test_blowup(self):
        trajs = phase_portrait([(2.0, 5.0)], (0.0, 20.0), lambda_f=-6.0)
        assert trajs[0].status == "blowup"

    def test_start_xi_validated(self):
        with pytest.raises(FamilyConstructionError, match="start_xi"):
            phase_portrait([(1.0, 0.0)], (0.0, 1.0), start_xi=5.0)

    def test_multiple_initials_keep_order(self):
        inits = [(0.5, 0.0), (1.0, 0.5), (2.0, 0.0)]
        trajs = phase_portrait(inits, (-0.5, 0.5), lambda_f=-6.0)
        assert [t.initial for t in trajs] == inits
