"""Action integrals: quadrature, closed forms, dual 1-forms, power laws."""

import math

import numpy as np
import pytest

from specedge.action import (
    ActionForm,
    action,
    action_closed_form,
    dual_action_check,
)
from specedge.branches import BranchAxis, TurningPair, branch_function, turning_points
from specedge.errors import AccuracyError, CatalogError, DomainError
from specedge.examples import advection_action, advection_unscale
from specedge.symbols import PhasePoint, catalog


def pair_and_branch(symbol_id, z, branch_index=0):
    model = catalog(symbol_id)
    pair = turning_points(model, z)[branch_index]
    return model, pair, branch_function(model, z, pair)


class TestActionValues:
    def test_airy_model_four_thirds(self):
        model, pair, br = pair_and_branch("airy-fourier", 0j)
        res = action(model, 0j, pair, br, tol=1e-12)
        assert res.value == pytest.approx(4.0 / 3.0, abs=1e-11)
        assert res.abs_error_estimate <= 1e-10

    def test_quadratic_well_closed_form(self):
        # Im action = (4/3) alpha^{3/2} exactly for g = i(x^2 - alpha)
        for alpha in (0.04, 0.25):
            model = catalog("model-first-order", expr="quadratic-well", alpha=alpha)
            pair, = turning_points(model, 0j)
            br = branch_function(model, 0j, pair)
            res = action(model, 0j, pair, br, tol=1e-12)
            assert res.value == pytest.approx((4.0 / 3.0) * alpha ** 1.5, abs=1e-11)

    def test_harmonic_small_y(self):
        model, pair, br = pair_and_branch("harmonic", complex(1.0, 0.01))
        res = action(model, complex(1.0, 0.01), pair, br, tol=1e-12)
        assert res.value == pytest.approx((2.0 / 3.0) * 0.01 ** 1.5, abs=5e-8)

    def test_coalesced_pair_gives_zero(self):
        # degenerate domain: integrate over an empty path
        from specedge.branches import BranchFunction
        rho = PhasePoint(1.0, 0.0)
        pair = TurningPair(rho_plus=rho, rho_minus=rho, bracket_plus=1.0,
                           bracket_minus=-1.0, branch_axis=BranchAxis.X, z=0j)
        model = catalog("airy-fourier")
        br = BranchFunction(axis=BranchAxis.X, eval=lambda t: 0j,
                            t_minus=1.0, t_plus=1.0, domain=(1.0, 1.0))
        res = action(model, 0j, pair, br)
        assert res.value == 0.0
        assert res.abs_error_estimate == 0.0

    @pytest.mark.parametrize("symbol_id,z", [
        ("cubic", complex(0.04, 1.0)),
        ("harmonic", complex(1.0, 0.04)),
        ("advection", advection_unscale(0.05)),
        ("airy-fourier", 0j),
    ])
    def test_positivity_near_boundary(self, symbol_id, z):
        model, pair, br = pair_and_branch(symbol_id, z)
        assert action(model, z, pair, br).value >= 0.0

    @pytest.mark.filterwarnings("ignore::UserWarning")
    @pytest.mark.filterwarnings("ignore:.*roundoff.*")
    def test_unachievable_tolerance_raises(self):
        model, pair, br = pair_and_branch("harmonic", complex(1.0, 0.04))
        with pytest.raises(AccuracyError):
            action(model, complex(1.0, 0.04), pair, br, tol=1e-30)

    def test_bad_tolerance(self):
        model, pair, br = pair_and_branch("harmonic", complex(1.0, 0.04))
        with pytest.raises(DomainError):
            action(model, complex(1.0, 0.04), pair, br, tol=0.0)


class TestClosedForms:
    def test_harmonic_exact_vs_quadrature(self):
        for y in (0.01, 0.04, 0.09):
            z = complex(1.0, y)
            model, pair, br = pair_and_branch("harmonic", z)
            quad_val = action(model, z, pair, br, tol=1e-12).value
            closed = action_closed_form("harmonic-exact", y=y).value
            assert closed == pytest.approx(quad_val, abs=1e-9)

    def test_cubic_leading(self):
        assert action_closed_form("cubic-leading", y=0.09).value == pytest.approx(0.012, abs=1e-15)

    def test_airy(self):
        res = action_closed_form("airy", re_z=4.0)
        assert res.value == pytest.approx(32.0 / 3.0, abs=1e-14)
        assert res.form is ActionForm.CLOSED

    def test_harmonic_leading(self):
        assert action_closed_form("harmonic-leading", y=0.04).value == pytest.approx(
            (2.0 / 3.0) * 0.04 ** 1.5, abs=1e-16)

    def test_unknown_id(self):
        with pytest.raises(CatalogError):
            action_closed_form("nope")


class TestDualForms:
    @pytest.mark.parametrize("symbol_id,z_of_y", [
        ("cubic", lambda y: complex(y, 1.0)),
        ("harmonic", lambda y: complex(1.0, y)),
    ])
    @pytest.mark.parametrize("y", [0.04, 0.1])
    def test_dual_equality(self, symbol_id, z_of_y, y):
        z = z_of_y(y)
        model, pair, br = pair_and_branch(symbol_id, z)
        v_xidx, v_xdxi, disc = dual_action_check(model, z, pair, br, tol=1e-10)
        assert disc <= 1e-8
        assert v_xidx >= 0.0

    def test_coalesced_dual_zero(self):
        from specedge.branches import BranchFunction
        rho = PhasePoint(0.3, -1.0)
        pair = TurningPair(rho_plus=rho, rho_minus=rho, bracket_plus=1.0,
                           bracket_minus=-1.0, branch_axis=BranchAxis.X, z=0j)
        br = BranchFunction(axis=BranchAxis.X, eval=lambda t: 0j,
                            t_minus=0.3, t_plus=0.3, domain=(0.3, 0.3))
        v1, v2, d = dual_action_check(catalog("harmonic"), 0j, pair, br)
        assert v1 == v2 == d == 0.0


class TestPowerLaws:
    @pytest.mark.parametrize("symbol_id", ["cubic", "harmonic", "advection"])
    def test_action_alpha_three_halves(self, symbol_id):
        model = catalog(symbol_id)
        alphas = np.geomspace(1e-4, 1e-1, 9)
        vals = []
        for a in alphas:
            if symbol_id == "cubic":
                z = complex(a, 1.0)
            elif symbol_id == "harmonic":
                z = complex(1.0, a)
            else:
                z = advection_unscale(a)
            pair = turning_points(model, z)[0]
            br = branch_function(model, z, pair)
            vals.append(action(model, z, pair, br, tol=1e-13).value)
        slope = np.polyfit(np.log(alphas), np.log(vals), 1)[0]
        assert 1.45 <= slope <= 1.55

    def test_harmonic_residual_law(self):
        ys = np.geomspace(1e-3, 1e-1, 9)
        resid = [abs(action_closed_form("harmonic-exact", y=y).value
                     - (2.0 / 3.0) * y ** 1.5) for y in ys]
        slope = np.polyfit(np.log(ys), np.log(resid), 1)[0]
        assert slope >= 2.4
        # bounded in units of y^{5/2}
        assert max(r / y ** 2.5 for r, y in zip(resid, ys)) < 10.0

    def test_cubic_residual_law(self):
        model = catalog("cubic")
        ys = np.geomspace(1e-3, 1e-1, 9)
        resid = []
        for y in ys:
            z = complex(y, 1.0)
            pair, = turning_points(model, z)
            br = branch_function(model, z, pair)
            exact = action(model, z, pair, br, tol=1e-13).value
            resid.append(abs(exact - (4.0 / 9.0) * y ** 1.5))
        slope = np.polyfit(np.log(ys), np.log(resid), 1)[0]
        assert slope >= 2.4

    def test_advection_action_law(self):
        alphas = np.geomspace(1e-3, 1e-1, 8)
        vals = [advection_action(a) for a in alphas]
        slope = np.polyfit(np.log(alphas), np.log(vals), 1)[0]
        assert 1.45 <= slope <= 1.55
