"""Turning points, small-alpha approximations, and branch functions."""

import math

import numpy as np
import pytest

from specedge.branches import (
    BranchAxis,
    approx_turning_small_alpha,
    branch_function,
    turning_points,
)
from specedge.errors import NoTurningPointsError, TooCloseToBoundaryError
from specedge.examples import advection_unscale
from specedge.symbols import PhasePoint, boundary_frame, catalog, poisson_half


class TestTurningPoints:
    def test_cubic(self):
        z = complex(0.04, 1.0)
        pair, = turning_points(catalog("cubic"), z)
        assert pair.branch_axis is BranchAxis.XI
        assert pair.rho_plus.x == pytest.approx(1.0, abs=1e-10)
        assert pair.rho_plus.xi == pytest.approx(-0.2, abs=1e-10)
        assert pair.rho_minus.xi == pytest.approx(0.2, abs=1e-10)
        # bracket = 6 sqrt(y) in the scaled frame
        assert pair.bracket_plus == pytest.approx(1.2, abs=1e-9)

    def test_harmonic_two_branches(self):
        z = complex(1.0, 0.04)
        pairs = turning_points(catalog("harmonic"), z)
        assert [p.branch_tag for p in pairs] == [1, 2]
        b1, b2 = pairs
        assert b1.rho_plus.x == pytest.approx(0.2, abs=1e-10)
        assert b1.rho_plus.xi == pytest.approx(-1.0, abs=1e-10)
        assert b1.rho_minus.x == pytest.approx(-0.2, abs=1e-10)
        assert b2.rho_plus.x == pytest.approx(-0.2, abs=1e-10)
        assert b2.rho_plus.xi == pytest.approx(1.0, abs=1e-10)
        for p in pairs:
            assert p.bracket_plus == pytest.approx(0.8, abs=1e-9)

    def test_advection(self):
        alpha = 0.01
        z = advection_unscale(alpha)
        pair, = turning_points(catalog("advection"), z)
        xi = -z.imag
        a = -z.real / z.imag ** 2
        assert pair.rho_plus.x == pytest.approx(math.asin(a), abs=1e-12)
        assert pair.rho_minus.x == pytest.approx(-math.pi - math.asin(a), abs=1e-12)
        assert pair.rho_plus.xi == pytest.approx(xi, abs=1e-12)
        model = catalog("advection")
        for q in (pair.rho_plus, pair.rho_minus):
            assert abs(model.value(q) - z) <= 1e-10 * (1 + abs(z))

    @pytest.mark.parametrize("symbol_id,z", [
        ("cubic", complex(0.01, 1.0)),
        ("harmonic", complex(1.0, 0.01)),
        ("advection", advection_unscale(0.05)),
    ])
    def test_sign_classification(self, symbol_id, z):
        for pair in turning_points(catalog(symbol_id), z):
            assert pair.bracket_plus > 0
            assert pair.bracket_minus < 0

    def test_outside_range_advection(self):
        # outward normal leaves the range immediately
        z = (1 + 1j) - 0.05 * (-1 + 2j) / math.sqrt(5)
        with pytest.raises(NoTurningPointsError):
            turning_points(catalog("advection"), z)

    def test_outside_range_cubic(self):
        with pytest.raises(NoTurningPointsError):
            turning_points(catalog("cubic"), complex(-0.1, 1.0))

    def test_boundary_point_too_close(self):
        with pytest.raises((TooCloseToBoundaryError, NoTurningPointsError)):
            turning_points(catalog("advection"), advection_unscale(0.0))


class TestApproxTurning:
    def test_alpha_zero_coalesces(self):
        model = catalog("advection")
        rho0 = PhasePoint(-math.pi / 2.0, -1.0)
        frame = boundary_frame(model, rho0)
        tp, tm = approx_turning_small_alpha(model, frame, rho0, 0.0)
        assert tp == tm == rho0.x

    def test_advection_coefficient(self):
        # x_pm = -pi/2 +- alpha^{1/2} sqrt(5) (2/sqrt(5))^{1/2} + O(alpha)
        model = catalog("advection")
        rho0 = PhasePoint(-math.pi / 2.0, -1.0)
        frame = boundary_frame(model, rho0)
        alpha = 1e-4
        tp, tm = approx_turning_small_alpha(model, frame, rho0, alpha)
        coeff = math.sqrt(5.0) * math.sqrt(2.0 / math.sqrt(5.0))
        assert tp == pytest.approx(-math.pi / 2 + coeff * math.sqrt(alpha), abs=1e-5)
        assert tm == pytest.approx(-math.pi / 2 - coeff * math.sqrt(alpha), abs=1e-5)

    def test_harmonic_scaled_sqrt_alpha(self):
        model = catalog("harmonic")
        rho0 = PhasePoint(0.0, -1.0)
        frame = boundary_frame(model, rho0)
        for alpha in (1e-4, 1e-2):
            tp, tm = approx_turning_small_alpha(model, frame, rho0, alpha)
            assert tp == pytest.approx(math.sqrt(alpha), rel=1e-9)
            assert tm == pytest.approx(-math.sqrt(alpha), rel=1e-9)

    @pytest.mark.parametrize("symbol_id,rho0", [
        ("harmonic", PhasePoint(0.0, -1.0)),
        ("advection", PhasePoint(-math.pi / 2.0, -1.0)),
        ("cubic", PhasePoint(1.0, 0.0)),
    ])
    def test_first_order_agreement(self, symbol_id, rho0):
        """|exact - approx| <= C alpha.

        For the quadratic symbols the O(alpha) term vanishes identically
        (the leading formula is exact), so machine-level agreement also
        counts; otherwise the log-log slope must be first order.
        """
        model = catalog(symbol_id)
        frame = boundary_frame(model, rho0)
        alphas = [1e-3, 1e-2, 1e-1]
        errs = []
        for alpha in alphas:
            z = frame.gamma + alpha * frame.n
            pair = turning_points(model, z)[0]
            t_plus = (pair.rho_plus.x if pair.branch_axis is BranchAxis.X
                      else pair.rho_plus.xi)
            ap, _ = approx_turning_small_alpha(model, frame, rho0, alpha)
            errs.append(abs(t_plus - ap) + 1e-300)
        if max(errs) <= 1e-9:
            return
        slope = np.polyfit(np.log(alphas), np.log(errs), 1)[0]
        assert slope >= 0.9
        assert max(e / a for e, a in zip(errs, alphas)) <= 10.0

    @pytest.mark.parametrize("symbol_id,rho0", [
        ("cubic", PhasePoint(1.0, 0.0)),
        ("harmonic", PhasePoint(0.0, -1.0)),
        ("advection", PhasePoint(-math.pi / 2.0, -1.0)),
    ])
    def test_bracket_magnitude_sqrt_alpha_law(self, symbol_id, rho0):
        model = catalog(symbol_id)
        frame = boundary_frame(model, rho0)
        alphas = np.geomspace(1e-4, 1e-1, 9)
        mags = []
        for alpha in alphas:
            z = frame.gamma + alpha * frame.n
            pair = turning_points(model, z)[0]
            mags.append(pair.bracket_plus)
        slope = np.polyfit(np.log(alphas), np.log(mags), 1)[0]
        assert 0.45 <= slope <= 0.55


class TestBranchFunction:
    def test_first_order_branch_is_exact(self):
        model = catalog("airy-fourier", c=1.0)
        pair, = turning_points(model, 0j)
        br = branch_function(model, 0j, pair)
        # xi = z - g(x) = i x^2 - i
        for x in (-0.5, 0.0, 0.7):
            assert br.eval(x) == pytest.approx(1j * x * x - 1j, abs=1e-14)

    def test_cubic_swapped_axis_branch(self):
        y = 0.09
        z = complex(y, 1.0)
        model = catalog("cubic")
        pair, = turning_points(model, z)
        br = branch_function(model, z, pair)
        assert br.axis is BranchAxis.XI
        # x(xi) = (1 - i y + i xi^2)^{1/3}, principal on this strip
        for t in (-0.2, 0.0, 0.25):
            expected = (1 - 1j * y + 1j * t * t) ** (1.0 / 3.0)
            assert br.eval(t) == pytest.approx(expected, abs=1e-12)

    def test_harmonic_branches(self):
        y = 0.04
        z = complex(1.0, y)
        model = catalog("harmonic")
        b1, b2 = turning_points(model, z)
        br1 = branch_function(model, z, b1)
        br2 = branch_function(model, z, b2)
        for x in (-0.1, 0.0, 0.15):
            w = np.sqrt(1 + 1j * y - 1j * x * x)
            assert br1.eval(x) == pytest.approx(-w, abs=1e-12)
            assert br2.eval(x) == pytest.approx(w, abs=1e-12)

    @pytest.mark.parametrize("symbol_id,z", [
        ("cubic", complex(0.04, 1.0)),
        ("harmonic", complex(1.0, 0.04)),
        ("advection", advection_unscale(0.05)),
        ("airy-fourier", 0j),
    ])
    def test_endpoints_hit_turning_pair(self, symbol_id, z):
        model = catalog(symbol_id)
        for pair in turning_points(model, z):
            br = branch_function(model, z, pair)
            t_m, t_p = pair.axis_coords()
            target_m = (pair.rho_minus.xi if pair.branch_axis is BranchAxis.X
                        else pair.rho_minus.x)
            target_p = (pair.rho_plus.xi if pair.branch_axis is BranchAxis.X
                        else pair.rho_plus.x)
            assert br.eval(t_m) == pytest.approx(target_m, abs=1e-10)
            assert br.eval(t_p) == pytest.approx(target_p, abs=1e-10)

    @pytest.mark.parametrize("symbol_id,z", [
        ("cubic", complex(0.04, 1.0)),
        ("harmonic", complex(1.0, 0.04)),
        ("advection", advection_unscale(0.05)),
    ])
    def test_continuity_on_fine_grid(self, symbol_id, z):
        """Adjacent-sample jumps bounded by the local derivative scale."""
        model = catalog(symbol_id)
        pair = turning_points(model, z)[0]
        br = branch_function(model, z, pair)
        ts = np.linspace(br.domain[0], br.domain[1], 1025)
        vals = np.array([br.eval(float(t)) for t in ts])
        jumps = np.abs(np.diff(vals))
        for i in range(1, len(jumps) - 1):
            local = min(jumps[i - 1], jumps[i + 1]) + 1e-13 * (1 + abs(vals[i]))
            assert jumps[i] <= 10.0 * local
