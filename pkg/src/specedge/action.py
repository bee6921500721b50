"""Action integrals between turning points, in both 1-form flavors.

The quantity that controls resolvent growth is the imaginary part of the
line integral of xi dx (equivalently x dxi) along the branch joining the
turning pair.  Orientation is fixed so the value is nonnegative strictly
inside the range near the boundary:

    xi dx : integrate from rho_plus to rho_minus,
    x dxi : integrate from rho_minus to rho_plus.

Both conventions agree exactly whenever the turning points are real,
since the integration-by-parts boundary term Im(x*xi) then vanishes.
The reported number is always the imaginary part (named im_action where
ambiguity could arise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np
from scipy.integrate import quad

from .errors import AccuracyError, CatalogError, DomainError
from .branches import BranchAxis, BranchFunction, TurningPair
from .symbols import PhasePoint, SymbolModel


class ActionForm(Enum):
    XI_DX = "xi-dx"
    X_DXI = "x-dxi"
    CLOSED = "closed-form"


@dataclass(frozen=True)
class ActionResult:
    value: float                # Im of the oriented line integral
    form: ActionForm
    abs_error_estimate: float


_MAX_SUBDIVISIONS = 60


def _quad_im(f, a: float, b: float, tol: float) -> Tuple[float, float]:
    val, err = quad(f, a, b, epsabs=tol, epsrel=tol, limit=_MAX_SUBDIVISIONS)
    if err > 10.0 * tol * (1.0 + abs(val)):
        raise AccuracyError(
            f"quadrature error {err:.3e} exceeds tolerance {tol:.3e}",
            best_estimate=val, error_estimate=err,
        )
    return val, err


def _endpoint_derivative_blows_up(f, a: float, b: float) -> bool:
    # compare one-sided slopes at the endpoints with the interior scale
    h = (b - a) * 1e-6
    if h == 0:
        return False
    mid = 0.5 * (a + b)
    interior = abs(f(mid + h) - f(mid - h)) / (2 * h) + 1e-300
    left = abs(f(a + h) - f(a)) / h
    right = abs(f(b) - f(b - h)) / h
    return max(left, right) > 100.0 * (interior + 1.0)


def action(model: SymbolModel, z: complex, pair: TurningPair,
           branch: BranchFunction, tol: float = 1e-10,
           form: ActionForm | None = None) -> ActionResult:
    """Adaptive quadrature of the oriented action along the branch.

    `form` defaults to the branch's native 1-form (xi dx for an x-axis
    branch, x dxi for a xi-axis branch).  The dual form is evaluated on
    the same parameterization through the implicit derivative
    d(other)/dt = -p_t / p_other along p = z.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    t_m, t_p = branch.t_minus, branch.t_plus
    native = ActionForm.XI_DX if branch.axis is BranchAxis.X else ActionForm.X_DXI
    if form is None:
        form = native

    if t_m == t_p:
        return ActionResult(0.0, form, 0.0)

    if form == native:
        # orientation: xi dx runs rho_+ -> rho_-, x dxi runs rho_- -> rho_+
        a, b = (t_p, t_m) if form is ActionForm.XI_DX else (t_m, t_p)
        f = lambda t: branch.eval(t).imag
    else:
        # dual 1-form on the same parameterization
        if model.px is None or model.pxi is None:
            raise DomainError("dual form requires analytic partials (branch values are complex)")
        if branch.axis is BranchAxis.X:
            # x dxi = t * phi'(t) dt with phi' = -p_x/p_xi on the branch
            def f(t):
                v = branch.eval(t)
                return (t * (-model.px(t, v) / model.pxi(t, v))).imag
            a, b = t_m, t_p
        else:
            # xi dx = t * psi'(t) dt with psi' = -p_xi/p_x on the branch
            def f(t):
                v = branch.eval(t)
                return (t * (-model.pxi(v, t) / model.px(v, t))).imag
            a, b = t_p, t_m

    if _endpoint_derivative_blows_up(f, min(a, b), max(a, b)):
        val, err = _quad_sqrt_endpoints(f, a, b, tol)
    else:
        val, err = _quad_im(f, a, b, tol)
    return ActionResult(val, form, err)


def _quad_sqrt_endpoints(f, a: float, b: float, tol: float) -> Tuple[float, float]:
    """Split at the midpoint and substitute t = endpoint -+ u^2 on each half."""
    m = 0.5 * (a + b)
    sgn = 1.0 if b >= a else -1.0
    ua = math.sqrt(abs(m - a))
    ub = math.sqrt(abs(b - m))
    # left half: t = a + sgn*u^2, u in [0, ua]
    f1 = lambda u: f(a + sgn * u * u) * 2.0 * u
    # right half: t = b - sgn*u^2, u in [0, ub]
    f2 = lambda u: f(b - sgn * u * u) * 2.0 * u
    v1, e1 = _quad_im(f1, 0.0, ua, tol / 2)
    v2, e2 = _quad_im(f2, 0.0, ub, tol / 2)
    return sgn * (v1 + v2), e1 + e2


def dual_action_check(model: SymbolModel, z: complex, pair: TurningPair,
                      branch: BranchFunction, tol: float = 1e-10):
    """Both 1-form actions and their discrepancy (exact equality holds for
    real turning points, up to quadrature error)."""
    native = action(model, z, pair, branch, tol=tol)
    other_form = ActionForm.X_DXI if native.form is ActionForm.XI_DX else ActionForm.XI_DX
    dual = action(model, z, pair, branch, tol=tol, form=other_form)
    if native.form is ActionForm.XI_DX:
        v_xidx, v_xdxi = native.value, dual.value
    else:
        v_xidx, v_xdxi = dual.value, native.value
    return v_xidx, v_xdxi, abs(v_xidx - v_xdxi)


# --- closed forms -----------------------------------------------------------


def action_closed_form(example_id: str, **params) -> ActionResult:
    """Closed-form action specializations.

    ids: "harmonic-exact" (y), "harmonic-leading" (y), "cubic-leading" (y),
    "airy" (re_z), "davies-kuijlaars" (theta).
    """
    if example_id == "harmonic-exact":
        y = float(params["y"])
        w = np.exp(1j * np.pi / 4) * np.sqrt(y) / np.sqrt(1 + 1j * y)
        # arcsin via the principal log form -i log(iw + sqrt(1 - w^2))
        val = (np.exp(-1j * np.pi / 4) * (1 + 1j * y) * np.arcsin(w)).imag
        return ActionResult(float(val), ActionForm.CLOSED, 1e-15 * (1 + abs(val)))
    if example_id == "harmonic-leading":
        y = float(params["y"])
        return ActionResult((2.0 / 3.0) * y ** 1.5, ActionForm.CLOSED, 0.0)
    if example_id == "cubic-leading":
        y = float(params["y"])
        return ActionResult((4.0 / 9.0) * y ** 1.5, ActionForm.CLOSED, 0.0)
    if example_id == "airy":
        re_z = float(params["re_z"])
        if re_z <= 0:
            raise DomainError("airy closed form requires Re z > 0")
        return ActionResult((4.0 / 3.0) * re_z ** 1.5, ActionForm.CLOSED, 0.0)
    if example_id == "davies-kuijlaars":
        from .examples import dk_growth_rate  # deferred: examples imports this module
        theta = float(params["theta"])
        return ActionResult(0.5 * dk_growth_rate(theta), ActionForm.CLOSED, 1e-14)
    raise CatalogError(f"unknown closed-form id {example_id!r}")
