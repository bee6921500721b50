"""Worked examples: concrete operators bound to scalings, closed norms, grids.

Each example couples a catalog symbol to (i) the scaling that turns a
large spectral parameter into a small-h problem, (ii) the closed-form
log-norm estimate, (iii) a production discretization recipe, and (iv)
its validity strip.  The generic pipeline (turning points -> branch ->
action -> estimate) must reproduce every closed form; that identity is
the central cross-check of the toolkit.

"much smaller" in the validity strips is operationalized as a ratio of
five: lower * 5 <= value and value <= 0.2 * upper.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import quad

from .action import ActionForm, ActionResult, action, action_closed_form
from .asymptotics import (
    AsymptoticEstimate,
    LOG_SQRT_PI,
    assemble_log_leading,
    estimate_double,
    estimate_single,
)
from .branches import branch_function, turning_points
from .errors import BranchTrackingError, CatalogError, DomainError
from .operators import Grid1D, OperatorMatrix, circle_matrix, schrodinger_matrix
from .symbols import SymbolModel, catalog

EXAMPLE_IDS = ("airy", "cubic", "harmonic", "advection", "davies-kuijlaars")

# inward unit normal of the advection range boundary at 1+i
ADVECTION_NORMAL = (-1.0 + 2.0j) / math.sqrt(5.0)
ADVECTION_CORNER = 1.0 + 1.0j


@dataclass(frozen=True)
class ExamplePoint:
    """One spectral-parameter point of a worked example, fully bound."""

    example: str
    z: complex               # physical spectral parameter
    h: float                 # effective semiclassical parameter
    alpha: float             # distance-like parameter (y or alpha)
    estimate: AsymptoticEstimate
    strip_ok: bool
    strip_reason: str


def _shift(est: AsymptoticEstimate, dlog: float) -> AsymptoticEstimate:
    return replace(est, log_leading=est.log_leading + dlog,
                   floor_log=est.floor_log + dlog)


# --- scalings (round-trip exact) -------------------------------------------


def airy_scale(z: complex) -> Tuple[float, float]:
    if z.real <= 0:
        raise DomainError(f"airy scaling requires Re z > 0, got {z}")
    return (z.real ** -1.5, z.imag / z.real)


def airy_unscale(h: float, y: float) -> complex:
    re = h ** (-2.0 / 3.0)
    return complex(re, y * re)


def cubic_scale(z: complex) -> Tuple[float, float]:
    if z.imag <= 0:
        raise DomainError(f"cubic scaling requires Im z > 0, got {z}")
    return (z.imag ** (-5.0 / 6.0), z.real / z.imag)


def cubic_unscale(h: float, y: float) -> complex:
    im = h ** (-1.2)
    return complex(y * im, im)


def harmonic_scale(z: complex) -> Tuple[float, float]:
    if z.real <= 0:
        raise DomainError(f"harmonic scaling requires Re z > 0, got {z}")
    return (1.0 / z.real, z.imag / z.real)


def harmonic_unscale(h: float, y: float) -> complex:
    return complex(1.0 / h, y / h)


def advection_scale(z: complex) -> float:
    return ((z - ADVECTION_CORNER) * ADVECTION_NORMAL.conjugate()).real


def advection_unscale(alpha: float) -> complex:
    return ADVECTION_CORNER + alpha * ADVECTION_NORMAL


# --- closed-form norms ------------------------------------------------------


def airy_norm(z: complex) -> AsymptoticEstimate:
    """Closed-form estimate for D^2 + i x: depends on Re z only."""
    if z.real <= 0:
        raise DomainError(f"airy norm requires Re z > 0, got {z}")
    re = z.real
    return AsymptoticEstimate(
        log_leading=0.5 * math.log(math.pi / 2.0) - 0.25 * math.log(re)
        + (4.0 / 3.0) * re ** 1.5,
        correction_scale=re ** -1.5,
        floor_log=-0.25 * math.log(re),
    )


def cubic_norm(z: complex, variant: str = "exact") -> AsymptoticEstimate:
    """Closed-form estimate for D^2 + i x^3 above the real axis."""
    h, y = cubic_scale(z)
    if variant == "exact":
        f = lambda t: ((1.0 - 1j * y + 1j * t * t) ** (1.0 / 3.0)).imag
        ell, _ = quad(f, math.sqrt(y), -math.sqrt(y), epsabs=1e-13, epsrel=1e-13,
                      limit=200)
    elif variant == "leading":
        ell = (4.0 / 9.0) * y ** 1.5
    else:
        raise CatalogError(f"unknown cubic variant {variant!r}")
    log_leading = (ell / h + LOG_SQRT_PI - 0.5 * math.log(6.0)
                   - (1.0 / 3.0) * math.log(z.imag) - 0.25 * math.log(z.real))
    return AsymptoticEstimate(
        log_leading=log_leading,
        correction_scale=h / y ** 1.5,
        floor_log=-0.5 * math.log(h) - 0.25 * math.log(y) - math.log(z.imag),
    )


def harmonic_norm(z: complex, variant: str = "exact") -> AsymptoticEstimate:
    """Closed-form estimate for D^2 + i x^2 below the diagonal symmetry axis.

    Both quadrant branches contribute equal leading terms near the real
    axis (the two branch actions coincide identically), so the
    branchwise sup is a tie carrying tag 1.
    """
    h, y = harmonic_scale(z)
    if variant == "exact":
        ell = action_closed_form("harmonic-exact", y=y).value
    elif variant == "leading":
        ell = (2.0 / 3.0) * y ** 1.5
    else:
        raise CatalogError(f"unknown harmonic variant {variant!r}")
    log_leading = (ell / h + LOG_SQRT_PI - math.log(2.0)
                   - 0.25 * math.log(z.real) - 0.25 * math.log(z.imag))
    return AsymptoticEstimate(
        log_leading=log_leading,
        correction_scale=h / y ** 1.5,
        floor_log=-0.5 * math.log(h) - 0.25 * math.log(y) - math.log(z.real),
        branch_tag=1,
    )


def harmonic_region(z: complex) -> str:
    """Region classifier for the two harmonic branches."""
    if z.real > 0 and z.imag > 0:
        return "both"
    return "only-1" if z.imag <= 0 else "only-2"


def advection_turning(alpha: float) -> Tuple[float, float, float, float]:
    """(x_plus, x_minus, xi, bracket_plus) for z = corner + alpha * n."""
    z = advection_unscale(alpha)
    xi = -z.imag
    a = -z.real / (z.imag * z.imag)
    if abs(a) > 1.0:
        raise DomainError(f"alpha = {alpha}: point left the range")
    xp = math.asin(a)
    xm = -math.pi - math.asin(a)
    bp = xi * xi * math.sqrt(1.0 - a * a)
    return xp, xm, xi, bp


def advection_action(alpha: float, tol: float = 1e-12) -> float:
    """Im of the oriented action along the implicit branch through -pi/2."""
    z = advection_unscale(alpha)
    xp, xm, _, _ = advection_turning(alpha)

    def phi_im(x):
        w = cmath.sqrt(-1.0 - 4.0 * z * math.sin(x))
        if w.real < 0:          # branch anchored at phi(-pi/2, corner) = -1
            w = -w
        return ((-1j + w) / (2.0 * math.sin(x))).imag

    val, _ = quad(phi_im, xp, xm, epsabs=tol, epsrel=tol, limit=200)
    return val


def advection_norm(alpha: float, h: float) -> AsymptoticEstimate:
    """Estimate for -sin(x)(hD)^2 - i hD at z = (1+i) + alpha * n."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if not h > 0:
        raise DomainError("h must be positive")
    _, _, _, bp = advection_turning(alpha)
    ell = advection_action(alpha)
    return AsymptoticEstimate(
        log_leading=assemble_log_leading(ell, h, bp, -bp),
        correction_scale=h / alpha ** 1.5,
        floor_log=-0.5 * math.log(h) - 0.25 * math.log(alpha),
    )


def dk_growth_rate(theta: float) -> float:
    """Spectral-projection growth rate of D^2 + e^{4 i theta} x^2.

    Closed form 2 Re f(r e^{i theta}) with f(w) = w sqrt(w^2-1) +
    log(w + sqrt(w^2-1)) and r = (2 cos 2 theta)^{-1/2}; the square root
    is continued from the real axis w > 1 (principal branch on the
    locus, where Re(w sqrt(w^2-1)) vanishes identically).  theta = 0 is
    the self-adjoint limit with rate exactly 0.
    """
    if theta < 0 or theta >= math.pi / 4:
        raise DomainError(f"theta must lie in [0, pi/4), got {theta}")
    if theta == 0.0:
        return 0.0
    r = (2.0 * math.cos(2.0 * theta)) ** -0.5
    w = r * cmath.exp(1j * theta)
    sq = cmath.sqrt(w * w - 1.0)
    f = w * sq + cmath.log(w + sq)
    return 2.0 * f.real


def dk_rate_quadrature(theta: float, tol: float = 1e-12) -> float:
    """Quadrature twin of dk_growth_rate: 2 Im int of the momentum branch."""
    if theta < 0 or theta >= math.pi / 4:
        raise DomainError(f"theta must lie in [0, pi/4), got {theta}")
    if theta == 0.0:
        return 0.0
    r = (2.0 * math.cos(2.0 * theta)) ** -0.5
    zz = cmath.exp(1j * theta)

    def f_im(x):
        # continuous branch: 1 - z^2 x^2 stays in the closed lower half plane
        return (zz * cmath.sqrt(1.0 - zz * zz * x * x)).imag

    val, _ = quad(f_im, -r, r, epsabs=tol, epsrel=tol, limit=200)
    return 2.0 * val


# --- validity strips ---------------------------------------------------------


def validity_strip(example: str, z: complex) -> Tuple[bool, str]:
    if example == "airy":
        if z.real <= 1.0:
            return False, "correction-scale-not-small"
        return True, "ok"
    if example == "cubic":
        lo, hi = z.imag ** (4.0 / 9.0), z.imag
        if z.real < 5.0 * lo:
            return False, "re-z-too-small"
        if z.real > 0.2 * hi:
            return False, "re-z-too-large"
        return True, "ok"
    if example == "harmonic":
        lo, hi = z.real ** (1.0 / 3.0), z.real
        if z.imag < 5.0 * lo:
            return False, "im-z-too-small"
        if z.imag > 0.2 * hi:
            return False, "im-z-too-large"
        return True, "ok"
    raise CatalogError(f"no strip for example {example!r}")


def advection_strip(alpha: float, h: float) -> Tuple[bool, str]:
    if alpha >= 1.0:
        return False, "alpha-too-large"
    if h > 0.2 * alpha ** 1.5:
        return False, "h-too-large"
    return True, "ok"


# --- generic pipeline (the independent route to every closed form) ----------


def pipeline_estimate(example: str, z: complex | None = None,
                      alpha: float | None = None, h: float | None = None,
                      tol: float = 1e-12) -> AsymptoticEstimate:
    """Turning points -> branch -> action -> estimate, on the scaled model.

    Must agree with the closed-form route to 1e-9 in log_leading; this is
    the pipeline-vs-algebra identity exercised by the acceptance suite.
    """
    if example == "airy":
        hh, y = airy_scale(z)
        model = catalog("airy-fourier", c=1.0, re_shift=y)
        pair, = turning_points(model, 0.0 + 0.0j)
        br = branch_function(model, 0.0 + 0.0j, pair)
        act = action(model, 0.0 + 0.0j, pair, br, tol=tol)
        est = estimate_single(model, 0.0 + 0.0j, hh, pair, act.value, alpha=1.0)
        return _shift(est, -math.log(z.real))
    if example == "cubic":
        hh, y = cubic_scale(z)
        zs = complex(y, 1.0)
        model = catalog("cubic")
        pair, = turning_points(model, zs)
        br = branch_function(model, zs, pair)
        act = action(model, zs, pair, br, tol=tol)
        est = estimate_single(model, zs, hh, pair, act.value, alpha=y)
        return _shift(est, -math.log(z.imag))
    if example == "harmonic":
        hh, y = harmonic_scale(z)
        zs = complex(1.0, y)
        model = catalog("harmonic")
        pairs = turning_points(model, zs)
        pa = []
        for pr in pairs:
            br = branch_function(model, zs, pr)
            pa.append((pr, action(model, zs, pr, br, tol=tol).value))
        est = estimate_double(model, zs, hh, pa, alphas=[y] * len(pa),
                              region=harmonic_region(zs))
        return _shift(est, -math.log(z.real))
    if example == "advection":
        if alpha is None or h is None:
            raise DomainError("advection pipeline needs alpha and h")
        zz = advection_unscale(alpha)
        model = catalog("advection")
        pair, = turning_points(model, zz)
        br = branch_function(model, zz, pair)
        act = action(model, zz, pair, br, tol=tol)
        return estimate_single(model, zz, h, pair, act.value, alpha=alpha)
    raise CatalogError(f"unknown example {example!r}")


# --- production discretizations ---------------------------------------------


def airy_matrix(z: complex, n: int = 1200) -> OperatorMatrix:
    """D^2 + i x, re-centered at Im z so the active region stays in window.

    The half-width grows linearly in Re z: the minimal singular pair has
    Gaussian tails exp(-x^2 / (4 sqrt(Re z))) that must fall below the
    target sigma_min ~ exp(-(4/3) Re z^{3/2}).
    """
    L = max(12.0, 2.6 * z.real + 2.0)
    c = z.imag
    grid = Grid1D.segment(c - L, c + L, n)
    return schrodinger_matrix(lambda x: 1j * x, 1.0, grid)


def harmonic_matrix(z: complex, n: int = 1200) -> OperatorMatrix:
    turning = math.sqrt(max(z.imag, 1.0))
    L = 3.0 * turning + 2.0 + 6.0 / math.sqrt(max(z.real, 1.0))
    grid = Grid1D.segment(-L, L, n)
    return schrodinger_matrix(lambda x: 1j * x * x, 1.0, grid)


def cubic_matrix(z: complex, n: int = 1200, half_width: float = 2.0) -> OperatorMatrix:
    # modes concentrate in an O((Im z)^{-1/6}) neighborhood of x0
    x0 = z.imag ** (1.0 / 3.0)
    grid = Grid1D.segment(x0 - half_width, x0 + half_width, n)
    return schrodinger_matrix(lambda x: 1j * x ** 3, 1.0, grid)


def advection_matrix(h: float, n: int = 512) -> OperatorMatrix:
    return circle_matrix(h, n)


def example_matrix(example: str, z: complex, n: Optional[int] = None,
                   h: Optional[float] = None) -> OperatorMatrix:
    if example == "airy":
        return airy_matrix(z, n or 1200)
    if example == "cubic":
        return cubic_matrix(z, n or 1200)
    if example == "harmonic":
        return harmonic_matrix(z, n or 1200)
    if example == "advection":
        if h is None:
            raise DomainError("advection matrix needs h")
        return advection_matrix(h, n or 512)
    raise CatalogError(f"no matrix recipe for example {example!r}")


# --- bound points for sweeps and acceptance ----------------------------------


def airy_point(re_z: float, im_z: float = 0.0) -> ExamplePoint:
    z = complex(re_z, im_z)
    est = airy_norm(z)
    ok, reason = validity_strip("airy", z)
    return ExamplePoint("airy", z, z.real ** -1.5, 1.0, est, ok, reason)


def harmonic_point(re_z: float, exponent: float = 8.0) -> ExamplePoint:
    """Harmonic point with Im z chosen so the leading exponent hits `exponent`."""
    y = (1.5 * exponent / re_z) ** (2.0 / 3.0)
    z = complex(re_z, y * re_z)
    est = harmonic_norm(z)
    ok, reason = validity_strip("harmonic", z)
    return ExamplePoint("harmonic", z, 1.0 / re_z, y, est, ok, reason)


def cubic_point(im_z: float, exponent: float = 8.0) -> ExamplePoint:
    h = im_z ** (-5.0 / 6.0)
    y = (2.25 * exponent * h) ** (2.0 / 3.0)
    z = complex(y * im_z, im_z)
    est = cubic_norm(z)
    ok, reason = validity_strip("cubic", z)
    return ExamplePoint("cubic", z, h, y, est, ok, reason)


def advection_point(alpha: float, h_tilde: float = 0.15) -> ExamplePoint:
    h = h_tilde * alpha ** 1.5
    z = advection_unscale(alpha)
    est = advection_norm(alpha, h)
    ok, reason = advection_strip(alpha, h)
    return ExamplePoint("advection", z, h, alpha, est, ok, reason)
