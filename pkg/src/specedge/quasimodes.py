"""WKB quasimodes of the first-order model hD + g(x) on a grid.

The decaying solution anchored at a turning point x_a is

    e(x) = c * exp( -(i/h) * integral_{x_a}^{x} g(y) dy ),

normalized in discrete L^2; the adjoint-side mode uses conj(g).  The
leading analytic normalization is (|Im g'(x_a)| / (pi h))^{1/4}; higher
corrections are replaced by the discrete renormalization.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson, quad, simpson

from .errors import (
    CoverageError,
    DomainError,
    GridMismatchError,
    SideError,
)
from .operators import OperatorMatrix
from .symbols import FirstOrderForm, SymbolModel


class ModeSide(Enum):
    PLUS = "plus"
    MINUS = "minus"


def smoothstep7(t: np.ndarray) -> np.ndarray:
    """Degree-7 smoothstep: C^3 ramp from 0 at t<=0 to 1 at t>=1."""
    s = np.clip(t, 0.0, 1.0)
    return s ** 4 * (35.0 - 84.0 * s + 70.0 * s ** 2 - 20.0 * s ** 3)


def window(x: np.ndarray, flat: tuple[float, float], edge: float) -> np.ndarray:
    """Smooth cutoff: 1 on [a, b], C^3 ramps of width `edge` outside."""
    a, b = flat
    if edge <= 0:
        raise DomainError("edge width must be positive")
    return smoothstep7((x - (a - edge)) / edge) * smoothstep7(((b + edge) - x) / edge)


@dataclass(frozen=True)
class WkbMode:
    grid: np.ndarray
    values: np.ndarray
    h: float
    turning_point: float
    normalization: float          # analytic leading constant, includes h^{-1/4}
    side: ModeSide
    normalization_discrete: float

    @property
    def dx(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def discrete_l2(self) -> float:
        return float(np.sqrt(simpson(np.abs(self.values) ** 2, dx=self.dx)))

    def envelope_ok(self, factor: float = 2.0) -> bool:
        """Monotone decay (up to `factor`) beyond sqrt(h) ln(1/h) from the anchor."""
        d0 = math.sqrt(self.h) * math.log(1.0 / self.h)
        mags = np.abs(self.values)
        right = np.where(self.grid >= self.turning_point + d0)[0]
        left = np.where(self.grid <= self.turning_point - d0)[0]
        ok = True
        if len(right) > 1:
            ok &= bool(np.all(mags[right][1:] <= factor * mags[right][:-1]))
        if len(left) > 1:
            seg = mags[left][::-1]
            ok &= bool(np.all(seg[1:] <= factor * seg[:-1]))
        return ok


def build_mode(model: SymbolModel, h: float, anchor: float, side: ModeSide,
               interval: tuple[float, float], n_points: int) -> WkbMode:
    """Construct the normalized quasimode of hD + g (or its adjoint) on a grid.

    The phase integral is accumulated once by cumulative Simpson; the
    values are then rescaled to unit discrete L^2 norm.
    """
    st = model.structure
    if not isinstance(st, FirstOrderForm):
        raise DomainError(f"{model.label}: quasimodes require a first-order model")
    if not h > 0:
        raise DomainError("h must be positive")
    dslope = st.dg(anchor).imag
    if side is ModeSide.PLUS and not dslope < 0:
        raise SideError(f"plus mode needs Im g'(anchor) < 0, got {dslope}")
    if side is ModeSide.MINUS and not dslope > 0:
        raise SideError(f"minus mode needs Im g'(anchor) > 0, got {dslope}")
    a, b = interval
    width = math.sqrt(h / abs(dslope))
    if not (a <= anchor - 6 * width and anchor + 6 * width <= b):
        raise CoverageError(
            f"interval ({a}, {b}) too small: needs anchor +- {6 * width:.4f}"
        )
    x = np.linspace(a, b, n_points)
    gx = np.array([st.g(t) for t in x], dtype=complex)
    if side is ModeSide.MINUS:
        gx = gx.conjugate()
    dx = float(x[1] - x[0])
    # cumulative_simpson works on real arrays only
    phase = (cumulative_simpson(gx.real, dx=dx, initial=0.0)
             + 1j * cumulative_simpson(gx.imag, dx=dx, initial=0.0))
    # re-anchor the phase integral at the turning point
    phase = phase - np.interp(anchor, x, phase.real) - 1j * np.interp(anchor, x, phase.imag)
    # the interval must stay inside the decay region of this mode: mass
    # picked up away from the anchor (e.g. past the opposite turning point,
    # where the solution regrows) would contaminate the normalization
    max_im = float(np.max(phase.imag))
    if max_im > 10.0 * h:
        raise CoverageError(
            "interval reaches the growth region of the opposite turning point"
        )
    outside = np.abs(x - anchor) > 6.0 * width
    if np.any(outside):
        core_sq = math.sqrt(math.pi * h / abs(dslope))
        tail_sq = float(np.sum(np.exp(2.0 * (phase.imag[outside] - max_im) / h))) * dx
        if tail_sq > 1e-4 * core_sq:
            raise CoverageError(
                "interval carries non-negligible mass away from the anchor"
            )
    u = np.exp(-1j * phase / h)
    nrm = float(np.sqrt(simpson(np.abs(u) ** 2, dx=float(x[1] - x[0]))))
    c0 = (abs(dslope) / math.pi) ** 0.25 * h ** -0.25
    return WkbMode(grid=x, values=u / nrm, h=h, turning_point=anchor,
                   normalization=c0, side=side, normalization_discrete=1.0 / nrm)


def residual(op_matrix: OperatorMatrix, mode: WkbMode,
             cutoff: np.ndarray | Callable[[np.ndarray], np.ndarray]) -> float:
    """|| A (chi * mode) || / || chi * mode || in discrete L^2."""
    if op_matrix.n != len(mode.grid) or not np.allclose(
            op_matrix.grid.points, mode.grid, rtol=0, atol=1e-12):
        raise GridMismatchError("operator and mode grids differ")
    chi = cutoff(mode.grid) if callable(cutoff) else np.asarray(cutoff)
    v = chi * mode.values
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        raise DomainError("cutoff annihilates the mode (zero norm)")
    return float(np.linalg.norm(op_matrix.entries @ v)) / nv


def e_minus_plus_log_magnitude(model: SymbolModel, z: complex, h: float,
                               pair, action_value: float, alpha: float) -> float:
    """log|E_-+|: the negative of the leading log-norm (shared code path)."""
    from .asymptotics import estimate_single
    est = estimate_single(model, z, h, pair, action_value, alpha)
    return -est.log_leading


def stationary_phase_leading(phase: Callable[[float], complex],
                             amplitude: Callable[[float], complex], h: float,
                             second_deriv: complex | None = None) -> complex:
    """Leading term (2 pi i h)^{1/2} phi''(0)^{-1/2} a(0) of int e^{i phi/h} a.

    Requires phi(0) = phi'(0) = 0, phi''(0) != 0 and Im phi >= 0 on the
    support; the square root takes the branch with positive real part,
    which is the principal branch of sqrt(i/phi''(0)) under Im phi >= 0.
    """
    if not h > 0:
        raise DomainError("h must be positive")
    s = 1e-6
    p0 = complex(phase(0.0))
    dp = (complex(phase(s)) - complex(phase(-s))) / (2 * s)
    if abs(p0) > 1e-10 or abs(dp) > 1e-8:
        raise DomainError(f"phase must have a critical zero at 0 (phi(0)={p0}, phi'(0)={dp})")
    if second_deriv is None:
        s2 = 1e-4
        second_deriv = (complex(phase(s2)) - 2 * p0 + complex(phase(-s2))) / (s2 * s2)
    if abs(second_deriv) < 1e-12:
        raise DomainError("degenerate critical point: |phi''(0)| below tolerance")
    root = cmath.sqrt(1j / second_deriv)
    if root.real < 0:
        root = -root
    return math.sqrt(2.0 * math.pi * h) * root * complex(amplitude(0.0))


def oscillatory_quadrature(phase: Callable[[float], complex],
                           amplitude: Callable[[float], complex], h: float,
                           support: tuple[float, float], tol: float = 1e-12) -> complex:
    """Direct adaptive quadrature of int e^{i phi/h} a dx, the oracle twin
    of stationary_phase_leading."""
    f_re = lambda t: (cmath.exp(1j * complex(phase(t)) / h) * complex(amplitude(t))).real
    f_im = lambda t: (cmath.exp(1j * complex(phase(t)) / h) * complex(amplitude(t))).imag
    a, b = support
    re, _ = quad(f_re, a, b, epsabs=tol, epsrel=tol, limit=200)
    im, _ = quad(f_im, a, b, epsabs=tol, epsrel=tol, limit=200)
    return complex(re, im)
