"""1D classical symbols p(x, xi) and the boundary-curve frame.

A symbol is a smooth complex-valued function on phase space.  The two
quantities driving everything else are the half-bracket

    (1/2i){p, conj p}(rho) = Im( p_xi * conj(p_x) ),

which measures local non-normality and vanishes on the boundary of the
range, and the second bracket {p, (1/2i){p, conj p}}, whose negative is
the tangent of the boundary curve.  The inward unit normal n = i*u then
charts nearby spectral parameters as z = gamma(s) + alpha*n(s).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import CatalogError, DegenerateBoundaryError, DomainError, EvaluationError

ComplexFn = Callable[[float, float], complex]


@dataclass(frozen=True)
class PhasePoint:
    """A point rho = (x, xi) in real phase space."""

    x: float
    xi: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.xi)):
            raise DomainError(f"phase point must be finite, got ({self.x}, {self.xi})")

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.xi)


# --- explicit structure hints used by root finding and branch tracking ---


@dataclass(frozen=True)
class SchrodingerForm:
    """p = xi^2 + V(x) with complex potential V."""

    potential: Callable[[float], complex]
    d_potential: Callable[[float], complex]
    # half-open search window for the x-roots of Im V(x) = Im z
    window: Callable[[complex], tuple[float, float]]


@dataclass(frozen=True)
class FirstOrderForm:
    """p = xi + g(x)."""

    g: Callable[[float], complex]
    dg: Callable[[float], complex]
    window: Callable[[complex], tuple[float, float]]


@dataclass(frozen=True)
class AdvectionCircleForm:
    """p = -sin(x) xi^2 - i xi on the circle; turning points near x = -pi/2."""


Structure = object  # SchrodingerForm | FirstOrderForm | AdvectionCircleForm


@dataclass(frozen=True)
class SymbolModel:
    """A symbol with first/second partials, analytic or finite-difference.

    Analytic partials are used when supplied; otherwise central
    differences with step `fd_step` stand in.  `corrections` holds the
    lower-order terms entering the operator at relative order h^(2+k);
    they do not influence the principal-symbol geometry.
    """

    label: str
    p: ComplexFn
    px: Optional[ComplexFn] = None
    pxi: Optional[ComplexFn] = None
    pxx: Optional[ComplexFn] = None
    pxxi: Optional[ComplexFn] = None
    pxixi: Optional[ComplexFn] = None
    fd_step: float = 1e-5
    corrections: tuple = ()
    structure: Optional[Structure] = None

    # -- evaluation ----------------------------------------------------

    def value(self, rho: PhasePoint) -> complex:
        v = complex(self.p(rho.x, rho.xi))
        if not cmath.isfinite(v):
            raise EvaluationError(f"{self.label}: non-finite value", rho=rho)
        return v

    def d_x(self, rho: PhasePoint) -> complex:
        if self.px is not None:
            return self._checked(self.px(rho.x, rho.xi), rho)
        s = self.fd_step
        return self._checked(
            (self.p(rho.x + s, rho.xi) - self.p(rho.x - s, rho.xi)) / (2 * s), rho
        )

    def d_xi(self, rho: PhasePoint) -> complex:
        if self.pxi is not None:
            return self._checked(self.pxi(rho.x, rho.xi), rho)
        s = self.fd_step
        return self._checked(
            (self.p(rho.x, rho.xi + s) - self.p(rho.x, rho.xi - s)) / (2 * s), rho
        )

    def d_xx(self, rho: PhasePoint) -> complex:
        if self.pxx is not None:
            return self._checked(self.pxx(rho.x, rho.xi), rho)
        s = self.fd_step
        return self._checked(
            (self.p(rho.x + s, rho.xi) - 2 * self.p(rho.x, rho.xi) + self.p(rho.x - s, rho.xi))
            / (s * s),
            rho,
        )

    def d_xxi(self, rho: PhasePoint) -> complex:
        if self.pxxi is not None:
            return self._checked(self.pxxi(rho.x, rho.xi), rho)
        s = self.fd_step
        return self._checked(
            (
                self.p(rho.x + s, rho.xi + s)
                - self.p(rho.x + s, rho.xi - s)
                - self.p(rho.x - s, rho.xi + s)
                + self.p(rho.x - s, rho.xi - s)
            )
            / (4 * s * s),
            rho,
        )

    def d_xixi(self, rho: PhasePoint) -> complex:
        if self.pxixi is not None:
            return self._checked(self.pxixi(rho.x, rho.xi), rho)
        s = self.fd_step
        return self._checked(
            (self.p(rho.x, rho.xi + s) - 2 * self.p(rho.x, rho.xi) + self.p(rho.x, rho.xi - s))
            / (s * s),
            rho,
        )

    def _checked(self, v: complex, rho: PhasePoint) -> complex:
        v = complex(v)
        if not cmath.isfinite(v):
            raise EvaluationError(f"{self.label}: non-finite partial", rho=rho)
        return v

    def conjugated(self) -> "SymbolModel":
        """The symbol conj(p) on real phase space (partials conjugate too)."""

        def wrap(f):
            if f is None:
                return None
            return lambda x, xi: complex(f(x, xi)).conjugate()

        return SymbolModel(
            label=f"conj({self.label})",
            p=wrap(self.p),
            px=wrap(self.px),
            pxi=wrap(self.pxi),
            pxx=wrap(self.pxx),
            pxxi=wrap(self.pxxi),
            pxixi=wrap(self.pxixi),
            fd_step=self.fd_step,
        )


@dataclass(frozen=True)
class BoundaryFrame:
    """Tangent/normal frame of the range boundary at gamma(s)."""

    s: float
    gamma: complex
    gamma_dot: complex
    u: complex
    n: complex


@dataclass(frozen=True)
class SpectralParameter:
    """Spectral parameter z = gamma(s) + alpha*n(s) with semiclassical h."""

    z: complex
    s: float
    alpha: float
    h: float

    def __post_init__(self):
        if self.alpha < 0:
            raise DomainError(f"alpha must be nonnegative, got {self.alpha}")
        if not self.h > 0:
            raise DomainError(f"h must be positive, got {self.h}")

    @classmethod
    def from_chart(cls, frame: BoundaryFrame, alpha: float, h: float) -> "SpectralParameter":
        z = chart_to_z(frame, alpha)
        return cls(z=z, s=frame.s, alpha=alpha, h=h)


# --- operations -----------------------------------------------------------


def poisson_half(model: SymbolModel, rho: PhasePoint) -> float:
    """(1/2i){p, conj p}(rho) = Im( p_xi * conj(p_x) ).

    Real-valued; antisymmetric under p <-> conj p.
    """
    return (model.d_xi(rho) * model.d_x(rho).conjugate()).imag


def second_bracket(model: SymbolModel, rho: PhasePoint) -> complex:
    """{p, (1/2i){p, conj p}}(rho), the Hamilton field of p applied to the half-bracket."""
    px = model.d_x(rho)
    pxi = model.d_xi(rho)
    pxx = model.d_xx(rho)
    pxxi = model.d_xxi(rho)
    pxixi = model.d_xixi(rho)
    # b(x, xi) = Im(p_xi conj(p_x)); chain rule on each slot
    db_dx = (pxxi * px.conjugate() + pxi * pxx.conjugate()).imag
    db_dxi = (pxixi * px.conjugate() + pxi * pxxi.conjugate()).imag
    return pxi * db_dx - px * db_dxi


def boundary_frame(model: SymbolModel, rho_s: PhasePoint, s: float = 0.0) -> BoundaryFrame:
    """Boundary frame at a bracket-zero point: gamma_dot = -{p,(1/2i){p,conj p}}, n = i*u.

    Raises DegenerateBoundaryError when the second bracket (and with it
    gamma_dot) vanishes, i.e. the order-2 hypothesis fails.
    """
    px = model.d_x(rho_s)
    pxi = model.d_xi(rho_s)
    half = poisson_half(model, rho_s)
    tol = 1e-8 * (1.0 + abs(pxi) * abs(px))
    if abs(half) > tol:
        raise DomainError(
            f"{model.label}: point not on the bracket-zero curve (|half bracket|={abs(half):.3e})"
        )
    gd = -second_bracket(model, rho_s)
    if abs(gd) < 1e-10 * (1.0 + abs(px) + abs(pxi)):
        raise DegenerateBoundaryError(
            f"{model.label}: |gamma_dot| = {abs(gd):.3e}, boundary not of order 2"
        )
    u = gd / abs(gd)
    return BoundaryFrame(s=s, gamma=model.value(rho_s), gamma_dot=gd, u=u, n=1j * u)


def chart_to_z(frame: BoundaryFrame, alpha: float) -> complex:
    """z = gamma(s) + alpha * n(s) for alpha >= 0."""
    if alpha < 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    return frame.gamma + alpha * frame.n


# --- built-in catalog -----------------------------------------------------


def _airy_fourier(c: float = 1.0, re_shift: float = 0.0) -> SymbolModel:
    # p = xi + g(x), g = -i x^2 + i c - re_shift
    def g(x):
        return -1j * x * x + 1j * c - re_shift

    def dg(x):
        return -2j * x

    return SymbolModel(
        label="airy-fourier",
        p=lambda x, xi: xi + g(x),
        px=lambda x, xi: dg(x),
        pxi=lambda x, xi: 1.0 + 0j,
        pxx=lambda x, xi: -2j,
        pxxi=lambda x, xi: 0j,
        pxixi=lambda x, xi: 0j,
        structure=FirstOrderForm(
            g=g, dg=dg, window=lambda z: (-3.0, 3.0)
        ),
    )


def _cubic() -> SymbolModel:
    def V(x):
        return 1j * x ** 3

    def dV(x):
        return 3j * x * x

    def window(z):
        x0 = math.copysign(abs(z.imag) ** (1.0 / 3.0), z.imag) if z.imag != 0 else 0.0
        w = max(1.0, abs(x0))
        return (x0 - 1.5 * w, x0 + 1.5 * w)

    return SymbolModel(
        label="cubic",
        p=lambda x, xi: xi * xi + 1j * x ** 3,
        px=lambda x, xi: 3j * x * x,
        pxi=lambda x, xi: 2.0 * xi,
        pxx=lambda x, xi: 6j * x,
        pxxi=lambda x, xi: 0j,
        pxixi=lambda x, xi: 2.0 + 0j,
        structure=SchrodingerForm(potential=V, d_potential=dV, window=window),
    )


def _harmonic() -> SymbolModel:
    def V(x):
        return 1j * x * x

    def dV(x):
        return 2j * x

    def window(z):
        r = math.sqrt(max(z.imag, 0.0))
        w = max(1.0, r)
        return (-2.0 * w, 2.0 * w)

    return SymbolModel(
        label="harmonic",
        p=lambda x, xi: xi * xi + 1j * x * x,
        px=lambda x, xi: 2j * x,
        pxi=lambda x, xi: 2.0 * xi,
        pxx=lambda x, xi: 2j,
        pxxi=lambda x, xi: 0j,
        pxixi=lambda x, xi: 2.0 + 0j,
        structure=SchrodingerForm(potential=V, d_potential=dV, window=window),
    )


def _advection() -> SymbolModel:
    return SymbolModel(
        label="advection",
        p=lambda x, xi: -math.sin(x) * xi * xi - 1j * xi,
        px=lambda x, xi: -math.cos(x) * xi * xi + 0j,
        pxi=lambda x, xi: -2.0 * math.sin(x) * xi - 1j,
        pxx=lambda x, xi: math.sin(x) * xi * xi + 0j,
        pxxi=lambda x, xi: -2.0 * math.cos(x) * xi + 0j,
        pxixi=lambda x, xi: -2.0 * math.sin(x) + 0j,
        structure=AdvectionCircleForm(),
    )


def _model_first_order(expr: str = "quadratic-well", **params) -> SymbolModel:
    if expr == "quadratic-well":
        # g = i (x^2 - alpha): bracket-zero point at the origin for alpha = 0
        alpha = float(params.get("alpha", 0.0))

        def g(x):
            return 1j * (x * x - alpha)

        def dg(x):
            return 2j * x

        ddg = 2j
        window = lambda z: (-3.0 - math.sqrt(alpha), 3.0 + math.sqrt(alpha))
    elif expr == "linear-imag":
        def g(x):
            return 1j * x

        def dg(x):
            return 1j

        ddg = 0j
        window = lambda z: (-3.0, 3.0)
    elif expr == "constant":
        c = complex(params.get("c", 1j))

        def g(x):
            return c

        def dg(x):
            return 0j

        ddg = 0j
        window = lambda z: (-3.0, 3.0)
    else:
        raise CatalogError(f"unknown first-order expression {expr!r}")

    return SymbolModel(
        label=f"model-first-order:{expr}",
        p=lambda x, xi: xi + g(x),
        px=lambda x, xi: dg(x),
        pxi=lambda x, xi: 1.0 + 0j,
        pxx=lambda x, xi: ddg,
        pxxi=lambda x, xi: 0j,
        pxixi=lambda x, xi: 0j,
        structure=FirstOrderForm(g=g, dg=dg, window=window),
    )


_CATALOG = {
    "airy-fourier": _airy_fourier,
    "cubic": _cubic,
    "harmonic": _harmonic,
    "advection": _advection,
    "model-first-order": _model_first_order,
}


def catalog(symbol_id: str, **params) -> SymbolModel:
    """Look up a built-in symbol by id.

    Ids: "airy-fourier", "cubic", "harmonic", "advection",
    "model-first-order" (with expr= one of "quadratic-well",
    "linear-imag", "constant").
    """
    try:
        builder = _CATALOG[symbol_id]
    except KeyError:
        raise CatalogError(f"unknown symbol id {symbol_id!r}") from None
    return builder(**params)
