"""Turning points of p(rho) = z and the branch functions joining them.

Strictly inside the range near an order-2 boundary point the fiber
p^{-1}(z) consists of two real phase points rho_+ and rho_- carrying
opposite signs of the half-bracket; they merge on the boundary and split
like alpha^{1/2} inside.  Between them runs a complex branch, either
xi = phi(x, z) or x = psi(xi, z) depending on which partial of p is
nondegenerate at the boundary point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Tuple

import numpy as np

from .errors import (
    BranchTrackingError,
    DegenerateBoundaryError,
    DomainError,
    NoTurningPointsError,
    TooCloseToBoundaryError,
)
from .symbols import (
    AdvectionCircleForm,
    BoundaryFrame,
    FirstOrderForm,
    PhasePoint,
    SchrodingerForm,
    SymbolModel,
    poisson_half,
    second_bracket,
)


class BranchAxis(Enum):
    X = "integrate-in-x"
    XI = "integrate-in-xi"


@dataclass(frozen=True)
class TurningPair:
    """The two roots of p = z, classified by half-bracket sign."""

    rho_plus: PhasePoint
    rho_minus: PhasePoint
    bracket_plus: float
    bracket_minus: float
    branch_axis: BranchAxis
    z: complex
    branch_tag: int | None = None

    def __post_init__(self):
        # hard classification invariants
        assert self.bracket_plus > 0.0, "bracket_plus must be positive"
        assert self.bracket_minus < 0.0, "bracket_minus must be negative"

    def axis_coords(self) -> Tuple[float, float]:
        """(t at rho_minus, t at rho_plus) along the branch axis."""
        if self.branch_axis is BranchAxis.X:
            return (self.rho_minus.x, self.rho_plus.x)
        return (self.rho_minus.xi, self.rho_plus.xi)


@dataclass(frozen=True)
class BranchFunction:
    """Continuous branch of the other coordinate along p = z.

    axis X:  eval(t) = xi value at x = t, with p(t, eval(t)) = z
    axis XI: eval(t) = x value at xi = t, with p(eval(t), t) = z
    """

    axis: BranchAxis
    eval: Callable[[float], complex]
    t_minus: float  # coordinate of rho_minus
    t_plus: float   # coordinate of rho_plus
    domain: Tuple[float, float]


# --- root finding: bracketed bisection, then Newton polish -----------------


def bracketed_root(f, df, lo: float, hi: float, *, bisect_iters: int = 80,
                   newton_tol: float = 1e-12) -> float:
    """Find a root of real f on [lo, hi] with f(lo)*f(hi) <= 0.

    Bisection isolates the root, a short Newton iteration polishes it to
    |f| <= newton_tol * scale.  Robustness first, speed second.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise NoTurningPointsError(f"no sign change on [{lo}, {hi}]")
    a, b = lo, hi
    fa = flo
    for _ in range(bisect_iters):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            a = b = m
            break
        if fa * fm < 0:
            b = m
        else:
            a, fa = m, fm
        if b - a < 1e-13 * (1.0 + abs(a) + abs(b)):
            break
    x = 0.5 * (a + b)
    scale = 1.0 + abs(f(lo)) + abs(f(hi))
    for _ in range(8):
        fx = f(x)
        if abs(fx) <= newton_tol * scale:
            break
        d = df(x)
        if d == 0:
            break
        step = fx / d
        if not math.isfinite(step) or abs(step) > (hi - lo):
            break
        x -= step
    return x


def _scan_roots(f, df, window: Tuple[float, float], n_scan: int = 128) -> List[float]:
    """All simple roots of f in the window, via sign-change scan + bisection."""
    lo, hi = window
    ts = np.linspace(lo, hi, n_scan + 1)
    vals = np.array([f(t) for t in ts])
    roots = []
    for i in range(n_scan):
        if vals[i] == 0.0:
            roots.append(float(ts[i]))
        elif vals[i] * vals[i + 1] < 0:
            roots.append(bracketed_root(f, df, float(ts[i]), float(ts[i + 1])))
    if vals[-1] == 0.0:
        roots.append(float(ts[-1]))
    # dedupe near-coincident roots
    out: List[float] = []
    for r in sorted(roots):
        if not out or abs(r - out[-1]) > 1e-9 * (1.0 + abs(r)):
            out.append(r)
    return out


# --- turning points --------------------------------------------------------


def _classify_pair(model: SymbolModel, pts: List[PhasePoint], z: complex,
                   axis: BranchAxis, tag: int | None = None) -> TurningPair:
    if len(pts) != 2:
        raise NoTurningPointsError(f"expected 2 phase points, got {len(pts)}")
    brackets = [poisson_half(model, q) for q in pts]
    scale = max(1e-30, max(abs(b) for b in brackets))
    tol = 1e-12 * (1.0 + abs(z))
    if min(abs(b) for b in brackets) < tol or brackets[0] * brackets[1] >= 0:
        raise TooCloseToBoundaryError(
            f"{model.label}: bracket values {brackets} too small or same-signed at z={z}"
        )
    if brackets[0] > 0:
        plus, minus = pts[0], pts[1]
        bp, bm = brackets[0], brackets[1]
    else:
        plus, minus = pts[1], pts[0]
        bp, bm = brackets[1], brackets[0]
    return TurningPair(rho_plus=plus, rho_minus=minus, bracket_plus=bp,
                       bracket_minus=bm, branch_axis=axis, z=z, branch_tag=tag)


def turning_points(model: SymbolModel, z: complex) -> List[TurningPair]:
    """Locate the phase-space roots of p = z and classify them.

    Returns a single pair for one-branch symbols and two tagged pairs for
    the harmonic symbol (both quadrant branches).  Residuals are polished
    to |p(rho) - z| <= 1e-10 * (1 + |z|).
    """
    st = model.structure
    if st is None:
        raise DomainError(f"{model.label}: no explicit structure for root finding")

    if isinstance(st, FirstOrderForm):
        f = lambda x: (st.g(x)).imag - z.imag
        df = lambda x: (st.dg(x)).imag
        roots = _scan_roots(f, df, st.window(z))
        if len(roots) != 2:
            raise NoTurningPointsError(
                f"{model.label}: found {len(roots)} roots of Im g = Im z at z={z}"
            )
        pts = [PhasePoint(x, z.real - st.g(x).real) for x in roots]
        pair = _classify_pair(model, pts, z, BranchAxis.X)
        _check_residuals(model, pair, z)
        return [pair]

    if isinstance(st, SchrodingerForm):
        f = lambda x: (st.potential(x)).imag - z.imag
        df = lambda x: (st.d_potential(x)).imag
        roots = _scan_roots(f, df, st.window(z))
        pairs: List[TurningPair] = []
        if len(roots) == 1:
            x0 = roots[0]
            s2 = z.real - st.potential(x0).real
            if s2 <= 0:
                raise NoTurningPointsError(f"{model.label}: xi^2 = {s2} <= 0 at z={z}")
            xi0 = math.sqrt(s2)
            pts = [PhasePoint(x0, -xi0), PhasePoint(x0, xi0)]
            pairs.append(_classify_pair(model, pts, z, BranchAxis.XI))
        elif len(roots) == 2:
            xis = []
            for x0 in roots:
                s2 = z.real - st.potential(x0).real
                if s2 <= 0:
                    raise NoTurningPointsError(f"{model.label}: xi^2 = {s2} <= 0 at z={z}")
                xis.append(math.sqrt(s2))
            # branch 1: xi < 0, branch 2: xi > 0
            pts1 = [PhasePoint(roots[0], -xis[0]), PhasePoint(roots[1], -xis[1])]
            pts2 = [PhasePoint(roots[0], xis[0]), PhasePoint(roots[1], xis[1])]
            pairs.append(_classify_pair(model, pts1, z, BranchAxis.X, tag=1))
            pairs.append(_classify_pair(model, pts2, z, BranchAxis.X, tag=2))
        else:
            raise NoTurningPointsError(
                f"{model.label}: found {len(roots)} x-roots at z={z}"
            )
        for pair in pairs:
            _check_residuals(model, pair, z)
        return pairs

    if isinstance(st, AdvectionCircleForm):
        if z.imag == 0:
            raise NoTurningPointsError("advection: Im z = 0 is the degenerate corner")
        xi = -z.imag
        a = -z.real / (z.imag * z.imag)
        if abs(a) > 1.0:
            raise NoTurningPointsError(
                f"advection: |Re z|/(Im z)^2 = {abs(a):.6f} > 1, z outside the range"
            )
        xp = math.asin(a)
        xm = -math.pi - math.asin(a)  # same circle point as pi - asin(a)
        pts = [PhasePoint(xp, xi), PhasePoint(xm, xi)]
        pair = _classify_pair(model, pts, z, BranchAxis.X)
        _check_residuals(model, pair, z)
        return [pair]

    raise DomainError(f"{model.label}: unsupported structure {type(st).__name__}")


def _check_residuals(model: SymbolModel, pair: TurningPair, z: complex) -> None:
    tol = 1e-10 * (1.0 + abs(z))
    for q in (pair.rho_plus, pair.rho_minus):
        r = abs(model.value(q) - z)
        if r > tol:
            raise NoTurningPointsError(
                f"{model.label}: residual |p(rho)-z| = {r:.3e} exceeds {tol:.3e}"
            )


def approx_turning_small_alpha(model: SymbolModel, frame: BoundaryFrame,
                               rho0: PhasePoint, alpha: float) -> Tuple[float, float]:
    """Leading-order turning coordinates for small alpha.

    Along the branch axis t (x if |p_xi| >= |p_x| at rho0, else xi via the
    swap p(x, xi) -> p(-xi, x)):

        t_pm = t0 +- eps * alpha^{1/2} * |pd| * (2 / |{p,(1/2i){p,conj p}}|)^{1/2} + O(alpha)

    with pd the nondegenerate partial and eps the sign of the (real)
    ratio of the second bracket to pd.
    """
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    sb = second_bracket(model, rho0)
    if abs(sb) < 1e-12:
        raise DegenerateBoundaryError(f"{model.label}: second bracket vanishes at {rho0}")
    px = model.d_x(rho0)
    pxi = model.d_xi(rho0)
    if abs(pxi) >= abs(px):
        t0, pd = rho0.x, pxi
    else:
        # swapped axis: phat(x, xi) = p(-xi, x), so phat_xi = -p_x
        t0, pd = rho0.xi, -px
    ratio = sb / pd
    if abs(ratio.imag) > 1e-6 * abs(ratio):
        raise DomainError(
            f"{model.label}: second-bracket/partial ratio not real ({ratio}); "
            "point is not on the boundary curve"
        )
    eps = math.copysign(1.0, ratio.real)
    delta = eps * math.sqrt(alpha) * abs(pd) * math.sqrt(2.0 / abs(sb))
    return (t0 + delta, t0 - delta)


# --- branch functions -------------------------------------------------------


def _continued_track(candidates: Callable[[float], List[complex]],
                     ts: np.ndarray, anchor_index: int, anchor_value: complex) -> np.ndarray:
    """Track the branch closest to a running reference, outward from an anchor."""
    vals = np.empty(len(ts), dtype=complex)
    vals[anchor_index] = min(candidates(ts[anchor_index]),
                             key=lambda c: abs(c - anchor_value))
    for i in range(anchor_index + 1, len(ts)):
        vals[i] = min(candidates(ts[i]), key=lambda c: abs(c - vals[i - 1]))
    for i in range(anchor_index - 1, -1, -1):
        vals[i] = min(candidates(ts[i]), key=lambda c: abs(c - vals[i + 1]))
    return vals


def _check_continuity(ts: np.ndarray, vals: np.ndarray, label: str) -> None:
    # a genuine branch jump shows as an isolated spike in adjacent differences
    jumps = np.abs(np.diff(vals))
    if len(jumps) < 3:
        return
    for i in range(1, len(jumps) - 1):
        local = min(jumps[i - 1], jumps[i + 1]) + 1e-14 * (1.0 + np.abs(vals[i]))
        if jumps[i] > 10.0 * local and jumps[i] > 1e-8 * (1.0 + np.abs(vals[i])):
            raise BranchTrackingError(
                f"{label}: branch jump {jumps[i]:.3e} at t={ts[i]:.6f}"
            )


def branch_function(model: SymbolModel, z: complex, pair: TurningPair,
                    n_grid: int = 1024) -> BranchFunction:
    """Construct the continuous branch joining the turning pair.

    The branch is anchored at the rho_minus endpoint and continued by
    nearest-value tracking on a reference grid; eval(t) disambiguates
    multivalued roots against the nearest reference sample.
    """
    st = model.structure
    t_m, t_p = pair.axis_coords()
    lo, hi = (t_m, t_p) if t_m <= t_p else (t_p, t_m)
    ts = np.linspace(lo, hi, n_grid + 1)

    if isinstance(st, FirstOrderForm):
        fn = lambda t: z - st.g(t)
        branch_eval = fn
        vals = np.array([fn(t) for t in ts])
    elif isinstance(st, SchrodingerForm) and pair.branch_axis is BranchAxis.X:
        def candidates(t):
            w = cmath.sqrt(z - st.potential(t))
            return [w, -w]

        anchor_val = complex(pair.rho_minus.xi)
        idx = 0 if abs(ts[0] - t_m) < abs(ts[-1] - t_m) else n_grid
        vals = _continued_track(candidates, ts, idx, anchor_val)
        branch_eval = _gridded_eval(candidates, ts, vals)
    elif isinstance(st, SchrodingerForm) and pair.branch_axis is BranchAxis.XI:
        def candidates(t):
            # x solves V(x) = z - t^2; cube-root family for the cubic symbol
            w = -1j * (z - t * t)
            r = w ** (1.0 / 3.0)
            om = cmath.exp(2j * math.pi / 3.0)
            return [r, r * om, r * om * om]

        anchor_val = complex(pair.rho_minus.x)
        idx = 0 if abs(ts[0] - t_m) < abs(ts[-1] - t_m) else n_grid
        vals = _continued_track(candidates, ts, idx, anchor_val)
        branch_eval = _gridded_eval(candidates, ts, vals)
    elif isinstance(st, AdvectionCircleForm):
        def candidates(t):
            s = math.sin(t)
            w = cmath.sqrt(-1.0 - 4.0 * z * s)
            return [(-1j + w) / (2.0 * s), (-1j - w) / (2.0 * s)]

        # anchor at the interior point x = -pi/2 where the branch value is
        # (-i + sqrt(-1+4z))/(-2) with the principal (Re > 0) square root
        w0 = cmath.sqrt(-1.0 + 4.0 * z)
        if w0.real < 0:
            w0 = -w0
        anchor_val = (-1j + w0) / (-2.0)
        idx = int(np.argmin(np.abs(ts - (-math.pi / 2.0))))
        vals = _continued_track(candidates, ts, idx, anchor_val)
        branch_eval = _gridded_eval(candidates, ts, vals)
    else:
        raise DomainError(f"{model.label}: no branch rule for this structure/axis")

    _check_continuity(ts, vals, model.label)
    _check_branch_endpoints(model, z, pair, branch_eval)
    return BranchFunction(axis=pair.branch_axis, eval=branch_eval,
                          t_minus=t_m, t_plus=t_p, domain=(lo, hi))


def _gridded_eval(candidates, ts: np.ndarray, vals: np.ndarray):
    lo, hi = ts[0], ts[-1]
    n = len(ts) - 1

    def eval_fn(t: float) -> complex:
        tt = min(max(t, lo), hi)
        i = int(round((tt - lo) / (hi - lo) * n)) if hi > lo else 0
        return min(candidates(t), key=lambda c: abs(c - vals[i]))

    return eval_fn


def _check_branch_endpoints(model: SymbolModel, z: complex, pair: TurningPair,
                            eval_fn) -> None:
    tol = 1e-10 * (1.0 + abs(z))
    t_m, t_p = pair.axis_coords()
    if pair.branch_axis is BranchAxis.X:
        targets = [(t_m, pair.rho_minus.xi), (t_p, pair.rho_plus.xi)]
    else:
        targets = [(t_m, pair.rho_minus.x), (t_p, pair.rho_plus.x)]
    for t, target in targets:
        v = eval_fn(t)
        if abs(v - target) > 1e-8 * (1.0 + abs(target)):
            raise BranchTrackingError(
                f"{model.label}: branch endpoint {v} does not match turning point {target}"
            )
    # spot-check the defining equation on a few interior samples
    for t in np.linspace(t_m, t_p, 7):
        v = eval_fn(float(t))
        pv = model.p(float(t), v) if pair.branch_axis is BranchAxis.X else model.p(v, float(t))
        if abs(pv - z) > max(tol, 1e-9 * (1.0 + abs(z))):
            raise BranchTrackingError(
                f"{model.label}: branch residual {abs(pv - z):.3e} at t={t}"
            )
