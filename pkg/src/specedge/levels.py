"""Level sets of the numeric resolvent norm and their closed-form laws.

A level curve at eps is the set where sigma_min(A - z) = eps.  Inside
the validity strips the curves are graphs over one coordinate axis, so
tracing reduces to a bisection transverse to the curve per scan line:
fixed-Re scans for the harmonic operator, fixed-Im for the cubic one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AccuracyError, CatalogError, DomainError, FitError

LEVELS_CSV_HEADER = "eps,axis,axis_value,re_z,im_z,source"


class ScanAxis(Enum):
    FIXED_RE = "fixed-re"
    FIXED_IM = "fixed-im"


@dataclass(frozen=True)
class LevelCurvePoint:
    z: complex
    eps: float
    source: str               # "numeric" | "asymptotic"
    scan_axis: ScanAxis
    found: bool = True
    note: str = ""

    def csv_row(self) -> str:
        axis_value = self.z.real if self.scan_axis is ScanAxis.FIXED_RE else self.z.imag
        return ",".join([
            repr(float(self.eps)), self.scan_axis.value, repr(float(axis_value)),
            repr(float(self.z.real)), repr(float(self.z.imag)), self.source,
        ])


def write_levels_csv(path, points: Sequence[LevelCurvePoint]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(LEVELS_CSV_HEADER + "\n")
        for p in points:
            if p.found:
                fh.write(p.csv_row() + "\n")


def trace_numeric(sigma_fn: Callable[[complex], float], eps: float,
                  scan_axis: ScanAxis, axis_values: Sequence[float],
                  bracket_fn: Callable[[float], Tuple[float, float]],
                  rel_tol: float = 1e-3, max_iters: int = 80) -> List[LevelCurvePoint]:
    """Per scan line, bisect the transverse coordinate until sigma_min = eps.

    `bracket_fn` maps the axis value to a transverse bracket (lo, hi)
    with sigma(lo) > eps > sigma(hi) expected; brackets without a sign
    change are reported as not-found, never guessed.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    out: List[LevelCurvePoint] = []
    for av in axis_values:
        lo, hi = bracket_fn(av)

        def z_at(t: float) -> complex:
            return complex(av, t) if scan_axis is ScanAxis.FIXED_RE else complex(t, av)

        f_lo = sigma_fn(z_at(lo)) - eps
        f_hi = sigma_fn(z_at(hi)) - eps
        if f_lo == 0.0:
            out.append(LevelCurvePoint(z_at(lo), eps, "numeric", scan_axis))
            continue
        if f_hi == 0.0:
            out.append(LevelCurvePoint(z_at(hi), eps, "numeric", scan_axis))
            continue
        if f_lo * f_hi > 0:
            out.append(LevelCurvePoint(z_at(lo), eps, "numeric", scan_axis,
                                       found=False, note="no-sign-change"))
            continue
        a, b, fa = lo, hi, f_lo
        point = None
        for _ in range(max_iters):
            m = 0.5 * (a + b)
            fm = sigma_fn(z_at(m)) - eps
            if abs(fm) <= eps * rel_tol:
                point = LevelCurvePoint(z_at(m), eps, "numeric", scan_axis)
                break
            if fa * fm < 0:
                b = m
            else:
                a, fa = m, fm
        if point is None:
            raise AccuracyError(f"bisection did not converge on scan line {av}")
        out.append(point)
    return out


def level_asymptotic(example_id: str, eps: float, axis_value: float) -> LevelCurvePoint:
    """Closed-form inversion of the level law (precise, non-collapsed
    coefficients).  Flagged not-found before the logarithm degenerates."""
    if eps <= 0:
        raise DomainError("eps must be positive")
    if example_id == "harmonic":
        re_z = axis_value
        arg = re_z ** (1.0 / 3.0) / eps
        if arg <= math.e:
            return LevelCurvePoint(complex(re_z, 0.0), eps, "asymptotic",
                                   ScanAxis.FIXED_RE, found=False, note="log-degenerate")
        im_z = 1.5 ** (2.0 / 3.0) * re_z ** (1.0 / 3.0) * math.log(arg) ** (2.0 / 3.0)
        return LevelCurvePoint(complex(re_z, im_z), eps, "asymptotic", ScanAxis.FIXED_RE)
    if example_id == "cubic":
        im_z = axis_value
        arg = im_z ** (4.0 / 9.0) / eps
        if arg <= math.e:
            return LevelCurvePoint(complex(0.0, im_z), eps, "asymptotic",
                                   ScanAxis.FIXED_IM, found=False, note="log-degenerate")
        re_z = 2.25 ** (2.0 / 3.0) * im_z ** (4.0 / 9.0) * math.log(arg) ** (2.0 / 3.0)
        return LevelCurvePoint(complex(re_z, im_z), eps, "asymptotic", ScanAxis.FIXED_IM)
    raise CatalogError(f"no level law for example {example_id!r}")


def fit_growth(points: Sequence[LevelCurvePoint], law: str):
    """Least squares in log coordinates against the level-law shape.

    law "harmonic": Im z = C * (Re z)^q * (ln((Re z)^{1/3}/eps))^{2/3}
    law "cubic":    Re z = C * (Im z)^q * (ln((Im z)^{4/9}/eps))^{2/3}

    Returns (coefficient, exponent, r_squared); the fitted exponent
    cross-checks 1/3 (harmonic) or 4/9 (cubic).
    """
    pts = [p for p in points if p.found]
    if len(pts) < 4:
        raise FitError(f"need at least 4 points, got {len(pts)}")
    if law == "harmonic":
        axis = np.array([p.z.real for p in pts])
        trans = np.array([p.z.imag for p in pts])
        logln = np.array([math.log(math.log(p.z.real ** (1.0 / 3.0) / p.eps))
                          for p in pts])
    elif law == "cubic":
        axis = np.array([p.z.imag for p in pts])
        trans = np.array([p.z.real for p in pts])
        logln = np.array([math.log(math.log(p.z.imag ** (4.0 / 9.0) / p.eps))
                          for p in pts])
    else:
        raise CatalogError(f"unknown law {law!r}")
    if np.any(trans <= 0) or np.any(axis <= 0):
        raise FitError("level points must have positive coordinates")
    y = np.log(trans) - (2.0 / 3.0) * logln
    X = np.column_stack([np.ones(len(pts)), np.log(axis)])
    if np.linalg.matrix_rank(X) < 2:
        raise FitError("degenerate design matrix (axis values coincide)")
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return (math.exp(beta[0]), float(beta[1]), r2)
