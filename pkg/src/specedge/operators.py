"""Dense discretizations of the concrete operators and numeric resolvent norms.

Segment operators use central finite differences (order 2 or 4) with
Dirichlet truncation; the circle operator uses exact Fourier collocation.
The numeric resolvent norm is 1/sigma_min(A - z), from a full dense SVD,
with an extended-precision banded refinement when the computed value
sinks toward the SVD noise floor eps * sigma_max.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import DomainError
from . import xprec

CSV_HEADER = "re_z,im_z,h,alpha,sigma_min,log_norm_numeric,log_norm_asym,floor_log,valid"

# refine sigma_min in extended precision below this fraction of sigma_max
_NOISE_GUARD = 1e-8


class GridKind(Enum):
    SEGMENT = "segment"
    CIRCLE = "circle"


class Boundary(Enum):
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class Grid1D:
    kind: GridKind
    a: float
    b: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise DomainError(f"grid too small: n = {self.n} < 16")
        if self.b <= self.a:
            raise DomainError("grid requires b > a")

    @property
    def dx(self) -> float:
        if self.kind is GridKind.CIRCLE:
            return (self.b - self.a) / self.n
        return (self.b - self.a) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        if self.kind is GridKind.CIRCLE:
            return self.a + self.dx * np.arange(self.n)
        return np.linspace(self.a, self.b, self.n)

    @classmethod
    def segment(cls, a: float, b: float, n: int) -> "Grid1D":
        return cls(GridKind.SEGMENT, a, b, n)

    @classmethod
    def circle(cls, n: int) -> "Grid1D":
        return cls(GridKind.CIRCLE, 0.0, 2.0 * math.pi, n)


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray
    grid: Grid1D
    h: float
    family: str
    boundary: Boundary
    bandwidth: Optional[int] = None   # None means dense (no band structure)
    resolution_warning: bool = False

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def points_per_wavelength(self, z: complex) -> float:
        """Grid points per local wavelength 2*pi*h/sqrt(|z|)."""
        if z == 0:
            return math.inf
        return 2.0 * math.pi * self.h / math.sqrt(abs(z)) / self.grid.dx


@dataclass(frozen=True)
class ResolventSample:
    z: complex
    h: float
    alpha: Optional[float]
    sigma_min: float
    norm_numeric: float
    log_norm_numeric: float
    log_norm_asym: Optional[float] = None
    floor_log: Optional[float] = None
    valid: bool = True
    in_spectrum: bool = False
    error: Optional[str] = None

    def csv_row(self) -> str:
        def fmt(v):
            return "" if v is None else repr(float(v))

        return ",".join([
            repr(float(self.z.real)), repr(float(self.z.imag)),
            repr(float(self.h)), fmt(self.alpha), repr(float(self.sigma_min)),
            repr(float(self.log_norm_numeric)), fmt(self.log_norm_asym),
            fmt(self.floor_log), "1" if self.valid else "0",
        ])


def write_samples_csv(path, samples: Sequence[ResolventSample],
                      extra_header: str = "", extra_cols=None) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + (("," + extra_header) if extra_header else "") + "\n")
        for i, s in enumerate(samples):
            row = s.csv_row()
            if extra_cols is not None:
                row += "," + ",".join(repr(float(c)) for c in extra_cols[i])
            fh.write(row + "\n")


# --- matrix builders --------------------------------------------------------


_D2_STENCILS = {
    2: ([1.0, -2.0, 1.0], 1),
    4: ([-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12], 2),
}

_D1_STENCIL_4 = ([1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12], 2)


def _banded_toeplitz(n: int, coeffs, halfw: int, scale: complex) -> np.ndarray:
    A = np.zeros((n, n), dtype=complex)
    for k, c in enumerate(coeffs):
        off = k - halfw
        if c == 0.0:
            continue
        A += np.diag(np.full(n - abs(off), scale * c), off)
    return A


def schrodinger_matrix(potential: Callable[[np.ndarray], np.ndarray], h: float,
                       grid: Grid1D, order: int = 4) -> OperatorMatrix:
    """(h D)^2 + V(x) with Dirichlet truncation on a segment grid."""
    if grid.kind is not GridKind.SEGMENT:
        raise DomainError("schrodinger_matrix requires a segment grid")
    if order not in _D2_STENCILS:
        raise DomainError(f"unsupported FD order {order}")
    if not h > 0:
        raise DomainError("h must be positive")
    coeffs, halfw = _D2_STENCILS[order]
    x = grid.points
    A = _banded_toeplitz(grid.n, [-c for c in coeffs], halfw, h * h / grid.dx ** 2)
    A += np.diag(np.asarray(potential(x), dtype=complex))
    return OperatorMatrix(entries=A, grid=grid, h=h, family="schrodinger",
                          boundary=Boundary.DIRICHLET, bandwidth=halfw)


def first_order_matrix(gtilde: Callable[[np.ndarray], np.ndarray], h: float,
                       grid: Grid1D) -> OperatorMatrix:
    """h D + gtilde(x) with 4th-order central differences, Dirichlet."""
    if grid.kind is not GridKind.SEGMENT:
        raise DomainError("first_order_matrix requires a segment grid")
    coeffs, halfw = _D1_STENCIL_4
    x = grid.points
    # hD = (h/i) d/dx
    A = _banded_toeplitz(grid.n, coeffs, halfw, h / (1j * grid.dx))
    A += np.diag(np.asarray(gtilde(x), dtype=complex))
    return OperatorMatrix(entries=A, grid=grid, h=h, family="first-order",
                          boundary=Boundary.DIRICHLET, bandwidth=halfw)


def circle_matrix(h: float, n: int = 512) -> OperatorMatrix:
    """-sin(x) (hD)^2 - i hD on the circle via Fourier collocation."""
    if n & (n - 1) != 0:
        raise DomainError(f"circle grid size must be a power of two, got {n}")
    grid = Grid1D.circle(n)
    x = grid.points
    k = np.fft.fftfreq(n, d=1.0 / n)
    eye = np.eye(n)
    F = np.fft.fft(eye, axis=0)
    Finv = np.fft.ifft(eye, axis=0)
    k1 = 1j * k
    k1[n // 2] = 0.0                      # zero Nyquist for the odd-order derivative
    D1 = Finv @ np.diag(k1) @ F
    D2 = Finv @ np.diag(-(k ** 2)) @ F
    # L u = h^2 sin(x) u'' - h u'
    L = (h * h) * (np.sin(x)[:, None] * D2) - h * D1
    return OperatorMatrix(entries=L, grid=grid, h=h, family="advection",
                          boundary=Boundary.PERIODIC, bandwidth=None)


# --- resolvent norms --------------------------------------------------------


def resolvent_norm(A: OperatorMatrix, z: complex,
                   alpha: Optional[float] = None,
                   refine: bool = True) -> ResolventSample:
    """ResolventSample at z: sigma_min(A - z) and its reciprocal.

    For banded matrices, a computed sigma_min below _NOISE_GUARD *
    sigma_max triggers the extended-precision refinement (the dense SVD
    cannot certify singular values below eps * sigma_max).
    """
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"z must be finite, got {z}")
    M = A.entries - z * np.eye(A.n)
    if A.n > 2048 and A.bandwidth is not None:
        # smallest-singular-triplet iteration instead of the dense SVD
        sigma = xprec.sigma_min_banded(M, A.bandwidth, A.bandwidth)
        sigma_max = float(np.max(np.sum(np.abs(M), axis=1)))  # row-sum bound
    else:
        svals = np.linalg.svd(M, compute_uv=False)
        sigma_max, sigma = float(svals[0]), float(svals[-1])
        if refine and A.bandwidth is not None and sigma < _NOISE_GUARD * sigma_max:
            sigma = xprec.sigma_min_banded(M, A.bandwidth, A.bandwidth)
    warn = A.points_per_wavelength(z) < 8.0
    if sigma <= 0.0 or sigma < 1e-18 * sigma_max:
        return ResolventSample(z=z, h=A.h, alpha=alpha, sigma_min=0.0,
                               norm_numeric=math.inf, log_norm_numeric=math.inf,
                               valid=False, in_spectrum=True)
    return ResolventSample(z=z, h=A.h, alpha=alpha, sigma_min=sigma,
                           norm_numeric=1.0 / sigma,
                           log_norm_numeric=-math.log(sigma),
                           valid=not warn)


def sweep(A: OperatorMatrix, z_list: Sequence[complex], workers: int = 1,
          alphas: Optional[Sequence[float]] = None) -> List[ResolventSample]:
    """Order-preserving parallel map of resolvent_norm over z_list.

    Samples are independent and each SVD call is deterministic, so the
    result is identical for any worker count.  Per-sample failures are
    collected into error-bearing samples, not raised.
    """
    if len(z_list) == 0:
        raise DomainError("z_list must be nonempty")

    def one(i: int) -> ResolventSample:
        a = alphas[i] if alphas is not None else None
        try:
            return resolvent_norm(A, z_list[i], alpha=a)
        except Exception as exc:  # collected, not fatal
            return ResolventSample(z=z_list[i], h=A.h, alpha=a, sigma_min=math.nan,
                                   norm_numeric=math.nan, log_norm_numeric=math.nan,
                                   valid=False, error=str(exc))

    if workers <= 1:
        return [one(i) for i in range(len(z_list))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(len(z_list))))
