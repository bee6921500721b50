"""Discretizations, resolvent norms, sweeps, and the extended-precision path."""

import math

import numpy as np
import pytest

from specedge import xprec
from specedge.errors import DomainError
from specedge.examples import airy_matrix, airy_norm, harmonic_matrix
from specedge.operators import (
    Boundary,
    CSV_HEADER,
    Grid1D,
    GridKind,
    OperatorMatrix,
    circle_matrix,
    first_order_matrix,
    resolvent_norm,
    schrodinger_matrix,
    sweep,
    write_samples_csv,
)


class TestGrid:
    def test_spacing(self):
        seg = Grid1D.segment(-1.0, 1.0, 21)
        assert seg.dx == pytest.approx(0.1)
        circ = Grid1D.circle(64)
        assert circ.dx == pytest.approx(2 * math.pi / 64)
        assert len(circ.points) == 64

    def test_too_small(self):
        with pytest.raises(DomainError):
            Grid1D.segment(0.0, 1.0, 8)


def normal_test_matrix(n=64, seed=3):
    rng = np.random.default_rng(seed)
    lam = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    A = q @ np.diag(lam) @ q.conj().T
    grid = Grid1D.segment(0.0, 1.0, n)
    return OperatorMatrix(entries=A, grid=grid, h=1.0, family="normal-test",
                          boundary=Boundary.DIRICHLET), lam


class TestResolventNorm:
    def test_diagonal_example(self):
        entries = np.diag(np.arange(1.0, 17.0).astype(complex))
        A = OperatorMatrix(entries=entries, grid=Grid1D.segment(0, 1, 16), h=1.0,
                           family="diag", boundary=Boundary.DIRICHLET)
        s = resolvent_norm(A, 0j)
        assert s.sigma_min == pytest.approx(1.0, abs=1e-12)
        assert s.norm_numeric == pytest.approx(1.0, abs=1e-12)
        assert s.norm_numeric * s.sigma_min == pytest.approx(1.0, abs=1e-12)

    def test_normal_matrix_exactness(self):
        A, lam = normal_test_matrix()
        for z in (0.2 + 0.1j, -1.0 + 0.5j):
            s = resolvent_norm(A, z)
            assert s.norm_numeric == pytest.approx(1.0 / np.min(np.abs(lam - z)), rel=1e-10)

    def test_spectrum_sentinel(self):
        entries = np.diag(np.arange(1.0, 17.0).astype(complex))
        A = OperatorMatrix(entries=entries, grid=Grid1D.segment(0, 1, 16), h=1.0,
                           family="diag", boundary=Boundary.DIRICHLET)
        s = resolvent_norm(A, 1.0 + 0j)
        assert s.sigma_min == 0.0 and s.in_spectrum and not s.valid

    def test_selfadjoint_harmonic_oscillator(self):
        # distance to the spectrum {2n+1} from z = 0 is 1
        grid = Grid1D.segment(-12.0, 12.0, 800)
        A = schrodinger_matrix(lambda x: x * x + 0j, 1.0, grid)
        s = resolvent_norm(A, 0j)
        assert s.norm_numeric == pytest.approx(1.0, abs=1e-3)

    def test_resolution_warning_flags_sample(self):
        grid = Grid1D.segment(-12.0, 12.0, 100)
        A = schrodinger_matrix(lambda x: 1j * x, 1.0, grid)
        s = resolvent_norm(A, complex(100.0, 0.0))
        assert not s.valid


class TestAiry:
    def test_matches_closed_form_at_four(self):
        z = complex(4.0, 0.0)
        s = resolvent_norm(airy_matrix(z, n=800), z)
        rel = abs(s.log_norm_numeric - airy_norm(z).log_leading) / s.log_norm_numeric
        assert rel <= 0.03

    def test_re_z_invariance(self):
        z0, z1 = complex(5.0, 0.0), complex(5.0, 10.0)
        s0 = resolvent_norm(airy_matrix(z0), z0)
        s1 = resolvent_norm(airy_matrix(z1), z1)
        assert abs(s0.norm_numeric - s1.norm_numeric) / s0.norm_numeric <= 1e-3

    def test_grid_convergence(self):
        z = complex(5.0, 0.0)
        a = resolvent_norm(airy_matrix(z, n=1200), z).log_norm_numeric
        b = resolvent_norm(airy_matrix(z, n=2400), z).log_norm_numeric
        assert abs(a - b) / abs(a) <= 0.01

    def test_domain_doubling(self):
        z = complex(5.0, 0.0)
        a = resolvent_norm(airy_matrix(z, n=1200), z).log_norm_numeric
        L = max(12.0, 2.6 * z.real + 2.0)
        wide = schrodinger_matrix(lambda x: 1j * x, 1.0,
                                  Grid1D.segment(-2 * L, 2 * L, 2400))
        b = resolvent_norm(wide, z).log_norm_numeric
        assert abs(a - b) / abs(a) <= 0.005


class TestHarmonicSymmetry:
    def test_reflection_example(self):
        z1 = complex(30.0, 8.0)
        z2 = 1j * z1.conjugate()
        L = 3.0 * math.sqrt(30.0) + 3.0
        A = schrodinger_matrix(lambda x: 1j * x * x, 1.0, Grid1D.segment(-L, L, 1200))
        n1 = resolvent_norm(A, z1).norm_numeric
        n2 = resolvent_norm(A, z2).norm_numeric
        assert abs(n1 - n2) / n1 <= 1e-4

    def test_reflection_invariant_larger_z(self):
        z1 = complex(100.0, 20.0)
        z2 = 1j * z1.conjugate()
        L = 3.0 * math.sqrt(100.0) + 3.0
        A = schrodinger_matrix(lambda x: 1j * x * x, 1.0, Grid1D.segment(-L, L, 2800))
        n1 = resolvent_norm(A, z1).norm_numeric
        n2 = resolvent_norm(A, z2).norm_numeric
        assert abs(n1 - n2) / n1 <= 1e-3


class TestFirstOrder:
    def test_elliptic_h_minus_two_thirds(self):
        # quadratic model at alpha = 0: norm scales like h^{-2/3}
        logs, hs = [], [0.02, 0.01, 0.005, 0.0025]
        grid = Grid1D.segment(-3.0, 3.0, 1500)
        for h in hs:
            A = first_order_matrix(lambda x: 1j * x * x, h, grid)
            logs.append(resolvent_norm(A, 0j).log_norm_numeric)
        slope = np.polyfit(np.log(hs), logs, 1)[0]
        assert -0.75 <= slope <= -0.58

    def test_airy_model_vs_estimate(self):
        h = 0.125
        grid = Grid1D.segment(-3.0, 3.0, 1200)
        A = first_order_matrix(lambda x: -1j * x * x + 1j, h, grid)
        s = resolvent_norm(A, 0j)
        asym = ((4.0 / 3.0) / h + 0.5 * math.log(math.pi)
                - 0.5 * math.log(h) - 0.25 * math.log(4.0))
        assert abs(s.log_norm_numeric - asym) / s.log_norm_numeric <= 0.05

    def test_constant_symbol_normal(self):
        grid = Grid1D.segment(-3.0, 3.0, 400)
        A = first_order_matrix(lambda x: np.full(x.shape, 0.3 + 0.5j), 0.1, grid)
        s = resolvent_norm(A, 0j)
        assert s.norm_numeric == pytest.approx(2.0, rel=1e-3)


class TestCircle:
    def test_annihilates_constants(self):
        A = circle_matrix(0.05, 128)
        assert np.max(np.abs(A.entries @ np.ones(128))) <= 1e-10

    def test_power_of_two_required(self):
        with pytest.raises(DomainError):
            circle_matrix(0.05, 100)

    def test_range_containment(self):
        # norms blow up only inside |Re z| < (Im z)^2
        h = 1.0 / 64.0
        A = circle_matrix(h, 512)
        inside = (1 + 1j) + 0.15 * (-1 + 2j) / math.sqrt(5)
        outside = complex(1.5, 1.0)
        n_in = resolvent_norm(A, inside).norm_numeric
        n_out = resolvent_norm(A, outside).norm_numeric
        assert n_in > 30.0 * n_out
        assert n_out < 30.0


class TestSweep:
    def test_singleton(self):
        A, _ = normal_test_matrix()
        zs = [0.4 + 0.2j]
        assert sweep(A, zs)[0].sigma_min == resolvent_norm(A, zs[0]).sigma_min

    def test_deterministic_across_workers(self):
        grid = Grid1D.segment(-12.0, 12.0, 400)
        A = schrodinger_matrix(lambda x: 1j * x, 1.0, grid)
        zs = [complex(3.0 + 0.1 * k, 0.0) for k in range(20)]
        s1 = sweep(A, zs, workers=1)
        s4 = sweep(A, zs, workers=4)
        assert all(a.sigma_min == b.sigma_min for a, b in zip(s1, s4))

    def test_permutation_equivariance(self):
        A, _ = normal_test_matrix()
        zs = [complex(0.1 * k, 0.05 * k) for k in range(10)]
        fwd = sweep(A, zs, workers=2)
        rev = sweep(A, list(reversed(zs)), workers=2)
        assert all(a.sigma_min == b.sigma_min for a, b in zip(fwd, reversed(rev)))

    def test_empty_rejected(self):
        A, _ = normal_test_matrix()
        with pytest.raises(DomainError):
            sweep(A, [])

    def test_errors_collected_not_fatal(self):
        A, _ = normal_test_matrix()
        out = sweep(A, [0.1 + 0j, complex(math.nan, 0.0)], workers=1)
        assert out[0].error is None
        assert out[1].error is not None and not out[1].valid


class TestCsv:
    def test_header_and_rows(self, tmp_path):
        A, lam = normal_test_matrix()
        samples = sweep(A, [0.2 + 0.1j, 0.5 - 0.3j], alphas=[0.1, 0.2])
        path = tmp_path / "out.csv"
        write_samples_csv(path, samples)
        lines = path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3
        fields = lines[1].split(",")
        assert len(fields) == 9
        assert fields[8] in ("0", "1")
        assert fields[6] == "" and fields[7] == ""  # asym fields empty
        assert float(fields[4]) == samples[0].sigma_min  # round-trip repr


class TestXprec:
    def test_banded_solve_matches_dense(self):
        rng = np.random.default_rng(11)
        n, kl, ku = 50, 2, 2
        M = np.zeros((n, n), dtype=complex)
        for off in range(-kl, ku + 1):
            d = rng.standard_normal(n - abs(off)) + 1j * rng.standard_normal(n - abs(off))
            M += np.diag(d, off)
        b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        lu, piv = xprec.gbtrf(xprec.band_from_dense(M, kl, ku), n, kl, ku)
        x = np.asarray(xprec.gbtrs(lu, piv, n, kl, ku, b.astype(np.clongdouble)),
                       dtype=complex)
        assert np.linalg.norm(x - np.linalg.solve(M, b)) <= 1e-12 * np.linalg.norm(x)

    def test_sigma_min_matches_dense_svd(self):
        rng = np.random.default_rng(12)
        n = 64
        M = np.zeros((n, n), dtype=complex)
        for off in range(-2, 3):
            d = rng.standard_normal(n - abs(off)) + 1j * rng.standard_normal(n - abs(off))
            M += np.diag(d, off)
        sd = np.linalg.svd(M, compute_uv=False)[-1]
        assert xprec.sigma_min_banded(M, 2, 2) == pytest.approx(sd, rel=1e-9)
