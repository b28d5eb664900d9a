"""Eigensolver checks against a hand-written Jacobi oracle, plus the
convergence protocol on analytically solvable limits."""

import numpy as np
import pytest

from gaugebench.errors import DomainError, NumericalError
from gaugebench.hamiltonians import Gauge, ModelParams, build_factored, resonant_geometry
from gaugebench.operators import MatterBasisSpec, PhotonBasisSpec
from gaugebench.spectrum import (
    _lobpcg_lowest,
    converge_gap,
    eigensolve_symmetric,
    lanczos_lowest,
    lowest_gap_factored,
    relative_error,
)


def jacobi_eigenvalues(mat, tol=1e-14, max_sweeps=100):
    """Cyclic Jacobi rotations on a real symmetric matrix, from scratch.

    Independent of LAPACK; used as the oracle for the production solver.
    """
    a = np.array(mat, dtype=float)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off < tol * max(1.0, np.max(np.abs(np.diag(a)))):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                sign = 1.0 if theta >= 0 else -1.0
                t = sign / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


class TestDenseSolver:
    def test_matches_jacobi_oracle_on_random_matrices(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            raw = rng.normal(size=(50, 50))
            sym = (raw + raw.T) / 2.0
            expected = jacobi_eigenvalues(sym)
            got = eigensolve_symmetric(sym)
            np.testing.assert_allclose(got, expected, atol=1e-9)

    def test_two_by_two_analytic(self):
        a, b, c = 1.5, -0.25, 0.75
        mat = np.array([[a, c], [c, b]])
        mean = (a + b) / 2.0
        radius = np.sqrt(((a - b) / 2.0) ** 2 + c * c)
        np.testing.assert_allclose(
            eigensolve_symmetric(mat), [mean - radius, mean + radius], rtol=1e-14
        )

    def test_rejects_asymmetric_input(self):
        with pytest.raises(DomainError):
            eigensolve_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestLanczos:
    def test_matches_dense_on_moderate_matrix(self):
        rng = np.random.default_rng(3)
        raw = rng.normal(size=(300, 300))
        sym = (raw + raw.T) / 2.0
        dense = eigensolve_symmetric(sym)[:3]
        iterative = lanczos_lowest(sym, k=3)
        np.testing.assert_allclose(iterative, dense, atol=1e-9)

    def test_matvec_interface(self):
        diag = np.arange(1.0, 101.0)
        evals = lanczos_lowest(lambda v: diag * v, dim=100, k=3)
        np.testing.assert_allclose(evals, [1.0, 2.0, 3.0], atol=1e-10)

    def test_degenerate_lowest_pair(self):
        # Invariant-subspace restarts must still find the repeated eigenvalue.
        diag = np.concatenate([[1.0, 1.0], np.arange(2.0, 50.0)])
        evals = lanczos_lowest(np.diag(diag), k=3)
        np.testing.assert_allclose(evals, [1.0, 1.0, 2.0], atol=1e-9)

    def test_requires_dim_for_callable(self):
        with pytest.raises(DomainError):
            lanczos_lowest(lambda v: v)

    def test_failure_raises_numerical_error(self):
        rng = np.random.default_rng(5)
        raw = rng.normal(size=(60, 60))
        sym = (raw + raw.T) / 2.0
        with pytest.raises(NumericalError):
            lanczos_lowest(sym, k=3, maxiter=5, tol=1e-15)


def _params(n_levels=2, n_fock=16, eta=1e-3, g_tilde=0.3, gauge=Gauge.CFIELD):
    from gaugebench.hamiltonians import amplitude_for_g_tilde

    geo = resonant_geometry(eta)
    matter = MatterBasisSpec(
        n_levels=n_levels,
        well_length=geo.well_length,
        mass=510998.95,
        charge=0.30282212088,
    )
    f = amplitude_for_g_tilde(g_tilde, matter) if g_tilde > 0 else 0.0
    photon = PhotonBasisSpec(n_fock=n_fock, mode_energy=geo.nu, amplitude=max(f, 1e-300))
    if g_tilde == 0:
        photon = PhotonBasisSpec(n_fock=n_fock, mode_energy=geo.nu, amplitude=0.0)
    return ModelParams(matter=matter, photon=photon, gauge=gauge)


class TestSolverTierAgreement:
    def test_three_tiers_agree_on_one_model(self):
        """Dense, Lanczos, and LOBPCG see the same factored Hamiltonian."""
        params = _params(n_levels=8, n_fock=64, g_tilde=0.4)
        fh = build_factored(params)
        assert fh.dim == 512
        dense = eigensolve_symmetric(fh.materialize())[:3]
        lanczos = lanczos_lowest(fh.matvec, dim=fh.dim, k=3)
        lobpcg = _lobpcg_lowest(fh, k=3)
        np.testing.assert_allclose(lanczos, dense, atol=1e-9)
        np.testing.assert_allclose(lobpcg, dense, atol=1e-8)

    def test_tier_dispatch_consistency(self):
        params = _params(n_levels=8, n_fock=64, g_tilde=0.4)
        fh = build_factored(params)
        via_dense = lowest_gap_factored(fh, dense_threshold=2000)
        via_lanczos = lowest_gap_factored(fh, dense_threshold=100)
        assert via_lanczos.gap == pytest.approx(via_dense.gap, abs=1e-9)


class TestConvergeGap:
    def test_decoupled_point_is_exact(self):
        """At f = 0 the gap is nu exactly and the resonance is degenerate."""
        params = _params(g_tilde=0.0)
        report = converge_gap(params, tol=1e-8)
        assert report.converged
        assert report.degenerate
        nu = params.photon.mode_energy
        assert report.gap == pytest.approx(nu, rel=1e-12)

    def test_history_is_recorded(self):
        report = converge_gap(_params(g_tilde=0.1), tol=1e-6)
        assert len(report.history) >= 2
        assert all(len(step) == 3 for step in report.history)

    def test_fixed_matter_mode_keeps_n_levels(self):
        report = converge_gap(_params(n_levels=2, g_tilde=0.3), tol=1e-8, refine_matter=False)
        assert report.n_matter_final == 2
        assert report.converged

    def test_rejects_bad_tolerance(self):
        with pytest.raises(DomainError):
            converge_gap(_params(), tol=0.0)
        with pytest.raises(DomainError):
            converge_gap(_params(), tol=0.5)

    def test_cap_hit_reports_unconverged(self):
        report = converge_gap(_params(g_tilde=0.3), tol=1e-8, np_cap=32, nm_cap=8)
        assert not report.converged


class TestRelativeError:
    def test_basic_value(self):
        assert relative_error(1.1, 1.0) == pytest.approx(0.1)

    def test_rejects_nonpositive_exact(self):
        with pytest.raises(DomainError):
            relative_error(1.0, 0.0)
        with pytest.raises(DomainError):
            relative_error(1.0, -2.0)
