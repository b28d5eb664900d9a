"""Eigenvalue machinery and the truncation-convergence protocol.

The converged gap (matter and photon truncations enlarged until the lowest
transition stops moving) is the gauge-independent reference against which
few-level truncations are scored.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import DimensionCapError, DomainError, NumericalError
from .hamiltonians import FactoredHamiltonian, Gauge, ModelParams, build_factored, realify
from .operators import HermitianOperator

#: Above this dimension the two lowest eigenpairs come from the iterative path.
DENSE_THRESHOLD = 2000

#: Above this dimension plain Lanczos becomes impractical (the square-well
#: spectral width grows like N_m^2) and a diagonally preconditioned LOBPCG
#: solve takes over.
LANCZOS_MAX_DIM = 10000

#: Eigenvalue separations below 1e-13 of the local spectral scale count as
#: degenerate (arises at f=0 on resonance).
DEGENERACY_RTOL = 1e-13

_LANCZOS_SEED = 20200515


def eigensolve_symmetric(mat: np.ndarray) -> np.ndarray:
    """Full spectrum of a real symmetric matrix, ascending.

    Backed by LAPACK's Householder tridiagonalization + implicit-shift
    solver via numpy.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DomainError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(mat))))
    defect = float(np.max(np.abs(mat - mat.T)))
    if defect > 1e-10 * scale:
        raise DomainError(f"matrix is not symmetric (defect {defect:.3e})")
    return np.linalg.eigvalsh(mat)


def lanczos_lowest(
    op: np.ndarray | Callable[[np.ndarray], np.ndarray],
    dim: int | None = None,
    k: int = 3,
    tol: float = 1e-13,
    maxiter: int | None = None,
    check_every: int = 10,
) -> np.ndarray:
    """Lowest k eigenvalues of a real symmetric operator by Lanczos iteration.

    ``op`` is either a dense matrix or a matvec callable (then ``dim`` is
    required).  Full reorthogonalization against the whole Krylov basis
    keeps the recurrence stable at the expense of memory.
    """
    if callable(op):
        if dim is None:
            raise DomainError("dim is required for a matvec operator")
        matvec = op
    else:
        mat = np.asarray(op, dtype=float)
        dim = mat.shape[0]
        matvec = lambda v: mat @ v  # noqa: E731
    if maxiter is None:
        maxiter = min(dim, 3000)
    if k >= dim:
        raise DomainError(f"need k < dim, got k={k}, dim={dim}")

    rng = np.random.default_rng(_LANCZOS_SEED)
    q = rng.standard_normal(dim)
    q /= np.linalg.norm(q)
    basis = np.empty((maxiter, dim))
    alphas: list[float] = []
    betas: list[float] = []
    basis[0] = q
    norm_est = 1.0
    prev_ritz = None
    residuals = None

    for j in range(maxiter):
        w = matvec(basis[j])
        alpha = float(basis[j] @ w)
        w = w - alpha * basis[j]
        if j > 0:
            w -= betas[-1] * basis[j - 1]
        # Full reorthogonalization, applied twice for safety.
        active = basis[: j + 1]
        w -= active.T @ (active @ w)
        w -= active.T @ (active @ w)
        alphas.append(alpha)
        beta = float(np.linalg.norm(w))
        norm_est = max(norm_est, abs(alpha) + beta)

        exhausted = beta <= 1e-14 * norm_est
        if j + 1 >= k and (exhausted or j == maxiter - 1 or (j + 1) % check_every == 0):
            t = np.diag(alphas)
            if betas:
                off = np.array(betas)
                t += np.diag(off, 1) + np.diag(off, -1)
            ritz, vecs = np.linalg.eigh(t)
            norm_est = max(norm_est, float(np.max(np.abs(ritz))))
            residuals = beta * np.abs(vecs[-1, :k])
            stable = prev_ritz is not None and np.all(
                np.abs(ritz[:k] - prev_ritz[:k]) <= tol * norm_est
            )
            if (np.all(residuals <= tol * norm_est) and stable) or exhausted:
                return ritz[:k]
            prev_ritz = ritz
        if exhausted:
            # Invariant subspace found before k Ritz pairs settled: restart
            # with a fresh vector orthogonal to the current basis.
            w = rng.standard_normal(dim)
            w -= active.T @ (active @ w)
            beta = float(np.linalg.norm(w))
        if j + 1 < maxiter:
            betas.append(beta)
            basis[j + 1] = w / beta

    raise NumericalError(
        f"Lanczos did not converge: dim={dim}, maxiter={maxiter}, "
        f"last residuals={None if residuals is None else residuals.tolist()}"
    )


@dataclass(frozen=True)
class GapResult:
    """Lowest energy spacing of one Hamiltonian, with a degeneracy flag."""

    gap: float
    degenerate: bool
    eigenvalues: tuple[float, float, float]


def _gap_from_evals(evals: np.ndarray) -> GapResult:
    scale = max(1.0, float(np.max(np.abs(evals[:3]))))
    gap = float(evals[1] - evals[0])
    ground_degenerate = gap < DEGENERACY_RTOL * scale
    excited_degenerate = float(evals[2] - evals[1]) < DEGENERACY_RTOL * scale
    if ground_degenerate:
        gap = 0.0
    return GapResult(
        gap=gap,
        degenerate=ground_degenerate or excited_degenerate,
        eigenvalues=(float(evals[0]), float(evals[1]), float(evals[2])),
    )


def lowest_gap(
    h: HermitianOperator,
    gauge: Gauge,
    n_matter: int,
    dense_threshold: int = DENSE_THRESHOLD,
) -> GapResult:
    """Gap between the two lowest eigenvalues of the realified Hamiltonian.

    Dense solve below ``dense_threshold``; Lanczos with full
    reorthogonalization above it.
    """
    real = realify(h, gauge, n_matter=n_matter)
    if h.dim <= dense_threshold:
        evals = eigensolve_symmetric(real)[:3]
    else:
        evals = lanczos_lowest(real, k=3)
    return _gap_from_evals(evals)


def _lobpcg_lowest(fh: FactoredHamiltonian, k: int = 3, block_size: int = 5) -> np.ndarray:
    """Lowest k eigenvalues via diagonally preconditioned LOBPCG.

    The first-order eigenvalue error is quadratic in the residual, so a
    modest residual tolerance already gives the gap far beyond the
    convergence-protocol tolerance; residuals are checked afterwards.
    """
    import warnings

    from scipy.sparse.linalg import LinearOperator, lobpcg

    dim = fh.dim
    diag = fh.diagonal()
    scale = max(1.0, float(np.max(np.abs(diag))))
    shifted = np.maximum(diag - diag.min(), 1e-3 * scale)

    def precondition(block):
        block = np.asarray(block)
        if block.ndim == 2:
            return block / shifted[:, None]
        return block / shifted

    a_op = LinearOperator((dim, dim), matvec=fh.apply_block, matmat=fh.apply_block, dtype=float)
    m_op = LinearOperator((dim, dim), matvec=precondition, matmat=precondition, dtype=float)
    rng = np.random.default_rng(_LANCZOS_SEED)
    start = rng.standard_normal((dim, max(block_size, k + 2)))
    tol = max(1e-10, 1e-9 * scale)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        evals, vecs = lobpcg(a_op, start, M=m_op, largest=False, tol=tol, maxiter=1000)
    order = np.argsort(evals)
    evals, vecs = evals[order], vecs[:, order]
    if not np.all(np.isfinite(evals[:k])):
        raise NumericalError(f"LOBPCG returned non-finite eigenvalues at dim {dim}")
    residuals = [
        float(np.linalg.norm(fh.matvec(vecs[:, i]) - evals[i] * vecs[:, i])) for i in range(k)
    ]
    if max(residuals) > 1e-6 * scale:
        raise NumericalError(
            f"LOBPCG stagnated at dim {dim}: residuals {residuals}, tol {tol:.2e}"
        )
    return evals[:k]


def lowest_gap_factored(
    fh: FactoredHamiltonian,
    dense_threshold: int = DENSE_THRESHOLD,
) -> GapResult:
    """As ``lowest_gap`` but on the Kronecker-factored realified form."""
    if fh.dim <= dense_threshold:
        evals = eigensolve_symmetric(fh.materialize())[:3]
    elif fh.dim <= LANCZOS_MAX_DIM:
        evals = lanczos_lowest(fh.matvec, dim=fh.dim, k=3)
    else:
        evals = _lobpcg_lowest(fh, k=3)
    return _gap_from_evals(evals)


@dataclass(frozen=True)
class ConvergenceReport:
    gap: float
    n_matter_final: int
    n_fock_final: int
    history: tuple[tuple[int, int, float], ...]
    converged: bool
    degenerate: bool = False

    def as_dict(self) -> dict:
        return {
            "gap_eV": self.gap,
            "n_matter_final": self.n_matter_final,
            "n_fock_final": self.n_fock_final,
            "history": [list(step) for step in self.history],
            "converged": self.converged,
            "degenerate": self.degenerate,
        }


def _solve_at(
    params: ModelParams,
    n_matter: int,
    n_fock: int,
    literal_eq38: bool,
) -> GapResult:
    trial = ModelParams(
        matter=replace(params.matter, n_levels=n_matter),
        photon=replace(params.photon, n_fock=n_fock),
        gauge=params.gauge,
    )
    return lowest_gap_factored(build_factored(trial, literal_eq38=literal_eq38))


def _rel_change(new: float, old: float) -> float:
    denom = max(abs(new), abs(old))
    if denom == 0.0:
        return 0.0
    return abs(new - old) / denom


def converge_gap(
    params: ModelParams,
    tol: float = 1e-8,
    refine_matter: bool = True,
    nm_start: int = 8,
    np_start: int = 16,
    nm_cap: int = 256,
    np_cap: int = 4096,
    literal_eq38: bool = False,
) -> ConvergenceReport:
    """Alternately double N_m and N_p until the gap stops moving.

    The gap must change by less than ``tol`` relative under a doubling of
    either truncation dimension; a refinement in one dimension that moves
    the gap re-opens convergence of the other.  Hitting a cap without
    convergence yields ``converged=False`` (caller decides).

    With ``refine_matter=False`` the matter dimension stays at
    ``params.matter.n_levels`` and only the Fock space is converged; this
    is the protocol for scoring fixed few-level truncations.
    """
    if not 0.0 < tol <= 1e-2:
        raise DomainError(f"tol must be in (0, 1e-2], got {tol}")

    n_m = max(nm_start, params.matter.n_levels) if refine_matter else params.matter.n_levels
    n_m = min(n_m, nm_cap)
    n_p = min(max(np_start, params.photon.n_fock), np_cap)

    history: list[tuple[int, int, float]] = []

    def solve(nm: int, nf: int) -> GapResult:
        result = _solve_at(params, nm, nf, literal_eq38)
        history.append((nm, nf, result.gap))
        return result

    try:
        current = solve(n_m, n_p)
    except (DimensionCapError, NumericalError):
        return ConvergenceReport(
            gap=float("nan"),
            n_matter_final=n_m,
            n_fock_final=n_p,
            history=tuple(history),
            converged=False,
        )

    conv_m = not refine_matter
    conv_p = False

    while not (conv_m and conv_p):
        stepped = False
        try:
            if not conv_m and 2 * n_m <= nm_cap:
                probe = solve(2 * n_m, n_p)
                change = _rel_change(probe.gap, current.gap)
                n_m, current = 2 * n_m, probe
                conv_m = change < tol
                if not conv_m:
                    conv_p = False
                stepped = True
            if not conv_p and 2 * n_p <= np_cap:
                probe = solve(n_m, 2 * n_p)
                change = _rel_change(probe.gap, current.gap)
                n_p, current = 2 * n_p, probe
                conv_p = change < tol
                if not conv_p and refine_matter:
                    conv_m = False
                stepped = True
        except (DimensionCapError, NumericalError):
            stepped = False
        if not stepped:
            break

    return ConvergenceReport(
        gap=current.gap,
        n_matter_final=n_m,
        n_fock_final=n_p,
        history=tuple(history),
        converged=conv_m and conv_p,
        degenerate=current.degenerate,
    )


def relative_error(truncated_gap: float, exact_gap: float) -> float:
    """|truncated - exact| / exact for the lowest energy spacing."""
    if not exact_gap > 0:
        raise DomainError(f"exact_gap must be > 0, got {exact_gap}")
    return abs(truncated_gap - exact_gap) / exact_gap
