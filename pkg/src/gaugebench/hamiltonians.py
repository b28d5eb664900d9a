"""Assembly of the Coulomb-gauge and C-field Hamiltonians.

Both Hamiltonians act on the tensor product of an N_m-level infinite
square well and an N_p-level Fock space.  Zero-point offsets are omitted
throughout; only energy gaps are physical outputs.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass

import numpy as np

from . import constants
from .errors import ConfigurationError, ConsistencyError, DimensionCapError, DomainError
from .operators import (
    HermitianOperator,
    MatterBasisSpec,
    PhotonBasisSpec,
    fock_annihilation,
    isw_energies,
    isw_momentum_matrix,
    isw_position_matrix,
    kron,
)

REALIFY_ATOL = 1e-12


class Gauge(enum.Enum):
    COULOMB = "coulomb"
    CFIELD = "cfield"


@dataclass(frozen=True)
class ModelParams:
    matter: MatterBasisSpec
    photon: PhotonBasisSpec
    gauge: Gauge

    @property
    def dim(self) -> int:
        return self.matter.n_levels * self.photon.n_fock


@dataclass(frozen=True)
class CouplingDiagnostics:
    """Coupling strengths and dimensionless knobs for one parameter set."""

    eta: float
    g_tilde: float
    g_coulomb: float
    g_cfield: float
    omega10: float
    x10: float


def max_dim() -> int:
    """Dimension cap for Hamiltonian assembly (env GTB_MAX_DIM overrides)."""
    env = os.environ.get("GTB_MAX_DIM")
    if env is not None:
        try:
            value = int(env)
        except ValueError as exc:
            raise ConfigurationError(f"GTB_MAX_DIM must be an integer, got {env!r}") from exc
        if value < 4:
            raise ConfigurationError(f"GTB_MAX_DIM must be >= 4, got {value}")
        return value
    return constants.DEFAULT_MAX_DIM


def _check_dim(params: ModelParams) -> None:
    cap = max_dim()
    if params.dim > cap:
        raise DimensionCapError(
            f"requested dimension {params.matter.n_levels}x{params.photon.n_fock}"
            f" = {params.dim} exceeds cap {cap}"
        )


def build_coulomb(params: ModelParams) -> HermitianOperator:
    """Coulomb-gauge Hamiltonian H_m x I + (e/m) p x A + (e^2/2m) I x A^2 + nu I x n.

    A = f (a + a^dag); operator squares are products of the truncated
    matrices, with the truncation-boundary error controlled by the Fock
    convergence loop.
    """
    if params.gauge is not Gauge.COULOMB:
        raise ConfigurationError("build_coulomb requires gauge=COULOMB")
    _check_dim(params)
    matter, photon = params.matter, params.photon
    e, m = matter.charge, matter.mass
    nu, f = photon.mode_energy, photon.amplitude

    h_m = np.diag(isw_energies(matter))
    p_im = isw_momentum_matrix(matter).im
    a = fock_annihilation(photon.n_fock).re
    a_field = f * (a + a.T)
    number = a.T @ a

    i_m = np.eye(matter.n_levels)
    i_p = np.eye(photon.n_fock)

    re = kron(h_m, i_p) + (e**2 / (2.0 * m)) * kron(i_m, a_field @ a_field) + nu * kron(i_m, number)
    im = (e / m) * kron(p_im, a_field)
    return HermitianOperator(re=re, im=im)


def build_cfield(params: ModelParams, literal_eq38: bool = False) -> HermitianOperator:
    """C-field Hamiltonian H_m x I - d x D + f^2 nu d^2 x I + nu I x n (eps_0 = 1).

    d = -e x and D = -i nu f (c^dag - c).  With ``literal_eq38`` the nu
    factor in D is dropped, matching the printed matrix form rather than
    the supplementary quantization of the displacement field.
    """
    if params.gauge is not Gauge.CFIELD:
        raise ConfigurationError("build_cfield requires gauge=CFIELD")
    _check_dim(params)
    matter, photon = params.matter, params.photon
    e = matter.charge
    nu, f = photon.mode_energy, photon.amplitude

    h_m = np.diag(isw_energies(matter))
    d = -e * isw_position_matrix(matter).re
    c = fock_annihilation(photon.n_fock).re
    number = c.T @ c
    d_amp = f if literal_eq38 else nu * f
    # D = -i d_amp (c^dag - c): purely imaginary antisymmetric part.
    d_field_im = -d_amp * (c.T - c)

    i_m = np.eye(matter.n_levels)
    i_p = np.eye(photon.n_fock)

    re = kron(h_m, i_p) + f**2 * nu * kron(d @ d, i_p) + nu * kron(i_m, number)
    im = -kron(d, d_field_im)
    return HermitianOperator(re=re, im=im)


def build(params: ModelParams, literal_eq38: bool = False) -> HermitianOperator:
    """Dispatch to the builder selected by ``params.gauge``."""
    if params.gauge is Gauge.COULOMB:
        return build_coulomb(params)
    return build_cfield(params, literal_eq38=literal_eq38)


def _realify_phases(dim: int, n_matter: int, n_fock: int, gauge: Gauge) -> np.ndarray:
    k = np.arange(n_fock)
    n = np.arange(n_matter)
    if gauge is Gauge.COULOMB:
        # Phase i^n on matter states makes the purely imaginary momentum
        # coupling real.
        phases = np.kron(1j**n, np.ones(n_fock))
    else:
        # Phase i^k on Fock states maps -i(c^dag - c) onto (c^dag + c).
        phases = np.kron(np.ones(n_matter), 1j**k)
    if phases.size != dim:
        raise ConsistencyError("phase vector does not match operator dimension")
    return phases


def realify(h: HermitianOperator, gauge: Gauge, n_matter: int | None = None) -> np.ndarray:
    """Rotate H by a diagonal unitary of pure phases to a real symmetric matrix.

    The spectrum is untouched.  The matter dimension is inferred from the
    imaginary-part sparsity when not given; pass ``n_matter`` when the
    factorization of ``h.dim`` is ambiguous.
    """
    dim = h.dim
    if n_matter is None:
        raise ConfigurationError("realify needs the matter dimension to split the tensor product")
    if dim % n_matter != 0:
        raise ConfigurationError(f"dimension {dim} is not divisible by n_matter={n_matter}")
    n_fock = dim // n_matter
    z = _realify_phases(dim, n_matter, n_fock, gauge)
    rotated = np.conj(z)[:, None] * h.to_complex() * z[None, :]
    scale = max(1.0, float(np.max(np.abs(rotated.real))))
    residual = float(np.max(np.abs(rotated.imag)))
    if residual > REALIFY_ATOL * scale:
        raise ConsistencyError(
            f"residual imaginary part {residual:.3e} exceeds tolerance (builder bug?)"
        )
    real = rotated.real
    return 0.5 * (real + real.T)


@dataclass(frozen=True)
class FactoredHamiltonian:
    """Realified Hamiltonian kept as a sum of Kronecker factors.

    Each term is a (matter_factor, photon_factor) pair of small real
    matrices; the full matrix is sum_i kron(M_i, P_i).  Lets the iterative
    eigensolver run matrix-free at dimensions where dense assembly would
    not fit in memory.
    """

    n_matter: int
    n_fock: int
    terms: tuple[tuple[np.ndarray, np.ndarray], ...]

    @property
    def dim(self) -> int:
        return self.n_matter * self.n_fock

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        v = vec.reshape(self.n_matter, self.n_fock)
        out = np.zeros_like(v)
        for m_fac, p_fac in self.terms:
            out += m_fac @ v @ p_fac.T
        return out.reshape(-1)

    def apply_block(self, block: np.ndarray) -> np.ndarray:
        """Matvec over the columns of a (dim, b) block."""
        block = np.asarray(block)
        if block.ndim == 1:
            return self.matvec(block)
        return np.column_stack([self.matvec(block[:, i]) for i in range(block.shape[1])])

    def diagonal(self) -> np.ndarray:
        out = np.zeros(self.dim)
        for m_fac, p_fac in self.terms:
            out += np.kron(np.diag(m_fac), np.diag(p_fac))
        return out

    def materialize(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        for m_fac, p_fac in self.terms:
            out += np.kron(m_fac, p_fac)
        return 0.5 * (out + out.T)


def _rotate_factor(mat: np.ndarray, phases: np.ndarray) -> np.ndarray:
    rotated = np.conj(phases)[:, None] * np.asarray(mat, dtype=complex) * phases[None, :]
    scale = max(1.0, float(np.max(np.abs(rotated.real))))
    residual = float(np.max(np.abs(rotated.imag)))
    if residual > REALIFY_ATOL * scale:
        raise ConsistencyError(
            f"factor does not realify: residual imaginary part {residual:.3e}"
        )
    return rotated.real


def build_factored(params: ModelParams, literal_eq38: bool = False) -> FactoredHamiltonian:
    """Realified Hamiltonian in Kronecker-factored form.

    Spectrum-identical to ``realify(build(params), ...)``; no dimension cap
    since nothing of full size is allocated.
    """
    matter, photon = params.matter, params.photon
    e, m = matter.charge, matter.mass
    nu, f = photon.mode_energy, photon.amplitude
    n_m, n_p = matter.n_levels, photon.n_fock

    h_m = np.diag(isw_energies(matter))
    i_m = np.eye(n_m)
    i_p = np.eye(n_p)

    if params.gauge is Gauge.COULOMB:
        a = fock_annihilation(n_p).re
        a_field = f * (a + a.T)
        p_rot = _rotate_factor(1j * isw_momentum_matrix(matter).im, 1j ** np.arange(n_m))
        terms = (
            (h_m, i_p),
            ((e / m) * p_rot, a_field),
            ((e**2 / (2.0 * m)) * i_m, a_field @ a_field),
            (nu * i_m, a.T @ a),
        )
    else:
        c = fock_annihilation(n_p).re
        d = -e * isw_position_matrix(matter).re
        d_amp = f if literal_eq38 else nu * f
        d_field_rot = _rotate_factor(-1j * d_amp * (c.T - c), 1j ** np.arange(n_p))
        terms = (
            (h_m, i_p),
            (-d, d_field_rot),
            (f**2 * nu * (d @ d), i_p),
            (nu * i_m, c.T @ c),
        )
    return FactoredHamiltonian(n_matter=n_m, n_fock=n_p, terms=terms)


@dataclass(frozen=True)
class ResonantGeometry:
    nu: float
    well_length: float
    x10: float


def resonant_geometry(
    eta: float,
    mass: float = constants.ELECTRON_MASS_EV,
    charge: float = constants.ELEMENTARY_CHARGE,
) -> ResonantGeometry:
    """Solve the resonance constraint omega10 = nu for a given dipole size eta.

    With eta = x10 nu / (2 pi) and x10 = 16 L / (9 pi^2) the closed form is
    nu = (27 pi^4 m / 32) eta^2 and L = pi sqrt(3 / (2 m nu)).
    """
    if not eta > 0:
        raise DomainError(f"eta must be > 0, got {eta}")
    if not mass > 0:
        raise DomainError(f"mass must be > 0, got {mass}")
    nu = (27.0 * math.pi**4 * mass / 32.0) * eta**2
    L = math.pi * math.sqrt(3.0 / (2.0 * mass * nu))
    x10 = 16.0 * L / (9.0 * math.pi**2)
    return ResonantGeometry(nu=nu, well_length=L, x10=x10)


def well_length_for_omega10(omega10: float, mass: float = constants.ELECTRON_MASS_EV) -> float:
    """Well length fixing the lowest transition: omega10 = 3 pi^2 / (2 m L^2)."""
    if not omega10 > 0:
        raise DomainError(f"omega10 must be > 0, got {omega10}")
    return math.pi * math.sqrt(3.0 / (2.0 * mass * omega10))


def coupling_diagnostics(params: ModelParams) -> CouplingDiagnostics:
    """Coupling strengths between the lowest two levels in both gauges.

    g_coulomb = (e/m) |p12| f and g_cfield = e |x12| nu f; at resonance the
    two coincide.  g_tilde is normalized by the matter transition.
    """
    matter, photon = params.matter, params.photon
    e, m, L = matter.charge, matter.mass, matter.well_length
    nu, f = photon.mode_energy, photon.amplitude
    eps = isw_energies(matter)
    omega10 = float(eps[1] - eps[0])
    x12 = 16.0 * L / (9.0 * math.pi**2)
    p12 = 8.0 / (3.0 * L)
    g_coulomb = (e / m) * p12 * f
    g_cfield = e * x12 * nu * f
    return CouplingDiagnostics(
        eta=x12 * nu / (2.0 * math.pi),
        g_tilde=g_coulomb / omega10,
        g_coulomb=g_coulomb,
        g_cfield=g_cfield,
        omega10=omega10,
        x10=x12,
    )


def amplitude_for_g_tilde(g_tilde: float, matter: MatterBasisSpec) -> float:
    """Invert g_tilde = (e/m)|p12| f / omega10 for the field amplitude f."""
    if g_tilde < 0:
        raise DomainError(f"g_tilde must be >= 0, got {g_tilde}")
    e, m, L = matter.charge, matter.mass, matter.well_length
    eps = isw_energies(matter)
    omega10 = float(eps[1] - eps[0])
    p12 = 8.0 / (3.0 * L)
    return g_tilde * omega10 * m / (e * p12)
