"""Elementary matter and photon operator matrices.

Matter operators are built in the energy eigenbasis of a one-dimensional
infinite square well of length L (states labelled by the physical quantum
number n = 1..N_m).  Photon operators live in a truncated Fock space of a
single bosonic mode.  Everything is returned as plain dense matrices with
separated real and imaginary parts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

HERMITICITY_ATOL = 1e-12


@dataclass(frozen=True)
class HermitianOperator:
    """Dense operator matrix stored as separate real and imaginary parts.

    The complex matrix is ``re + 1j*im``.  For Hermitian operators ``re``
    is symmetric and ``im`` antisymmetric; ladder matrices reuse the
    container with that invariant waived.
    """

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = np.asarray(self.re, dtype=float)
        im = np.asarray(self.im, dtype=float)
        if re.ndim != 2 or re.shape[0] != re.shape[1] or re.shape != im.shape:
            raise ConfigurationError("operator parts must be square matrices of equal shape")
        if re.shape[0] < 1:
            raise ConfigurationError("operator dimension must be >= 1")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @property
    def dim(self) -> int:
        return self.re.shape[0]

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def hermiticity_defect(self) -> float:
        """Largest per-element violation of re-symmetry / im-antisymmetry."""
        d_re = np.max(np.abs(self.re - self.re.T)) if self.dim else 0.0
        d_im = np.max(np.abs(self.im + self.im.T)) if self.dim else 0.0
        return float(max(d_re, d_im))

    def is_hermitian(self, atol: float = HERMITICITY_ATOL) -> bool:
        return self.hermiticity_defect() <= atol

    @classmethod
    def from_complex(cls, mat: np.ndarray) -> "HermitianOperator":
        mat = np.asarray(mat, dtype=complex)
        return cls(re=mat.real.copy(), im=mat.imag.copy())


@dataclass(frozen=True)
class MatterBasisSpec:
    """Infinite-square-well matter basis: N_m levels, well length L (1/eV),
    particle mass (eV), charge magnitude (dimensionless)."""

    n_levels: int
    well_length: float
    mass: float
    charge: float

    def __post_init__(self):
        if self.n_levels < 2:
            raise ConfigurationError(f"n_levels must be >= 2, got {self.n_levels}")
        if not self.well_length > 0:
            raise ConfigurationError(f"well_length must be > 0, got {self.well_length}")
        if not self.mass > 0:
            raise ConfigurationError(f"mass must be > 0, got {self.mass}")
        if not self.charge > 0:
            raise ConfigurationError(f"charge must be > 0, got {self.charge}")


@dataclass(frozen=True)
class PhotonBasisSpec:
    """Single-mode Fock basis: N_p levels, mode energy nu (eV), field
    amplitude f (eV)."""

    n_fock: int
    mode_energy: float
    amplitude: float

    def __post_init__(self):
        if self.n_fock < 2:
            raise ConfigurationError(f"n_fock must be >= 2, got {self.n_fock}")
        if not self.mode_energy > 0:
            raise ConfigurationError(f"mode_energy must be > 0, got {self.mode_energy}")
        if self.amplitude < 0:
            raise ConfigurationError(f"amplitude must be >= 0, got {self.amplitude}")


def isw_energies(spec: MatterBasisSpec) -> np.ndarray:
    """Eigenenergies eps_n = pi^2 n^2 / (2 m L^2), n = 1..N_m (hbar = 1)."""
    n = np.arange(1, spec.n_levels + 1, dtype=float)
    return np.pi**2 * n**2 / (2.0 * spec.mass * spec.well_length**2)


def isw_position_matrix(spec: MatterBasisSpec) -> HermitianOperator:
    """Position matrix in the well eigenbasis (units 1/eV).

    x_nm = -(8L/pi^2) nm/(n^2-m^2)^2 for n+m odd, L/2 on the diagonal,
    zero otherwise.  Purely real and symmetric.
    """
    N = spec.n_levels
    L = spec.well_length
    n = np.arange(1, N + 1, dtype=float)
    nn, mm = np.meshgrid(n, n, indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        x = -(8.0 * L / np.pi**2) * nn * mm / (nn**2 - mm**2) ** 2
    odd = (nn + mm) % 2 == 1
    x = np.where(odd, x, 0.0)
    np.fill_diagonal(x, L / 2.0)
    return HermitianOperator(re=x, im=np.zeros_like(x))


def isw_momentum_matrix(spec: MatterBasisSpec) -> HermitianOperator:
    """Momentum matrix in the well eigenbasis (units eV, hbar = 1).

    p_nm = (4/(iL)) nm/(n^2-m^2) for n+m odd, zero otherwise; purely
    imaginary with antisymmetric imaginary part.
    """
    N = spec.n_levels
    L = spec.well_length
    n = np.arange(1, N + 1, dtype=float)
    nn, mm = np.meshgrid(n, n, indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        # 4/(iL) = -4i/L, so the imaginary part carries the sign.
        p_im = -(4.0 / L) * nn * mm / (nn**2 - mm**2)
    odd = (nn + mm) % 2 == 1
    p_im = np.where(odd, p_im, 0.0)
    return HermitianOperator(re=np.zeros_like(p_im), im=p_im)


def fock_annihilation(n_fock: int) -> HermitianOperator:
    """Truncated bosonic annihilation matrix a[n-1, n] = sqrt(n).

    Non-Hermitian; stored in the shared container with the symmetry
    invariant waived.
    """
    if n_fock < 2:
        raise ConfigurationError(f"n_fock must be >= 2, got {n_fock}")
    a = np.diag(np.sqrt(np.arange(1, n_fock, dtype=float)), k=1)
    return HermitianOperator(re=a, im=np.zeros_like(a))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product realizing the tensor-product assembly."""
    return np.kron(np.asarray(a), np.asarray(b))
