"""Unit system and physical constants.

Natural units with hbar = c = epsilon_0 = 1.  Energies are measured in eV
and lengths in 1/eV.  The elementary charge is the dimensionless
Heaviside-Lorentz value sqrt(4 pi alpha).
"""

import math

#: Fine-structure constant (CODATA 2018).
ALPHA = 0.0072973525693

#: Elementary charge in Heaviside-Lorentz natural units, sqrt(4 pi alpha).
ELEMENTARY_CHARGE = math.sqrt(4.0 * math.pi * ALPHA)

#: Electron mass in eV.
ELECTRON_MASS_EV = 510998.95

#: Conversion factor: 1 eV^-1 of length equals this many micrometres.
HBARC_UM_EV = 0.197327

#: Default Hilbert-space dimension cap for dense Hamiltonian assembly.
#: Overridable via the GTB_MAX_DIM environment variable.
DEFAULT_MAX_DIM = 8192


def unit_record() -> dict:
    """Unit-system record echoed into run manifests."""
    return {
        "hbar": 1.0,
        "c": 1.0,
        "epsilon_0": 1.0,
        "alpha": ALPHA,
        "elementary_charge": ELEMENTARY_CHARGE,
        "electron_mass_eV": ELECTRON_MASS_EV,
        "um_per_inverse_eV": HBARC_UM_EV,
    }
