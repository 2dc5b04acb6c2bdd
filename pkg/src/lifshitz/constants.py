"""Physical constants (CODATA 2018, SI units).

Everything in the package pulls its constants from this table so that a
single edit changes them everywhere consistently.
"""

import math

# Planck constant is exact since the 2019 SI redefinition.
PLANCK_H = 6.62607015e-34          # J s
HBAR = PLANCK_H / (2.0 * math.pi)  # J s
C_LIGHT = 299792458.0              # m/s, exact
K_BOLTZMANN = 1.380649e-23         # J/K, exact

# Apery's constant zeta(3); shows up as the perfect-reflector bound of the
# order-3 polylogarithm.
ZETA3 = 1.2020569031595942854

# Default system temperature when none is given (room temperature).
DEFAULT_TEMPERATURE = 300.0        # K
