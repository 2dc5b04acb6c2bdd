"""Order-3 polylogarithm on the real interval [-1, 1].

The nonretarded free energy per Matsubara term has the closed form
-Li3(D1*D3)/(8 pi beta d^2), where D1*D3 is a product of reflection
contrasts with |D1*D3| <= 1 for any passive media.  Only that argument
range is supported here.

Evaluation strategy:
  * |z| <= 0.875: direct power series sum z^k / k^3.
  * z in (0.875, 1]: the series in mu = ln z,
        Li3(e^mu) = zeta(3) + zeta(2) mu + mu^2/2 (3/2 - ln(-mu))
                    + sum_{k>=3} zeta(3-k) mu^k / k!,
    which converges rapidly for the small |mu| reached here.  The direct
    series slows to uselessness as z -> 1, so this branch replaces the
    term-cap-and-remainder fallback one might otherwise use.
  * z < 0: the duplication identity Li3(z) + Li3(-z) = Li3(z^2)/4 maps the
    argument to the positive branches above.
"""

import math

from .constants import ZETA3
from .errors import DomainError

_ZETA2 = math.pi * math.pi / 6.0

# Coefficients zeta(3-k)/k! for k = 3..12 of the ln-series around z = 1.
# zeta at even negative integers vanishes, hence the zeros.
_LN_SERIES_COEFFS = (
    -1.0 / 12.0,          # k = 3, zeta(0)  = -1/2
    -1.0 / 288.0,         # k = 4, zeta(-1) = -1/12
    0.0,                  # k = 5
    1.0 / 86400.0,        # k = 6, zeta(-3) = 1/120
    0.0,                  # k = 7
    -1.0 / 10160640.0,    # k = 8, zeta(-5) = -1/252
    0.0,                  # k = 9
    1.0 / 870912000.0,    # k = 10, zeta(-7) = 1/240
    0.0,                  # k = 11
    -1.0 / 63228211200.0  # k = 12, zeta(-9) = -1/132
)

_SERIES_SWITCH = 0.875
_MAX_SERIES_TERMS = 400


def li3(z):
    """Return Li3(z) for real z with |z| <= 1 to near machine precision."""
    if not -1.0 <= z <= 1.0:
        raise DomainError(f"li3 argument must lie in [-1, 1], got {z!r}")
    if z == 0.0:
        return 0.0
    if z < 0.0:
        return 0.25 * li3(z * z) - li3(-z)
    if z == 1.0:
        return ZETA3
    if z <= _SERIES_SWITCH:
        return _li3_series(z)
    return _li3_log_series(z)


def _li3_series(z):
    total = 0.0
    zk = 1.0
    for k in range(1, _MAX_SERIES_TERMS + 1):
        zk *= z
        term = zk / (k * k * k)
        total += term
        if term < 1e-17 * total:
            break
    return total


def _li3_log_series(z):
    mu = math.log(z)
    # mu in (-0.134, 0); the quadratic term carries the ln(-mu) singularity.
    total = ZETA3 + _ZETA2 * mu + 0.5 * mu * mu * (1.5 - math.log(-mu))
    mu_k = mu * mu
    for coeff in _LN_SERIES_COEFFS:
        mu_k *= mu
        if coeff != 0.0:
            total += coeff * mu_k
    return total
