"""Lifshitz free energy per unit area for two half-spaces across a gap.

The free energy is a sum over discrete imaginary (Matsubara) frequencies
xi_n = 2 pi n k_B T / hbar, with the n = 0 term carrying half weight:

    F(d) = sum'_n g(xi_n),   g = g_TM + g_TE   (retarded)

Positive F means repulsion.  Each spectral term is a radial wavevector
integral; substituting u = 2 gamma_2 d turns it into

    g_TM(xi_n) = kT/(8 pi d^2) Int_y^inf u ln[1 - r1(u) r3(u) e^(-u)] du

with y = 2 d sqrt(eps2) xi_n / c and, writing a = 2 d xi_n / c and
tau_j = sqrt(u^2 + (eps_j - eps2) a^2) for the scaled normal wavevector
2 d gamma_j:

    TM:  r_j = (eps_j u - eps2 tau_j) / (eps_j u + eps2 tau_j)
    TE:  r_j = (u - tau_j) / (u + tau_j)

The same substitution with u = 2 q d reduces the nonretarded term to the
closed form -kT/(8 pi d^2) Li3(D1 D3), D_j = (eps_j - eps2)/(eps_j + eps2).

Both reflection factors have magnitude below 1 for passive media, so the
logarithm's argument stays inside (0, 2) and ln is taken via log1p to keep
precision when the round-trip factor is tiny (large d or large n).

All operations are pure functions of immutable inputs; terms are summed in
ascending n with compensated summation, so results are bit-reproducible
regardless of how callers parallelize across distances.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import C_LIGHT, DEFAULT_TEMPERATURE, HBAR, K_BOLTZMANN
from .errors import DomainError, InvariantError, NoConvergenceError
from .materials import PerfectConductor, eval_eps
from .polylog import li3
from .quadrature import integrate_adaptive
from .summation import CompensatedSum


@dataclass(frozen=True)
class SystemConfig:
    """Half-space 1 | gap medium 2 | half-space 3, at a fixed temperature."""

    material_1: object
    material_2: object
    material_3: object
    temperature: float = DEFAULT_TEMPERATURE

    def __post_init__(self):
        if not self.temperature > 0.0:
            raise InvariantError(
                f"temperature must be > 0 K, got {self.temperature!r}"
            )
        if isinstance(self.material_2, PerfectConductor):
            raise InvariantError("the gap medium cannot be a perfect conductor")

    @property
    def beta(self):
        """Inverse thermal energy 1/(k_B T) in 1/J."""
        return 1.0 / (K_BOLTZMANN * self.temperature)

    def matsubara_frequency(self, n):
        """xi_n = 2 pi n k_B T / hbar in rad/s."""
        return 2.0 * math.pi * n * K_BOLTZMANN * self.temperature / HBAR


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for the per-term wavevector integral."""

    rel_tol: float = 1e-7
    abs_tol: float = 1e-30  # J/m^2
    max_subdivisions: int = 256

    def __post_init__(self):
        if not 0.0 < self.rel_tol <= 1e-2:
            raise InvariantError(f"rel_tol must be in (0, 1e-2], got {self.rel_tol!r}")
        if self.abs_tol < 0.0:
            raise InvariantError(f"abs_tol must be >= 0, got {self.abs_tol!r}")
        if self.max_subdivisions < 8:
            raise InvariantError(
                f"max_subdivisions must be >= 8, got {self.max_subdivisions!r}"
            )


@dataclass(frozen=True)
class SumSpec:
    """Truncation policy for the Matsubara sum.

    The sum stops once guard_window consecutive terms are below
    term_rel_tol relative to max(|running total|, largest |term| so far);
    the peak-term floor keeps the cutoff meaningful near a sign change of
    the total, where the running sum passes through zero.
    """

    term_rel_tol: float = 1e-9
    guard_window: int = 5
    hard_max_n: int = 20000

    def __post_init__(self):
        if not self.term_rel_tol > 0.0:
            raise InvariantError(
                f"term_rel_tol must be > 0, got {self.term_rel_tol!r}"
            )
        if self.guard_window < 3:
            raise InvariantError(
                f"guard_window must be >= 3, got {self.guard_window!r}"
            )
        if self.hard_max_n < 100:
            raise InvariantError(
                f"hard_max_n must be >= 100, got {self.hard_max_n!r}"
            )


DEFAULT_QUADRATURE = QuadratureSpec()
DEFAULT_SUM = SumSpec()


class EnergyTerm(NamedTuple):
    """A spectral integral value with its quadrature error estimate (J/m^2)."""

    value: float
    error: float


@dataclass(frozen=True)
class SpectralTerm:
    """One Matsubara term g(xi_n), split into TM and TE parts (J/m^2)."""

    n: int
    omega_n: float
    g_tm: float
    g_te: float
    quadrature_error: float

    @property
    def g_total(self):
        return self.g_tm + self.g_te


@dataclass(frozen=True)
class FreeEnergyResult:
    """Summed free energy per unit area at one separation.

    total = tm_total + te_total holds exactly (the sum is accumulated per
    polarization).  Positive total means repulsion.  converged is False if
    either the Matsubara truncation or any term's quadrature failed to
    meet its tolerance; the value is then the best partial estimate.
    """

    separation: float
    total: float
    tm_total: float
    te_total: float
    n_terms_used: int
    converged: bool
    quadrature_error: float


def gamma(q, xi, eps, c=C_LIGHT):
    """Imaginary-axis normal wavevector sqrt(q^2 + eps xi^2 / c^2), in 1/m.

    Real and >= q for every passive medium, because the squared frequency
    enters with a positive sign on the imaginary axis.
    """
    if q < 0.0:
        raise DomainError(f"transverse wavevector must be >= 0, got {q!r}")
    if xi < 0.0:
        raise DomainError(f"frequency must be >= 0, got {xi!r}")
    if eps < 1.0:
        raise DomainError(f"permittivity must be >= 1, got {eps!r}")
    return math.sqrt(q * q + eps * xi * xi / (c * c))


def _static_delta(eps_j, eps_2):
    """Reflection contrast (eps_j - eps_2)/(eps_j + eps_2) with inf-aware limits."""
    if math.isinf(eps_j) and math.isinf(eps_2):
        return 0.0
    if math.isinf(eps_j):
        return 1.0
    if math.isinf(eps_2):
        return -1.0
    return (eps_j - eps_2) / (eps_j + eps_2)


# exp(-u) underflows to exactly 0.0 beyond this; the whole term vanishes
_DEAD_EXPONENT = 745.0

# Initial panel edges (offsets from the lower integration limit).  The
# integrand peaks within a few units of the lower limit and dies like
# e^(-u); 50 units down it is below 1e-16 of the peak.
_BREAKS = (0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 50.0)
# At n = 0 the lower limit is 0 and the integrand can have a u ln(u)-type
# endpoint, so start with extra resolution there.
_BREAKS_ZERO = (0.0, 0.015625, 0.125, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 50.0)


class _TermSetup(NamedTuple):
    prefactor: float     # kT/(8 pi d^2), J/m^2 per unit of reduced integral
    breaks: tuple        # panel edges in u, or None when the term is dead
    f_tm: object         # vectorized integrand, or None when identically 0
    f_te: object
    te_equals_tm: bool   # both half-spaces perfectly conducting


def _term_setup(config, n, d):
    """Build the reduced integrands for Matsubara index n at separation d."""
    prefactor = K_BOLTZMANN * config.temperature / (8.0 * math.pi * d * d)
    xi = config.matsubara_frequency(n)
    pc1 = isinstance(config.material_1, PerfectConductor)
    pc3 = isinstance(config.material_3, PerfectConductor)

    if n == 0:
        eps2 = eval_eps(config.material_2, 0.0)
        d1 = 1.0 if pc1 else _static_delta(eval_eps(config.material_1, 0.0), eps2)
        d3 = 1.0 if pc3 else _static_delta(eval_eps(config.material_3, 0.0), eps2)
        z_tm = d1 * d3
        # TE reflection vanishes at zero frequency for every finite-eps
        # material (all gammas reduce to q); the idealized mirror keeps -1.
        z_te = 1.0 if (pc1 and pc3) else 0.0

        def make(z):
            if z == 0.0:
                return None

            def f(u):
                return u * np.log1p(-z * np.exp(-u))

            return f

        return _TermSetup(prefactor, _BREAKS_ZERO, make(z_tm), make(z_te), pc1 and pc3)

    eps2 = eval_eps(config.material_2, xi)
    a = 2.0 * d * xi / C_LIGHT
    y = math.sqrt(eps2) * a
    if y > _DEAD_EXPONENT:
        return _TermSetup(prefactor, None, None, None, pc1 and pc3)

    eps1 = None if pc1 else eval_eps(config.material_1, xi)
    eps3 = None if pc3 else eval_eps(config.material_3, xi)
    breaks = tuple(y + b for b in _BREAKS)
    a2 = a * a

    def tm_factor(u, eps_j):
        tau = np.sqrt(u * u + (eps_j - eps2) * a2)
        return (eps_j * u - eps2 * tau) / (eps_j * u + eps2 * tau)

    def te_factor(u, eps_j):
        tau = np.sqrt(u * u + (eps_j - eps2) * a2)
        return (u - tau) / (u + tau)

    def make(factor, sign_pc):
        if (eps1 is not None and eps1 == eps2) or (eps3 is not None and eps3 == eps2):
            return None

        def f(u):
            r1 = sign_pc if eps1 is None else factor(u, eps1)
            r3 = sign_pc if eps3 is None else factor(u, eps3)
            return u * np.log1p(-r1 * r3 * np.exp(-u))

        return f

    return _TermSetup(
        prefactor, breaks, make(tm_factor, 1.0), make(te_factor, -1.0), pc1 and pc3
    )


def _integrate_term(setup, f, quad):
    if setup.breaks is None or f is None:
        return EnergyTerm(0.0, 0.0)
    try:
        value, error = integrate_adaptive(
            f,
            setup.breaks,
            quad.rel_tol,
            quad.abs_tol / setup.prefactor,
            quad.max_subdivisions,
        )
    except NoConvergenceError as exc:
        raise NoConvergenceError(
            str(exc),
            partial=setup.prefactor * exc.partial,
            error_estimate=setup.prefactor * exc.error_estimate,
        ) from None
    return EnergyTerm(setup.prefactor * value, setup.prefactor * error)


def _check_term_args(n, d):
    if d <= 0.0:
        raise DomainError(f"separation must be > 0, got {d!r}")
    if n < 0 or n != int(n):
        raise DomainError(f"Matsubara index must be a non-negative integer, got {n!r}")


def g_tm(config, n, d, quad=DEFAULT_QUADRATURE):
    """Transverse-magnetic Matsubara term at index n and separation d.

    Returns an EnergyTerm (value, quadrature error) in J/m^2.  Raises
    NoConvergenceError carrying the partial value if the adaptive integral
    cannot meet the requested tolerance.
    """
    _check_term_args(n, d)
    setup = _term_setup(config, int(n), d)
    return _integrate_term(setup, setup.f_tm, quad)


def g_te(config, n, d, quad=DEFAULT_QUADRATURE):
    """Transverse-electric Matsubara term; exactly 0 at n = 0 for dielectrics."""
    _check_term_args(n, d)
    setup = _term_setup(config, int(n), d)
    return _integrate_term(setup, setup.f_te, quad)


def g_nonretarded(config, n, d):
    """Nonretarded (van der Waals) Matsubara term, closed form.

    -kT/(8 pi d^2) Li3(D1 D3); the TE mode does not contribute without
    retardation.  Sign is -sign(D1 D3): a gap medium between the two
    half-space permittivities gives a repulsive (positive) term.
    """
    _check_term_args(n, d)
    xi = config.matsubara_frequency(n)
    eps2 = eval_eps(config.material_2, xi)
    z = _static_delta(eval_eps(config.material_1, xi), eps2) * _static_delta(
        eval_eps(config.material_3, xi), eps2
    )
    prefactor = K_BOLTZMANN * config.temperature / (8.0 * math.pi * d * d)
    return -prefactor * li3(z)


def _matsubara_sum(config, d, mode, quad, sum_spec, collect):
    tm_sum = CompensatedSum()
    te_sum = CompensatedSum()
    err_sum = CompensatedSum()
    terms = [] if collect else None

    peak = 0.0
    below = 0
    converged = False
    quad_ok = True
    n_evaluated = 0

    for n in range(sum_spec.hard_max_n + 1):
        if mode == "retarded":
            setup = _term_setup(config, n, d)
            try:
                tm_term = _integrate_term(setup, setup.f_tm, quad)
            except NoConvergenceError as exc:
                tm_term = EnergyTerm(exc.partial, exc.error_estimate)
                quad_ok = False
            if setup.te_equals_tm:
                te_term = tm_term
            else:
                try:
                    te_term = _integrate_term(setup, setup.f_te, quad)
                except NoConvergenceError as exc:
                    te_term = EnergyTerm(exc.partial, exc.error_estimate)
                    quad_ok = False
        else:
            tm_term = EnergyTerm(g_nonretarded(config, n, d), 0.0)
            te_term = EnergyTerm(0.0, 0.0)

        weight = 0.5 if n == 0 else 1.0
        tm_sum.add(weight * tm_term.value)
        te_sum.add(weight * te_term.value)
        err_sum.add(weight * (tm_term.error + te_term.error))
        n_evaluated = n + 1

        if collect:
            terms.append(
                SpectralTerm(
                    n=n,
                    omega_n=config.matsubara_frequency(n),
                    g_tm=tm_term.value,
                    g_te=te_term.value,
                    quadrature_error=tm_term.error + te_term.error,
                )
            )

        contrib = abs(weight * (tm_term.value + te_term.value))
        peak = max(peak, contrib)
        total = tm_sum.value + te_sum.value
        if n >= 1:
            if contrib <= sum_spec.term_rel_tol * max(abs(total), peak):
                below += 1
            else:
                below = 0
            if below >= sum_spec.guard_window:
                converged = True
                break

    result = FreeEnergyResult(
        separation=d,
        total=tm_sum.value + te_sum.value,
        tm_total=tm_sum.value,
        te_total=te_sum.value,
        n_terms_used=n_evaluated,
        converged=converged and quad_ok,
        quadrature_error=err_sum.value,
    )
    return result, terms


def free_energy(config, d, mode="retarded", quad=DEFAULT_QUADRATURE,
                sum_spec=DEFAULT_SUM):
    """Matsubara sum of the interaction free energy per unit area at d.

    Parameters
    ----------
    config : SystemConfig
    d : float
        separation in m, > 0
    mode : str
        "retarded" sums g_TM + g_TE; "nonretarded" sums the closed-form
        van der Waals terms
    quad : QuadratureSpec
    sum_spec : SumSpec

    Returns
    -------
    FreeEnergyResult
        converged=False (never an exception) when truncation or any
        term's quadrature missed its tolerance.
    """
    if d <= 0.0:
        raise DomainError(f"separation must be > 0, got {d!r}")
    if mode not in ("retarded", "nonretarded"):
        raise DomainError(f"mode must be 'retarded' or 'nonretarded', got {mode!r}")
    result, _ = _matsubara_sum(config, d, mode, quad, sum_spec, collect=False)
    return result


def spectral_terms(config, d, quad=DEFAULT_QUADRATURE, sum_spec=DEFAULT_SUM):
    """Retarded spectral decomposition g(xi_n) up to the truncation point.

    Returns (terms, result): the per-index SpectralTerm tuple actually
    summed, and the FreeEnergyResult they add up to.
    """
    if d <= 0.0:
        raise DomainError(f"separation must be > 0, got {d!r}")
    result, terms = _matsubara_sum(config, d, "retarded", quad, sum_spec,
                                   collect=True)
    return tuple(terms), result


def entropic_term(config, d, quad=DEFAULT_QUADRATURE):
    """Half-weighted n = 0 TM term: the purely thermal long-range asymptote."""
    if d <= 0.0:
        raise DomainError(f"separation must be > 0, got {d!r}")
    return 0.5 * g_tm(config, 0, d, quad).value
