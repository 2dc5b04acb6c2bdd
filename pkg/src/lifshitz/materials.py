"""Dielectric permittivities on the imaginary frequency axis.

Models are immutable and hashable; evaluation is a pure function of
(model, xi), so results are memoized and safe to share across workers.

Two routes to eps(i xi) are provided: closed-form oscillator sums
(Drude/Lorentz) and a Kramers-Kronig transform of a tabulated absorption
spectrum.  The two routes cross-check each other in the test suite.

Sign/units conventions: xi is the imaginary-axis frequency in rad/s;
eps(i xi) is real, >= 1, and non-increasing in xi for any passive model.
"""

import functools
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.special import hyp2f1

from .errors import DomainError, InvariantError, MaterialParseError


@dataclass(frozen=True)
class OscillatorModel:
    """Drude/Lorentz oscillator sum.

    eps(i xi) = 1 + sum wp^2/(xi^2 + g xi) + sum f wr^2/(wr^2 + xi^2 + g xi)

    drude_terms: tuples (plasma_frequency, damping), rad/s each.
    lorentz_terms: tuples (strength, resonance_frequency, damping);
    strength dimensionless, frequencies rad/s.

    Drude damping must be strictly positive; Lorentz damping may be zero
    (the undamped oscillator is well defined on the imaginary axis).
    """

    drude_terms: tuple = ()
    lorentz_terms: tuple = ()
    name: str = ""

    def __post_init__(self):
        for wp, g in self.drude_terms:
            if wp <= 0.0:
                raise InvariantError(f"Drude plasma frequency must be > 0, got {wp!r}")
            if g <= 0.0:
                raise InvariantError(f"Drude damping must be > 0, got {g!r}")
        for f, wr, g in self.lorentz_terms:
            if f < 0.0:
                raise InvariantError(f"Lorentz strength must be >= 0, got {f!r}")
            if wr <= 0.0:
                raise InvariantError(f"Lorentz resonance frequency must be > 0, got {wr!r}")
            if g < 0.0:
                raise InvariantError(f"Lorentz damping must be >= 0, got {g!r}")


@dataclass(frozen=True)
class AbsorptionTable:
    """Sampled absorption spectrum eps''(x) with a power-law tail.

    samples: tuples (x, eps_imag), x in rad/s strictly increasing and
    positive, eps_imag >= 0 (passivity).  Beyond the last sample the
    spectrum is assumed to fall off as x^(-tail_exponent).
    """

    samples: tuple
    tail_exponent: float = 3.0

    def __post_init__(self):
        if len(self.samples) < 2:
            raise InvariantError(
                f"absorption table needs at least 2 samples, got {len(self.samples)}"
            )
        prev = 0.0
        for x, e in self.samples:
            if x <= prev:
                raise InvariantError(
                    f"sample frequencies must be positive and strictly increasing"
                    f" (offending x = {x!r})"
                )
            if e < 0.0:
                raise InvariantError(f"eps'' must be >= 0 everywhere, got {e!r}")
            prev = x
        if self.tail_exponent <= 0.0:
            raise InvariantError(
                f"tail exponent must be > 0, got {self.tail_exponent!r}"
            )


@dataclass(frozen=True)
class KKTabulated:
    """Material whose eps(i xi) comes from a Kramers-Kronig transform."""

    table: AbsorptionTable
    name: str = ""


@dataclass(frozen=True)
class Vacuum:
    """eps identically 1."""

    name: str = "vacuum"


@dataclass(frozen=True)
class PerfectConductor:
    """Idealized mirror: eps treated as infinite at every frequency.

    Only legal as a half-space material; reflection coefficients are taken
    in the infinite-eps limit (TM -> +1, TE -> -1) at every Matsubara
    index, including n = 0.
    """

    name: str = "perfect conductor"


def eval_eps(model, xi):
    """Evaluate eps(i xi) for any model kind.

    xi must be >= 0.  Returns a float >= 1; math.inf for a perfect
    conductor at any xi and for Drude models at xi = 0.
    """
    if xi < 0.0:
        raise DomainError(f"imaginary-axis frequency must be >= 0, got {xi!r}")
    return _eval_cached(model, float(xi))


@functools.lru_cache(maxsize=262144)
def _eval_cached(model, xi):
    if isinstance(model, Vacuum):
        return 1.0
    if isinstance(model, PerfectConductor):
        return math.inf
    if isinstance(model, OscillatorModel):
        return _eval_oscillator(model, xi)
    if isinstance(model, KKTabulated):
        return kk_transform(model.table, xi)
    raise DomainError(f"not a dielectric model: {model!r}")


def _eval_oscillator(model, xi):
    if xi == 0.0 and model.drude_terms:
        return math.inf
    eps = 1.0
    for wp, g in model.drude_terms:
        eps += wp * wp / (xi * xi + g * xi)
    for f, wr, g in model.lorentz_terms:
        eps += f * wr * wr / (wr * wr + xi * xi + g * xi)
    return eps


# ---------------------------------------------------------------------------
# Kramers-Kronig transform
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)
_MAX_PANEL_WIDTH = 0.5  # in ln(x); half an e-fold per Gauss panel


@functools.lru_cache(maxsize=1024)
def _table_nodes(table):
    """Precompute quadrature nodes/weights for the sampled range.

    The integration runs in t = ln x with eps'' interpolated linearly in
    log-log space on each segment (linearly in linear space where a zero
    sample makes the log undefined).  Everything except the xi-dependent
    denominator is baked in here, so one transform evaluation is a single
    vectorized reduction.
    """
    x = np.array([s[0] for s in table.samples])
    e = np.array([s[1] for s in table.samples])
    t = np.log(x)

    xs = []
    ws = []
    es = []
    for i in range(len(x) - 1):
        dt = t[i + 1] - t[i]
        n_sub = max(1, int(math.ceil(dt / _MAX_PANEL_WIDTH)))
        edges = np.linspace(t[i], t[i + 1], n_sub + 1)
        centers = 0.5 * (edges[:-1] + edges[1:])
        halves = 0.5 * (edges[1:] - edges[:-1])
        tn = (centers[:, None] + halves[:, None] * _GL_NODES[None, :]).ravel()
        wn = (halves[:, None] * _GL_WEIGHTS[None, :]).ravel()
        xn = np.exp(tn)
        if e[i] > 0.0 and e[i + 1] > 0.0:
            slope = math.log(e[i + 1] / e[i]) / dt
            en = e[i] * np.exp(slope * (tn - t[i]))
        else:
            en = e[i] + (e[i + 1] - e[i]) * (xn - x[i]) / (x[i + 1] - x[i])
        xs.append(xn)
        ws.append(wn)
        es.append(en)

    xn = np.concatenate(xs)
    # dx integral rewritten over t: x eps''/(x^2 + xi^2) dx -> x^2 eps''/(x^2 + xi^2) dt
    core = np.concatenate(ws) * np.concatenate(es) * xn * xn
    return xn * xn, core, (x[0], e[0], x[-1], e[-1])


def kk_transform(table, xi):
    """eps(i xi) = 1 + (2/pi) Int_0^inf x eps''(x) / (x^2 + xi^2) dx.

    The sampled range is integrated by Gauss panels in log-frequency; the
    band below the first sample assumes a linear onset eps'' ~ x and is
    done in closed form; beyond the last sample the assumed power-law tail
    x^(-p) integrates to a hypergeometric closed form.
    """
    if xi < 0.0:
        raise DomainError(f"imaginary-axis frequency must be >= 0, got {xi!r}")
    x2, core, (x_lo, e_lo, x_hi, e_hi) = _table_nodes(table)

    mid = float(np.sum(core / (x2 + xi * xi)))

    # eps''(x) = e_lo * x/x_lo below the sampled range
    if xi == 0.0:
        low = e_lo
    else:
        low = (e_lo / x_lo) * (x_lo - xi * math.atan2(x_lo, xi))

    p = table.tail_exponent
    tail = (e_hi / p) * hyp2f1(1.0, 0.5 * p, 0.5 * p + 1.0, -((xi / x_hi) ** 2))

    return 1.0 + (2.0 / math.pi) * (low + mid + tail)


# ---------------------------------------------------------------------------
# Material files
# ---------------------------------------------------------------------------

_KINDS = ("oscillator", "tabulated", "vacuum", "perfect_conductor")
_KEYS = ("name", "kind", "drude", "lorentz", "tail_exponent")


def load_material(path):
    """Parse a material file and return the validated model.

    Schema: "key = value" lines with keys name, kind, drude, lorentz,
    tail_exponent; '#' starts a comment.  kind selects which keys are
    legal.  For kind = tabulated, bare two-column lines "x  eps_imag"
    supply the absorption samples.  Unknown keys are rejected.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MaterialParseError(f"{path}: {exc}") from None
    return _parse_material(text, str(path), default_name=path.stem)


def parse_material(text, origin="<string>", default_name=""):
    """Parse material-file text already in memory (used by tests and tools)."""
    return _parse_material(text, origin, default_name)


def _parse_material(text, origin, default_name=""):
    name = None
    kind = None
    drude = []
    lorentz = []
    tail_exponent = None
    samples = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{origin}:{lineno}"
        if "=" in line:
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _KEYS:
                raise MaterialParseError(f"{where}: unknown key {key!r}")
            if key == "name":
                name = value
            elif key == "kind":
                if value not in _KINDS:
                    raise MaterialParseError(
                        f"{where}: kind must be one of {_KINDS}, got {value!r}"
                    )
                kind = value
            elif key == "drude":
                drude.append(_parse_floats(value, 2, where))
            elif key == "lorentz":
                lorentz.append(_parse_floats(value, 3, where))
            elif key == "tail_exponent":
                (tail_exponent,) = _parse_floats(value, 1, where)
        else:
            samples.append(_parse_floats(line, 2, where, sep=None))

    if kind is None:
        raise MaterialParseError(f"{origin}: missing required key 'kind'")
    if name is None:
        name = default_name

    if kind != "oscillator" and (drude or lorentz):
        raise MaterialParseError(
            f"{origin}: drude/lorentz entries are only legal for kind = oscillator"
        )
    if kind != "tabulated" and (samples or tail_exponent is not None):
        raise MaterialParseError(
            f"{origin}: sample lines and tail_exponent are only legal for "
            f"kind = tabulated"
        )

    try:
        if kind == "vacuum":
            return Vacuum(name=name)
        if kind == "perfect_conductor":
            return PerfectConductor(name=name)
        if kind == "oscillator":
            return OscillatorModel(
                drude_terms=tuple(drude), lorentz_terms=tuple(lorentz), name=name
            )
        table = AbsorptionTable(
            samples=tuple(samples),
            tail_exponent=3.0 if tail_exponent is None else tail_exponent,
        )
        return KKTabulated(table=table, name=name)
    except InvariantError as exc:
        raise InvariantError(f"{origin}: {exc}") from None


def _parse_floats(value, count, where, sep=","):
    parts = value.split(sep) if sep else value.split()
    if len(parts) != count:
        raise MaterialParseError(
            f"{where}: expected {count} numeric field(s), got {len(parts)}"
        )
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise MaterialParseError(f"{where}: {exc}") from None


def builtin_names():
    """Names of the material files shipped with the package."""
    root = resources.files(__package__) / "data"
    return sorted(p.name[: -len(".mat")] for p in root.iterdir() if p.name.endswith(".mat"))


def builtin_path(name):
    """Filesystem path of a shipped material file."""
    p = resources.files(__package__) / "data" / f"{name}.mat"
    if not p.is_file():
        raise MaterialParseError(
            f"no builtin material {name!r}; available: {', '.join(builtin_names())}"
        )
    return Path(str(p))


def load_builtin(name):
    return load_material(builtin_path(name))
