"""Catalog of one-dimensional ground states and tabulated-state ingestion.

All states are real-valued and normalized, in units hbar = m = 1.  Each
``WaveSpec`` carries vectorized evaluators for psi, psi' and psi'' (the
classical derivatives, valid away from kinks) and the one-sided jumps of
psi' at its kinks.
"""

import csv
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import (
    DomainError,
    IngestionError,
    KinkEvaluationError,
    UnsupportedCatalogError,
)

FAMILIES = (
    "idw",
    "ho",
    "srm",
    "morse",
    "delta-well",
    "delta-in-box",
    "lorentzian",
    "tabulated",
)

# default parameter values and the parameter names each family accepts
FAMILY_PARAMS = {
    "idw": {"a": 1.0},
    "ho": {},
    "srm": {"s": 1.0},
    "morse": {"lambda": 1.0},
    "delta-well": {"alpha": 1.0},
    "delta-in-box": {"a": 1.0},
    "lorentzian": {"alpha": 1.0},
}

KINK_TOL = 1e-14
MIN_SAMPLES = 64

_PI = math.pi
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class KinkPoint:
    """Location where psi is continuous but psi' jumps.

    ``jump_psi_prime`` is psi'(loc+) - psi'(loc-); the matching delta term in
    p^2 psi has strength -jump_psi_prime.
    """

    location: float
    jump_psi_prime: float

    def __post_init__(self):
        if not math.isfinite(self.location):
            raise DomainError("kink location must be finite")
        if not math.isfinite(self.jump_psi_prime) or self.jump_psi_prime == 0.0:
            raise DomainError("a kink needs a finite, non-zero jump in psi'")


@dataclass(frozen=True, eq=False)
class WaveSpec:
    family: str
    params: Mapping[str, float]
    domain: tuple
    psi: Callable
    dpsi: Callable
    d2psi: Callable
    kinks: tuple = ()
    closed_U: Optional[float] = None
    closed_phi: Optional[Callable] = None
    # closed_phi only known in modulus (Morse row)
    phi_modulus_only: bool = False
    # interval outside which psi is negligible; equals domain when finite
    support: tuple = (-math.inf, math.inf)
    length_scale: float = 1.0
    # default momentum cutoff for the momentum-space route
    p_max: float = 10.0
    # extra quadrature breakpoints (tabulated knots)
    nodes: tuple = field(default=(), repr=False)

    @property
    def label(self):
        if not self.params:
            return self.family
        inner = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.family}({inner})"

    @property
    def breakpoints(self):
        """Kink locations plus any extra nodes strictly inside the domain."""
        lo, hi = self.domain
        pts = {k.location for k in self.kinks} | set(self.nodes)
        return tuple(sorted(c for c in pts if lo < c < hi))

    @property
    def is_finite_domain(self):
        return math.isfinite(self.domain[0]) and math.isfinite(self.domain[1])


def _quiet(fn):
    def wrapped(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
            out = fn(x)
        return out

    return wrapped


def _compact(lo, hi, fn):
    """Restrict an evaluator to [lo, hi], zero outside."""

    def wrapped(x):
        inside = (x >= lo) & (x <= hi)
        out = np.zeros_like(x)
        if np.any(inside):
            out[inside] = fn(x[inside])
        return out

    return wrapped


def _sech(x):
    return 1.0 / np.cosh(x)


def _idw(a):
    k = _PI / a
    amp = math.sqrt(2.0 / a)
    psi = _compact(0.0, a, lambda x: amp * np.sin(k * x))
    dpsi = _compact(0.0, a, lambda x: amp * k * np.cos(k * x))
    d2psi = _compact(0.0, a, lambda x: -amp * k * k * np.sin(k * x))

    def phi(p):
        # sqrt(a pi) (1 + e^{-ipa}) / (pi^2 - a^2 p^2) with the removable
        # zeros at |pa| = pi handled through sinc
        u = np.abs(a * np.asarray(p, float))
        core = np.sinc((_PI - u) / (2 * _PI)) / (_PI + u)
        return math.sqrt(a * _PI) * np.exp(-0.5j * a * np.asarray(p, float)) * core

    return dict(
        domain=(0.0, a), psi=psi, dpsi=dpsi, d2psi=d2psi,
        closed_U=0.5 * math.sqrt((_PI ** 2 - 6.0) / 3.0), closed_phi=phi,
        support=(0.0, a), length_scale=a, p_max=500.0 / a,
    )


def _ho():
    c = _PI ** -0.25

    def psi(x):
        return c * np.exp(-0.5 * x * x)

    def dpsi(x):
        v = psi(x)
        return np.where(v == 0, 0.0, -x * v)

    def d2psi(x):
        v = psi(x)
        return np.where(v == 0, 0.0, (x * x - 1.0) * v)

    return dict(
        domain=(-math.inf, math.inf), psi=psi, dpsi=dpsi, d2psi=d2psi,
        closed_U=0.5, closed_phi=lambda p: c * np.exp(-0.5 * np.asarray(p, float) ** 2),
        support=(-12.0, 12.0), length_scale=1.0, p_max=10.0,
    )


def _srm(s):
    if s == 1.0:
        c = 1.0 / _SQRT2

        def psi(x):
            return c * _sech(x)

        def dpsi(x):
            return -c * _sech(x) * np.tanh(x)

        def d2psi(x):
            sh = _sech(x)
            return c * sh * (1.0 - 2.0 * sh * sh)

        def phi(p):
            return 0.5 * math.sqrt(_PI) * _sech(0.5 * _PI * np.asarray(p, float))

        closed_U = _PI / 6.0
    elif s == 2.0:
        c = math.sqrt(3.0) / 2.0

        def psi(x):
            return c * _sech(x) ** 2

        def dpsi(x):
            return -2.0 * c * _sech(x) ** 2 * np.tanh(x)

        def d2psi(x):
            sh2 = _sech(x) ** 2
            return 2.0 * c * sh2 * (2.0 * np.tanh(x) ** 2 - sh2)

        def phi(p):
            p = np.asarray(p, float)
            ratio = np.where(p == 0, 2.0 / _PI, p / np.sinh(0.5 * _PI * np.where(p == 0, 1.0, p)))
            return math.sqrt(3.0 * _PI / 8.0) * ratio

        closed_U = math.sqrt((_PI ** 2 - 6.0) / 15.0)
    else:
        raise UnsupportedCatalogError(
            f"srm catalog only tabulates s in {{1, 2}}, got s={s:g}; "
            "use special_fns.srm_uncertainty for general s"
        )
    reach = 40.0 / s
    return dict(
        domain=(-math.inf, math.inf), psi=psi, dpsi=dpsi, d2psi=d2psi,
        closed_U=closed_U, closed_phi=phi,
        support=(-reach, reach), length_scale=1.0, p_max=14.0,
    )


def _morse(lam):
    if lam != 1.0:
        raise UnsupportedCatalogError(
            f"morse catalog only tabulates lambda = 1, got {lam:g}; "
            "use special_fns.morse_uncertainty for general lambda"
        )

    def psi(x):
        return _SQRT2 * np.exp(-(np.exp(x) - 0.5 * x))

    def dpsi(x):
        v = psi(x)
        return np.where(v == 0, 0.0, v * (0.5 - np.exp(x)))

    def d2psi(x):
        v = psi(x)
        e = np.exp(x)
        return np.where(v == 0, 0.0, v * ((0.5 - e) ** 2 - e))

    def phi_modulus(p):
        # |Gamma(1/2 + ip)| / sqrt(pi) = sqrt(sech(pi p))
        return np.sqrt(_sech(_PI * np.asarray(p, float)))

    return dict(
        domain=(-math.inf, math.inf), psi=psi, dpsi=dpsi, d2psi=d2psi,
        closed_U=_PI / (2.0 * math.sqrt(6.0)), closed_phi=phi_modulus,
        phi_modulus_only=True, support=(-84.0, 4.5), length_scale=1.0, p_max=14.0,
    )


def _delta_well(alpha):
    amp = math.sqrt(alpha)

    def psi(x):
        return amp * np.exp(-alpha * np.abs(x))

    def dpsi(x):
        return -alpha * amp * np.sign(x) * np.exp(-alpha * np.abs(x))

    def d2psi(x):
        return alpha * alpha * amp * np.exp(-alpha * np.abs(x))

    def phi(p):
        q = np.asarray(p, float) / alpha
        return math.sqrt(2.0 / (_PI * alpha)) / (1.0 + q * q)

    reach = 36.0 / alpha
    return dict(
        domain=(-math.inf, math.inf), psi=psi, dpsi=dpsi, d2psi=d2psi,
        kinks=(KinkPoint(0.0, -2.0 * alpha ** 1.5),),
        closed_U=1.0 / _SQRT2, closed_phi=phi,
        support=(-reach, reach), length_scale=1.0 / alpha, p_max=500.0 * alpha,
    )


def _delta_in_box(a):
    amp = math.sqrt(1.5 / a)
    psi = _compact(-a, a, lambda x: amp * (1.0 - np.abs(x) / a))
    dpsi = _compact(-a, a, lambda x: -amp * np.sign(x) / a)

    def d2psi(x):
        return np.zeros_like(x)

    def phi(p):
        # normalized transform; np.sinc(y) = sin(pi y)/(pi y)
        y = a * np.asarray(p, float) / (2.0 * _PI)
        return math.sqrt(3.0 * a / (4.0 * _PI)) * np.sinc(y) ** 2

    return dict(
        domain=(-a, a), psi=psi, dpsi=dpsi, d2psi=d2psi,
        kinks=(KinkPoint(0.0, -2.0 * amp / a),),
        closed_U=math.sqrt(0.3), closed_phi=phi,
        support=(-a, a), length_scale=a, p_max=500.0 / a,
    )


def _lorentzian(alpha):
    amp = math.sqrt(2.0 * alpha ** 3 / _PI)
    a2 = alpha * alpha

    def psi(x):
        return amp / (x * x + a2)

    def dpsi(x):
        d = x * x + a2
        return -2.0 * amp * x / (d * d)

    def d2psi(x):
        d = x * x + a2
        return amp * (6.0 * x * x - 2.0 * a2) / (d * d * d)

    def phi(p):
        return math.sqrt(alpha) * np.exp(-alpha * np.abs(np.asarray(p, float)))

    reach = 20.0 * alpha
    return dict(
        domain=(-math.inf, math.inf), psi=psi, dpsi=dpsi, d2psi=d2psi,
        closed_U=1.0 / _SQRT2, closed_phi=phi,
        support=(-reach, reach), length_scale=alpha, p_max=20.0 / alpha,
    )


_BUILDERS = {
    "idw": lambda p: _idw(p["a"]),
    "ho": lambda p: _ho(),
    "srm": lambda p: _srm(p["s"]),
    "morse": lambda p: _morse(p["lambda"]),
    "delta-well": lambda p: _delta_well(p["alpha"]),
    "delta-in-box": lambda p: _delta_in_box(p["a"]),
    "lorentzian": lambda p: _lorentzian(p["alpha"]),
}


def resolve_params(family, params=None):
    """Merge user parameters with family defaults, validating names and signs."""
    if family not in FAMILY_PARAMS:
        if family == "tabulated":
            raise DomainError("tabulated states are built with ingest_tabulated")
        raise DomainError(f"unknown state family {family!r}; choose from {', '.join(FAMILIES)}")
    allowed = FAMILY_PARAMS[family]
    merged = dict(allowed)
    for key, value in (params or {}).items():
        if key not in allowed:
            raise DomainError(f"family {family!r} has no parameter {key!r}")
        value = float(value)
        if not math.isfinite(value) or value <= 0:
            raise DomainError(f"parameter {key} must be finite and > 0, got {value!r}")
        merged[key] = value
    return merged


def make_state(family, params=None, **kwargs):
    """Build a catalog ground state, e.g. ``make_state("delta-well", alpha=2)``."""
    merged = resolve_params(family, {**(params or {}), **kwargs})
    fields = _BUILDERS[family](merged)
    for name in ("psi", "dpsi", "d2psi"):
        fields[name] = _quiet(fields[name])
    return WaveSpec(family=family, params=MappingProxyType(merged), **fields)


def _as_output(x, out):
    return float(out) if np.ndim(x) == 0 else out


def evaluate(state, x):
    """psi(x); zero outside a finite domain."""
    return _as_output(x, state.psi(np.atleast_1d(np.asarray(x, float))).reshape(np.shape(x)))


def _guard_kinks(state, x):
    arr = np.atleast_1d(np.asarray(x, float))
    for k in state.kinks:
        hit = np.abs(arr - k.location) <= KINK_TOL
        if np.any(hit):
            raise KinkEvaluationError(
                f"psi' is undefined at the kink x={k.location}; use the KinkPoint jump instead"
            )
    return arr


def derivative(state, x):
    """Classical psi'(x) away from kinks."""
    arr = _guard_kinks(state, x)
    return _as_output(x, state.dpsi(arr).reshape(np.shape(x)))


def second_derivative(state, x):
    """Classical psi''(x) away from kinks."""
    arr = _guard_kinks(state, x)
    return _as_output(x, state.d2psi(arr).reshape(np.shape(x)))


# -- tabulated states -------------------------------------------------------

def read_tabulated_csv(path):
    """Read ``x,psi`` samples from a CSV file with ``#`` comment lines."""
    rows = []
    with open(path, newline="") as fh:
        lines = (line for line in fh if line.strip() and not line.lstrip().startswith("#"))
        reader = csv.reader(lines)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["x", "psi"]:
            raise IngestionError(f"{path}: expected header 'x,psi', got {header!r}")
        for i, row in enumerate(reader):
            if len(row) != 2:
                raise IngestionError(f"{path}: expected two columns", index=i)
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                raise IngestionError(f"{path}: non-numeric value {row!r}", index=i) from None
    return rows


def ingest_tabulated(samples, kink_locations=()):
    """Build a WaveSpec from (x, psi) samples.

    Each kink-free segment gets its own natural cubic spline, the result is
    renormalized, and psi' jumps are read off the one-sided spline slopes.
    """
    from scipy.interpolate import CubicSpline

    from .quadrature import QuadratureConfig, integrate

    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise IngestionError("samples must be (x, psi) pairs")
    n = data.shape[0]
    if n < MIN_SAMPLES:
        raise IngestionError(f"need at least {MIN_SAMPLES} samples, got {n}", index=n)
    x, y = data[:, 0], data[:, 1]
    bad = np.flatnonzero(~np.isfinite(x) | ~np.isfinite(y))
    if bad.size:
        raise IngestionError("non-finite sample", index=int(bad[0]))
    step = np.diff(x)
    bad = np.flatnonzero(step <= 0)
    if bad.size:
        raise IngestionError("x must be strictly increasing", index=int(bad[0]) + 1)

    span = x[-1] - x[0]
    kink_idx = []
    for j, loc in enumerate(sorted(float(k) for k in kink_locations)):
        i = int(np.argmin(np.abs(x - loc)))
        if abs(x[i] - loc) > 1e-9 * span or i == 0 or i == n - 1:
            raise IngestionError(f"kink {loc} is not an interior sample point", index=j)
        kink_idx.append(i)
    edges = [0] + kink_idx + [n - 1]
    splines = [CubicSpline(x[i0:i1 + 1], y[i0:i1 + 1], bc_type="natural")
               for i0, i1 in zip(edges[:-1], edges[1:])]
    kink_x = x[kink_idx]

    def piecewise(order):
        def fn(t):
            t = np.asarray(t, float)
            out = np.zeros_like(t)
            inside = (t >= x[0]) & (t <= x[-1])
            seg = np.searchsorted(kink_x, t, side="right")
            for s, spl in enumerate(splines):
                m = inside & (seg == s)
                if np.any(m):
                    out[m] = spl(t[m], order)
            return out

        return fn

    raw = piecewise(0)
    nodes = tuple(x[1:-1])
    norm = integrate(lambda t: raw(t) ** 2, (x[0], x[-1]), nodes, QuadratureConfig()).value
    if not norm > 0:
        raise IngestionError("samples have zero norm")
    scale = 1.0 / math.sqrt(norm)

    kinks = []
    slope_scale = np.max(np.abs(np.diff(y))) / np.min(step) * scale
    for j, (i, loc) in enumerate(zip(kink_idx, kink_x)):
        jump = scale * (splines[j + 1](loc, 1) - splines[j](loc, 1))
        if abs(jump) <= 1e-10 * max(slope_scale, 1e-300):
            raise IngestionError(f"no derivative jump at kink {loc}", index=j)
        kinks.append(KinkPoint(float(loc), float(jump)))

    # spread of |psi|^2 sets the natural size of the moment integrals
    w = y * y / np.trapezoid(y * y, x)
    mean = np.trapezoid(x * w, x)
    h = float(np.min(step))
    spread = math.sqrt(max(np.trapezoid((x - mean) ** 2 * w, x), h * h))

    d0, d1, d2 = piecewise(0), piecewise(1), piecewise(2)
    return WaveSpec(
        family="tabulated",
        params=MappingProxyType({"samples": float(n), "norm_factor": scale}),
        domain=(float(x[0]), float(x[-1])),
        psi=_quiet(lambda t: scale * d0(t)),
        dpsi=_quiet(lambda t: scale * d1(t)),
        d2psi=_quiet(lambda t: scale * d2(t)),
        kinks=tuple(kinks),
        support=(float(x[0]), float(x[-1])),
        length_scale=spread,
        p_max=0.5 * math.pi / h,
        nodes=nodes,
    )
