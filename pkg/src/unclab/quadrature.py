"""Adaptive Gauss-Kronrod quadrature with breakpoints, infinite ranges and
oscillatory Fourier kernels.

Integrands are *vectorized*: they receive a 1-d float array of abscissae and
must return an array of the same shape (real or complex).  Panels never
straddle a breakpoint.  Infinite limits are handled either by the algebraic
map ``x = t/(1-t^2)`` on Gauss-Kronrod panels or by a double-exponential
trapezoid rule.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureEvaluationError

_EPS = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny

# 15-point Kronrod abscissae (positive half, descending) and weights; the
# 7-point Gauss rule uses every second abscissa.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1::2] = np.concatenate([_WG[:3], [_WG[3]], _WG[2::-1]])

# panel kinds
_FINITE, _RIGHT_TAIL, _LEFT_TAIL, _FULL_LINE = 0, 1, 2, 3

INFINITE_MAPS = ("algebraic", "double_exponential")


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-11
    abs_tol: float = 1e-13
    max_subdivisions: int = 2000
    infinite_map: str = "algebraic"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 8:
            raise DomainError("max_subdivisions must be >= 8")
        if self.infinite_map not in INFINITE_MAPS:
            raise DomainError(f"unknown infinite_map {self.infinite_map!r}")

    def tolerance(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    est_error: float
    subdivisions_used: int
    converged: bool

    def __add__(self, other):
        return IntegralResult(
            self.value + other.value,
            self.est_error + other.est_error,
            self.subdivisions_used + other.subdivisions_used,
            self.converged and other.converged,
        )

    def __float__(self):
        return float(np.real(self.value))


_ZERO = IntegralResult(0.0, 0.0, 0, True)


def _map(t, kind, anchor):
    """Return (x, dx/dt) for panel coordinates t."""
    x = t.copy()
    jac = np.ones_like(t)
    mapped = kind != _FINITE
    if np.any(mapped):
        tm = t[mapped]
        one_minus = 1.0 - tm * tm
        u = tm / one_minus
        du = (1.0 + tm * tm) / (one_minus * one_minus)
        k = kind[mapped]
        a = anchor[mapped]
        x[mapped] = np.where(k == _RIGHT_TAIL, a + u, np.where(k == _LEFT_TAIL, a - u, u))
        jac[mapped] = du
    return x, jac


def _call(f, x):
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        fx = np.asarray(f(x))
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    bad = np.isnan(fx)
    if np.any(bad):
        raise QuadratureEvaluationError(float(x[np.argmax(bad)]))
    return fx


def _gk15(f, lo, hi, kind, anchor):
    """Kronrod estimates and QUADPACK-style error estimates for each panel."""
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    t = c[:, None] + h[:, None] * NODES[None, :]
    kk = np.broadcast_to(kind[:, None], t.shape).ravel()
    aa = np.broadcast_to(anchor[:, None], t.shape).ravel()
    x, jac = _map(t.ravel(), kk, aa)
    fx = _call(f, x)
    with np.errstate(over="ignore", invalid="ignore"):
        g = np.where(fx == 0, 0.0, fx * jac).reshape(t.shape)
    if not np.all(np.isfinite(g)):
        i = np.argmax(~np.isfinite(g).ravel())
        raise QuadratureEvaluationError(float(x[i]))
    resk = g @ KRONROD_WEIGHTS
    resg = g @ GAUSS_WEIGHTS
    mean = 0.5 * resk
    resabs = np.abs(h) * (np.abs(g) @ KRONROD_WEIGHTS)
    resasc = np.abs(h) * (np.abs(g - mean[:, None]) @ KRONROD_WEIGHTS)
    diff = np.abs(h * (resk - resg))
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * diff / resasc) ** 1.5)
    err = np.where((resasc != 0) & (diff != 0), scaled, diff)
    floor = 50.0 * _EPS * resabs
    err = np.where(resabs > _UFLOW / (50.0 * _EPS), np.maximum(err, floor), err)
    return h * resk, err


def _adaptive(f, lo, hi, kind, anchor, cfg, budget=None):
    """Globally adaptive bisection on a batch of panels."""
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    kind = np.asarray(kind, int)
    anchor = np.asarray(anchor, float)
    if lo.size == 0:
        return _ZERO
    budget = cfg.max_subdivisions if budget is None else budget
    val, err = _gk15(f, lo, hi, kind, anchor)
    used = 0
    while True:
        total = val.sum()
        total_err = float(err.sum())
        tol = cfg.tolerance(total)
        if total_err <= tol:
            return IntegralResult(total, total_err, used, True)
        scale = np.maximum(np.abs(lo), np.abs(hi))
        refinable = (hi - lo) > 64.0 * _EPS * np.maximum(scale, 1e-300)
        if used >= budget or not np.any(refinable):
            return IntegralResult(total, total_err, used, False)
        candidates = np.flatnonzero(refinable)
        order = candidates[np.argsort(-err[candidates], kind="stable")]
        cum = np.cumsum(err[order])
        need = total_err - 0.5 * tol
        count = int(np.searchsorted(cum, need)) + 1
        count = max(1, min(count, order.size, budget - used))
        pick = order[:count]
        keep = np.ones(lo.size, bool)
        keep[pick] = False
        mid = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        new_kind = np.concatenate([kind[pick], kind[pick]])
        new_anchor = np.concatenate([anchor[pick], anchor[pick]])
        nv, ne = _gk15(f, new_lo, new_hi, new_kind, new_anchor)
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        kind = np.concatenate([kind[keep], new_kind])
        anchor = np.concatenate([anchor[keep], new_anchor])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        used += count


def _check_interval(domain, breakpoints):
    a, b = float(domain[0]), float(domain[1])
    if math.isnan(a) or math.isnan(b) or not a < b:
        raise DomainError(f"invalid integration domain {domain!r}")
    bps = sorted({float(c) for c in breakpoints})
    for c in bps:
        if not a < c < b:
            raise DomainError(f"breakpoint {c} not strictly inside domain ({a}, {b})")
    return a, b, bps


def _de_tail(f, anchor, direction, cfg):
    """Double-exponential trapezoid rule on [anchor, inf) (direction=+1),
    (-inf, anchor] (direction=-1) or the whole line (direction=0)."""
    tmax = 6.5
    h = 0.5

    def contributions(tau):
        s = 0.5 * math.pi * np.sinh(tau)
        if direction == 0:
            x = np.sinh(s)
            jac = np.cosh(s) * 0.5 * math.pi * np.cosh(tau)
        else:
            e = np.exp(s)
            x = anchor + direction * e
            jac = e * 0.5 * math.pi * np.cosh(tau)
        fx = _call(f, x)
        with np.errstate(over="ignore", invalid="ignore"):
            g = np.where(fx == 0, 0.0, fx * jac)
        if not np.all(np.isfinite(g)):
            i = np.argmax(~np.isfinite(g))
            raise QuadratureEvaluationError(float(x[i]))
        return g

    tau = np.arange(-tmax, tmax + 0.5 * h, h)
    g = contributions(tau)
    total = g.sum()
    estimate = h * total
    edge = h * (abs(g[0]) + abs(g[-1]))
    for level in range(1, 12):
        h *= 0.5
        tau_new = np.arange(-tmax + h, tmax, 2 * h)
        total = total + contributions(tau_new).sum()
        new = h * total
        err = abs(new - estimate) + edge
        estimate = new
        if level >= 3 and err <= cfg.tolerance(estimate):
            return IntegralResult(estimate, err, level, True)
    return IntegralResult(estimate, err, level, False)


def integrate(f, domain, breakpoints=(), cfg=None):
    """Integrate ``f`` over ``domain`` (limits may be infinite).

    Panels are split at every breakpoint so kinks are integrated exactly.
    Non-convergence is reported through ``converged`` rather than raised.
    """
    cfg = cfg or DEFAULT_CONFIG
    a, b, bps = _check_interval(domain, breakpoints)
    points = [a] + bps + [b]
    use_de = cfg.infinite_map == "double_exponential"

    lo, hi, kind, anchor = [], [], [], []
    tails = []
    for left, right in zip(points[:-1], points[1:]):
        if math.isinf(left) and math.isinf(right):
            if use_de:
                tails.append((0.0, 0))
            else:
                lo += [-1.0, 0.0]
                hi += [0.0, 1.0]
                kind += [_FULL_LINE] * 2
                anchor += [0.0, 0.0]
        elif math.isinf(right):
            if use_de:
                tails.append((left, +1))
            else:
                lo.append(0.0), hi.append(1.0), kind.append(_RIGHT_TAIL), anchor.append(left)
        elif math.isinf(left):
            if use_de:
                tails.append((right, -1))
            else:
                lo.append(0.0), hi.append(1.0), kind.append(_LEFT_TAIL), anchor.append(right)
        else:
            lo.append(left), hi.append(right), kind.append(_FINITE), anchor.append(0.0)

    result = _adaptive(f, lo, hi, kind, anchor, cfg)
    for start, direction in tails:
        result = result + _de_tail(f, start, direction, cfg)
    return result


def _wynn_epsilon(sums):
    """Wynn's epsilon extrapolation of a sequence of partial sums.

    Returns the estimate from the highest even column reached.
    """
    n = len(sums)
    prev = [0.0] * (n + 1)
    cur = list(sums)
    best = cur[-1]
    col = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0:
                return cur[i + 1]
            nxt.append(prev[i + 1] + 1.0 / d)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0:
            best = cur[-1]
    return best


def _oscillatory_tail(h, start, direction, half_period, cfg, max_terms=400):
    """Sum a decaying oscillatory tail half-period by half-period, with
    Wynn-epsilon acceleration once the terms stop being negligible."""
    sums = []
    total = 0.0
    err = 0.0
    used = 0
    small = 0
    estimates = []
    for k in range(max_terms):
        x0 = start + direction * k * half_period
        x1 = x0 + direction * half_period
        left, right = (x0, x1) if direction > 0 else (x1, x0)
        piece = _adaptive(h, [left], [right], [_FINITE], [0.0], cfg)
        used += piece.subdivisions_used
        err += piece.est_error
        total = total + piece.value
        sums.append(total)
        if abs(piece.value) <= 0.01 * cfg.abs_tol:
            small += 1
            if small >= 2:
                return IntegralResult(total, err + abs(piece.value), used, True)
        else:
            small = 0
        if k >= 4:
            estimates.append(_wynn_epsilon(sums))
            if len(estimates) >= 3:
                delta = abs(estimates[-1] - estimates[-2]) + abs(estimates[-2] - estimates[-3])
                if delta <= cfg.tolerance(estimates[-1]):
                    return IntegralResult(estimates[-1], err + delta, used, True)
    best = estimates[-1] if estimates else total
    return IntegralResult(best, err + abs(best - total), used, False)


def integrate_oscillatory(g, p, domain, breakpoints=(), cfg=None, support=None):
    """Compute ``int g(x) exp(-i p x) dx`` over ``domain``.

    The finite part is covered by panels no longer than half an oscillation
    period ``pi/|p|`` (plus the breakpoints).  Infinite limits need
    ``support``: the interval outside which ``g`` is small and monotonically
    decaying; the rest is summed half-period by half-period.
    """
    cfg = cfg or DEFAULT_CONFIG
    p = float(p)
    if not math.isfinite(p):
        raise DomainError("frequency must be finite")
    a, b, bps = _check_interval(domain, breakpoints)
    if p == 0.0:
        r = integrate(g, (a, b), bps, cfg)
        return IntegralResult(complex(r.value), r.est_error, r.subdivisions_used, r.converged)

    half_period = math.pi / abs(p)
    if support is None:
        reach = (max(abs(c) for c in bps) if bps else 0.0) + 64.0 * half_period
        support = (-reach, reach)
    lo_c = a if math.isfinite(a) else min(float(support[0]), bps[0] if bps else math.inf)
    hi_c = b if math.isfinite(b) else max(float(support[1]), bps[-1] if bps else -math.inf)
    if not lo_c < hi_c:
        raise DomainError(f"empty oscillatory core ({lo_c}, {hi_c})")

    def h(x):
        return g(x) * np.exp(-1j * p * x)

    points = [lo_c] + [c for c in bps if lo_c < c < hi_c] + [hi_c]
    lo, hi = [], []
    for left, right in zip(points[:-1], points[1:]):
        n = max(1, math.ceil((right - left) / half_period))
        edges = np.linspace(left, right, n + 1)
        lo.append(edges[:-1])
        hi.append(edges[1:])
    lo = np.concatenate(lo)
    hi = np.concatenate(hi)
    budget = cfg.max_subdivisions + 4 * lo.size
    result = _adaptive(h, lo, hi, np.zeros(lo.size, int), np.zeros(lo.size), cfg, budget)
    if math.isinf(b):
        result = result + _oscillatory_tail(h, hi_c, +1, half_period, cfg)
    if math.isinf(a):
        result = result + _oscillatory_tail(h, lo_c, -1, half_period, cfg)
    return IntegralResult(complex(result.value), result.est_error,
                          result.subdivisions_used, result.converged)
