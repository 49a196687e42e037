"""Position-space moments and uncertainty products.

Two independent routes give <p^2>:

* first derivative: <p psi|p psi> = int psi'^2 dx (kinks are measure zero);
* second derivative: <psi|p^2 psi> = -int psi psi'' dx - sum_k psi(x_k) J_k,
  where J_k is the jump of psi' at kink x_k.  The sum is the sifting of the
  delta terms that p^2 produces at each kink, done analytically.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

import numpy as np

from .errors import InconsistencyError, UnclabError
from .quadrature import DEFAULT_CONFIG, integrate

FIRST_DERIVATIVE = "first_derivative"
DELTA_ROUTE = "second_derivative_delta"
MOMENTUM_ROUTE = "momentum_space"

HEISENBERG_TOL = 1e-10
MEAN_P_TOL = 1e-8
# discrepancy allowed on top of 100x the combined error estimates (roundoff)
ROUTE_ROUNDOFF = 1e-12


class ConvergenceError(UnclabError, RuntimeError):
    """A moment integral did not reach its tolerance."""


@dataclass(frozen=True)
class MomentSet:
    mean_x: float
    mean_x2: float
    mean_p: float
    mean_p2: float
    route: str
    errors: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        slack = 1e-12 * max(1.0, abs(self.mean_x2), abs(self.mean_p2))
        if self.mean_x2 - self.mean_x ** 2 < -slack or self.mean_p2 - self.mean_p ** 2 < -slack:
            raise InconsistencyError(f"negative variance in {self}")


@dataclass(frozen=True)
class DeltaRouteParts:
    regular: float  # -int psi psi''
    delta: float  # -sum psi(x_k) J_k
    est_error: float

    @property
    def total(self):
        return self.regular + self.delta


@dataclass(frozen=True)
class RouteResult:
    name: str
    U: float
    dp: float
    est_error: float


@dataclass(frozen=True)
class UncertaintyReport:
    state: str
    family: str
    params: Mapping[str, float]
    dx: float
    dp: float
    U: float
    routes: tuple
    max_route_discrepancy: float
    heisenberg_ok: bool
    closed_U: Optional[float] = None
    moments: tuple = ()
    delta_parts: Optional[DeltaRouteParts] = None

    @property
    def closed_diff(self):
        return None if self.closed_U is None else abs(self.U - self.closed_U)

    def route(self, name):
        for r in self.routes:
            if r.name == name:
                return r
        raise KeyError(name)


def _checked(result, what):
    if not result.converged:
        raise ConvergenceError(f"{what} did not converge (estimate {result.value}, "
                               f"error {result.est_error:.3g})")
    return result


def _scaled(cfg, state, power):
    """Scale abs_tol by length_scale**power, the natural size of the integral."""
    cfg = cfg or DEFAULT_CONFIG
    return replace(cfg, abs_tol=cfg.abs_tol * state.length_scale ** power)


def _integral(state, fn, cfg, what):
    psi = state.psi

    def integrand(x):
        v = psi(x)
        with np.errstate(invalid="ignore", over="ignore"):
            out = fn(x, v)
        return np.where(v == 0, 0.0, out)

    return _checked(integrate(integrand, state.domain, state.breakpoints, cfg), what)


def _position_integrals(state, cfg=None):
    mx = _integral(state, lambda x, v: x * v * v, _scaled(cfg, state, 1), "<x>")
    mx2 = _integral(state, lambda x, v: x * x * v * v, _scaled(cfg, state, 2), "<x^2>")
    return mx, mx2


def position_moments(state, cfg=None):
    """Return (<x>, <x^2>) by quadrature split at the kinks."""
    mx, mx2 = _position_integrals(state, cfg)
    return float(mx.value), float(mx2.value)


def _momentum_mean_integral(state, cfg=None):
    dpsi = state.dpsi
    r = integrate(lambda x: state.psi(x) * dpsi(x), state.domain, state.breakpoints,
                  _scaled(cfg, state, -1))
    return _checked(r, "int psi psi'")


def momentum_mean(state, cfg=None):
    """<p> for a real bound state.

    <p> = -i int psi psi' dx is purely imaginary for real psi unless the
    integral vanishes, so anything above MEAN_P_TOL marks a defective state.
    """
    r = _momentum_mean_integral(state, cfg)
    if abs(r.value) > MEAN_P_TOL:
        raise InconsistencyError(
            f"{state.label}: int psi psi' dx = {float(r.value):.3e} != 0; "
            "a real bound state must have <p> = 0"
        )
    return 0.0


def _first_derivative_integral(state, cfg=None):
    dpsi = state.dpsi
    r = integrate(lambda x: dpsi(x) ** 2, state.domain, state.breakpoints, _scaled(cfg, state, -2))
    return _checked(r, "int psi'^2")


def momentum_sq_first_derivative(state, cfg=None):
    """<p^2> = int (psi')^2 dx."""
    return float(_first_derivative_integral(state, cfg).value)


def _unlisted_kinks(state, n=4001):
    """Locations where psi' jumps on a fine grid but no KinkPoint is listed."""
    lo, hi = state.domain
    lo = max(lo, state.support[0])
    hi = min(hi, state.support[1])
    x = np.linspace(lo, hi, n)[1:-1]
    listed = np.sort([k.location for k in state.kinks])
    if listed.size:
        x = x[np.min(np.abs(x[:, None] - listed[None, :]), axis=1) > 1e-12]
    d1 = state.dpsi(x)
    d2 = np.abs(state.d2psi(x))
    step = np.diff(x)
    jump = np.abs(np.diff(d1))
    local = np.maximum(d2[:-1], d2[1:]) * step
    limit = 8.0 * local + 1e-6 * max(float(np.max(np.abs(d1))), 1e-300)
    suspicious = jump > limit
    if listed.size:
        covered = (np.searchsorted(listed, x[1:], side="right")
                   - np.searchsorted(listed, x[:-1], side="right")) > 0
        suspicious &= ~covered
    return x[:-1][suspicious]


def delta_route_parts(state, cfg=None):
    """Split <p^2> = -int psi psi'' - sum psi(x_k) J_k into its two pieces."""
    missing = _unlisted_kinks(state)
    if missing.size:
        raise InconsistencyError(
            f"{state.label}: psi' jumps near x={missing[0]:.6g} but no kink is recorded there"
        )
    d2psi = state.d2psi
    reg = integrate(lambda x: state.psi(x) * d2psi(x), state.domain, state.breakpoints,
                    _scaled(cfg, state, -2))
    _checked(reg, "int psi psi''")
    delta = -math.fsum(float(state.psi(np.array([k.location]))[0]) * k.jump_psi_prime
                       for k in state.kinks)
    return DeltaRouteParts(regular=-float(reg.value), delta=delta, est_error=reg.est_error)


def momentum_sq_delta_route(state, cfg=None):
    """<p^2> from the second derivative plus analytic delta terms at kinks."""
    return delta_route_parts(state, cfg).total


def _route(name, dx, var_x, err_x, mean_p2, err_p2, mean_p=0.0):
    var_p = mean_p2 - mean_p ** 2
    if var_p <= 0:
        raise InconsistencyError(f"route {name}: non-positive momentum variance {var_p}")
    dp = math.sqrt(var_p)
    U = dx * dp
    err = U * (0.5 * err_x / var_x + 0.5 * err_p2 / var_p)
    return RouteResult(name, U, dp, err)


def uncertainty(state, cfg=None, momentum=False, p_max=None, threads=1):
    """Delta x, Delta p and U by every available route.

    With ``momentum=True`` the momentum-space route (numerical Fourier
    transform) is added.  Raises InconsistencyError when routes disagree by
    more than 100x their combined error estimates.
    """
    mx, mx2 = _position_integrals(state, cfg)
    mean_x, mean_x2 = float(mx.value), float(mx2.value)
    mean_p = momentum_mean(state, cfg)
    var_x = mean_x2 - mean_x ** 2
    if var_x <= 0:
        raise InconsistencyError(f"{state.label}: non-positive position variance {var_x}")
    dx = math.sqrt(var_x)
    err_x = mx2.est_error + 2 * abs(mean_x) * mx.est_error

    first = _first_derivative_integral(state, cfg)
    parts = delta_route_parts(state, cfg)
    routes = [
        _route(FIRST_DERIVATIVE, dx, var_x, err_x, float(first.value), first.est_error, mean_p),
        _route(DELTA_ROUTE, dx, var_x, err_x, parts.total, parts.est_error, mean_p),
    ]
    moment_sets = [
        MomentSet(mean_x, mean_x2, mean_p, float(first.value), FIRST_DERIVATIVE,
                  {"mean_x": mx.est_error, "mean_x2": mx2.est_error, "mean_p2": first.est_error}),
        MomentSet(mean_x, mean_x2, mean_p, parts.total, DELTA_ROUTE,
                  {"mean_x": mx.est_error, "mean_x2": mx2.est_error, "mean_p2": parts.est_error}),
    ]
    if momentum:
        from .fourier import momentum_moments

        mm = momentum_moments(state, p_max=p_max, cfg=cfg, threads=threads)
        routes.append(_route(MOMENTUM_ROUTE, dx, var_x, err_x, mm.mean_p2,
                             mm.tail_bound + mm.est_error, mm.mean_p))
        moment_sets.append(MomentSet(mean_x, mean_x2, mm.mean_p, mm.mean_p2, MOMENTUM_ROUTE,
                                     {"mean_x": mx.est_error, "mean_x2": mx2.est_error,
                                      "mean_p2": mm.tail_bound + mm.est_error}))

    worst = 0.0
    for i, a in enumerate(routes):
        for b in routes[i + 1:]:
            gap = abs(a.U - b.U)
            worst = max(worst, gap)
            allowed = 100.0 * (a.est_error + b.est_error) + ROUTE_ROUNDOFF * a.U
            if gap > allowed:
                raise InconsistencyError(
                    f"{state.label}: routes {a.name} and {b.name} disagree, "
                    f"U = {a.U:.15g} vs {b.U:.15g} (allowed {allowed:.3g})"
                )

    main = routes[0]
    return UncertaintyReport(
        state=state.label,
        family=state.family,
        params=dict(state.params),
        dx=dx,
        dp=main.dp,
        U=main.U,
        routes=tuple(routes),
        max_route_discrepancy=worst,
        heisenberg_ok=main.U >= 0.5 - HEISENBERG_TOL,
        closed_U=state.closed_U,
        moments=tuple(moment_sets),
        delta_parts=parts,
    )
