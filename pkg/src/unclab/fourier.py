"""Momentum representation phi(p) = (2 pi)^(-1/2) int psi(x) e^{-ipx} dx.

Transforms are evaluated pointwise by oscillatory quadrature (no FFT).  The
momentum moments integrate |phi|^2 on [-p_max, p_max] and add the tail
beyond p_max from the large-p expansion

    phi(p) ~ -(2 pi)^(-1/2) sum_k J_k e^{-i p x_k} / p^2,

where J_k are the jumps of psi' at kinks and at hard walls.  Smooth states
have exponentially small tails, bounded from the observed decay rate.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from .errors import InconsistencyError
from .quadrature import DEFAULT_CONFIG, integrate, integrate_oscillatory

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
WALL_VALUE_TOL = 1e-8


@dataclass(frozen=True)
class MomentumMoments:
    mean_p: float
    mean_p2: float
    tail_bound: float
    norm: float
    tail_p2: float
    tail_norm: float
    est_error: float
    p_max: float

    @property
    def parseval_defect(self):
        return abs(1.0 - (self.norm + self.tail_norm))


@dataclass(frozen=True)
class MomentumProfile:
    p_grid: np.ndarray
    phi_values: np.ndarray
    p_max: float
    parseval_defect: float
    tail_bound: float


@dataclass(frozen=True)
class EquivalenceReport:
    state: str
    U_position: float
    U_momentum: float
    abs_diff: float
    dx: float
    dp_position: float
    dp_momentum: float
    parseval_defect: float
    tail_bound: float
    p_max: float


def _transform_one(state, p, cfg):
    r = integrate_oscillatory(state.psi, p, state.domain, state.breakpoints, cfg,
                              support=state.support)
    return r.value * _INV_SQRT_2PI


def transform(state, p, cfg=None, threads=1):
    """phi(p) for a scalar or an array of momenta."""
    cfg = cfg or DEFAULT_CONFIG
    if np.ndim(p) == 0:
        return complex(_transform_one(state, float(p), cfg))
    ps = np.asarray(p, float)
    flat = ps.ravel()
    if threads > 1 and flat.size > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(lambda q: _transform_one(state, q, cfg), flat))
    else:
        values = [_transform_one(state, q, cfg) for q in flat]
    return np.array(values, dtype=complex).reshape(ps.shape)


def closed_phi_residual(state, p_grid, squared=False, cfg=None, threads=1):
    """max | |phi_numeric| - |phi_closed| | over ``p_grid`` (or of |phi|^2)."""
    if state.closed_phi is None:
        raise ValueError(f"{state.label} has no closed-form momentum representation")
    ps = np.asarray(p_grid, float)
    numeric = np.abs(transform(state, ps, cfg, threads))
    closed = np.abs(state.closed_phi(ps))
    if squared:
        return float(np.max(np.abs(numeric ** 2 - closed ** 2)))
    return float(np.max(np.abs(numeric - closed)))


def edge_kinks(state):
    """All (location, jump of psi') pairs, including walls of a finite domain.

    Returns (kinks, wall_ok); wall_ok is False when psi does not vanish at a
    wall, in which case |phi|^2 only decays like p^-2.
    """
    pairs = [(k.location, k.jump_psi_prime) for k in state.kinks]
    wall_ok = True
    lo, hi = state.domain
    for end, sign in ((lo, +1.0), (hi, -1.0)):
        if math.isfinite(end):
            at = np.array([end])
            if abs(float(state.psi(at)[0])) > WALL_VALUE_TOL:
                wall_ok = False
            slope = float(state.dpsi(at)[0])
            if slope != 0.0:
                pairs.append((end, sign * slope))
    return sorted(pairs), wall_ok


def _cos_moment(d, P, n):
    """int_P^inf cos(p d) / p^n dp for integer n >= 1."""
    d = abs(d)
    if d == 0.0:
        return math.inf if n == 1 else 1.0 / ((n - 1) * P ** (n - 1))
    si, ci = sici(P * d)
    c_int = -ci  # n = 1
    s_int = 0.5 * math.pi - si
    c, s = math.cos(P * d), math.sin(P * d)
    for m in range(2, n + 1):
        c_int, s_int = (c / ((m - 1) * P ** (m - 1)) - d / (m - 1) * s_int,
                        s / ((m - 1) * P ** (m - 1)) + d / (m - 1) * c_int)
    return c_int


def kink_tail(pairs, P):
    """Leading one-sided tails int_P^inf p^m |phi|^2 dp for m = 0 and m = 2."""
    t0 = t2 = 0.0
    for xj, jj in pairs:
        for xk, jk in pairs:
            d = xj - xk
            t0 += jj * jk * _cos_moment(d, P, 4)
            t2 += jj * jk * _cos_moment(d, P, 2)
    scale = 1.0 / (2.0 * math.pi)
    return scale * t0, scale * t2


def _leading_model(pairs, p):
    s = sum(j * np.exp(-1j * p * x) for x, j in pairs)
    return np.abs(s) ** 2 / (2.0 * math.pi * p ** 4)


def _resolution_breakpoints(pairs, P):
    """Breakpoints every pi/d so oscillations of |phi|^2 are resolved."""
    if len(pairs) < 2:
        return []
    locs = [x for x, _ in pairs]
    d = max(locs) - min(locs)
    step = math.pi / d
    n = int(P / step)
    return [step * k for k in range(1, n + 1) if step * k < P]


class _PhiSquared:
    """|phi(p)|^2 with memoization, shared by the three moment integrals."""

    def __init__(self, state, cfg, threads):
        self.state, self.cfg, self.threads = state, cfg, threads
        self.cache = {}

    def __call__(self, ps):
        ps = np.asarray(ps, float)
        todo = [q for q in np.unique(ps) if q not in self.cache]
        if todo:
            values = np.abs(transform(self.state, np.array(todo), self.cfg, self.threads)) ** 2
            self.cache.update(zip(todo, values))
        return np.array([self.cache[q] for q in ps.ravel()]).reshape(ps.shape)


def momentum_moments(state, p_max=None, cfg=None, threads=1):
    """<p> and <p^2> from |phi|^2 on [-p_max, p_max] plus the analytic tail.

    psi is real, so phi(-p) = conj(phi(p)) and |phi|^2 is even: the
    integrals run over [0, p_max] and <p> vanishes (the symmetry is checked
    numerically at a few momenta).
    """
    cfg = cfg or DEFAULT_CONFIG
    P = float(p_max or state.p_max)
    if not P > 0:
        raise ValueError("p_max must be positive")
    phi2 = _PhiSquared(state, cfg, threads)

    probes = np.linspace(0.1, 0.9, 5) * P
    asym = np.max(np.abs(np.abs(transform(state, -probes, cfg, threads)) ** 2 - phi2(probes)))
    if asym > 1e-10 * max(1.0, float(np.max(phi2(probes)))):
        raise InconsistencyError(f"{state.label}: |phi(p)| is not even (defect {asym:.3g})")

    pairs, wall_ok = edge_kinks(state)
    bps = _resolution_breakpoints(pairs, P)
    p_cfg = cfg
    norm = integrate(phi2, (0.0, P), bps, p_cfg)
    m2 = integrate(lambda p: p * p * phi2(p), (0.0, P), bps, p_cfg)
    norm_val = 2.0 * float(norm.value)
    m2_val = 2.0 * float(m2.value)
    est = 2.0 * (norm.est_error + m2.est_error)

    if not wall_ok:
        tail_norm, tail_p2, bound = 0.0, 0.0, math.inf
    elif pairs:
        t0, t2 = kink_tail(pairs, P)
        tail_norm, tail_p2 = 2.0 * t0, 2.0 * t2
        # measured departure of |phi|^2 from the leading model near p_max
        period = 2.0 * math.pi / max(1e-300, max(x for x, _ in pairs) - min(x for x, _ in pairs)) \
            if len(pairs) > 1 else 0.1 * P
        window = np.linspace(max(P - min(period, 0.5 * P), 0.5 * P), P, 33)
        model = _leading_model(pairs, window)
        total_j = sum(abs(j) for _, j in pairs)
        ref = total_j ** 2 / (2.0 * math.pi * window ** 4)
        rel_dev = float(np.max(np.abs(phi2(window) - model) / ref))
        bound = 2.0 * 2.0 * rel_dev * total_j ** 2 / (2.0 * math.pi * P)
    else:
        tail_norm = tail_p2 = 0.0
        a, b = phi2(np.array([0.9 * P, P]))
        if b == 0.0:
            bound = 0.0
        else:
            kappa = math.log(a / b) / (0.1 * P) if a > b else 0.0
            if kappa > 0:
                bound = 2.0 * 2.0 * b * (P * P / kappa + 2 * P / kappa ** 2 + 2 / kappa ** 3)
            else:
                bound = 2.0 * b * P ** 3
    return MomentumMoments(
        mean_p=0.0,
        mean_p2=m2_val + tail_p2,
        tail_bound=bound,
        norm=norm_val,
        tail_p2=tail_p2,
        tail_norm=tail_norm,
        est_error=est,
        p_max=P,
    )


def momentum_profile(state, p_max=None, samples=201, cfg=None, threads=1):
    """phi on a uniform grid over [-p_max, p_max] plus its Parseval defect."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    P = float(p_max or state.p_max)
    grid = np.linspace(-P, P, int(samples))
    phi = transform(state, grid, cfg, threads)
    mm = momentum_moments(state, P, cfg, threads)
    return MomentumProfile(grid, phi, P, mm.parseval_defect, mm.tail_bound)


def equivalence_check(state, cfg=None, p_max=None, threads=1):
    """Compare U from the position route with U using <p^2> from phi(p)."""
    from .moments import uncertainty

    pos = uncertainty(state, cfg)
    mm = momentum_moments(state, p_max, cfg, threads)
    dp_mom = math.sqrt(mm.mean_p2 - mm.mean_p ** 2)
    U_mom = pos.dx * dp_mom
    return EquivalenceReport(
        state=state.label,
        U_position=pos.U,
        U_momentum=U_mom,
        abs_diff=abs(U_mom - pos.U),
        dx=pos.dx,
        dp_position=pos.dp,
        dp_momentum=dp_mom,
        parseval_defect=mm.parseval_defect,
        tail_bound=mm.tail_bound,
        p_max=mm.p_max,
    )
