"""Deep-well limit scans of the closed-form uncertainty products."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special_fns import morse_excess, morse_uncertainty, srm_excess, srm_uncertainty

LIMIT_FAMILIES = {
    "srm": (srm_uncertainty, srm_excess, 0.0),
    "morse": (morse_uncertainty, morse_excess, 0.5),
}


@dataclass(frozen=True)
class LimitScan:
    family: str
    grid: tuple
    U_values: tuple
    excess: tuple  # U - 1/2, computed without cancellation
    fitted_exponent: float
    fitted_prefactor: float

    def rows(self):
        return list(zip(self.grid, self.U_values, self.excess))


def fit_power_law(params, excess):
    """Least-squares fit of log(excess) = log(C) + k log(param); returns (k, C)."""
    x = np.log(np.asarray(params, float))
    y = np.log(np.asarray(excess, float))
    k, logc = np.polyfit(x, y, 1)
    return float(k), float(math.exp(logc))


def limit_scan(family, grid):
    """Evaluate U on a strictly increasing parameter grid and fit the decay
    of U - 1/2 over the top decade of the grid."""
    if family not in LIMIT_FAMILIES:
        raise DomainError(f"limit scans support {sorted(LIMIT_FAMILIES)}, got {family!r}")
    u_fn, excess_fn, lower = LIMIT_FAMILIES[family]
    grid = [float(g) for g in grid]
    if len(grid) < 2:
        raise DomainError("limit scan needs at least two grid points")
    if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
        raise DomainError("grid must be strictly increasing")
    if grid[0] <= lower:
        raise DomainError(f"{family} parameters must exceed {lower}")
    U = tuple(u_fn(g) for g in grid)
    excess = tuple(excess_fn(g) for g in grid)

    top = [(g, e) for g, e in zip(grid, excess) if g >= grid[-1] / 10.0]
    if len(top) < 2:
        top = list(zip(grid, excess))[-2:]
    k, c = fit_power_law(*zip(*top))
    return LimitScan(family, tuple(grid), U, excess, k, c)


def geometric_grid(lo, hi, points):
    """``points`` geometrically spaced values from lo to hi inclusive."""
    if points < 2 or not 0 < lo < hi:
        raise DomainError("need 0 < lo < hi and at least two points")
    return list(np.geomspace(lo, hi, int(points)))
