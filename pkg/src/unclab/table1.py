"""The seven tabulated ground states, with their momentum forms exactly as
printed in the reference table.

Two printed momentum forms are not normalized: row 1 carries 2 sqrt(a pi)
and row 7 carries sqrt(3a/pi), each a factor 2 above the transform that
satisfies Parseval.  The catalog (``states``) stores the normalized forms;
the printed ones are kept here so comparisons against the table stay honest.
"""

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .states import make_state

_PI = math.pi


def _printed_idw(p, a=1.0):
    u = np.abs(a * np.asarray(p, float))
    core = np.sinc((_PI - u) / (2 * _PI)) / (_PI + u)
    return 2.0 * math.sqrt(a * _PI) * np.exp(0.5j * a * np.asarray(p, float)) * core


def _printed_ho(p):
    return _PI ** -0.25 * np.exp(-0.5 * np.asarray(p, float) ** 2)


def _printed_srm1(p):
    return 0.5 * math.sqrt(_PI) / np.cosh(0.5 * _PI * np.asarray(p, float))


def _printed_srm2(p):
    p = np.asarray(p, float)
    safe = np.where(p == 0, 1.0, p)
    with np.errstate(over="ignore"):
        ratio = np.where(p == 0, 2.0 / _PI, safe / np.sinh(0.5 * _PI * safe))
    return math.sqrt(3.0 * _PI / 8.0) * ratio


def _printed_morse_modulus(p):
    # |Gamma(1/2 + ip)| / sqrt(pi)
    with np.errstate(over="ignore"):
        return np.sqrt(1.0 / np.cosh(_PI * np.asarray(p, float)))


def _printed_delta_well(p, a=1.0):
    q = a * np.asarray(p, float)
    return math.sqrt(2.0 * a / _PI) / (1.0 + q * q)


def _printed_delta_in_box(p, a=1.0):
    return math.sqrt(3.0 * a / _PI) * np.sinc(a * np.asarray(p, float) / (2.0 * _PI)) ** 2


@dataclass(frozen=True)
class Table1Row:
    number: int
    potential: str
    family: str
    params: Mapping[str, float]
    closed_U: float
    printed_phi: Callable
    phi_modulus_only: bool = False
    kinked: bool = False

    def state(self):
        return make_state(self.family, dict(self.params))


ROWS = (
    Table1Row(1, "infinitely deep well", "idw", {"a": 1.0},
              0.5 * math.sqrt((_PI ** 2 - 6.0) / 3.0), _printed_idw, kinked=True),
    Table1Row(2, "harmonic oscillator", "ho", {}, 0.5, _printed_ho),
    Table1Row(3, "symmetric Rosen-Morse s=1", "srm", {"s": 1.0}, _PI / 6.0, _printed_srm1),
    Table1Row(4, "symmetric Rosen-Morse s=2", "srm", {"s": 2.0},
              math.sqrt((_PI ** 2 - 6.0) / 15.0), _printed_srm2),
    Table1Row(5, "Morse lambda=1", "morse", {"lambda": 1.0},
              _PI / (2.0 * math.sqrt(6.0)), _printed_morse_modulus, phi_modulus_only=True),
    Table1Row(6, "delta well", "delta-well", {"alpha": 1.0},
              1.0 / math.sqrt(2.0), _printed_delta_well, kinked=True),
    Table1Row(7, "delta between rigid walls", "delta-in-box", {"a": 1.0},
              math.sqrt(0.3), _printed_delta_in_box, kinked=True),
)


def row(number):
    return ROWS[number - 1]
