import dataclasses
import math

import numpy as np
import pytest

from unclab.errors import InconsistencyError
from unclab.moments import (
    DELTA_ROUTE,
    FIRST_DERIVATIVE,
    MomentSet,
    delta_route_parts,
    momentum_mean,
    momentum_sq_delta_route,
    momentum_sq_first_derivative,
    position_moments,
    uncertainty,
)
from unclab.special_fns import trigamma
from unclab.states import make_state

PI = math.pi
IDW_U = 0.5 * math.sqrt((PI ** 2 - 6) / 3)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 4.0])
def test_delta_well_moments(alpha):
    st = make_state("delta-well", alpha=alpha)
    mx, mx2 = position_moments(st)
    assert abs(mx) <= 1e-12
    assert mx2 == pytest.approx(1 / (2 * alpha ** 2), rel=1e-12)
    assert momentum_sq_first_derivative(st) == pytest.approx(alpha ** 2, rel=1e-12)
    assert momentum_sq_delta_route(st) == pytest.approx(alpha ** 2, rel=1e-12)


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
def test_delta_in_box_moments(a):
    st = make_state("delta-in-box", a=a)
    mx, mx2 = position_moments(st)
    assert abs(mx) <= 1e-12 * a
    assert mx2 == pytest.approx(a * a / 10, rel=1e-12)
    assert momentum_sq_first_derivative(st) == pytest.approx(3 / a ** 2, rel=1e-12)
    parts = delta_route_parts(st)
    assert abs(parts.regular) <= 1e-12
    assert parts.delta == pytest.approx(3 / a ** 2, rel=1e-12)


@pytest.mark.parametrize("a", [1.0, 2.5])
def test_idw_moments(a):
    mx, mx2 = position_moments(make_state("idw", a=a))
    assert mx == pytest.approx(a / 2, rel=1e-12)
    assert mx2 == pytest.approx(a * a * (1 / 3 - 1 / (2 * PI ** 2)), rel=1e-12)


def test_ho_momentum_routes():
    st = make_state("ho")
    assert momentum_sq_first_derivative(st) == pytest.approx(0.5, abs=1e-13)
    parts = delta_route_parts(st)
    assert parts.delta == 0.0
    assert parts.regular == pytest.approx(0.5, abs=1e-13)


def test_delta_well_bookkeeping():
    parts = delta_route_parts(make_state("delta-well", alpha=1.0))
    assert parts.regular == pytest.approx(-1.0, abs=1e-10)
    assert parts.delta == pytest.approx(2.0, abs=1e-10)
    assert parts.total == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("family,params", [("delta-well", {"alpha": 1}), ("delta-in-box", {"a": 1}),
                                           ("morse", {"lambda": 1}), ("srm", {"s": 2}), ("idw", {"a": 2})])
def test_mean_momentum_vanishes(family, params):
    assert momentum_mean(make_state(family, params)) == 0.0


@pytest.mark.parametrize("family,params,U", [
    ("delta-well", {"alpha": 3.0}, 1 / math.sqrt(2)),
    ("delta-in-box", {"a": 0.7}, math.sqrt(0.3)),
    ("idw", {"a": 5.0}, IDW_U),
    ("srm", {"s": 2.0}, math.sqrt((PI ** 2 - 6) / 15)),
    ("srm", {"s": 1.0}, PI / 6),
    ("morse", {"lambda": 1.0}, PI / (2 * math.sqrt(6))),
    ("ho", {}, 0.5),
    ("lorentzian", {"alpha": 2.0}, 1 / math.sqrt(2)),
])
def test_uncertainty_examples(family, params, U):
    rep = uncertainty(make_state(family, params))
    assert rep.U == pytest.approx(U, abs=1e-9)
    assert rep.U == rep.dx * rep.dp
    assert rep.heisenberg_ok
    assert rep.route(FIRST_DERIVATIVE).U == pytest.approx(rep.route(DELTA_ROUTE).U, abs=1e-8)
    if rep.closed_U is not None:
        assert rep.closed_diff <= 1e-9


@pytest.mark.parametrize("family,key", [("delta-well", "alpha"), ("delta-in-box", "a"), ("idw", "a")])
def test_scale_invariance(family, key):
    values = [uncertainty(make_state(family, {key: v})).U for v in (0.1, 1.0, 7.3, 50.0)]
    assert max(values) - min(values) <= 1e-10


def test_only_gaussian_saturates():
    assert uncertainty(make_state("ho")).U == pytest.approx(0.5, abs=1e-10)
    for family in ("idw", "srm", "morse", "delta-well", "delta-in-box", "lorentzian"):
        assert uncertainty(make_state(family)).U > 0.5 + 1e-3


def test_morse_against_trigamma():
    rep = uncertainty(make_state("morse", {"lambda": 1.0}))
    assert rep.dx == pytest.approx(math.sqrt(trigamma(1.0).value), abs=1e-9)
    assert rep.dx == pytest.approx(PI / math.sqrt(6), abs=1e-9)
    assert rep.U == pytest.approx(PI / (2 * math.sqrt(6)), abs=1e-9)


@pytest.mark.parametrize("family", ["delta-well", "delta-in-box", "ho", "srm", "morse", "idw"])
def test_hermiticity_identity(family):
    st = make_state(family)
    assert momentum_sq_first_derivative(st) == pytest.approx(momentum_sq_delta_route(st), abs=1e-9)


def test_missing_kink_is_inconsistent():
    st = dataclasses.replace(make_state("delta-well"), kinks=())
    with pytest.raises(InconsistencyError):
        delta_route_parts(st)
    with pytest.raises(InconsistencyError):
        uncertainty(st)


def test_nonzero_mean_momentum_is_rejected():
    root3 = math.sqrt(3.0)
    st = dataclasses.replace(
        make_state("idw"),
        psi=lambda x: np.where((x >= 0) & (x <= 1), root3 * x, 0.0),
        dpsi=lambda x: np.where((x >= 0) & (x <= 1), root3, 0.0),
    )
    with pytest.raises(InconsistencyError):
        momentum_mean(st)


def test_moment_set_rejects_negative_variance():
    with pytest.raises(InconsistencyError):
        MomentSet(1.0, 0.5, 0.0, 1.0, FIRST_DERIVATIVE)


def test_report_routes_and_momentum():
    rep = uncertainty(make_state("ho"), momentum=True)
    names = [r.name for r in rep.routes]
    assert names == [FIRST_DERIVATIVE, DELTA_ROUTE, "momentum_space"]
    assert rep.max_route_discrepancy <= 1e-10
    with pytest.raises(KeyError):
        rep.route("nope")
