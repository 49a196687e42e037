import math

import numpy as np
import pytest

from unclab import uncertainty
from unclab.errors import DomainError, IngestionError, KinkEvaluationError, UnsupportedCatalogError
from unclab.quadrature import integrate
from unclab.states import (
    KinkPoint,
    derivative,
    evaluate,
    ingest_tabulated,
    make_state,
    read_tabulated_csv,
    second_derivative,
)

CATALOG = [
    ("idw", {"a": 1.0}), ("idw", {"a": 3.7}),
    ("ho", {}),
    ("srm", {"s": 1.0}), ("srm", {"s": 2.0}),
    ("morse", {"lambda": 1.0}),
    ("delta-well", {"alpha": 1.0}), ("delta-well", {"alpha": 0.2}),
    ("delta-in-box", {"a": 1.0}), ("delta-in-box", {"a": 4.0}),
    ("lorentzian", {"alpha": 1.0}), ("lorentzian", {"alpha": 2.5}),
]


def _ids(cases):
    return [f"{f}-{'-'.join(f'{v:g}' for v in p.values())}" for f, p in cases]


@pytest.mark.parametrize("family,params", CATALOG, ids=_ids(CATALOG))
def test_normalized(family, params):
    st = make_state(family, params)
    r = integrate(lambda x: st.psi(x) ** 2, st.domain, st.breakpoints)
    assert r.value == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("family,params", CATALOG, ids=_ids(CATALOG))
def test_kink_continuity_and_jump(family, params):
    st = make_state(family, params)
    for k in st.kinks:
        eps = 1e-12
        assert evaluate(st, k.location - eps) == pytest.approx(evaluate(st, k.location + eps), abs=1e-10)
        h = 1e-5
        x0 = k.location
        right = (-3 * evaluate(st, x0) + 4 * evaluate(st, x0 + h) - evaluate(st, x0 + 2 * h)) / (2 * h)
        left = (3 * evaluate(st, x0) - 4 * evaluate(st, x0 - h) + evaluate(st, x0 - 2 * h)) / (2 * h)
        assert right - left == pytest.approx(k.jump_psi_prime, rel=1e-8)


@pytest.mark.parametrize("family,params", [c for c in CATALOG if c[0] in ("idw", "delta-in-box")],
                         ids=_ids([c for c in CATALOG if c[0] in ("idw", "delta-in-box")]))
def test_walls(family, params):
    st = make_state(family, params)
    lo, hi = st.domain
    assert evaluate(st, lo) == pytest.approx(0.0, abs=1e-15)
    assert evaluate(st, hi) == pytest.approx(0.0, abs=1e-15)
    assert evaluate(st, hi + 0.5) == 0.0


@pytest.mark.parametrize("family,params", [c for c in CATALOG if c[0] not in ("idw", "morse")],
                         ids=_ids([c for c in CATALOG if c[0] not in ("idw", "morse")]))
def test_parity(family, params):
    st = make_state(family, params)
    x = np.linspace(0.01, 5.0, 200)
    np.testing.assert_array_equal(st.psi(x), st.psi(-x))


@pytest.mark.parametrize("family,params", CATALOG, ids=_ids(CATALOG))
def test_derivatives_match_finite_differences(family, params):
    st = make_state(family, params)
    lo, hi = st.support
    lo, hi = max(lo, -3.0), min(hi, 3.0)
    kinks = [k.location for k in st.kinks]
    h = 1e-5
    for x in np.linspace(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), 9):
        if any(abs(x - c) < 10 * h for c in kinks):
            continue
        fd = (evaluate(st, x + h) - evaluate(st, x - h)) / (2 * h)
        assert derivative(st, x) == pytest.approx(fd, abs=1e-7)
        fd2 = (derivative(st, x + h) - derivative(st, x - h)) / (2 * h)
        assert second_derivative(st, x) == pytest.approx(fd2, abs=1e-6)


def test_delta_well_example():
    st = make_state("delta-well", alpha=1.0)
    assert evaluate(st, 0.0) == pytest.approx(1.0)
    assert evaluate(st, 1.0) == pytest.approx(math.exp(-1))
    assert st.closed_U == pytest.approx(1 / math.sqrt(2))
    assert len(st.kinks) == 1 and st.kinks[0].jump_psi_prime == pytest.approx(-2.0)
    assert derivative(st, 2.0) == pytest.approx(-math.exp(-2))


def test_delta_well_kink_scaling():
    alpha = 3.0
    st = make_state("delta-well", alpha=alpha)
    assert st.kinks[0].jump_psi_prime == pytest.approx(-2 * alpha ** 1.5)


def test_delta_in_box_example():
    st = make_state("delta-in-box", a=1.0)
    assert evaluate(st, 0.0) == pytest.approx(math.sqrt(1.5))
    assert evaluate(st, 1.0) == 0.0 and evaluate(st, -1.0) == 0.0
    assert st.closed_U == pytest.approx(math.sqrt(0.3))
    assert derivative(st, -0.5) == pytest.approx(math.sqrt(1.5))
    assert st.kinks[0].jump_psi_prime == pytest.approx(-2 * math.sqrt(1.5))


def test_ho_example():
    st = make_state("ho")
    x = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(st.psi(x), np.exp(-x * x / 2) / math.pi ** 0.25, rtol=1e-15)
    assert st.closed_U == 0.5 and st.kinks == ()
    assert derivative(st, 0.0) == 0.0


def test_pointwise_examples():
    assert evaluate(make_state("srm", s=1), 0.0) == pytest.approx(1 / math.sqrt(2))
    assert evaluate(make_state("idw", a=1), 1.5) == 0.0
    assert evaluate(make_state("morse", {"lambda": 1}), 0.0) == pytest.approx(math.sqrt(2) / math.e)


def test_array_evaluation_shape():
    st = make_state("ho")
    assert evaluate(st, np.zeros((2, 3))).shape == (2, 3)
    assert isinstance(evaluate(st, 0.5), float)


def test_derivative_at_kink_rejected():
    st = make_state("delta-well")
    with pytest.raises(KinkEvaluationError):
        derivative(st, 0.0)
    with pytest.raises(KinkEvaluationError):
        second_derivative(st, np.array([1.0, 0.0]))


@pytest.mark.parametrize("family,params", [("delta-well", {"alpha": 0}), ("idw", {"a": -1}),
                                           ("delta-in-box", {"a": math.inf}), ("ho", {"a": 1}),
                                           ("nope", {})])
def test_bad_parameters(family, params):
    with pytest.raises(DomainError):
        make_state(family, params)


@pytest.mark.parametrize("family,params", [("srm", {"s": 3}), ("srm", {"s": 1.5}), ("morse", {"lambda": 2})])
def test_unsupported_catalog(family, params):
    with pytest.raises(UnsupportedCatalogError):
        make_state(family, params)


def test_zero_jump_kink_rejected():
    with pytest.raises(DomainError):
        KinkPoint(0.0, 0.0)


def test_states_are_immutable():
    st = make_state("ho")
    with pytest.raises(Exception):
        st.family = "idw"
    with pytest.raises(TypeError):
        st.params["x"] = 1.0


# -- ingestion ---------------------------------------------------------------

def _triangle(n=2001):
    x = np.linspace(-1, 1, n)
    return np.column_stack([x, math.sqrt(1.5) * (1 - np.abs(x))])


def test_ingest_triangle():
    st = ingest_tabulated(_triangle(), [0.0])
    assert abs(uncertainty(st).U - math.sqrt(0.3)) <= 1e-3
    assert st.kinks[0].jump_psi_prime == pytest.approx(-2 * math.sqrt(1.5), rel=1e-6)


def test_ingest_gaussian():
    x = np.linspace(-10, 10, 2001)
    st = ingest_tabulated(np.column_stack([x, np.exp(-x * x / 2)]), [])
    assert abs(uncertainty(st).U - 0.5) <= 1e-6


def test_ingest_renormalizes():
    x = np.linspace(-20, 20, 2001)
    st = ingest_tabulated(np.column_stack([x, 2 * np.exp(-np.abs(x))]), [0.0])
    assert st.params["norm_factor"] == pytest.approx(0.5, rel=1e-5)
    r = integrate(lambda t: st.psi(t) ** 2, st.domain, st.breakpoints)
    assert r.value == pytest.approx(1.0, abs=1e-4)
    assert abs(uncertainty(st).U - 1 / math.sqrt(2)) <= 1e-3


def test_ingest_too_few():
    with pytest.raises(IngestionError) as info:
        ingest_tabulated(_triangle(63), [])
    assert info.value.index == 63


def test_ingest_non_monotone():
    data = _triangle(101)
    data[40, 0] = data[38, 0]
    with pytest.raises(IngestionError) as info:
        ingest_tabulated(data, [])
    assert info.value.index in (39, 40)


def test_ingest_kink_off_grid():
    with pytest.raises(IngestionError) as info:
        ingest_tabulated(_triangle(100), [0.0])
    assert info.value.index == 0


def test_ingest_nonfinite():
    data = _triangle(101)
    data[7, 1] = np.nan
    with pytest.raises(IngestionError) as info:
        ingest_tabulated(data, [])
    assert info.value.index == 7


def test_read_csv(tmp_path):
    path = tmp_path / "tri.csv"
    rows = "\n".join(f"{x:.17g},{y:.17g}" for x, y in _triangle(201))
    path.write_text("# triangle\nx,psi\n" + rows + "\n")
    samples = read_tabulated_csv(path)
    assert len(samples) == 201
    bad = tmp_path / "bad.csv"
    bad.write_text("x,phi\n0,1\n")
    with pytest.raises(IngestionError):
        read_tabulated_csv(bad)
