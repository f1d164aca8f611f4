import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import jv

from acoustic_qed.bessel import BesselDomainError, bessel_j, bessel_j_orders, bessel_j_range

from oracles import bessel_quadrature


@pytest.mark.parametrize(
    "n, x",
    [(0, 0.0), (1, 0.0), (0, 1.0), (1, 1.8412), (2, 1.84), (3, 4.2), (5, 0.3), (-1, 2.0),
     (-2, 3.3), (10, 12.0), (40, 50.0), (150, 10.0), (1, -2.5), (0, 1e-9), (1, 1e-9)],
)
def test_matches_quadrature_oracle(n, x):
    assert bessel_j(n, x) == pytest.approx(bessel_quadrature(n, x), abs=1e-13)


def test_first_maximum_value():
    assert bessel_j(1, 1.8412) == pytest.approx(0.5818652242276431, abs=1e-13)


def test_trivial_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0


@settings(max_examples=200, deadline=None)
@given(st.integers(-60, 60), st.floats(-50, 50, allow_nan=False))
def test_agrees_with_scipy(n, x):
    assert bessel_j(n, x) == pytest.approx(jv(n, x), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 100), st.floats(-50, 50, allow_nan=False))
def test_reflection_symmetries(n, x):
    assert bessel_j(-n, x) == pytest.approx((-1) ** n * bessel_j(n, x), abs=1e-15)
    assert bessel_j(n, -x) == pytest.approx((-1) ** n * bessel_j(n, x), abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 50, allow_nan=False))
def test_normalisation(x):
    n_max = int(x) + 40
    assert float(np.sum(bessel_j_range(x, -n_max, n_max) ** 2)) == pytest.approx(1.0, abs=1e-12)


def test_recurrence_relation():
    x = 7.3
    j = bessel_j_orders(x, 30)
    n = np.arange(1, 29)
    assert np.allclose(j[n - 1] + j[n + 1], 2 * n / x * j[n], atol=1e-14)


def test_domain_errors():
    with pytest.raises(BesselDomainError):
        bessel_j(201, 1.0)
    with pytest.raises(BesselDomainError):
        bessel_j(1, 51.0)
    with pytest.raises(BesselDomainError):
        bessel_j(1.5, 1.0)
    with pytest.raises(ValueError):
        bessel_j(1, float("nan"))
