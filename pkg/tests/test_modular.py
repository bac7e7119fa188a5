"""q-expansions checked against the independent integer oracle."""

import pytest

from oracles import oracle_delta_over_q, oracle_e4, oracle_j

from kolchin.modular import delta_series, eisenstein, j_series
from kolchin.series import TruncatedSeries

N = 60


@pytest.fixture(scope="module")
def oracle():
    return oracle_j(N)


def test_eisenstein_examples():
    assert eisenstein(4, 3) == TruncatedSeries([1, 240, 2160], 0, 3)
    assert eisenstein(6, 2) == TruncatedSeries([1, -504], 0, 2)
    assert eisenstein(4, 1) == TruncatedSeries([1], 0, 1)
    with pytest.raises(ValueError):
        eisenstein(8, 3)


def test_eisenstein_against_oracle():
    assert list(eisenstein(4, N).coeffs) == oracle_e4(N)


def test_delta_shape_and_oracle():
    d = delta_series(N)
    assert d.valuation == 1 and d.coefficient(1) == 1
    expect = oracle_delta_over_q(N - 1)
    assert [d.coefficient(e) for e in range(1, N)] == expect
    assert d.coefficient(2) == -24 and d.coefficient(3) == 252


def test_j_small():
    assert j_series(3) == TruncatedSeries([1, 744, 196884], -1, 2)


def test_j_against_oracle(oracle):
    j = j_series(N)
    assert j.valuation == -1
    assert j.coefficient(-1) == 1
    assert j.coefficient(0) == 744
    assert j.coefficient(1) == 196884
    assert [j.coefficient(e) for e in range(-1, N - 1)] == oracle


def test_known_j_coefficient(oracle):
    # third coefficient of the classical expansion, from the oracle only
    assert oracle[3] == 21493760


def test_theta_of_j():
    tj = j_series(10).theta()
    assert tj.coefficient(-1) == -1
    assert tj.coefficient(0) == 0
    assert tj.coefficient(1) == 196884
