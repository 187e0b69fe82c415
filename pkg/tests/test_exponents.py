from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wienercert.exponents import (
    INF,
    Exponent,
    ExponentAssignment,
    as_eta,
    basis,
    enumerate_etas,
    weight,
)


def test_enumerate_small_dimensions():
    assert enumerate_etas(1) == [(0,), (1,)]
    assert enumerate_etas(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    etas = enumerate_etas(3)
    assert len(etas) == 8
    assert sum(weight(e) for e in etas) == 12
    assert etas[0] == (0, 0, 0) and etas[-1] == (1, 1, 1)


@pytest.mark.parametrize("d", [0, 17, -1])
def test_dimension_out_of_range(d):
    with pytest.raises(ValueError):
        enumerate_etas(d)


def test_basis_vector():
    assert basis(3, 2) == (0, 1, 0)
    with pytest.raises(ValueError):
        basis(3, 4)


def test_eta_parsing():
    assert as_eta("011") == (0, 1, 1)
    assert as_eta([1, 0], 2) == (1, 0)
    with pytest.raises(ValueError):
        as_eta("012")
    with pytest.raises(ValueError):
        as_eta("01", 3)


def test_exponent_parsing_and_reciprocal():
    assert Exponent.of("3/2").value == F(3, 2)
    assert Exponent.of(1.2).value == F(6, 5)
    assert Exponent.of("inf").is_inf
    assert INF.reciprocal == 0
    assert str(Exponent.of("4/2")) == "2"
    with pytest.raises(ValueError):
        Exponent.of("1/2")


def test_conjugate_endpoints():
    assert Exponent.of(1).conjugate() == INF
    assert INF.conjugate() == Exponent.of(1)
    assert Exponent.of(2).conjugate() == Exponent.of(2)
    assert Exponent.of(3).conjugate().value == F(3, 2)


def test_ordering_puts_infinity_last():
    xs = sorted([INF, Exponent.of(2), Exponent.of(1), Exponent.of(F(3, 2))])
    assert [str(x) for x in xs] == ["1", "3/2", "2", "inf"]


@given(st.fractions(min_value=1, max_value=1000))
def test_conjugate_is_exact(p):
    e = Exponent.of(p)
    assert e.reciprocal + e.conjugate().reciprocal == 1
    assert e.conjugate().conjugate() == e


def test_assignment_requires_full_table():
    with pytest.raises(ValueError):
        ExponentAssignment(2, {(0, 0): Exponent.of(1)})


def test_assignment_rejects_p_one_for_derivatives():
    with pytest.raises(ValueError):
        ExponentAssignment.build(2, 1, 1)


def test_infinite_derivative_exponent_needs_flag():
    with pytest.raises(ValueError):
        ExponentAssignment.build(2, 1, INF)
    a = ExponentAssignment.build(2, 1, INF, {"11": 2}, ["01", "10"])
    assert a["01"].is_inf
    assert a.reciprocal_sum() == F(3, 2)


def test_assignment_accessors():
    a = ExponentAssignment.build(2, 1, 2, {"11": F(4, 3)})
    assert a.p0 == Exponent.of(1)
    assert a.p1.value == F(4, 3)
    assert a.reciprocal_sum(include_zero=False) == F(1, 2) + F(1, 2) + F(3, 4)
