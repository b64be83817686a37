import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given
from numpy.polynomial import polynomial as P

from framedcurves import jets
from framedcurves.errors import DivisionNearZero, DomainError
from framedcurves.jets import Jet, JetVec3, jet_arith, jet_elem

from conftest import chained_fd, rel_err

finite = st.floats(-2.0, 2.0, allow_nan=False)
coeff_lists = st.lists(st.floats(-3.0, 3.0, allow_nan=False), min_size=1, max_size=4)


def poly_jet(c, t, order):
    T = Jet.variable(t, order)
    out = 0.0 * T
    for k, ck in enumerate(c):
        out = out + ck * T ** k
    return out


def poly_derivs(c, t, order):
    return [P.polyval(t, P.polyder(c, k)) if k < len(c) else 0.0 for k in range(order + 1)]


def test_square_of_t():
    T = Jet.variable(1.0, 4)
    np.testing.assert_allclose(jet_arith(T, T, "mul").coeffs, [1, 2, 2, 0, 0], atol=1e-15)


def test_secant_series_at_zero():
    T = Jet.variable(0.0, 4)
    one = Jet.constant(1.0, 0.0, 4)
    np.testing.assert_allclose(jet_arith(one, jets.cos(T), "div").coeffs, [1, 0, 1, 0, 5], atol=1e-13)


def test_secant_matches_fd():
    def sec(t, order):
        return 1.0 / jets.cos(Jet.variable(t, order))

    for k in range(1, 5):
        assert rel_err(sec(np.array(0.3), 4).d(k), chained_fd(sec, 0.3, k)) < 1e-6


def test_add_zero_is_identity():
    a = jets.sin(Jet.variable(0.7, 5)) * 3.0
    z = Jet.constant(0.0, 0.7, 5)
    np.testing.assert_array_equal(jet_arith(a, z, "add").coeffs, a.coeffs)


def test_sin_maclaurin():
    np.testing.assert_allclose(jet_elem(Jet.variable(0.0, 4), "sin").coeffs, [0, 1, 0, -1, 0], atol=1e-15)


def test_sqrt_binomial():
    T = Jet.variable(0.0, 2)
    np.testing.assert_allclose(jet_elem(1.0 + T, "sqrt").coeffs, [1, 0.5, -0.25], atol=1e-15)


def test_cos_of_constant():
    c = jet_elem(Jet.constant(0.4, 2.0, 5), "cos")
    np.testing.assert_allclose(c.coeffs, [math.cos(0.4), 0, 0, 0, 0, 0], atol=1e-15)


def test_division_pole_guard():
    T = Jet.variable(0.0, 3)
    with pytest.raises(DivisionNearZero):
        jets.sin(T) / T
    with pytest.raises(DivisionNearZero):
        1.0 / T


def test_domain_errors():
    with pytest.raises(DomainError):
        jets.sqrt(Jet.variable(0.0, 3))
    with pytest.raises(DomainError):
        jets.tan(Jet.variable(math.pi / 2, 3))
    with pytest.raises(DomainError):
        jets.atan2(Jet.constant(0.0, 1.0, 2), Jet.constant(0.0, 1.0, 2))


def test_mismatched_basepoints_rejected():
    with pytest.raises(ValueError):
        Jet.variable(0.0, 3) + Jet.variable(1.0, 3)


def test_unknown_operations_rejected():
    T = Jet.variable(0.0, 3)
    with pytest.raises(ValueError):
        jet_arith(T, T, "pow")
    with pytest.raises(ValueError):
        jet_elem(T, "exp")


def test_mixed_orders_truncate_to_shorter():
    out = Jet.variable(0.5, 5) * Jet.variable(0.5, 2)
    assert out.order == 2
    np.testing.assert_allclose(out.coeffs, [0.25, 1.0, 2.0])


def test_vectorised_matches_scalar():
    t = np.linspace(-1, 1, 7)
    vec = jets.tan(Jet.variable(t, 4) * 0.5)
    for i, ti in enumerate(t):
        np.testing.assert_allclose(vec.coeffs[i], jets.tan(Jet.variable(ti, 4) * 0.5).coeffs, rtol=1e-14)


def test_jetvec_cross_and_det():
    T = Jet.variable(0.3, 4)
    a = JetVec3(jets.cos(T), jets.sin(T), 0.0 * T)
    b = JetVec3(-jets.sin(T), jets.cos(T), 0.0 * T)
    c = a.cross(b)
    np.testing.assert_allclose(c.z.coeffs, [1, 0, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(jets.det3(a, b, c).coeffs, [1, 0, 0, 0, 0], atol=1e-13)


@given(coeff_lists, coeff_lists, finite)
def test_polynomial_products_exact(p, q, t):
    order = 5
    prod = poly_jet(p, t, order) * poly_jet(q, t, order)
    expect = poly_derivs(P.polymul(p, q), t, order)
    np.testing.assert_allclose(prod.coeffs, expect, rtol=1e-12, atol=1e-10)


@given(coeff_lists, finite)
def test_deriv_integrate_roundtrip(p, t):
    j = poly_jet(p, t, 5)
    back = j.deriv().integrate(j.value)
    np.testing.assert_allclose(back.coeffs, j.coeffs, rtol=1e-13, atol=1e-12)


ELEMENTARY = {
    "sin": lambda T: jets.sin(T),
    "cos": lambda T: jets.cos(T),
    "tan": lambda T: jets.tan(0.5 * T),
    "sqrt": lambda T: jets.sqrt(2.5 + T),
    "atan2": lambda T: jets.atan2(jets.sin(T), 1.5 + T * T),
    "quotient": lambda T: jets.sin(T) / (2.0 + jets.cos(T)),
}


@pytest.mark.parametrize("name", sorted(ELEMENTARY))
@given(t=finite)
def test_elementary_derivatives_match_fd(name, t):
    f = ELEMENTARY[name]

    def fn(x, order):
        return f(Jet.variable(x, order))

    j = fn(np.array(t), 4)
    for k in range(1, 5):
        fd = chained_fd(fn, t, k)
        assert abs(j.d(k) - fd) <= 1e-6 * max(1.0, abs(fd))


@given(finite, finite)
def test_atan2_first_derivative_closed_form(t, c):
    T = Jet.variable(t, 2)
    y, x = jets.sin(T) + c, 2.0 + jets.cos(T)
    a = jets.atan2(y, x)
    rate = (x.value * y.d(1) - y.value * x.d(1)) / (x.value ** 2 + y.value ** 2)
    assert abs(a.value - math.atan2(y.value, x.value)) < 1e-15
    assert abs(a.d(1) - rate) < 1e-13
