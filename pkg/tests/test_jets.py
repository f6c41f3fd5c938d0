import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swallowdev import jets
from swallowdev.errors import JetDomainError, JetError
from swallowdev.jets import Jet1, Jet2, Vec3Jet

coeff = st.floats(-3, 3, allow_nan=False)
poly = st.lists(coeff, min_size=6, max_size=6)


def J(c, base=0.0):
    return Jet1(c, base)


def test_product_matches_polynomial_product():
    a, b = J([1, 2, 0, -1]), J([0.5, 0, 3, 1])
    full = np.polynomial.polynomial.polymul(a.coeffs, b.coeffs)
    np.testing.assert_allclose((a * b).coeffs, full[:4])


def test_quotient_times_divisor_is_numerator():
    a, b = J([1, 2, 0, -1, 4]), J([2, -1, 3, 0, 1])
    q = jets.jet_div(a, b)
    assert (q * b).allclose(a, atol=1e-13)


def test_named_ops_are_strict_about_degree():
    with pytest.raises(JetError):
        jets.jet_mul(J([1, 2, 3]), J([1, 2]))
    # operators truncate to the common degree instead
    assert (J([1, 2, 3]) * J([1, 2])).degree == 1


def test_base_mismatch_rejected():
    with pytest.raises(JetError):
        J([1, 1], 0.0) + J([1, 1], 0.5)


def test_division_by_vanishing_jet():
    with pytest.raises(JetDomainError):
        J([1, 1]) / J([0, 1])


@pytest.mark.parametrize(
    "name, f, x0",
    [
        ("exp", math.exp, 0.3),
        ("sin", math.sin, 0.7),
        ("cos", math.cos, -0.4),
        ("tan", math.tan, 0.2),
        ("log", math.log, 1.7),
        ("sqrt", math.sqrt, 2.5),
    ],
)
def test_elementary_first_derivatives_match_finite_differences(name, f, x0):
    j = jets.jet_elementary(name, Jet1.variable(x0, 4))
    h = 1e-5
    assert j.value == pytest.approx(f(x0), rel=1e-14)
    assert j.derivative_at_base(1) == pytest.approx((f(x0 + h) - f(x0 - h)) / (2 * h), rel=1e-8)
    second = (f(x0 + h) - 2 * f(x0) + f(x0 - h)) / h**2
    assert j.derivative_at_base(2) == pytest.approx(second, rel=1e-4, abs=1e-5)


def test_exp_series_at_zero():
    e = jets.exp(Jet1.variable(0.0, 6))
    np.testing.assert_allclose(e.coeffs, [1 / math.factorial(k) for k in range(7)], rtol=1e-15)


def test_sqrt_and_log_domains():
    with pytest.raises(JetDomainError):
        jets.sqrt(J([0.0, 1.0]))
    with pytest.raises(JetDomainError):
        jets.log(J([-1.0, 1.0]))


def test_integer_powers():
    x = Jet1.variable(0.5, 5)
    np.testing.assert_allclose((x**3).coeffs[:4], [0.125, 0.75, 1.5, 1.0])
    np.testing.assert_allclose((x**-1 * x).coeffs, [1, 0, 0, 0, 0, 0], atol=1e-14)
    with pytest.raises(JetError):
        x**0.5


def test_hadamard_quotient():
    a = J([0.0, 2.0, -1.0, 3.0])
    np.testing.assert_array_equal(jets.divide_by_parameter(a).coeffs, [2.0, -1.0, 3.0])
    with pytest.raises(JetDomainError):
        jets.divide_by_parameter(J([1.0, 2.0]))
    assert jets.multiply_by_parameter(jets.divide_by_parameter(a)) == a


def test_jet2_partials_and_divide_by_v():
    u = Jet2.variable("u", degree=4)
    v = Jet2.variable("v", degree=4)
    f = u * u * v + 3 * v * v + u
    assert f.partial(2, 1) == pytest.approx(2.0)
    assert f.partial(0, 2) == pytest.approx(6.0)
    g = (f - u).divide_by_v()
    np.testing.assert_allclose(g.coeffs[:3, :3], [[0, 3, 0], [0, 0, 0], [1, 0, 0]])
    with pytest.raises(JetDomainError):
        f.divide_by_v()


def test_compose_surface_with_curve():
    u = Jet2.variable("u", degree=5)
    v = Jet2.variable("v", degree=5)
    F = u * v + v * v * v
    t = Jet1.variable(0.0, 5)
    g = (t * t * -3.0, t)
    out = jets.compose_surface_with_curve(F, g)
    np.testing.assert_allclose(out.coeffs, [0, 0, 0, -2, 0, 0])


def test_vec3_cross_and_norm():
    t = Jet1.variable(0.0, 4)
    a = Vec3Jet(jets.cos(t), jets.sin(t), t * 0.0)
    assert (a.norm() - 1.0).is_zero(1e-15)
    z = a.cross(a.deriv().truncate(3))
    np.testing.assert_allclose(z.z.coeffs, [1, 0, 0, 0], atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(poly, poly, poly)
def test_ring_axioms(a, b, c):
    A, B, C = J(a), J(b), J(c)
    assert ((A * B) * C).allclose(A * (B * C), atol=1e-9)
    assert (A * (B + C)).allclose(A * B + A * C, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(poly, st.floats(0.3, 3))
def test_exp_log_inverse(a, c0):
    a[0] = c0
    A = J(a)
    assert jets.exp(jets.log(A)).allclose(A, atol=1e-8 * (1 + A.scale()) ** 6)


@settings(max_examples=30, deadline=None)
@given(poly, st.floats(-1, 1))
def test_evaluation_matches_taylor_polynomial(a, x):
    A = J(a)
    assert A(x * 0.1) == pytest.approx(np.polynomial.polynomial.polyval(x * 0.1, a))
