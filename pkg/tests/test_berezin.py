from hypothesis import given
from hypothesis import strategies as st

from superforms.berezin import IntegralForm, action_lie, ber_lie, ber_right_action, integral_delta, s0
from superforms.superpoly import SuperPoly
from superforms.polyfields import VectorField
from superforms.weyl import WeylOp, compose

from conftest import E, dims, polyfields, superpolys, vector_fields

PHI = IntegralForm.const(1, 1)


def test_integral_delta_examples():
    assert not integral_delta(E("Ber @ Pz1"))
    assert integral_delta(E("Ber*z1 @ Pz1")) == -PHI
    assert not integral_delta(E("Ber*th1 @ Pz1"))
    assert E("Ber*th1 @ Pz1") == s0(1, 1)


def test_ber_lie_examples():
    one = SuperPoly.const(1, 1)
    assert not ber_lie(VectorField.coordinate(1, 1, 0), one)
    assert ber_lie(VectorField(1, 1, {0: E("z1")}), one) == PHI
    assert ber_lie(VectorField(1, 1, {1: E("th1")}), one) == -PHI


def test_right_action_examples():
    assert not ber_right_action(PHI, E("Dz1"))
    assert not ber_right_action(PHI, E("Dth1"))
    assert ber_right_action(PHI, E("z1*Dz1")) == -PHI


@given(st.data())
def test_generator_is_killed_by_every_derivative(data):
    p, q = data.draw(dims)
    a = data.draw(st.integers(0, p + q - 1))
    assert not ber_right_action(IntegralForm.const(p, q), WeylOp.deriv(p, q, a))


@given(st.data())
def test_right_action_on_fields_matches_closed_form(data):
    p, q = data.draw(dims)
    X = data.draw(vector_fields(p, q, data.draw(st.integers(0, 1))))
    f = data.draw(superpolys(p, q, parity=data.draw(st.integers(0, 1)), nonzero=True))
    assert ber_right_action(IntegralForm.ber(f), X.to_weyl()) == action_lie(f, X)


@given(st.data())
def test_right_action_is_minus_the_lie_derivative(data):
    p, q = data.draw(dims)
    xp = data.draw(st.integers(0, 1))
    X = data.draw(vector_fields(p, q, xp))
    f = data.draw(superpolys(p, q, parity=data.draw(st.integers(0, 1)), nonzero=True))
    sign = -1 if ((p + q + f.parity()) * xp) % 2 else 1
    assert ber_right_action(IntegralForm.ber(f), X.to_weyl()) == ber_lie(X, f).scale(-sign)


@given(st.data())
def test_right_action_is_an_action(data):
    p, q = data.draw(dims)
    f = data.draw(superpolys(p, q, nonzero=True))
    A = data.draw(vector_fields(p, q, data.draw(st.integers(0, 1)))).to_weyl()
    B = data.draw(vector_fields(p, q, data.draw(st.integers(0, 1)))).to_weyl()
    s = IntegralForm.ber(f)
    assert ber_right_action(s, compose(A, B)) == ber_right_action(ber_right_action(s, A), B)


@given(st.data())
def test_integral_delta_squares_to_zero(data):
    p, q = data.draw(dims)
    f = data.draw(superpolys(p, q, 3))
    t = data.draw(st.integers(0, 2))
    tau = data.draw(polyfields(p, q, t + 1))
    s = IntegralForm.ber(f, tau)
    assert not integral_delta(integral_delta(s))
