from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from superforms.superpoly import (
    DivergentIntegral,
    SuperPoly,
    eval_odd_sector,
    partial,
    scaling_integral,
)

from conftest import E, dims, superpolys


def test_products_of_odd_generators():
    assert E("th1", 1, 2) * E("th2", 1, 2) == E("th1*th2", 1, 2)
    assert E("th2", 1, 2) * E("th1", 1, 2) == -E("th1*th2", 1, 2)
    assert E("th1", 1, 2) * E("th1", 1, 2) == SuperPoly(1, 2)
    assert E("z1 + th1") * E("z1 - th1") == E("z1^2")


def test_left_derivatives():
    f = E("th1*th2", 1, 2)
    assert partial(1, f) == E("th2", 1, 2)
    assert partial(2, f) == -E("th1", 1, 2)
    assert partial(0, E("z1^2*th1")) == E("2*z1*th1")


def test_scaling_integral_examples():
    assert scaling_integral(E("z1^2"), 0) == E("z1^2").scale(Fraction(1, 3))
    assert scaling_integral(E("1"), 2) == SuperPoly.const(1, 1, Fraction(1, 3))
    assert scaling_integral(E("th1"), -1) == E("th1")
    with pytest.raises(DivergentIntegral):
        scaling_integral(E("1"), -1)


def test_eval_odd_sector():
    assert eval_odd_sector(E("z1 + th1")) == E("th1")
    assert eval_odd_sector(E("z1*th1*th2", 1, 2)) == SuperPoly(1, 2)
    assert eval_odd_sector(E("3 + 2*th1*th2", 1, 2)) == E("3 + 2*th1*th2", 1, 2)


@given(st.data())
def test_product_is_associative_and_supercommutative(data):
    p, q = data.draw(dims)
    f = data.draw(superpolys(p, q, parity=data.draw(st.integers(0, 1)), nonzero=True))
    g = data.draw(superpolys(p, q, parity=data.draw(st.integers(0, 1)), nonzero=True))
    h = data.draw(superpolys(p, q))
    assert (f * g) * h == f * (g * h)
    sign = -1 if f.parity() and g.parity() else 1
    assert f * g == (g * f).scale(sign)


@given(st.data())
def test_partial_is_a_left_superderivation(data):
    p, q = data.draw(dims)
    a = data.draw(st.integers(0, p + q - 1))
    f = data.draw(superpolys(p, q, parity=data.draw(st.integers(0, 1)), nonzero=True))
    g = data.draw(superpolys(p, q))
    sign = -1 if (a >= p and f.parity()) else 1
    assert partial(a, f * g) == partial(a, f) * g + (f * partial(a, g)).scale(sign)


@given(st.data())
def test_partials_supercommute(data):
    p, q = data.draw(dims)
    a, b = data.draw(st.integers(0, p + q - 1)), data.draw(st.integers(0, p + q - 1))
    f = data.draw(superpolys(p, q, maxdeg=3))
    sign = -1 if (a >= p and b >= p) else 1
    assert partial(a, partial(b, f)) == partial(b, partial(a, f)).scale(sign)


@given(st.data())
def test_scaling_integral_matches_sympy(data):
    p, q = data.draw(dims)
    f = data.draw(superpolys(p, q, maxdeg=3))
    Q = data.draw(st.integers(0, 4))
    t = sympy.Symbol("t", positive=True)
    want = {m: Fraction(str(sympy.integrate(t ** (Q + sum(m)), (t, 0, 1)))) * c for m, c in f.terms.items()}
    assert scaling_integral(f, Q) == SuperPoly(p, q, want)
