import pytest
from hypothesis import given
from hypothesis import strategies as st

from superforms.forms import DegreeMismatch, FormElem, contract, contract_one, d_function, exterior_d
from superforms.polyfields import PolyElem, VectorField
from superforms.superpoly import SuperPoly, monomials, fun_mask

from conftest import E, dims, forms, polyfields, superpolys


def test_products_of_one_forms():
    assert E("dz1", 2, 1) * E("dz2", 2, 1) == E("dz1*dz2", 2, 1)
    assert E("dz2", 2, 1) * E("dz1", 2, 1) == -E("dz1*dz2", 2, 1)
    assert E("dth1") * E("dth1") == E("dth1^2")
    assert E("dz1") * E("dz1") == FormElem(1, 1)


def test_exterior_derivative_examples():
    assert d_function(E("z1")) == E("dz1")
    assert d_function(E("z1*th1")) == E("dz1*th1 + dth1*z1")
    assert exterior_d(E("dth1*z1")) == E("dth1*dz1")


def test_pairing_signs():
    assert contract_one(E("dz1"), E("Pz1")) == PolyElem.const(1, 1, -1)
    assert contract_one(E("dth1"), E("Pth1")) == PolyElem.const(1, 1, 1)
    assert contract_one(E("dz1"), E("Pth1")) == PolyElem(1, 1)
    assert contract_one(d_function(E("z1")), E("Pz1")) == PolyElem.const(1, 1, -1)


def test_contract_one_rejects_higher_degree():
    with pytest.raises(DegreeMismatch):
        contract_one(E("dz1*dth1"), E("Pz1*Pth1"))


@pytest.mark.parametrize("pq", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_df_paired_with_vector_field(pq):
    """<df, pi X> = (-1)^{(|X|+1)(|f|+1)} X(f) for every coordinate field and monomial."""
    p, q = pq
    for a in range(p + q):
        X = VectorField.coordinate(p, q, a)
        for m in monomials(p + q, fun_mask(p, q), 3):
            f = SuperPoly(p, q, {m: 1})
            sign = -1 if ((X.parity() + 1) * (f.parity() + 1)) % 2 else 1
            got = contract_one(d_function(f), X.to_poly())
            assert got == PolyElem.from_poly(X(f).scale(sign))


@given(st.data())
def test_d_squares_to_zero(data):
    p, q = data.draw(dims)
    w = data.draw(forms(p, q, 3))
    assert not exterior_d(exterior_d(w))


@given(st.data())
def test_d_is_a_superderivation(data):
    p, q = data.draw(dims)
    w = data.draw(forms(p, q, parity=data.draw(st.integers(0, 1))))
    e = data.draw(forms(p, q))
    sign = -1 if w.parity() else 1
    assert exterior_d(w * e) == exterior_d(w) * e + (w * exterior_d(e)).scale(sign)


@given(st.data())
def test_form_product_is_associative_and_supercommutative(data):
    p, q = data.draw(dims)
    w = data.draw(forms(p, q, parity=data.draw(st.integers(0, 1))))
    e = data.draw(forms(p, q, parity=data.draw(st.integers(0, 1))))
    h = data.draw(forms(p, q, 1))
    assert (w * e) * h == w * (e * h)
    assert w * e == (e * w).scale(-1 if w.parity() and e.parity() else 1)


@given(st.data())
def test_contraction_is_a_superderivation(data):
    p, q = data.draw(dims)
    a = data.draw(st.integers(0, p + q - 1))
    g = data.draw(superpolys(p, q, 1, parity=data.draw(st.integers(0, 1)), nonzero=True))
    w = FormElem.dx(p, q, a) * FormElem.from_poly(g)
    t1 = data.draw(polyfields(p, q, parity=data.draw(st.integers(0, 1))))
    t2 = data.draw(polyfields(p, q))
    sign = -1 if w.parity() and t1.parity() else 1
    assert contract_one(w, t1 * t2) == contract_one(w, t1) * t2 + (t1 * contract_one(w, t2)).scale(sign)


@given(st.data())
def test_iterated_contraction_is_leftmost_first(data):
    p, q = data.draw(dims)
    a, b = data.draw(st.integers(0, p + q - 1)), data.draw(st.integers(0, p + q - 1))
    w1, w2 = FormElem.dx(p, q, a), FormElem.dx(p, q, b)
    tau = data.draw(polyfields(p, q, 3))
    assert contract(w1 * w2, tau) == contract(w2, contract(w1, tau))
    assert contract(w1, tau) == contract_one(w1, tau)
