import pytest
from hypothesis import given
from hypothesis import strategies as st

from superforms.forms import FormElem
from superforms.polyfields import PolyElem
from superforms.superpoly import fun_mask, monomials, shift_mask
from superforms.tensor import RawSpencer, RawUdR, VirtualForm, as_raw_spencer, as_raw_udr
from superforms.universal import (
    _big_d_key,
    big_d,
    co_normal_terms,
    eigenvalue_c,
    from_co_normal_terms,
    homotopy_h,
    homotopy_k,
    raw_big_d,
    raw_delta1,
    raw_delta2,
    raw_spencer_delta,
    spencer_delta,
    spencer_eigenvalue,
)
from superforms.weyl import WeylOp, compose

from conftest import E, dims, forms, polyfields, virtuals, weylops


def U(text, p=1, q=1):
    return E(text, p, q)


def test_big_d_examples():
    assert big_d(U("1 @ 1")) == U("dz1 @ Dz1 + dth1 @ Dth1")
    assert not big_d(U("dz1 @ Dth1"))
    assert big_d(U("1 @ z1")) == U("dz1 @ 1 + dz1 @ z1*Dz1 + dth1 @ z1*Dth1")


def test_big_d_on_an_unbalanced_coefficient():
    # the form coefficient z moves into the operator slot before D acts
    raw = VirtualForm.tensor(FormElem.from_poly(E("z1")), WeylOp.const(1, 1))
    assert raw == U("1 @ z1")


def test_homotopy_h_examples():
    assert not homotopy_h(U("1 @ 1"))
    assert not homotopy_h(U("dz1 @ 1"))
    assert homotopy_h(U("dth1 @ Dth1")) == U("1 @ 1")


def test_eigenvalue_examples():
    dz, one, dth_der = (1, 0), (0, 0), (0, 1)
    assert eigenvalue_c(dz, dth_der, 1, 1) == 0
    assert eigenvalue_c(one, one, 1, 1) == 2
    assert eigenvalue_c(dz, one, 1, 1) == 1


def test_eigenvalue_oracle_on_dz():
    m = U("dz1 @ 1")
    assert homotopy_h(big_d(m)) + big_d(homotopy_h(m)) == m


def test_spencer_delta_examples():
    assert not spencer_delta(U("1 @ 1"))
    assert spencer_delta(U("1 @ Pz1")) == U("Dz1 @ 1")
    # the odd-odd reading of the pairing gives +d_theta here
    assert spencer_delta(U("1 @ Pth1")) == U("Dth1 @ 1")


def test_homotopy_k_examples():
    assert not homotopy_k(U("1 @ 1"))
    assert homotopy_k(U("Dz1 @ 1")) == U("1 @ Pz1")
    assert homotopy_k(U("Dth1 @ 1")) == U("1 @ Pth1")


def test_spencer_eigenvalue_examples():
    assert spencer_eigenvalue((1, 0), (0, 0)) == 1
    m = U("Dz1 @ 1")
    assert homotopy_k(spencer_delta(m)) + spencer_delta(homotopy_k(m)) == m
    assert spencer_eigenvalue((0, 0), (0, 0)) == 0
    assert spencer_eigenvalue((1, 0), (0, 1)) == 2


@pytest.mark.parametrize("pq", [(1, 1), (2, 1), (1, 2)])
def test_de_rham_eigenvalue_exhaustive(pq):
    p, q = pq
    n = p + q
    so, fo = shift_mask(p, q), fun_mask(p, q)
    u = (0,) * n
    for fm in monomials(n, so, 2):
        for J in monomials(n, fo, 2):
            for A in monomials(n, fo, 2):
                m = from_co_normal_terms(p, q, {(fm, J, A, u): 1})
                got = homotopy_h(big_d(m)) + big_d(homotopy_h(m))
                assert got == m.scale(eigenvalue_c(fm, J, p, q))


@given(st.data())
def test_big_d_and_delta_square_to_zero(data):
    p, q = data.draw(dims)
    u = data.draw(virtuals(p, q, 2, poly_slot=False))
    s = data.draw(virtuals(p, q, 2, form_slot=False))
    assert not big_d(big_d(u))
    assert not spencer_delta(spencer_delta(s))


@given(st.data())
def test_raw_d_agrees_with_balanced_d(data):
    p, q = data.draw(dims)
    w = data.draw(forms(p, q, 1))
    F = data.draw(weylops(p, q, 1))
    raw = RawUdR.tensor(w, F)
    assert raw_big_d(raw).normalize() == big_d(raw.normalize())


@given(st.data())
def test_raw_delta_agrees_with_balanced_delta(data):
    p, q = data.draw(dims)
    F = data.draw(weylops(p, q, 1))
    tau = data.draw(polyfields(p, q, 2))
    raw = RawSpencer.tensor(F, tau)
    assert raw_spencer_delta(raw).normalize() == spencer_delta(raw.normalize())


@given(st.data())
def test_raw_delta_halves_anticommute(data):
    p, q = data.draw(dims)
    F = data.draw(weylops(p, q, 1))
    tau = data.draw(polyfields(p, q, 2))
    raw = RawSpencer.tensor(F, tau)
    assert not (raw_delta1(raw_delta2(raw)) + raw_delta2(raw_delta1(raw)))
    assert not raw_delta1(raw_delta1(raw))
    assert not raw_delta2(raw_delta2(raw))


@given(st.data())
def test_balanced_and_raw_views_round_trip(data):
    p, q = data.draw(dims)
    u = data.draw(virtuals(p, q, 2, poly_slot=False))
    s = data.draw(virtuals(p, q, 2, form_slot=False))
    assert as_raw_udr(u).normalize() == u
    assert as_raw_spencer(s).normalize() == s


@given(st.data())
def test_co_normal_round_trip(data):
    p, q = data.draw(dims)
    v = data.draw(virtuals(p, q, 2))
    assert from_co_normal_terms(p, q, co_normal_terms(v)) == v


def test_passive_slot_cache_gives_the_same_image():
    k1 = ((1, 0), (1, 0), (0, 1), (0, 0))
    k2 = ((1, 0), (1, 0), (0, 1), (1, 1))
    a = dict(_big_d_key(k1, 1, 1))
    b = dict(_big_d_key(k2, 1, 1))
    assert {k[:3]: c for k, c in a.items()} == {k[:3]: c for k, c in b.items()}
    assert all(k[3] == (1, 1) for k in b)


def test_normalization_examples():
    assert VirtualForm.tensor(E("dz1*z1"), WeylOp.const(1, 1), E("Pth1")) == E("dz1 @ z1 @ Pth1")
    assert VirtualForm.tensor(None, _dth_th(), None) == E("1 @ 1 @ 1 - 1 @ th1*Dth1 @ 1")
    assert VirtualForm.tensor(None, WeylOp.const(1, 1), E("th1*Pz1")) == E("1 @ th1 @ Pz1")


def _dth_th():
    return compose(WeylOp.deriv(1, 1, 1), WeylOp.coord(1, 1, 1))


def test_spencer_views_build_consistently():
    assert VirtualForm.tensor(None, E("Dz1"), PolyElem.const(1, 1)) == U("Dz1 @ 1")
