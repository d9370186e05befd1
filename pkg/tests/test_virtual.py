import pytest
from hypothesis import given
from hypothesis import strategies as st

from superforms.forms import basis as form_basis, exterior_d
from superforms.superpoly import fun_mask, monomials, shift_mask
from superforms.berezin import IntegralForm, integral_delta
from superforms.tensor import VirtualForm
from superforms.universal import big_d, spencer_delta
from superforms.verify import closed_window, window_keys
from superforms.virtual import (
    closed_nonzero_weight_exact,
    delta_homology_weight_zero,
    deltahat,
    dhat,
    induced_on_omega,
    induced_on_sigma,
    khat,
    omega_representative,
    read_sigma,
    sigma_representative,
    spencer_weight,
    total_d,
)

from conftest import E, dims, virtuals


def V(text, p=1, q=1):
    return E(text, p, q)


def test_dhat_examples():
    assert dhat(V("1 @ 1 @ Pz1")) == V("dz1 @ Dz1 @ Pz1 + dth1 @ Dth1 @ Pz1")
    assert not dhat(V("dz1 @ Dth1 @ 1"))


def test_deltahat_examples():
    assert not deltahat(VirtualForm.const(1, 1))
    assert deltahat(V("1 @ 1 @ Pz1")) == -V("1 @ Dz1 @ 1")
    assert deltahat(V("1 @ 1 @ Pth1")) == V("1 @ Dth1 @ 1")


def test_total_d_example():
    assert total_d(VirtualForm.const(1, 1)) == V("dz1 @ Dz1 @ 1 + dth1 @ Dth1 @ 1")


def test_deltahat_is_the_twisted_spencer_differential():
    v = V("dz1 @ z1*Dth1 @ Pz1*Pth1")
    assert deltahat(v) == spencer_delta(v).scale(-1 if v.term_parity(next(iter(v.terms))) else 1)


@given(st.data())
def test_double_complex_relations(data):
    p, q = data.draw(dims)
    v = data.draw(virtuals(p, q, 1))
    assert not dhat(dhat(v))
    assert not deltahat(deltahat(v))
    assert not (dhat(deltahat(v)) + deltahat(dhat(v)))
    assert not total_d(total_d(v))
    # without the twist the two differentials commute
    assert big_d(spencer_delta(v)) == spencer_delta(big_d(v))


@given(st.data())
def test_lifted_homotopy(data):
    p, q = data.draw(dims)
    v = data.draw(virtuals(p, q, 1, max_size=1))
    if not v:
        return
    w = spencer_weight(next(iter(v.terms)))
    assert deltahat(khat(v)) + khat(deltahat(v)) == v.scale(w)


@pytest.mark.parametrize("pq", [(1, 1), (1, 2), (2, 1)])
def test_page_one_exactness(pq):
    p, q = pq
    keys = closed_window(p, q, window_keys(p, q, 2))
    checked, failures = closed_nonzero_weight_exact(p, q, keys)
    assert checked > 0 and not failures
    hom = delta_homology_weight_zero(p, q, keys)
    for (w, _, _), dims_ in hom.items():
        if w:
            assert all(e == 0 and o == 0 for e, o in dims_.values())


@pytest.mark.parametrize("pq", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_induced_differentials(pq):
    p, q = pq
    for w in form_basis(p, q, 2, 2):
        assert induced_on_omega(w) == exterior_d(w)
    n = p + q
    for pm in monomials(n, shift_mask(p, q), 2):
        for xm in monomials(n, fun_mask(p, q), 2):
            s = IntegralForm(p, q, {(xm, pm): 1})
            assert induced_on_sigma(s) == integral_delta(s)
            sign = -1 if s.term_parity((xm, pm)) else 1
            assert induced_on_sigma(s, twisted=True) == integral_delta(s).scale(sign)


def test_representatives_round_trip():
    s = E("Ber*z1*th1 @ Pz1 + Ber @ Pth1^2")
    assert read_sigma(sigma_representative(s)) == s
    w = E("dz1*dth1*z1")
    assert omega_representative(w) == V("dz1*dth1 @ z1 @ 1")
