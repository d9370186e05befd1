import pytest
from hypothesis import given
from hypothesis import strategies as st

from superforms.berezin import IntegralForm, integral_delta, s0
from superforms.forms import FormElem, exterior_d
from superforms.poincare import (
    TruncationWindow,
    derham_homotopy,
    derham_window,
    failure_index,
    integral_window,
    poincare_h,
    projection_p0,
    q_exponent,
    truncated_cohomology,
)
from superforms.superpoly import SuperPoly
from superforms.verify import _s0_parity_pair

from conftest import E, dims, forms, polyfields, superpolys

SMALL = [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_q_exponent_examples():
    one, th = SuperPoly.const(1, 1), E("th1")
    assert q_exponent(one, (1, 0)) == 0
    assert q_exponent(th, (1, 0)) == -2
    assert q_exponent(one, (0, 0)) == 1


def test_q_exponent_needs_theta_homogeneity():
    with pytest.raises(ValueError):
        q_exponent(E("1 + th1"), (0, 0))


def test_failure_index_vanishes_only_on_the_generator():
    (xm, pm), = s0(1, 1).terms
    assert failure_index(1, 1, xm, pm) == 0
    assert failure_index(1, 1, (0, 0), (0, 0)) == 2


def _window_check(p, q, maxz):
    for k in integral_window(TruncationWindow(p, q, maxz)):
        s = IntegralForm(p, q, {k: 1})
        lhs = integral_delta(poincare_h(s)) + poincare_h(integral_delta(s))
        assert lhs == s - projection_p0(s), k


@pytest.mark.parametrize("pq", SMALL)
def test_integral_homotopy_on_the_window(pq):
    _window_check(*pq, 2)


@given(st.data())
def test_integral_homotopy_on_random_forms(data):
    p, q = data.draw(dims)
    f = data.draw(superpolys(p, q, 3))
    tau = data.draw(polyfields(p, q, 3))
    s = IntegralForm.ber(f, tau)
    assert integral_delta(poincare_h(s)) + poincare_h(integral_delta(s)) == s - projection_p0(s)


@pytest.mark.parametrize("pq", SMALL)
def test_generator_is_closed_and_fixed_by_the_projection(pq):
    g = s0(*pq)
    assert not integral_delta(g)
    assert projection_p0(g) == g
    assert not poincare_h(g)


@pytest.mark.parametrize("pq", SMALL)
def test_truncated_integral_cohomology_is_the_generator(pq):
    p, q = pq
    table = truncated_cohomology(TruncationWindow(p, q, 2), "integral")
    nonzero = {k: v for k, v in table.items() if v != (0, 0)}
    assert nonzero == {0: _s0_parity_pair(p, q)}


@pytest.mark.parametrize("pq", SMALL)
def test_truncated_de_rham_cohomology_is_the_constants(pq):
    table = truncated_cohomology(TruncationWindow(*pq, 2), "deRham")
    assert {k: v for k, v in table.items() if v != (0, 0)} == {0: (1, 0)}


def test_unknown_side_is_rejected():
    with pytest.raises(ValueError):
        truncated_cohomology(TruncationWindow(1, 1, 1), "cech")


def test_window_rejects_negative_parameters():
    with pytest.raises(ValueError):
        TruncationWindow(1, 1, -1)


@pytest.mark.parametrize("pq", [(1, 1), (2, 1)])
def test_de_rham_window_is_closed(pq):
    p, q = pq
    keys = set(derham_window(TruncationWindow(p, q, 2)))
    for k in keys:
        assert set(exterior_d(FormElem(p, q, {k: 1})).terms) <= keys


@given(st.data())
def test_de_rham_homotopy(data):
    p, q = data.draw(dims)
    w = data.draw(forms(p, q, 3))
    const = FormElem(p, q, {k: c for k, c in w.terms.items() if not any(k[0]) and not any(k[1])})
    assert exterior_d(derham_homotopy(w)) + derham_homotopy(exterior_d(w)) == w - const
