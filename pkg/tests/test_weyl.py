from hypothesis import given
from hypothesis import strategies as st

from superforms.superpoly import SuperPoly, partial
from superforms.weyl import WeylOp, apply_to, co_normal_form, compose, from_co_normal, super_commutator

from conftest import E, dims, superpolys, weylops


def test_compose_examples():
    assert compose(E("Dz1"), WeylOp.coord(1, 1, 0)) == E("z1*Dz1 + 1")
    assert compose(E("Dth1"), WeylOp.coord(1, 1, 1)) == E("1 - th1*Dth1")
    zd = E("z1*Dz1")
    assert compose(zd, zd) == E("z1^2*Dz1^2 + z1*Dz1")


def test_compose_square_on_powers():
    zd = E("z1*Dz1")
    sq = compose(zd, zd)
    for n in range(6):
        zn = SuperPoly(1, 1, {(n, 0): 1})
        assert apply_to(sq, zn) == zn.scale(n * n)


def test_apply_examples():
    assert apply_to(E("Dth1", 1, 2), E("th1*th2", 1, 2)) == E("th2", 1, 2)
    assert apply_to(E("z1*Dz1"), E("z1^3")) == E("3*z1^3")
    assert apply_to(E("Dz1*Dth1"), E("z1*th1")) == SuperPoly.const(1, 1)


def test_apply_matches_iterated_partials():
    f = E("z1^2*th1 + z1*th1")
    assert apply_to(E("Dz1*Dth1"), f) == partial(0, partial(1, f))


def test_super_commutator_examples():
    assert super_commutator(E("Dz1"), WeylOp.coord(1, 1, 0)) == WeylOp.const(1, 1)
    assert super_commutator(E("Dth1"), WeylOp.coord(1, 1, 1)) == WeylOp.const(1, 1)
    assert super_commutator(E("z1*Dz1"), E("Dz1")) == -E("Dz1")


def test_co_normal_examples():
    assert co_normal_form(E("z1*Dz1 + 1")) == {((1, 0), (1, 0)): 1}
    assert co_normal_form(E("Dth1")) == {((0, 1), (0, 0)): 1}
    assert co_normal_form(E("th1*Dth1")) == {((0, 0), (0, 0)): 1, ((0, 1), (0, 1)): -1}


@given(st.data())
def test_composition_is_the_composition_of_actions(data):
    p, q = data.draw(dims)
    A, B = data.draw(weylops(p, q)), data.draw(weylops(p, q))
    f = data.draw(superpolys(p, q, maxdeg=3))
    assert apply_to(compose(A, B), f) == apply_to(A, apply_to(B, f))


@given(st.data())
def test_composition_is_associative(data):
    p, q = data.draw(dims)
    A, B, C = (data.draw(weylops(p, q, 1)) for _ in range(3))
    assert compose(compose(A, B), C) == compose(A, compose(B, C))


@given(st.data())
def test_co_normal_round_trip(data):
    p, q = data.draw(dims)
    A = data.draw(weylops(p, q))
    assert from_co_normal(p, q, co_normal_form(A)) == A


@given(st.data())
def test_defining_relations(data):
    p, q = data.draw(dims)
    a, b = data.draw(st.integers(0, p + q - 1)), data.draw(st.integers(0, p + q - 1))
    br = super_commutator(WeylOp.deriv(p, q, a), WeylOp.coord(p, q, b))
    assert br == (WeylOp.const(p, q) if a == b else WeylOp(p, q))
