import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superforms.coords import (
    NotInvertible,
    SuperCoordMap,
    Transport,
    compose_maps,
    invert,
    pullback_fn,
    random_admissible_map,
    transport,
)
from superforms.forms import exterior_d
from superforms.grammar import parse_map
from superforms.superpoly import SuperPoly
from superforms.universal import big_d, spencer_delta

from conftest import E, forms, superpolys, virtuals

SMALL = [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_invert_even_nilpotent_shift():
    g = parse_map("z1' = z1 + th1*th2", 1, 2)
    assert invert(g) == parse_map("z1' = z1 - th1*th2", 1, 2)


def test_invert_linear_map():
    g = parse_map("z1' = 2*z1 + z2\nz2' = z2", 2, 1)
    assert invert(g).targets[0] == E("1/2*z1 - 1/2*z2", 2, 1)


def test_invert_round_trip():
    g = parse_map("z1' = 2*z1\nth1' = th1 + z1*th2", 1, 2)
    h = invert(g)
    ident = SuperCoordMap.identity(1, 2)
    assert compose_maps(g, h) == ident
    assert compose_maps(h, g) == ident


def test_singular_or_non_nilpotent_maps_are_rejected():
    with pytest.raises(NotInvertible):
        invert(parse_map("z1' = z1 + z2\nz2' = z1 + z2", 2, 1))
    with pytest.raises(NotInvertible):
        invert(parse_map("z1' = z1 + z1^2", 1, 1))


def test_pullback_example():
    g = parse_map("z1' = z1 + th1*th2", 1, 2)
    assert pullback_fn(g, E("z1^2", 1, 2)) == E("z1^2 + 2*z1*th1*th2", 1, 2)


@given(st.integers(0, 10**6))
def test_pullback_is_contravariant(seed):
    rng = random.Random(seed)
    g = random_admissible_map(1, 2, rng)
    h = random_admissible_map(1, 2, rng)
    f = E("z1^2*th2 + th1 - 3*z1*th1*th2", 1, 2)
    assert pullback_fn(compose_maps(g, h), f) == pullback_fn(h, pullback_fn(g, f))


@pytest.mark.parametrize("pq", SMALL)
def test_random_maps_are_invertible(pq):
    rng = random.Random(3)
    for _ in range(5):
        g = random_admissible_map(*pq, rng)
        assert compose_maps(g, invert(g)) == SuperCoordMap.identity(*pq)


def test_identity_transport_is_trivial():
    T = Transport(SuperCoordMap.identity(1, 1))
    v = E("1 @ 1 @ Pz1")
    assert T(v) == v
    assert transport(SuperCoordMap.identity(1, 1), E("z1*th1")) == E("z1*th1")


def test_transport_rejects_unknown_objects():
    with pytest.raises(TypeError):
        Transport(SuperCoordMap.identity(1, 1))(3)


@given(st.data())
def test_transport_commutes_with_the_differentials(data):
    p, q = data.draw(st.sampled_from(SMALL))
    g = random_admissible_map(p, q, random.Random(data.draw(st.integers(0, 10**6))))
    T = Transport(g)
    w = data.draw(forms(p, q, 2))
    assert T(exterior_d(w)) == exterior_d(T(w))
    f = data.draw(superpolys(p, q, 2))
    assert T(f) == pullback_fn(invert(g), f)
    u = data.draw(virtuals(p, q, 1, poly_slot=False, max_size=2))
    assert T(big_d(u)) == big_d(T(u))
    s = data.draw(virtuals(p, q, 1, form_slot=False, max_size=2))
    assert T(spencer_delta(s)) == spencer_delta(T(s))


def test_map_text_round_trip():
    g = parse_map("z1' = 2*z1 + th1*th2\nth2' = th2 + z1*th1", 1, 2)
    assert parse_map(repr(g), 1, 2) == g
