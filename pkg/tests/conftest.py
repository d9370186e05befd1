from __future__ import annotations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from superforms.forms import FormElem
from superforms.grammar import format_element, parse
from superforms.polyfields import PolyElem, VectorField
from superforms.superpoly import SuperPoly, fun_mask, mono_parity, monomials, shift_mask, unit
from superforms.tensor import VirtualForm
from superforms.weyl import WeylOp

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DIMS = [(1, 1), (1, 2), (2, 1), (2, 2)]


def E(text: str, p: int = 1, q: int = 1):
    """Element written in the expression grammar."""
    return parse(text, p, q).value


def S(obj, kind=None) -> str:
    return format_element(obj, kind)


coeffs = st.integers(-3, 3).filter(bool)


def _monos(n, odd, maxdeg, parity=None):
    ms = list(monomials(n, odd, maxdeg))
    if parity is not None:
        ms = [m for m in ms if mono_parity(m, odd) == parity]
    return ms


def _terms(keys, max_size=4, min_size=0):
    return st.dictionaries(st.sampled_from(keys), coeffs, min_size=min_size, max_size=max_size)


def superpolys(p, q, maxdeg=2, parity=None, nonzero=False):
    ms = _monos(p + q, fun_mask(p, q), maxdeg, parity)
    return _terms(ms, min_size=int(nonzero)).map(lambda d: SuperPoly(p, q, d))


def weylops(p, q, maxdeg=2):
    ms = _monos(p + q, fun_mask(p, q), maxdeg)
    keys = [(a, b) for a in ms for b in ms if sum(a) + sum(b) <= maxdeg + 1]
    return _terms(keys).map(lambda d: WeylOp(p, q, d))


def forms(p, q, maxdeg=2, parity=None):
    fo, so = fun_mask(p, q), shift_mask(p, q)
    keys = [
        (f, x)
        for f in _monos(p + q, so, maxdeg)
        for x in _monos(p + q, fo, maxdeg)
        if parity is None or (mono_parity(f, so) + mono_parity(x, fo)) % 2 == parity
    ]
    return _terms(keys, min_size=int(parity is not None)).map(lambda d: FormElem(p, q, d))


def polyfields(p, q, maxdeg=2, parity=None):
    fo, so = fun_mask(p, q), shift_mask(p, q)
    keys = [
        (x, t)
        for t in _monos(p + q, so, maxdeg)
        for x in _monos(p + q, fo, maxdeg)
        if parity is None or (mono_parity(t, so) + mono_parity(x, fo)) % 2 == parity
    ]
    return _terms(keys, min_size=int(parity is not None)).map(lambda d: PolyElem(p, q, d))


def vector_fields(p, q, parity, maxdeg=2):
    comps = [superpolys(p, q, maxdeg, (parity + (a >= p)) % 2) for a in range(p + q)]
    return st.tuples(*comps).map(lambda cs: VectorField(p, q, {a: c for a, c in enumerate(cs) if c}))


def virtuals(p, q, maxdeg=1, form_slot=True, poly_slot=True, max_size=3):
    fo, so = fun_mask(p, q), shift_mask(p, q)
    n = p + q
    F = _monos(n, so, maxdeg) if form_slot else [unit(n)]
    T = _monos(n, so, maxdeg) if poly_slot else [unit(n)]
    X = _monos(n, fo, maxdeg)
    keys = [(f, x, d, t) for f in F for x in X for d in X for t in T]
    return _terms(keys, max_size=max_size).map(lambda d: VirtualForm(p, q, d))


dims = st.sampled_from(DIMS)
