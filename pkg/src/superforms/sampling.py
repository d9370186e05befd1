"""Seeded random elements for the randomized suites.

All randomness flows through ``numpy.random.Generator`` objects derived from
a ``SeedSequence`` keyed by the run seed and a stable label, so adding a
suite never perturbs the streams of the others.
"""

from __future__ import annotations

import random
import zlib
from fractions import Fraction

import numpy as np

from .forms import FormElem
from .polyfields import PolyElem, VectorField
from .superpoly import SuperPoly, fun_mask, mono_parity, shift_mask, unit
from .tensor import VirtualForm
from .weyl import WeylOp


def stream(seed: int, *labels) -> np.random.Generator:
    key = [int(seed) & 0xFFFFFFFF, int(seed) >> 32 & 0xFFFFFFFF]
    for lab in labels:
        key.append(zlib.crc32(str(lab).encode()))
    return np.random.default_rng(np.random.SeedSequence(key))


def python_rng(rng: np.random.Generator) -> random.Random:
    """A ``random.Random`` seeded from ``rng`` (for helpers that take one)."""
    return random.Random(int(rng.integers(0, 2**63)))


def coefficient(rng: np.random.Generator) -> Fraction:
    c = int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
    return Fraction(c, 2) if rng.random() < 0.2 else Fraction(c)


def monomial(rng: np.random.Generator, n: int, odd: tuple, maxdeg: int, parity: int | None = None, tries: int = 50):
    """Random monomial of degree ``<= maxdeg`` (optionally of fixed parity)."""
    for _ in range(tries):
        e = [0] * n
        deg = int(rng.integers(0, maxdeg + 1)) if n else 0
        for _ in range(deg):
            a = int(rng.integers(0, n))
            if odd[a] and e[a]:
                continue
            e[a] += 1
        m = tuple(e)
        if parity is None or mono_parity(m, odd) == parity:
            return m
    return None


def _terms(rng, make_key, k: int) -> dict:
    out: dict = {}
    for _ in range(k):
        key = make_key()
        if key is not None:
            out[key] = out.get(key, 0) + coefficient(rng)
    return out


def function(rng, p, q, maxdeg=2, parity=None, nterms=3) -> SuperPoly:
    fo = fun_mask(p, q)
    return SuperPoly(p, q, _terms(rng, lambda: monomial(rng, p + q, fo, maxdeg, parity), int(rng.integers(1, nterms + 1))))


def nonzero(draw, tries: int = 50):
    """Call ``draw()`` until it returns a nonzero element."""
    for _ in range(tries):
        x = draw()
        if x:
            return x
    raise RuntimeError("sampler kept returning zero")


def weyl(rng, p, q, maxdeg=2, nterms=3) -> WeylOp:
    fo = fun_mask(p, q)
    n = p + q
    return WeylOp(p, q, _terms(rng, lambda: (monomial(rng, n, fo, maxdeg), monomial(rng, n, fo, maxdeg)), int(rng.integers(1, nterms + 1))))


def form(rng, p, q, maxdeg=2, nterms=3) -> FormElem:
    fo, so = fun_mask(p, q), shift_mask(p, q)
    n = p + q
    return FormElem(p, q, _terms(rng, lambda: (monomial(rng, n, so, maxdeg), monomial(rng, n, fo, maxdeg)), int(rng.integers(1, nterms + 1))))


def polyfield(rng, p, q, maxdeg=2, parity=None, nterms=3) -> PolyElem:
    fo, so = fun_mask(p, q), shift_mask(p, q)
    n = p + q

    def key():
        pm = monomial(rng, n, so, maxdeg)
        want = None if parity is None else (parity + mono_parity(pm, so)) & 1
        xm = monomial(rng, n, fo, maxdeg, want)
        return None if xm is None else (xm, pm)

    return PolyElem(p, q, _terms(rng, key, int(rng.integers(1, nterms + 1))))


def homogeneous_polyfield(rng, p, q, maxdeg=2, nterms=3) -> PolyElem:
    for _ in range(20):
        t = polyfield(rng, p, q, maxdeg, int(rng.integers(0, 2)), nterms)
        if t:
            return t
    return PolyElem.pd(p, q, 0)


def vector_field(rng, p, q, parity: int, maxdeg=2) -> VectorField:
    comps = {}
    for a in range(p + q):
        if rng.random() < 0.7:
            f = function(rng, p, q, maxdeg, (parity + (a >= p)) & 1, 2)
            if f:
                comps[a] = f
    if not comps:
        a = int(rng.integers(0, p + q))
        m = monomial(rng, p + q, fun_mask(p, q), maxdeg, (parity + (a >= p)) & 1) or unit(p + q)
        if mono_parity(m, fun_mask(p, q)) == (parity + (a >= p)) & 1:
            comps[a] = SuperPoly(p, q, {m: 1})
    return VectorField(p, q, comps)


def virtual(rng, p, q, maxdeg=2, nterms=3, form_slot=True, poly_slot=True) -> VirtualForm:
    fo, so = fun_mask(p, q), shift_mask(p, q)
    n = p + q
    u = unit(n)

    def key():
        return (
            monomial(rng, n, so, maxdeg) if form_slot else u,
            monomial(rng, n, fo, maxdeg),
            monomial(rng, n, fo, maxdeg),
            monomial(rng, n, so, maxdeg) if poly_slot else u,
        )

    return VirtualForm(p, q, _terms(rng, key, int(rng.integers(1, nterms + 1))))
