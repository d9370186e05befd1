"""Polyvector fields with left polynomial coefficients, vector fields, Lie derivative.

A key ``(xm, pm)`` stands for ``x^xm * pi_d^pm``.  The parity-shifted
derivatives ``pi_d_z`` are odd, ``pi_d_theta`` are even.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .superpoly import (
    Linear,
    SuperPoly,
    acc,
    fun_mask,
    gen,
    mono_lderiv,
    mono_mul,
    mono_parity,
    monomials,
    partial,
    shift_mask,
    unit,
)
from .weyl import WeylOp


class PolyElem(Linear):
    __slots__ = ()

    @classmethod
    def const(cls, p, q, c=1) -> "PolyElem":
        n = p + q
        return cls(p, q, {(unit(n), unit(n)): c})

    @classmethod
    def from_poly(cls, f: SuperPoly) -> "PolyElem":
        n = f.p + f.q
        return cls._raw(f.p, f.q, {(m, unit(n)): c for m, c in f.terms.items()})

    @classmethod
    def pd(cls, p, q, a: int) -> "PolyElem":
        """The shifted coordinate derivative ``pi_d`` for slot ``a`` (0-based)."""
        n = p + q
        return cls(p, q, {(unit(n), gen(n, a)): 1})

    def scalar(self, c):
        return PolyElem.const(self.p, self.q, c)

    def term_parity(self, key) -> int:
        return (mono_parity(key[0], fun_mask(self.p, self.q)) + mono_parity(key[1], shift_mask(self.p, self.q))) & 1

    def parity(self) -> int:
        ps = {self.term_parity(k) for k in self.terms}
        if len(ps) > 1:
            raise ValueError("polyfield is not parity-homogeneous")
        return ps.pop() if ps else 0

    def degrees(self) -> set:
        return {sum(pm) for _, pm in self.terms}

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if isinstance(other, SuperPoly):
            other = PolyElem.from_poly(other)
        if not isinstance(other, PolyElem):
            return NotImplemented
        return poly_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if isinstance(other, SuperPoly):
            return left_mul(other, self)
        return NotImplemented


def left_mul(f: SuperPoly, tau: PolyElem) -> PolyElem:
    """Multiply the left coefficient (no sign: the function stays on the left)."""
    xodd = fun_mask(f.p, f.q)
    d: dict = {}
    for m, c in f.terms.items():
        for (xm, pm), v in tau.terms.items():
            r = mono_mul(m, xm, xodd)
            if r is not None:
                acc(d, (r[1], pm), r[0] * c * v)
    return PolyElem._raw(f.p, f.q, d)


def poly_mul(s: PolyElem, t: PolyElem) -> PolyElem:
    s._check(t)
    podd = shift_mask(s.p, s.q)
    xodd = fun_mask(s.p, s.q)
    d: dict = {}
    for (x1, p1), c1 in s.terms.items():
        pp1 = mono_parity(p1, podd)
        for (x2, p2), c2 in t.terms.items():
            rx = mono_mul(x1, x2, xodd)
            if rx is None:
                continue
            rp = mono_mul(p1, p2, podd)
            if rp is None:
                continue
            sg = rx[0] * rp[0]
            if pp1 and mono_parity(x2, xodd):
                sg = -sg
            acc(d, (rx[1], rp[1]), sg * c1 * c2)
    return PolyElem._raw(s.p, s.q, d)


def _pairing_sign(p: int, a: int) -> int:
    # <dx_a, pi_d_a> = (-1)^{|x_a|+1}
    return -1 if a < p else 1


def contract_index(a: int, tau: PolyElem) -> PolyElem:
    """``<dx_a, tau>``: derivation of parity ``|x_a|+1`` with the base pairing sign."""
    p, q = tau.p, tau.q
    podd = shift_mask(p, q)
    xodd = fun_mask(p, q)
    base = _pairing_sign(p, a)
    dpar = 1 if a < p else 0
    d: dict = {}
    for (xm, pm), c in tau.terms.items():
        r = mono_lderiv(pm, a, podd)
        if r is None:
            continue
        s = base * r[0]
        if dpar and mono_parity(xm, xodd):
            s = -s
        acc(d, (xm, r[1]), s * c)
    return PolyElem._raw(p, q, d)


def contract_der(a: int, F: PolyElem) -> PolyElem:
    """Contraction of ``dx_a`` with a polyfield (same as :func:`contract_index`)."""
    return contract_index(a, F)


class VectorField:
    """``X = sum_a X^a d_a`` with polynomial components."""

    __slots__ = ("p", "q", "comps")

    def __init__(self, p: int, q: int, comps: Mapping[int, SuperPoly]):
        self.p = p
        self.q = q
        self.comps = {a: f for a, f in comps.items() if f}

    def parity(self) -> int:
        ps = set()
        for a, f in self.comps.items():
            for pf in f.parities():
                ps.add((pf + (a >= self.p)) & 1)
        if len(ps) > 1:
            raise ValueError("vector field is not parity-homogeneous")
        return ps.pop() if ps else 0

    def to_weyl(self) -> WeylOp:
        out = WeylOp.const(self.p, self.q, 0)
        for a, f in sorted(self.comps.items()):
            out = out + WeylOp.from_poly(f) * WeylOp.deriv(self.p, self.q, a)
        return out

    def __call__(self, f: SuperPoly) -> SuperPoly:
        out = f.zero()
        for a, g in sorted(self.comps.items()):
            out = out + g * partial(a, f)
        return out

    def times(self, f: SuperPoly) -> "VectorField":
        """The field ``f X`` (function on the left)."""
        return VectorField(self.p, self.q, {a: f * g for a, g in self.comps.items()})

    def to_poly(self) -> PolyElem:
        """Parity shift ``pi X`` keeping coefficients on the left."""
        out = PolyElem.const(self.p, self.q, 0)
        for a, f in sorted(self.comps.items()):
            out = out + f * PolyElem.pd(self.p, self.q, a)
        return out

    @classmethod
    def coordinate(cls, p, q, a: int) -> "VectorField":
        return cls(p, q, {a: SuperPoly.const(p, q)})

    def __repr__(self):
        from .grammar import format_element

        return " + ".join(f"({format_element(f)})*d{a}" for a, f in sorted(self.comps.items())) or "0"


def _lie_generator(X: VectorField, k: int, xpar: int) -> PolyElem:
    # L_X(pi d_k) = pi [X, d_k] = -(-1)^{|X||x_k|} sum_a (d_k X^a) pi d_a
    p, q = X.p, X.q
    s = -1 if (xpar and k >= p) else 1
    out = PolyElem.const(p, q, 0)
    for a, f in sorted(X.comps.items()):
        g = partial(k, f)
        if g:
            out = out + g * PolyElem.pd(p, q, a)
    return out.scale(-s)


def lie_derivative(X: VectorField, tau: PolyElem) -> PolyElem:
    """Lie derivative of a polyfield along a parity-homogeneous vector field."""
    p, q = X.p, X.q
    xpar = X.parity()
    podd = shift_mask(p, q)
    n = p + q
    gens = {k: _lie_generator(X, k, xpar) for k in range(n)}
    out = PolyElem.const(p, q, 0)
    for (xm, pm), c in tau.terms.items():
        g = SuperPoly._raw(p, q, {xm: c})
        gpar = mono_parity(xm, fun_mask(p, q))
        mono = PolyElem._raw(p, q, {(unit(n), pm): 1})
        out = out + X(g) * mono
        factors = [k for k in range(n) for _ in range(pm[k])]
        acc_sign = -1 if (xpar and gpar) else 1
        passed = 0
        for i, k in enumerate(factors):
            left = PolyElem.const(p, q)
            for j in factors[:i]:
                left = left * PolyElem.pd(p, q, j)
            right = PolyElem.const(p, q)
            for j in factors[i + 1:]:
                right = right * PolyElem.pd(p, q, j)
            s = acc_sign * (-1 if (xpar and passed) else 1)
            out = out + (g * (left * gens[k] * right)).scale(s)
            passed ^= 1 if podd[k] else 0
    return out


def lie_derivative_one_form(X: VectorField, w):
    """Lie derivative of a one-form ``sum dx_a g_a`` along ``X``.

    ``L_X(dx_a g) = (-1)^{|X|} d(X^a) g + (-1)^{|X||dx_a|} dx_a X(g)``.
    """
    from .forms import FormElem, d_function, one_form_parts

    p, q = X.p, X.q
    xpar = X.parity()
    out = FormElem.const(p, q, 0)
    for a, g in one_form_parts(w):
        comp = X.comps.get(a)
        if comp:
            out = out + (d_function(comp) * FormElem.from_poly(g)).scale(-1 if xpar else 1)
        s = -1 if (xpar and a < p) else 1
        out = out + (FormElem.dx(p, q, a) * FormElem.from_poly(X(g))).scale(s)
    return out


def e_x(tau: PolyElem) -> PolyElem:
    """Sum over all coordinates of ``<dx_a, L_{d_a} tau>``."""
    p, q = tau.p, tau.q
    out = tau.zero()
    for a in range(p + q):
        out = out + contract_index(a, lie_derivative(VectorField.coordinate(p, q, a), tau))
    return out


def basis(p: int, q: int, maxpoly: int, maxcoef: int) -> list:
    podd = shift_mask(p, q)
    xodd = fun_mask(p, q)
    n = p + q
    return [
        PolyElem._raw(p, q, {(xm, pm): 1})
        for pm in monomials(n, podd, maxpoly)
        for xm in monomials(n, xodd, maxcoef)
    ]
