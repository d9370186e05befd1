"""Differential superforms with right polynomial coefficients.

A key ``(fm, xm)`` stands for ``dx^fm * x^xm``.  Form generators have
shifted parity: ``dz`` is odd and anticommutes, ``dtheta`` is even and can
appear with any exponent.
"""

from __future__ import annotations

from fractions import Fraction

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
    shift_mask,
    unit,
)


class DegreeMismatch(ValueError):
    """A form of the wrong degree was passed to a degree-specific operation."""


class FormElem(Linear):
    __slots__ = ()

    @classmethod
    def const(cls, p, q, c=1) -> "FormElem":
        n = p + q
        return cls(p, q, {(unit(n), unit(n)): c})

    @classmethod
    def from_poly(cls, f: SuperPoly) -> "FormElem":
        n = f.p + f.q
        return cls._raw(f.p, f.q, {(unit(n), m): c for m, c in f.terms.items()})

    @classmethod
    def dx(cls, p, q, a: int) -> "FormElem":
        """The one-form ``dx_a`` for slot ``a`` (0-based)."""
        n = p + q
        return cls(p, q, {(gen(n, a), unit(n)): 1})

    def scalar(self, c):
        return FormElem.const(self.p, self.q, c)

    def term_parity(self, key) -> int:
        return (mono_parity(key[0], shift_mask(self.p, self.q)) + mono_parity(key[1], fun_mask(self.p, self.q))) & 1

    def parity(self) -> int:
        ps = {self.term_parity(k) for k in self.terms}
        if len(ps) > 1:
            raise ValueError("form is not parity-homogeneous")
        return ps.pop() if ps else 0

    def degrees(self) -> set:
        return {sum(fm) for fm, _ in self.terms}

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if isinstance(other, SuperPoly):
            other = FormElem.from_poly(other)
        if not isinstance(other, FormElem):
            return NotImplemented
        return form_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if isinstance(other, SuperPoly):
            return form_mul(FormElem.from_poly(other), self)
        return NotImplemented


def form_mul(w: FormElem, e: FormElem) -> FormElem:
    """Supercommutative product; a coefficient moving past a form monomial picks up its Koszul sign."""
    w._check(e)
    fodd = shift_mask(w.p, w.q)
    xodd = fun_mask(w.p, w.q)
    d: dict = {}
    for (f1, x1), c1 in w.terms.items():
        px1 = mono_parity(x1, xodd)
        for (f2, x2), c2 in e.terms.items():
            rf = mono_mul(f1, f2, fodd)
            if rf is None:
                continue
            rx = mono_mul(x1, x2, xodd)
            if rx is None:
                continue
            s = rf[0] * rx[0]
            if px1 and mono_parity(f2, fodd):
                s = -s
            acc(d, (rf[1], rx[1]), s * c1 * c2)
    return FormElem._raw(w.p, w.q, d)


def exterior_d(w: FormElem) -> FormElem:
    """``d(dx^I f) = (-1)^{|dx^I|} dx^I sum_a dx_a (d_a f)``."""
    p, q = w.p, w.q
    n = p + q
    fodd = shift_mask(p, q)
    xodd = fun_mask(p, q)
    d: dict = {}
    for (fm, xm), c in w.terms.items():
        s0 = -1 if mono_parity(fm, fodd) else 1
        for a in range(n):
            r = mono_lderiv(xm, a, xodd)
            if r is None:
                continue
            rf = mono_mul(fm, gen(n, a), fodd)
            if rf is None:
                continue
            acc(d, (rf[1], r[1]), s0 * rf[0] * r[0] * c)
    return FormElem._raw(p, q, d)


def d_function(f: SuperPoly) -> FormElem:
    return exterior_d(FormElem.from_poly(f))


def one_form_parts(w: FormElem) -> list:
    """Decompose a degree-one form as ``[(a, g_a)]`` with ``w = sum dx_a g_a``."""
    if w.degrees() - {1}:
        raise DegreeMismatch("expected a one-form")
    parts: dict = {}
    for (fm, xm), c in w.terms.items():
        a = next(i for i, e in enumerate(fm) if e)
        parts.setdefault(a, {})[xm] = c
    return [(a, SuperPoly._raw(w.p, w.q, t)) for a, t in sorted(parts.items())]


def contract_one(w: FormElem, tau):
    """Pairing of a one-form with a polyfield, extended as a superderivation."""
    from .polyfields import contract_index

    out = tau.zero()
    for a, g in one_form_parts(w):
        out = out + contract_index(a, g * tau)
    return out


def contract(w: FormElem, tau):
    """Contraction of a higher-degree form, leftmost one-form factor applied first."""
    from .polyfields import contract_index

    p, q = w.p, w.q
    out = tau.zero()
    for (fm, xm), c in w.terms.items():
        cur = SuperPoly._raw(p, q, {xm: c}) * tau
        for a, e in enumerate(fm):
            for _ in range(e):
                cur = contract_index(a, cur)
        out = out + cur
    return out


def basis(p: int, q: int, maxform: int, maxcoef: int) -> list:
    fodd = shift_mask(p, q)
    xodd = fun_mask(p, q)
    n = p + q
    return [
        FormElem._raw(p, q, {(fm, xm): 1})
        for fm in monomials(n, fodd, maxform)
        for xm in monomials(n, xodd, maxcoef)
    ]
