"""Integral forms: the Berezinian generator tensored with polyfields.

A key ``(xm, pm)`` of an :class:`IntegralForm` stands for
``phi * x^xm (x) pi_d^pm`` where ``phi`` is the local Berezinian generator,
of parity ``p + q``.  Sections of the Berezinian itself are integral forms
with ``pm = 0``.
"""

from __future__ import annotations

from .polyfields import PolyElem, VectorField, contract_index
from .superpoly import Linear, SuperPoly, acc, fun_mask, mono_mul, mono_parity, partial, shift_mask, unit
from .weyl import WeylOp, co_normal_form, compose


class IntegralForm(Linear):
    __slots__ = ()

    @classmethod
    def const(cls, p, q, c=1) -> "IntegralForm":
        u = unit(p + q)
        return cls(p, q, {(u, u): c})

    @classmethod
    def ber(cls, f: SuperPoly, tau: PolyElem | None = None) -> "IntegralForm":
        """``phi f (x) tau`` with the coefficients of ``tau`` absorbed into ``f``."""
        p, q = f.p, f.q
        if tau is None:
            tau = PolyElem.const(p, q)
        fo = fun_mask(p, q)
        d: dict = {}
        for m, c in f.terms.items():
            for (xm, pm), c2 in tau.terms.items():
                r = mono_mul(m, xm, fo)
                if r is not None:
                    acc(d, (r[1], pm), r[0] * c * c2)
        return cls._raw(p, q, d)

    def scalar(self, c):
        return IntegralForm.const(self.p, self.q, c)

    def term_parity(self, key) -> int:
        return (self.p + self.q + mono_parity(key[0], fun_mask(self.p, self.q)) + mono_parity(key[1], shift_mask(self.p, self.q))) & 1

    def complex_degree(self, key) -> int:
        return self.p - sum(key[1])

    def coefficient(self) -> SuperPoly:
        """The function multiplying ``phi`` in a Berezinian section."""
        if any(any(pm) for _, pm in self.terms):
            raise ValueError("not a Berezinian section")
        return SuperPoly._raw(self.p, self.q, {xm: c for (xm, _), c in self.terms.items()})


def integral_delta(s: IntegralForm) -> IntegralForm:
    """``phi f (x) pi^I  ->  -sum_a (-1)^{|x_a||f| + |I|} phi (d_a f) (x) <dx_a, pi^I>``."""
    p, q = s.p, s.q
    fo, so = fun_mask(p, q), shift_mask(p, q)
    u = unit(p + q)
    d: dict = {}
    for (xm, pm), c in s.terms.items():
        fpar = mono_parity(xm, fo)
        ipar = mono_parity(pm, so)
        f = SuperPoly._raw(p, q, {xm: c})
        tau = PolyElem._raw(p, q, {(u, pm): 1})
        for a in range(p + q):
            t = contract_index(a, tau)
            if not t:
                continue
            df = partial(a, f)
            if not df:
                continue
            sg = -1 if ((fpar and a >= p) + ipar) & 1 else 1
            for m, c1 in df.terms.items():
                for (_, pm2), c2 in t.terms.items():
                    acc(d, (m, pm2), -sg * c1 * c2)
    return IntegralForm._raw(p, q, d)


def ber_lie(X: VectorField, f: SuperPoly) -> IntegralForm:
    """Lie derivative of the Berezinian section ``phi f`` along ``X``."""
    p, q = X.p, X.q
    xpar = X.parity()
    fpar = f.parity()
    total = f.zero()
    for a, Xa in sorted(X.comps.items()):
        xa = 1 if a >= p else 0
        s = -1 if ((xpar + xa) & 1) * ((xa + fpar) & 1) else 1
        total = total + partial(a, f * Xa).scale(s)
    if xpar and (p + q) & 1:
        total = -total
    return IntegralForm.ber(total)


def action_lie(f: SuperPoly, X: VectorField) -> IntegralForm:
    """Closed form of ``phi f . X``: ``-phi sum_a (-1)^{|x_a|(|X^a|+|f|)} d_a(f X^a)``."""
    p = X.p
    xpar = X.parity()
    fpar = f.parity()
    total = f.zero()
    for a, Xa in sorted(X.comps.items()):
        xa = 1 if a >= p else 0
        s = -1 if xa * ((xpar + xa + fpar) & 1) else 1
        total = total + partial(a, f * Xa).scale(s)
    return IntegralForm.ber(-total)


def ber_right_action(s: IntegralForm, A: WeylOp) -> IntegralForm:
    """Right action of an operator on a Berezinian section.

    ``phi f`` is the class of ``dz_1..dz_p (x) d_theta_1..d_theta_q f``; the
    product ``d_theta^Q f A`` is put in co-normal order and the class is read
    off from its component with exactly the derivative ``d_theta^Q``.
    """
    p, q = s.p, s.q
    f = s.coefficient()
    u = unit(p + q)
    top = (0,) * p + (1,) * q
    DQ = WeylOp._raw(p, q, {(u, top): 1})
    W = compose(compose(DQ, WeylOp.from_poly(f)), A)
    d = {(xm, u): c for (J, xm), c in co_normal_form(W).items() if J == top}
    return IntegralForm._raw(p, q, d)


def s0(p: int, q: int) -> IntegralForm:
    """``phi theta_1..theta_q (x) pi_d_z1..pi_d_zp``: generator of the cohomology."""
    return IntegralForm(p, q, {((0,) * p + (1,) * q, (1,) * p + (0,) * q): 1})
