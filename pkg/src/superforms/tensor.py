"""Tensor carriers: virtual forms and unbalanced (raw) two-slot tensors.

A :class:`VirtualForm` key ``(fm, xm, dm, pm)`` stands for
``dx^fm (x) x^xm d^dm (x) pi_d^pm``: the outer slots carry unit
coefficients and every function has been absorbed into the operator slot.
Elements of the universal de Rham complex use ``pm = 0``; elements of the
universal Spencer complex use ``fm = 0``.

The raw classes keep a tensor product over the scalars, before the module
balance is imposed.  They exist so that operators defined on presentations
(and their well-definedness) can be checked.
"""

from __future__ import annotations

from .forms import FormElem
from .polyfields import PolyElem
from .superpoly import Linear, acc, fun_mask, mono_parity, monomials, shift_mask, unit
from .weyl import WeylOp, compose


class VirtualForm(Linear):
    __slots__ = ()

    @classmethod
    def const(cls, p, q, c=1) -> "VirtualForm":
        u = unit(p + q)
        return cls(p, q, {(u, u, u, u): c})

    def scalar(self, c):
        return VirtualForm.const(self.p, self.q, c)

    @classmethod
    def tensor(cls, w: FormElem | None, F: WeylOp, tau: PolyElem | None = None) -> "VirtualForm":
        """Balance ``w (x) F (x) tau``: coefficients of ``w`` and ``tau`` move into ``F``."""
        p, q = F.p, F.q
        u = unit(p + q)
        if w is None:
            w = FormElem.const(p, q)
        if tau is None:
            tau = PolyElem.const(p, q)
        d: dict = {}
        for (fm, fx), c1 in w.terms.items():
            left = WeylOp._raw(p, q, {(fx, u): c1})
            lf = compose(left, F)
            for (px, pm), c2 in tau.terms.items():
                g = compose(lf, WeylOp._raw(p, q, {(px, u): c2}))
                for (xm, dm), c in g.terms.items():
                    acc(d, (fm, xm, dm, pm), c)
        return cls._raw(p, q, d)

    def term_parity(self, key) -> int:
        fm, xm, dm, pm = key
        so, fo = shift_mask(self.p, self.q), fun_mask(self.p, self.q)
        return (mono_parity(fm, so) + mono_parity(xm, fo) + mono_parity(dm, fo) + mono_parity(pm, so)) & 1

    def bidegree(self, key) -> tuple:
        """``(-poly degree, form degree)``."""
        return (-sum(key[3]), sum(key[0]))

    def slot(self, key, which: str):
        p, q = self.p, self.q
        fm, xm, dm, pm = key
        u = unit(p + q)
        if which == "form":
            return FormElem._raw(p, q, {(fm, u): 1})
        if which == "op":
            return WeylOp._raw(p, q, {(xm, dm): 1})
        return PolyElem._raw(p, q, {(u, pm): 1})


def udr(w: FormElem | None, F: WeylOp) -> VirtualForm:
    return VirtualForm.tensor(w, F, None)


def spencer(F: WeylOp, tau: PolyElem | None) -> VirtualForm:
    return VirtualForm.tensor(None, F, tau)


def virtual_basis(p: int, q: int, maxform: int, maxx: int, maxd: int, maxpoly: int, *, total: int | None = None) -> list:
    so, fo = shift_mask(p, q), fun_mask(p, q)
    n = p + q
    out = []
    for fm in monomials(n, so, maxform):
        for pm in monomials(n, so, maxpoly):
            for dm in monomials(n, fo, maxd):
                for xm in monomials(n, fo, maxx):
                    if total is not None and sum(fm) + sum(pm) + sum(dm) + sum(xm) > total:
                        continue
                    out.append(VirtualForm._raw(p, q, {(fm, xm, dm, pm): 1}))
    return out


class RawPair(Linear):
    """Tensor product over the scalars of two sparse elements.

    Keys are ``(left_key, right_key)``; ``left_cls`` and ``right_cls`` are set
    by subclasses.
    """

    __slots__ = ()
    left_cls: type = Linear
    right_cls: type = Linear

    @classmethod
    def tensor(cls, A, B) -> "RawPair":
        d: dict = {}
        for k1, c1 in A.terms.items():
            for k2, c2 in B.terms.items():
                acc(d, (k1, k2), c1 * c2)
        return cls._raw(A.p, A.q, d)

    def scalar(self, c):
        return self.tensor(self.left_cls.const(self.p, self.q, c), self.right_cls.const(self.p, self.q))

    def pieces(self):
        for (k1, k2), c in sorted(self.terms.items()):
            yield (
                self.left_cls._raw(self.p, self.q, {k1: c}),
                self.right_cls._raw(self.p, self.q, {k2: 1}),
            )


class RawUdR(RawPair):
    """Unbalanced ``form (x) operator`` tensor."""

    __slots__ = ()
    left_cls = FormElem
    right_cls = WeylOp

    def normalize(self) -> VirtualForm:
        out = VirtualForm._raw(self.p, self.q, {})
        for w, F in self.pieces():
            out = out + VirtualForm.tensor(w, F, None)
        return out


class RawSpencer(RawPair):
    """Unbalanced ``operator (x) polyfield`` tensor."""

    __slots__ = ()
    left_cls = WeylOp
    right_cls = PolyElem

    def normalize(self) -> VirtualForm:
        out = VirtualForm._raw(self.p, self.q, {})
        for F, tau in self.pieces():
            out = out + VirtualForm.tensor(None, F, tau)
        return out


def as_raw_udr(v: VirtualForm) -> RawUdR:
    p, q = v.p, v.q
    u = unit(p + q)
    d = {((fm, u), (xm, dm)): c for (fm, xm, dm, pm), c in v.terms.items() if not any(pm)}
    if len(d) != len(v.terms):
        raise ValueError("element has a polyfield slot")
    return RawUdR._raw(p, q, d)


def as_raw_spencer(v: VirtualForm) -> RawSpencer:
    p, q = v.p, v.q
    u = unit(p + q)
    d = {((xm, dm), (u, pm)): c for (fm, xm, dm, pm), c in v.terms.items() if not any(fm)}
    if len(d) != len(v.terms):
        raise ValueError("element has a form slot")
    return RawSpencer._raw(p, q, d)
