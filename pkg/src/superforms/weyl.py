"""Weyl superalgebra of polynomial differential operators.

Operators are stored in normal order: a key ``(xm, dm)`` stands for
``x^xm * d^dm`` with every coordinate to the left of every derivative.
Derivative monomials use the same tuple layout as functions: ``d_z`` even,
``d_theta`` odd, odd factors in increasing index order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

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
    unit,
)


@lru_cache(maxsize=1 << 18)
def d_times_x(dm: tuple, xm: tuple, odd: tuple) -> tuple:
    """Normal-ordered expansion of ``d^dm * x^xm`` as a tuple of ((xm, dm), coeff)."""
    n = len(dm)
    if not any(dm):
        return (((xm, dm), 1),)
    b = next(i for i in range(n) if dm[i])
    rest = list(dm)
    rest[b] -= 1
    inner = d_times_x(tuple(rest), xm, odd)
    gb = gen(n, b)
    out: dict = {}
    for (x1, d1), c in inner:
        # d_b x1 d1 = (d_b x1) d1 + (-1)^{|b||x1|} x1 d_b d1
        r = mono_lderiv(x1, b, odd)
        if r is not None:
            acc(out, (r[1], d1), c * r[0])
        r2 = mono_mul(gb, d1, odd)
        if r2 is not None:
            s = -1 if (odd[b] and mono_parity(x1, odd)) else 1
            acc(out, (x1, r2[1]), c * s * r2[0])
    return tuple(sorted(out.items()))


@lru_cache(maxsize=1 << 18)
def mono_compose(k1: tuple, k2: tuple, odd: tuple) -> tuple:
    """Product of two normal-ordered basis operators."""
    (xa, da), (xc, dd) = k1, k2
    out: dict = {}
    for (x1, d1), c in d_times_x(da, xc, odd):
        rx = mono_mul(xa, x1, odd)
        if rx is None:
            continue
        rd = mono_mul(d1, dd, odd)
        if rd is None:
            continue
        acc(out, (rx[1], rd[1]), c * rx[0] * rd[0])
    return tuple(out.items())


class WeylOp(Linear):
    """Normal-ordered differential operator with polynomial coefficients."""

    __slots__ = ()

    @classmethod
    def const(cls, p, q, c=1) -> "WeylOp":
        n = p + q
        return cls(p, q, {(unit(n), unit(n)): c})

    @classmethod
    def from_poly(cls, f: SuperPoly) -> "WeylOp":
        n = f.p + f.q
        return cls._raw(f.p, f.q, {(m, unit(n)): c for m, c in f.terms.items()})

    @classmethod
    def deriv(cls, p, q, a: int) -> "WeylOp":
        """The coordinate derivative by slot ``a`` (0-based)."""
        n = p + q
        return cls(p, q, {(unit(n), gen(n, a)): 1})

    @classmethod
    def coord(cls, p, q, a: int) -> "WeylOp":
        n = p + q
        return cls(p, q, {(gen(n, a), unit(n)): 1})

    def scalar(self, c):
        return WeylOp.const(self.p, self.q, c)

    @property
    def odd(self):
        return fun_mask(self.p, self.q)

    def term_parity(self, key) -> int:
        odd = self.odd
        return (mono_parity(key[0], odd) + mono_parity(key[1], odd)) & 1

    def parity(self) -> int:
        ps = {self.term_parity(k) for k in self.terms}
        if len(ps) > 1:
            raise ValueError("operator is not parity-homogeneous")
        return ps.pop() if ps else 0

    def by_parity(self) -> dict:
        out: dict = {}
        for k, c in self.terms.items():
            out.setdefault(self.term_parity(k), {})[k] = c
        return {k: WeylOp._raw(self.p, self.q, v) for k, v in sorted(out.items())}

    def order(self) -> int:
        """Filtration degree: the highest number of derivatives in a term."""
        return max((sum(dm) for _, dm in self.terms), default=-1)

    def symbol(self, k: int) -> "WeylOp":
        """Terms with exactly ``k`` derivatives."""
        return WeylOp._raw(self.p, self.q, {key: c for key, c in self.terms.items() if sum(key[1]) == k})

    def is_function(self) -> bool:
        return all(not any(dm) for _, dm in self.terms)

    def as_function(self) -> SuperPoly:
        if not self.is_function():
            raise ValueError("operator has derivative terms")
        return SuperPoly._raw(self.p, self.q, {xm: c for (xm, _), c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if isinstance(other, SuperPoly):
            other = WeylOp.from_poly(other)
        if not isinstance(other, WeylOp):
            return NotImplemented
        return compose(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if isinstance(other, SuperPoly):
            return compose(WeylOp.from_poly(other), self)
        return NotImplemented


def compose(A: WeylOp, B: WeylOp) -> WeylOp:
    A._check(B)
    odd = fun_mask(A.p, A.q)
    d: dict = {}
    for k1, c1 in A.terms.items():
        for k2, c2 in B.terms.items():
            for k, c in mono_compose(k1, k2, odd):
                acc(d, k, c * c1 * c2)
    return WeylOp._raw(A.p, A.q, d)


def apply_to(A: WeylOp, f: SuperPoly) -> SuperPoly:
    """Action of an operator on a polynomial."""
    odd = fun_mask(A.p, A.q)
    n = A.p + A.q
    out: dict = {}
    for (xm, dm), c in A.terms.items():
        # derivatives act right-to-left in canonical order
        cur = dict(f.terms)
        for b in reversed(range(n)):
            for _ in range(dm[b]):
                nxt: dict = {}
                for m, v in cur.items():
                    r = mono_lderiv(m, b, odd)
                    if r is not None:
                        acc(nxt, r[1], v * r[0])
                cur = nxt
        for m, v in cur.items():
            r = mono_mul(xm, m, odd)
            if r is not None:
                acc(out, r[1], c * v * r[0])
    return SuperPoly._raw(A.p, A.q, out)


def super_commutator(A: WeylOp, B: WeylOp) -> WeylOp:
    """``AB - (-1)^{|A||B|} BA``, split by parity for inhomogeneous inputs."""
    total = A.zero()
    for pa, Ah in A.by_parity().items():
        for pb, Bh in B.by_parity().items():
            s = -1 if (pa and pb) else 1
            total = total + compose(Ah, Bh) - compose(Bh, Ah).scale(s)
    return total


def co_normal_form(A: WeylOp) -> dict:
    """Rewrite with derivatives on the left: returns ``{(dm, xm): coeff}``."""
    odd = fun_mask(A.p, A.q)
    rem = dict(A.terms)
    out: dict = {}
    while rem:
        key = max(rem, key=lambda k: (sum(k[0]) + sum(k[1]), k))
        c = rem[key]
        xm, dm = key
        s = -1 if (mono_parity(xm, odd) and mono_parity(dm, odd)) else 1
        acc(out, (dm, xm), c * s)
        for k, v in d_times_x(dm, xm, odd):
            acc(rem, k, -c * s * v)
    return out


def from_co_normal(p: int, q: int, terms: dict) -> WeylOp:
    """Inverse of :func:`co_normal_form`."""
    odd = fun_mask(p, q)
    d: dict = {}
    for (dm, xm), c in terms.items():
        for k, v in d_times_x(dm, xm, odd):
            acc(d, k, c * v)
    return WeylOp._raw(p, q, d)


def basis(p: int, q: int, maxx: int, maxd: int) -> list:
    """Normal-ordered basis operators with bounded coordinate and derivative degree."""
    odd = fun_mask(p, q)
    n = p + q
    return [
        WeylOp._raw(p, q, {(xm, dm): 1})
        for dm in monomials(n, odd, maxd)
        for xm in monomials(n, odd, maxx)
    ]
