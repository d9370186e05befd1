"""Polynomial superalgebra over the rationals in p even and q odd variables.

Coordinates are indexed ``a = 0 .. p+q-1``; the first ``p`` are the even
variables ``z``, the remaining ``q`` the odd variables ``theta``.  A monomial
is a tuple of length ``p+q`` holding exponents; odd slots hold 0 or 1.

The monomial helpers here are shared by every graded algebra in the
package.  They take an ``odd`` mask (a tuple of bools) telling which slots
anticommute, since forms and polyfields flip the parity of the slots.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union

Scalar = Union[int, Fraction]
Mono = tuple


class DivergentIntegral(ArithmeticError):
    """Raised when a scaling integral would need ``int_0^1 t^k dt`` with k <= -1."""


def norm_scalar(c: Scalar) -> Scalar:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def as_scalar(c) -> Scalar:
    if isinstance(c, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return norm_scalar(c)
    if isinstance(c, str):
        return norm_scalar(Fraction(c))
    raise TypeError(f"not an exact scalar: {c!r}")


def acc(d: dict, key, c) -> None:
    """Add ``c`` to ``d[key]`` dropping the entry when it cancels."""
    v = d.get(key, 0) + c
    if v:
        d[key] = v
    else:
        d.pop(key, None)


# ---------------------------------------------------------------------------
# graded monomial helpers


@lru_cache(maxsize=None)
def fun_mask(p: int, q: int) -> tuple:
    """Parity mask for functions: z even, theta odd."""
    return (False,) * p + (True,) * q


@lru_cache(maxsize=None)
def shift_mask(p: int, q: int) -> tuple:
    """Parity mask for parity-shifted generators (dz, pi d_z odd; dtheta, pi d_theta even)."""
    return (True,) * p + (False,) * q


def unit(n: int) -> Mono:
    return (0,) * n


def gen(n: int, a: int, k: int = 1) -> Mono:
    m = [0] * n
    m[a] = k
    return tuple(m)


def mono_parity(m: Mono, odd: tuple) -> int:
    s = 0
    for e, o in zip(m, odd):
        if o:
            s += e
    return s & 1


def mono_degree(m: Mono) -> int:
    return sum(m)


@lru_cache(maxsize=1 << 18)
def mono_mul(m1: Mono, m2: Mono, odd: tuple):
    """Product of two monomials: ``(sign, monomial)`` or ``None`` if zero."""
    sign = 0
    out = []
    # ones of m1 strictly to the right of position i
    after = 0
    n = len(m1)
    for i in range(n - 1, -1, -1):
        e1, e2 = m1[i], m2[i]
        if odd[i]:
            if e1 and e2:
                return None
            if e2:
                sign += after
            if e1:
                after += 1
        out.append(e1 + e2)
    out.reverse()
    return (-1 if sign & 1 else 1), tuple(out)


@lru_cache(maxsize=1 << 18)
def mono_lderiv(m: Mono, a: int, odd: tuple):
    """Left derivative of a monomial by generator ``a``: ``(coeff, monomial)`` or ``None``."""
    e = m[a]
    if not e:
        return None
    out = list(m)
    out[a] = e - 1
    if odd[a]:
        before = 0
        for i in range(a):
            if odd[i]:
                before += m[i]
        return (-1 if before & 1 else 1), tuple(out)
    return e, tuple(out)


def monomials(n: int, odd: tuple, maxdeg: int, mindeg: int = 0) -> Iterator[Mono]:
    """All monomials in ``n`` slots of total degree in ``[mindeg, maxdeg]``."""

    def rec(i, left):
        if i == n:
            yield ()
            return
        top = min(left, 1) if odd[i] else left
        for e in range(top + 1):
            for rest in rec(i + 1, left - e):
                yield (e,) + rest

    for m in rec(0, maxdeg):
        if sum(m) >= mindeg:
            yield m


# ---------------------------------------------------------------------------
# sparse linear combinations


class Linear:
    """Base class for sparse linear combinations with exact coefficients."""

    __slots__ = ("p", "q", "terms")

    def __init__(self, p: int, q: int, terms: Mapping | None = None):
        self.p = p
        self.q = q
        self.terms = {}
        if terms:
            for k, c in terms.items():
                c = as_scalar(c)
                if c:
                    self.terms[k] = c

    @classmethod
    def _raw(cls, p, q, terms):
        obj = cls.__new__(cls)
        obj.p = p
        obj.q = q
        obj.terms = {k: norm_scalar(c) for k, c in terms.items() if c}
        return obj

    def _same(self, other):
        return self._raw(self.p, self.q, other)

    def _check(self, other):
        if type(other) is not type(self) or other.p != self.p or other.q != self.q:
            raise TypeError(f"incompatible operands {type(self).__name__}, {type(other).__name__}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self + self.scalar(other)
        self._check(other)
        d = dict(self.terms)
        for k, c in other.terms.items():
            acc(d, k, c)
        return self._same(d)

    __radd__ = __add__

    def __neg__(self):
        return self._same({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar):
        c = as_scalar(c)
        if not c:
            return self._same({})
        return self._same({k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == self.scalar(other)
        return (
            type(other) is type(self)
            and other.p == self.p
            and other.q == self.q
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash((type(self).__name__, self.p, self.q, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def zero(self):
        return self._same({})

    def scalar(self, c):
        raise NotImplementedError

    def split(self) -> list:
        """Split into single-term pieces (sorted for determinism)."""
        return [self._same({k: c}) for k, c in sorted(self.terms.items())]

    def __repr__(self):
        from .grammar import format_element

        return f"{type(self).__name__}({format_element(self)})"


def lin_sum(items: Iterable, zero):
    d: dict = {}
    for x in items:
        for k, c in x.terms.items():
            acc(d, k, c)
    return zero._same(d)


# ---------------------------------------------------------------------------


class SuperPoly(Linear):
    """Element of K[z_1..z_p | theta_1..theta_q]; keys are exponent tuples."""

    __slots__ = ()

    @classmethod
    def const(cls, p: int, q: int, c: Scalar = 1) -> "SuperPoly":
        return cls(p, q, {unit(p + q): c})

    @classmethod
    def var(cls, p: int, q: int, a: int) -> "SuperPoly":
        return cls(p, q, {gen(p + q, a): 1})

    @classmethod
    def z(cls, p: int, q: int, i: int) -> "SuperPoly":
        """Even coordinate z_i, 1-based."""
        return cls.var(p, q, i - 1)

    @classmethod
    def theta(cls, p: int, q: int, alpha: int) -> "SuperPoly":
        """Odd coordinate theta_alpha, 1-based."""
        return cls.var(p, q, p + alpha - 1)

    def scalar(self, c):
        return SuperPoly.const(self.p, self.q, c)

    @property
    def odd(self):
        return fun_mask(self.p, self.q)

    def parities(self) -> set:
        return {mono_parity(m, self.odd) for m in self.terms}

    def parity(self) -> int:
        """Parity of a homogeneous polynomial (0 for the zero polynomial)."""
        ps = self.parities()
        if len(ps) > 1:
            raise ValueError("polynomial is not parity-homogeneous")
        return ps.pop() if ps else 0

    def by_parity(self) -> dict:
        out: dict = {}
        odd = self.odd
        for m, c in self.terms.items():
            out.setdefault(mono_parity(m, odd), {})[m] = c
        return {k: SuperPoly._raw(self.p, self.q, v) for k, v in sorted(out.items())}

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, SuperPoly):
            return NotImplemented
        self._check(other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        out = self.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def constant_term(self) -> Scalar:
        return self.terms.get(unit(self.p + self.q), 0)


def mul(f: SuperPoly, g: SuperPoly) -> SuperPoly:
    """Supercommutative product."""
    odd = fun_mask(f.p, f.q)
    d: dict = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            r = mono_mul(m1, m2, odd)
            if r is not None:
                acc(d, r[1], r[0] * c1 * c2)
    return SuperPoly._raw(f.p, f.q, d)


def partial(a: int, f: SuperPoly) -> SuperPoly:
    """Left derivative by coordinate ``a`` (0-based over z then theta)."""
    odd = fun_mask(f.p, f.q)
    d: dict = {}
    for m, c in f.terms.items():
        r = mono_lderiv(m, a, odd)
        if r is not None:
            acc(d, r[1], r[0] * c)
    return SuperPoly._raw(f.p, f.q, d)


def theta_degree(m: Mono, p: int) -> int:
    return sum(m[p:])


def z_degree(m: Mono, p: int) -> int:
    return sum(m[:p])


def scaling_integral(f: SuperPoly, Q: int) -> SuperPoly:
    """Exact value of ``int_0^1 t^Q f(t x) dt``."""
    d = {}
    for m, c in f.terms.items():
        k = Q + sum(m) + 1
        if k <= 0:
            raise DivergentIntegral(f"exponent {Q + sum(m)} on monomial {m}")
        d[m] = Fraction(c) / k
    return SuperPoly(f.p, f.q, d)


def eval_odd_sector(f: SuperPoly) -> SuperPoly:
    """Set every even variable to zero, keeping the pure-theta part."""
    p = f.p
    return SuperPoly._raw(
        f.p, f.q, {m: c for m, c in f.terms.items() if not any(m[:p])}
    )


def basis(p: int, q: int, maxdeg: int, mindeg: int = 0) -> list:
    """Monomial basis of polynomials of total degree in ``[mindeg, maxdeg]``."""
    return [SuperPoly._raw(p, q, {m: 1}) for m in monomials(p + q, fun_mask(p, q), maxdeg, mindeg)]
