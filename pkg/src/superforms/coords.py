"""Polynomial super coordinate changes and transport of objects between charts.

A :class:`SuperCoordMap` lists new coordinates ``y_b = g_b(x)`` as
polynomials in the old ones.  Transport rewrites an object written in the
``x`` generators (``x_a``, ``d_{x_a}``, ``dx_a``, ``pi d_{x_a}``) in terms of
the ``y`` generators, using the same tuple layout for both charts.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .forms import FormElem, d_function, form_mul
from .polyfields import PolyElem, VectorField, poly_mul
from .superpoly import SuperPoly, gen, partial, unit
from .tensor import RawSpencer, RawUdR, VirtualForm
from .weyl import WeylOp, compose
from . import linalg


class NotInvertible(ValueError):
    """The map has a singular linear part or a non-nilpotent correction."""


class SuperCoordMap:
    """Parity-preserving polynomial map given by its new coordinates."""

    __slots__ = ("p", "q", "targets", "_inv", "_factors", "__weakref__")

    def __init__(self, p: int, q: int, targets):
        targets = list(targets)
        if len(targets) != p + q:
            raise ValueError(f"expected {p + q} targets, got {len(targets)}")
        for b, t in enumerate(targets):
            if (t.p, t.q) != (p, q):
                raise ValueError("target lives in the wrong polynomial ring")
            want = 1 if b >= p else 0
            if t and t.parities() != {want}:
                raise ValueError(f"target {b} has the wrong parity")
        self.p = p
        self.q = q
        self.targets = tuple(targets)
        self._inv = None
        self._factors = None

    @classmethod
    def identity(cls, p: int, q: int) -> "SuperCoordMap":
        return cls(p, q, [SuperPoly.var(p, q, a) for a in range(p + q)])

    def __eq__(self, other):
        return isinstance(other, SuperCoordMap) and self.targets == other.targets

    def __hash__(self):
        return hash(self.targets)

    def linear_part(self) -> list:
        """``L[b][a]``: coefficient of ``x_a`` in ``y_b``."""
        n = self.p + self.q
        return [[t.terms.get(gen(n, a), 0) for a in range(n)] for t in self.targets]

    def jacobian(self) -> list:
        """``J[a][b] = d_{x_a} y_b`` as polynomials in ``x``."""
        n = self.p + self.q
        return [[partial(a, self.targets[b]) for b in range(n)] for a in range(n)]

    def __repr__(self):
        from .grammar import format_map

        return format_map(self)


def pullback_fn(g: SuperCoordMap, f: SuperPoly) -> SuperPoly:
    """Substitute ``y_b := g_b(x)`` into a polynomial written in ``y``."""
    p, q = g.p, g.q
    n = p + q
    out = SuperPoly(p, q)
    powers: dict = {}

    def power(b, k):
        if (b, k) not in powers:
            powers[(b, k)] = g.targets[b] ** k
        return powers[(b, k)]

    for m, c in sorted(f.terms.items()):
        term = SuperPoly.const(p, q, c)
        for b in range(n):
            if m[b]:
                term = term * power(b, m[b])
        out = out + term
    return out


def compose_maps(g: SuperCoordMap, h: SuperCoordMap) -> SuperCoordMap:
    """``g o h``: apply ``h`` first, then ``g``."""
    out = SuperCoordMap(g.p, g.q, [pullback_fn(h, t) for t in g.targets])
    out._factors = (g, h)
    return out


def _check_linear(g: SuperCoordMap):
    L = g.linear_part()
    n = g.p + g.q
    if linalg.rank(linalg.dense(L, n)) < n:
        raise NotInvertible("linear part is singular")
    return L


def invert(g: SuperCoordMap, max_iter: int | None = None) -> SuperCoordMap:
    """Exact polynomial inverse by fixed-point iteration on the nilpotent correction."""
    if g._inv is not None:
        return g._inv
    if g._factors is not None:
        outer, inner = g._factors
        inv = compose_maps(invert(inner), invert(outer))
        return _register_inverse(g, inv)
    p, q = g.p, g.q
    n = p + q
    L = _check_linear(g)
    Linv_m = linalg.dense(L, n).to_field().inv().to_dod()
    Linv = [[linalg.to_fraction(Linv_m.get(i, {}).get(j, 0)) for j in range(n)] for i in range(n)]
    u = unit(n)
    const = [t.terms.get(u, 0) for t in g.targets]
    # nonlinear part N_b(x) = g_b - const_b - linear_b
    nonlin = []
    for b, t in enumerate(g.targets):
        nonlin.append(SuperPoly(p, q, {m: c for m, c in t.terms.items() if sum(m) >= 2}))
    ys = [SuperPoly.var(p, q, b) for b in range(n)]
    # x = L^{-1} (y - const - N(x))
    x = [sum((ys[b].scale(Linv[a][b]) for b in range(n)), SuperPoly(p, q)) - sum(Linv[a][b] * const[b] for b in range(n)) for a in range(n)]
    limit = max_iter if max_iter is not None else 4 * (n + 2) + 2 * q
    # a polynomial inverse reached by this iteration never needs degrees past this
    max_degree = (1 + max(t.degree() for t in g.targets)) ** (q + 1) + p
    for _ in range(limit):
        if max(f.degree() for f in x) > max_degree:
            break
        cur = SuperCoordMap.__new__(SuperCoordMap)
        cur.p, cur.q, cur.targets, cur._inv, cur._factors = p, q, tuple(x), None, None
        Nx = [pullback_fn(cur, f) for f in nonlin]
        rhs = [ys[b] - const[b] - Nx[b] for b in range(n)]
        nxt = [sum((rhs[b].scale(Linv[a][b]) for b in range(n)), SuperPoly(p, q)) for a in range(n)]
        if nxt == x:
            return _register_inverse(g, SuperCoordMap(p, q, x))
        x = nxt
    raise NotInvertible("nonlinear part is not nilpotent")


def _register_inverse(g: SuperCoordMap, inv: SuperCoordMap) -> SuperCoordMap:
    ident = SuperCoordMap.identity(g.p, g.q)
    if SuperCoordMap(g.p, g.q, [pullback_fn(inv, t) for t in g.targets]) != ident:
        raise NotInvertible("candidate inverse does not undo the map")
    inv._inv = g
    g._inv = inv
    return inv


# ---------------------------------------------------------------------------
# transport from x-coordinates to y-coordinates


class Transport:
    """Rewrites objects written in the ``x`` chart in the ``y = g(x)`` chart."""

    def __init__(self, g: SuperCoordMap):
        self.g = g
        self.ginv = invert(g)
        p, q = g.p, g.q
        n = p + q
        self.p, self.q = p, q
        # x_a as functions of y
        self.x_of_y = list(self.ginv.targets)
        # d_{x_a} y_b expressed in y
        jac = g.jacobian()
        self.jac_y = [[self.fn(jac[a][b]) for b in range(n)] for a in range(n)]
        self._dx = [d_function(self.x_of_y[a]) for a in range(n)]
        self._der = [
            sum(
                (WeylOp.from_poly(self.jac_y[a][b]) * WeylOp.deriv(p, q, b) for b in range(n)),
                WeylOp.const(p, q, 0),
            )
            for a in range(n)
        ]
        self._pd = [
            sum((self.jac_y[a][b] * PolyElem.pd(p, q, b) for b in range(n)), PolyElem.const(p, q, 0))
            for a in range(n)
        ]

    def fn(self, f: SuperPoly) -> SuperPoly:
        return pullback_fn(self.ginv, f)

    def dx(self, a: int) -> FormElem:
        return self._dx[a]

    def der(self, a: int) -> WeylOp:
        return self._der[a]

    def pd(self, a: int) -> PolyElem:
        return self._pd[a]

    def form(self, w: FormElem) -> FormElem:
        p, q = self.p, self.q
        out = FormElem.const(p, q, 0)
        for (fm, xm), c in sorted(w.terms.items()):
            t = FormElem.const(p, q, c)
            for a, e in enumerate(fm):
                for _ in range(e):
                    t = form_mul(t, self._dx[a])
            t = t * FormElem.from_poly(self.fn(SuperPoly._raw(p, q, {xm: 1})))
            out = out + t
        return out

    def poly(self, tau: PolyElem) -> PolyElem:
        p, q = self.p, self.q
        out = PolyElem.const(p, q, 0)
        for (xm, pm), c in sorted(tau.terms.items()):
            t = PolyElem.from_poly(self.fn(SuperPoly._raw(p, q, {xm: c})))
            for a, e in enumerate(pm):
                for _ in range(e):
                    t = poly_mul(t, self._pd[a])
            out = out + t
        return out

    def op(self, A: WeylOp) -> WeylOp:
        p, q = self.p, self.q
        out = WeylOp.const(p, q, 0)
        for (xm, dm), c in sorted(A.terms.items()):
            t = WeylOp.from_poly(self.fn(SuperPoly._raw(p, q, {xm: c})))
            for a, e in enumerate(dm):
                for _ in range(e):
                    t = compose(t, self._der[a])
            out = out + t
        return out

    def vector_field(self, X: VectorField) -> VectorField:
        W = self.op(X.to_weyl())
        comps: dict = {}
        for (xm, dm), c in W.terms.items():
            if sum(dm) != 1:
                raise ValueError("transported vector field is not first order")
            a = dm.index(1)
            comps[a] = comps.get(a, SuperPoly(self.p, self.q)) + SuperPoly._raw(self.p, self.q, {xm: c})
        return VectorField(self.p, self.q, comps)

    def virtual(self, v: VirtualForm) -> VirtualForm:
        p, q = self.p, self.q
        out = VirtualForm._raw(p, q, {})
        for key, c in sorted(v.terms.items()):
            w = v.slot(key, "form")
            F = v.slot(key, "op").scale(c)
            tau = v.slot(key, "poly")
            out = out + VirtualForm.tensor(self.form(w), self.op(F), self.poly(tau))
        return out

    def raw_spencer(self, e: RawSpencer) -> RawSpencer:
        out = RawSpencer._raw(self.p, self.q, {})
        for F, tau in e.pieces():
            out = out + RawSpencer.tensor(self.op(F), self.poly(tau))
        return out

    def raw_udr(self, e: RawUdR) -> RawUdR:
        out = RawUdR._raw(self.p, self.q, {})
        for w, F in e.pieces():
            out = out + RawUdR.tensor(self.form(w), self.op(F))
        return out

    def __call__(self, obj):
        if isinstance(obj, SuperPoly):
            return self.fn(obj)
        if isinstance(obj, FormElem):
            return self.form(obj)
        if isinstance(obj, PolyElem):
            return self.poly(obj)
        if isinstance(obj, WeylOp):
            return self.op(obj)
        if isinstance(obj, VectorField):
            return self.vector_field(obj)
        if isinstance(obj, VirtualForm):
            return self.virtual(obj)
        if isinstance(obj, RawSpencer):
            return self.raw_spencer(obj)
        if isinstance(obj, RawUdR):
            return self.raw_udr(obj)
        raise TypeError(f"cannot transport {type(obj).__name__}")


@lru_cache(maxsize=64)
def _transport_cached(g: SuperCoordMap) -> Transport:
    return Transport(g)


def transport(g: SuperCoordMap, obj):
    """Rewrite ``obj`` from the old chart to the chart ``y = g(x)``."""
    return _transport_cached(g)(obj)


# ---------------------------------------------------------------------------
# random admissible maps


def _rand_coeff(rng: random.Random) -> int:
    return rng.choice([-2, -1, 1, 2])


def _random_linear(p: int, q: int, rng: random.Random) -> SuperCoordMap:
    # unitriangular times a permutation keeps the inverse integral
    targets = []
    for blk_start, blk_len in ((0, p), (p, q)):
        perm = list(range(blk_len))
        rng.shuffle(perm)
        for i in range(blk_len):
            t = SuperPoly.var(p, q, blk_start + perm[i]).scale(rng.choice([1, -1, 2]))
            for j in range(i + 1, blk_len):
                if rng.random() < 0.5:
                    t = t + SuperPoly.var(p, q, blk_start + perm[j]).scale(_rand_coeff(rng))
            targets.append(t)
    return SuperCoordMap(p, q, targets)


def _random_even_shift(p: int, q: int, rng: random.Random) -> SuperCoordMap:
    targets = [SuperPoly.var(p, q, a) for a in range(p + q)]
    if q < 2:
        return SuperCoordMap(p, q, targets)
    for i in range(p):
        a, b = sorted(rng.sample(range(q), 2))
        coef = SuperPoly.const(p, q, _rand_coeff(rng))
        if rng.random() < 0.6:
            coef = coef + SuperPoly.var(p, q, rng.randrange(p)).scale(_rand_coeff(rng))
        targets[i] = targets[i] + coef * SuperPoly.var(p, q, p + a) * SuperPoly.var(p, q, p + b)
    return SuperCoordMap(p, q, targets)


def _random_odd_shift(p: int, q: int, rng: random.Random) -> SuperCoordMap:
    targets = [SuperPoly.var(p, q, a) for a in range(p + q)]
    for al in range(q):
        t = targets[p + al]
        for be in range(al + 1, q):
            if rng.random() < 0.7:
                c = SuperPoly.var(p, q, rng.randrange(p)) if p else SuperPoly.const(p, q)
                if rng.random() < 0.4:
                    c = c * SuperPoly.var(p, q, rng.randrange(p))
                t = t + c.scale(_rand_coeff(rng)) * SuperPoly.var(p, q, p + be)
        if q >= 3 and rng.random() < 0.5:
            i, j, k = sorted(rng.sample(range(q), 3))
            t = t + SuperPoly.var(p, q, p + i) * SuperPoly.var(p, q, p + j) * SuperPoly.var(p, q, p + k)
        targets[p + al] = t
    return SuperCoordMap(p, q, targets)


def random_admissible_map(p: int, q: int, rng: random.Random) -> SuperCoordMap:
    """Composition of a linear change, an odd triangular shift and an even nilpotent shift."""
    g = _random_linear(p, q, rng)
    g = compose_maps(_random_odd_shift(p, q, rng), g)
    g = compose_maps(_random_even_shift(p, q, rng), g)
    return g
