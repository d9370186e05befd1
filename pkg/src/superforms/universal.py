"""Universal de Rham and Spencer complexes, their differentials and homotopies.

All canonical operators act on :class:`VirtualForm` and touch only the
slots they concern, so the same code serves the two-slot complexes and the
triple tensor.  Operators are computed per basis key and cached.
"""

from __future__ import annotations

from functools import lru_cache

from .forms import FormElem, exterior_d, form_mul
from .polyfields import PolyElem, contract_index, e_x
from .superpoly import acc, fun_mask, gen, mono_lderiv, mono_mul, mono_parity, shift_mask, unit
from .tensor import RawSpencer, RawUdR, VirtualForm
from .weyl import WeylOp, co_normal_form, compose, super_commutator


def _apply(v: VirtualForm, fn) -> VirtualForm:
    d: dict = {}
    p, q = v.p, v.q
    for k, c in v.terms.items():
        for k2, c2 in fn(k, p, q):
            acc(d, k2, c * c2)
    return VirtualForm._raw(p, q, d)


def _passive(slot: int):
    """Cache a per-key operator on its active slots only; ``slot`` is carried through unchanged."""

    def deco(core):
        cached = lru_cache(maxsize=None)(core)

        if slot == 0:
            def keyfn(key, p, q):
                kept, b, c_, d = key
                return tuple(((kept, k2[1], k2[2], k2[3]), c) for k2, c in cached((None, b, c_, d), p, q))
        elif slot == 3:
            def keyfn(key, p, q):
                a, b, c_, kept = key
                return tuple(((k2[0], k2[1], k2[2], kept), c) for k2, c in cached((a, b, c_, None), p, q))
        else:
            def keyfn(key, p, q):
                kept = key[slot]
                active = key[:slot] + (None,) + key[slot + 1:]
                return tuple((k2[:slot] + (kept,) + k2[slot + 1:], c) for k2, c in cached(active, p, q))

        keyfn.cache_clear = cached.cache_clear
        return keyfn

    return deco


def _weyl_items(W: WeylOp):
    return W.terms.items()


# ---------------------------------------------------------------------------
# de Rham side


@_passive(3)
def _big_d_key(key, p, q):
    fm, xm, dm, pm = key
    n = p + q
    so = shift_mask(p, q)
    wpar = mono_parity(fm, so)
    F = WeylOp._raw(p, q, {(xm, dm): 1})
    out: dict = {}
    for a in range(n):
        rf = mono_mul(gen(n, a), fm, so)
        if rf is None:
            continue
        s = rf[0] * (-1 if (wpar and a >= p) else 1)
        for (x2, d2), c in compose(WeylOp.deriv(p, q, a), F).terms.items():
            acc(out, (rf[1], x2, d2, pm), s * c)
    return tuple(out.items())


def big_d(v: VirtualForm) -> VirtualForm:
    """The universal de Rham differential acting on the form and operator slots."""
    return _apply(v, _big_d_key)


def form_derivative(a: int, fm: tuple, p: int, q: int):
    """Derivative of a form monomial by the generator ``dx_a``: ``(coeff, monomial)`` or None.

    This is the left derivation dual to left multiplication by ``dx_a``.
    """
    return mono_lderiv(fm, a, shift_mask(p, q))


@_passive(3)
def _homotopy_h_key(key, p, q):
    fm, xm, dm, pm = key
    n = p + q
    so, fo = shift_mask(p, q), fun_mask(p, q)
    wpar = mono_parity(fm, so)
    u = unit(n)
    out: dict = {}
    for (J, A), c in co_normal_form(WeylOp._raw(p, q, {(xm, dm): 1})).items():
        jpar = mono_parity(J, fo)
        DJ = WeylOp._raw(p, q, {(u, J): 1})
        XA = WeylOp._raw(p, q, {(A, u): 1})
        for a in range(n):
            r = form_derivative(a, fm, p, q)
            if r is None:
                continue
            comm = super_commutator(DJ, WeylOp.coord(p, q, a))
            if not comm:
                continue
            s = -1 if (a >= p and (wpar + jpar + 1) & 1) else 1
            for (x2, d2), c2 in compose(comm, XA).terms.items():
                acc(out, (r[1], x2, d2, pm), s * r[0] * c * c2)
    return tuple(out.items())


def homotopy_h(v: VirtualForm) -> VirtualForm:
    """Contracting homotopy for the universal de Rham differential."""
    return _apply(v, _homotopy_h_key)


def eigenvalue_c(fm: tuple, dm: tuple, p: int, q: int) -> int:
    """``p + q + #dtheta + #d_z - #dz - #d_theta`` for a form and derivative monomial."""
    return p + q + sum(fm[p:]) + sum(dm[:p]) - sum(fm[:p]) - sum(dm[p:])


def co_normal_terms(v: VirtualForm) -> dict:
    """Re-express the operator slot in co-normal order: ``{(fm, J, A, pm): coeff}``."""
    out: dict = {}
    p, q = v.p, v.q
    for (fm, xm, dm, pm), c in v.terms.items():
        for (J, A), c2 in co_normal_form(WeylOp._raw(p, q, {(xm, dm): 1})).items():
            acc(out, (fm, J, A, pm), c * c2)
    return out


def from_co_normal_terms(p: int, q: int, terms: dict) -> VirtualForm:
    from .weyl import from_co_normal

    d: dict = {}
    for (fm, J, A, pm), c in terms.items():
        for (xm, dm), c2 in from_co_normal(p, q, {(J, A): 1}).terms.items():
            acc(d, (fm, xm, dm, pm), c * c2)
    return VirtualForm._raw(p, q, d)


def c_projection(v: VirtualForm, value: int = 0) -> VirtualForm:
    """Keep the co-normal components whose de Rham eigenvalue equals ``value``."""
    p, q = v.p, v.q
    kept = {k: c for k, c in co_normal_terms(v).items() if eigenvalue_c(k[0], k[1], p, q) == value}
    return from_co_normal_terms(p, q, kept)


# raw presentations: form (x) operator over the scalars


def raw_d1(e: RawUdR) -> RawUdR:
    out = RawUdR._raw(e.p, e.q, {})
    for w, F in e.pieces():
        out = out + RawUdR.tensor(exterior_d(w), F)
    return out


def raw_d2(e: RawUdR) -> RawUdR:
    p, q = e.p, e.q
    out = RawUdR._raw(p, q, {})
    for w, F in e.pieces():
        wpar = w.parity()
        for a in range(p + q):
            s = -1 if (wpar and a >= p) else 1
            out = out + RawUdR.tensor(form_mul(FormElem.dx(p, q, a), w).scale(s), compose(WeylOp.deriv(p, q, a), F))
    return out


def raw_big_d(e: RawUdR) -> RawUdR:
    return raw_d1(e) + raw_d2(e)


# ---------------------------------------------------------------------------
# Spencer side


@_passive(0)
def _spencer_delta_key(key, p, q):
    fm, xm, dm, pm = key
    n = p + q
    so = shift_mask(p, q)
    s0 = -1 if mono_parity(pm, so) else 1
    F = WeylOp._raw(p, q, {(xm, dm): 1})
    u = unit(n)
    tau = PolyElem._raw(p, q, {(u, pm): 1})
    out: dict = {}
    for a in range(n):
        t = contract_index(a, tau)
        if not t:
            continue
        for (x2, d2), c in compose(F, WeylOp.deriv(p, q, a)).terms.items():
            for (_, pm2), c2 in t.terms.items():
                acc(out, (fm, x2, d2, pm2), s0 * c * c2)
    return tuple(out.items())


def spencer_delta(v: VirtualForm) -> VirtualForm:
    """The universal Spencer differential acting on the operator and polyfield slots."""
    return _apply(v, _spencer_delta_key)


@_passive(0)
def _homotopy_k_key(key, p, q):
    fm, xm, dm, pm = key
    n = p + q
    so = shift_mask(p, q)
    s0 = -1 if mono_parity(pm, so) else 1
    F = WeylOp._raw(p, q, {(xm, dm): 1})
    out: dict = {}
    for a in range(n):
        rp = mono_mul(gen(n, a), pm, so)
        if rp is None:
            continue
        comm = super_commutator(F, WeylOp.coord(p, q, a))
        for (x2, d2), c in comm.terms.items():
            acc(out, (fm, x2, d2, rp[1]), s0 * rp[0] * c)
    return tuple(out.items())


def homotopy_k(v: VirtualForm) -> VirtualForm:
    """Contracting homotopy for the universal Spencer differential."""
    return _apply(v, _homotopy_k_key)


def spencer_eigenvalue(dm: tuple, pm: tuple) -> int:
    """Number of derivatives plus polyfield degree."""
    return sum(dm) + sum(pm)


# raw presentations: operator (x) polyfield over the scalars


def raw_delta1(e: RawSpencer) -> RawSpencer:
    p, q = e.p, e.q
    out = RawSpencer._raw(p, q, {})
    for F, tau in e.pieces():
        s = -1 if tau.parity() else 1
        for a in range(p + q):
            t = contract_index(a, tau)
            if t:
                out = out + RawSpencer.tensor(compose(F, WeylOp.deriv(p, q, a)).scale(s), t)
    return out


def raw_delta2(e: RawSpencer) -> RawSpencer:
    out = RawSpencer._raw(e.p, e.q, {})
    for F, tau in e.pieces():
        s = -1 if tau.parity() else 1
        out = out + RawSpencer.tensor(F.scale(-s), e_x(tau))
    return out


def raw_spencer_delta(e: RawSpencer) -> RawSpencer:
    return raw_delta1(e) + raw_delta2(e)
