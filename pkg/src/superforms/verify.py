"""Verification suites driving the identities of every module.

Each suite returns a list of :class:`Check` records.  Exhaustive identities
are aggregated into one record per identity and dimension; when one fails,
the failing element is shrunk by greedy term deletion and reported as text.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import __version__
from . import sampling as smp
from .berezin import IntegralForm, action_lie, ber_lie, ber_right_action, integral_delta, s0
from .coords import compose_maps, random_admissible_map, transport
from .forms import FormElem, basis as form_basis, contract_one, d_function, exterior_d
from .grammar import format_element, format_map
from .poincare import (
    TruncationWindow,
    derham_homotopy,
    poincare_h,
    projection_p0,
    truncated_cohomology,
)
from .polyfields import (
    PolyElem,
    VectorField,
    contract_der,
    contract_index,
    e_x,
    lie_derivative,
    lie_derivative_one_form,
)
from .polyfields import basis as poly_basis
from .superpoly import SuperPoly, fun_mask, mono_parity, monomials, partial, shift_mask, unit
from .tensor import RawSpencer, RawUdR, VirtualForm
from .universal import (
    _big_d_key,
    _spencer_delta_key,
    big_d,
    eigenvalue_c,
    from_co_normal_terms,
    homotopy_h,
    homotopy_k,
    raw_big_d,
    raw_d1,
    raw_d2,
    raw_delta1,
    raw_delta2,
    raw_spencer_delta,
    spencer_delta,
    spencer_eigenvalue,
)
from .virtual import (
    closed_nonzero_weight_exact,
    deltahat,
    delta_homology_weight_zero,
    dhat,
    induced_on_omega,
    induced_on_sigma,
    khat,
    spencer_weight,
    total_d,
)
from .weyl import WeylOp, basis as weyl_basis, super_commutator

SUITES = (
    "nilpotency",
    "leibniz",
    "homotopy-dr",
    "homotopy-spencer",
    "lie",
    "e-x",
    "invariance",
    "ber-action",
    "double-complex",
    "poincare-integral",
)


class InvalidConfig(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "verify"
    p: int = 1
    q: int = 1
    maxdeg: int = 3
    maxz: int = 3
    trials: int = 50
    seed: int = 0
    suite: str = "all"
    exhaustive: bool = False
    maps: int = 20
    output: str | None = None
    side: str = "integral"
    columns: int = 6
    expr: str | None = None

    def validate(self) -> "RunConfig":
        if self.command not in ("verify", "homology", "poincare", "specseq", "eval"):
            raise InvalidConfig(f"unknown command {self.command!r}")
        if self.p < 1 or self.q < 1:
            raise InvalidConfig("p and q must be at least 1")
        if self.maxdeg < 0 or self.maxz < 0:
            raise InvalidConfig("degree caps must be non-negative")
        if self.trials < 0 or self.maps < 0:
            raise InvalidConfig("counts must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must be a 64-bit unsigned integer")
        if self.suite != "all" and self.suite not in SUITES:
            raise InvalidConfig(f"unknown suite {self.suite!r}")
        if self.side not in ("integral", "deRham"):
            raise InvalidConfig("side must be 'integral' or 'deRham'")
        return self

    def params(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "maxdeg": self.maxdeg,
            "maxz": self.maxz,
            "trials": self.trials,
            "exhaustive": self.exhaustive,
            "maps": self.maps,
        }


@dataclass
class Check:
    name: str
    input: str
    expected: str
    actual: str
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "input": self.input, "expected": self.expected, "actual": self.actual, "pass": self.passed}


@dataclass
class Report:
    suite: str
    params: dict
    seed: int
    checks: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self, timings: bool = True) -> dict:
        out = {
            "suite": self.suite,
            "params": self.params,
            "checks": [c.to_json() for c in self.checks],
            "seed": self.seed,
            "version": self.version,
        }
        if timings:
            out["timings"] = self.timings
        return out


# ---------------------------------------------------------------------------
# helpers


def _txt(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, VectorField):
        return format_element(x.to_weyl())
    return format_element(x)


def shrink(elem, fails: Callable) -> object:
    """Greedily delete terms of ``elem`` while ``fails`` stays true."""
    cur = elem
    changed = True
    while changed and len(cur.terms) > 1:
        changed = False
        for k in sorted(cur.terms):
            trial = cur._raw(cur.p, cur.q, {kk: c for kk, c in cur.terms.items() if kk != k})
            if trial.terms and fails(trial):
                cur = trial
                changed = True
                break
    return cur


def _dims(cfg: RunConfig) -> list:
    if cfg.exhaustive:
        return [(a, b) for a in range(1, cfg.p + 1) for b in range(1, cfg.q + 1)]
    return [(cfg.p, cfg.q)]


def _tag(name, p, q) -> str:
    return f"{name} [p={p},q={q}]"


class _Identity:
    """Accumulates one identity over many inputs into a single check."""

    def __init__(self, name: str, p: int, q: int):
        self.name = _tag(name, p, q)
        self.count = 0
        self.failure = None

    def test(self, elem, lhs: Callable, rhs: Callable, show=_txt):
        self.count += 1
        if self.failure is not None:
            return
        a, b = lhs(elem), rhs(elem)
        if a != b:
            def fails(e):
                return lhs(e) != rhs(e)

            small = shrink(elem, fails) if hasattr(elem, "terms") and hasattr(elem, "_raw") else elem
            self.failure = (show(small), _txt(rhs(small)), _txt(lhs(small)))

    def fail_with(self, text: str, expected: str, actual: str):
        self.count += 1
        if self.failure is None:
            self.failure = (text, expected, actual)

    def ok(self):
        self.count += 1

    def check(self, expected="identity holds") -> Check:
        if self.failure is None:
            return Check(self.name, f"{self.count} inputs", expected, expected, self.count > 0)
        return Check(self.name, *self.failure, False)


def _single(name, inp, expected, actual) -> Check:
    return Check(name, inp, str(expected), str(actual), str(expected) == str(actual))


def _key_elements(p, q, keys):
    return (VirtualForm._raw(p, q, {k: 1}) for k in keys)


def _udr_keys(p, q, maxdeg):
    n = p + q
    so, fo = shift_mask(p, q), fun_mask(p, q)
    u = unit(n)
    return [(fm, xm, dm, u) for fm in monomials(n, so, maxdeg) for xm in monomials(n, fo, maxdeg) for dm in monomials(n, fo, maxdeg)]


def _spencer_keys(p, q, maxdeg):
    n = p + q
    so, fo = shift_mask(p, q), fun_mask(p, q)
    u = unit(n)
    return [(u, xm, dm, pm) for xm in monomials(n, fo, maxdeg) for dm in monomials(n, fo, maxdeg) for pm in monomials(n, so, maxdeg)]


def _virtual_keys(p, q, maxdeg):
    n = p + q
    so, fo = shift_mask(p, q), fun_mask(p, q)
    F = list(monomials(n, so, maxdeg))
    X = list(monomials(n, fo, maxdeg))
    return [(f, x, d, t) for f in F for x in X for d in X for t in F]


def _key_parity(p, q):
    so, fo = shift_mask(p, q), fun_mask(p, q)
    cache: dict = {}

    def par(k):
        r = cache.get(k)
        if r is None:
            r = (mono_parity(k[0], so) + mono_parity(k[1], fo) + mono_parity(k[2], fo) + mono_parity(k[3], so)) & 1
            cache[k] = r
        return r

    return par


def _triple_exhaustive(p, q, maxdeg) -> list:
    """Double-complex identities on every basis key of the triple tensor.

    Works on plain dictionaries with per-key image caches: the window at
    ``p = q = 2`` has several hundred thousand keys.
    """
    par = _key_parity(p, q)
    dcache: dict = {}
    scache: dict = {}

    def d_img(k):
        r = dcache.get(k)
        if r is None:
            r = dcache[k] = _big_d_key(k, p, q)
        return r

    def s_img(k):
        r = scache.get(k)
        if r is None:
            r = scache[k] = _spencer_delta_key(k, p, q)
        return r

    def apply(img, terms, twist=False):
        out: dict = {}
        for k, c in terms:
            if twist and par(k):
                c = -c
            for k2, c2 in img(k):
                v = out.get(k2, 0) + c * c2
                if v:
                    out[k2] = v
                else:
                    del out[k2]
        return out

    def apply_both(img, terms):
        """Twisted and untwisted images in one pass over ``terms``."""
        tw: dict = {}
        un: dict = {}
        for k, c in terms:
            ct = -c if par(k) else c
            for k2, c2 in img(k):
                v = un.get(k2, 0) + c * c2
                if v:
                    un[k2] = v
                else:
                    del un[k2]
                v = tw.get(k2, 0) + ct * c2
                if v:
                    tw[k2] = v
                else:
                    del tw[k2]
        return tw, un

    def add(a, b, sign=1):
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, 0) + sign * c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    names = ["dhat^2", "deltahat^2", "dhat deltahat + deltahat dhat", "(dhat+deltahat)^2", "[1(x)delta, D(x)1]"]
    ids = [_Identity(nm, p, q) for nm in names]
    for k in _virtual_keys(p, q, maxdeg):
        sk = -1 if par(k) else 1
        # per-key images have distinct keys and nonzero coefficients
        a = dict(d_img(k))
        su = dict(s_img(k))
        b = {kk: sk * c for kk, c in su.items()}
        dd = apply(d_img, a.items())
        ss = apply(s_img, b.items(), twist=True)
        d_su = apply(d_img, su.items())
        ds = {kk: sk * c for kk, c in d_su.items()}
        sd, s_a = apply_both(s_img, a.items())
        # the total differential is linear, so its square needs no further images
        tt = add(add(dd, ss), add(ds, sd))
        # untwisted Spencer differential commutes with D
        comm = add(d_su, s_a, -1)
        for ident, res in zip(ids, (dd, ss, add(ds, sd), tt, comm)):
            if res:
                text = format_element(VirtualForm._raw(p, q, {k: 1}), "virtual")
                ident.fail_with(text, "0", format_element(VirtualForm._raw(p, q, res), "virtual"))
            else:
                ident.ok()
    return [i.check("0") for i in ids]


def _raw_udr_basis(p, q, maxdeg):
    n = p + q
    so, fo = shift_mask(p, q), fun_mask(p, q)
    forms = [FormElem._raw(p, q, {(fm, xm): 1}) for fm in monomials(n, so, maxdeg) for xm in monomials(n, fo, 1)]
    ops = [WeylOp._raw(p, q, {(xm, dm): 1}) for xm in monomials(n, fo, maxdeg - 1) for dm in monomials(n, fo, maxdeg - 1)]
    return [RawUdR.tensor(w, F) for w in forms for F in ops]


def _raw_spencer_basis(p, q, maxdeg):
    n = p + q
    so, fo = shift_mask(p, q), fun_mask(p, q)
    ops = [WeylOp._raw(p, q, {(xm, dm): 1}) for xm in monomials(n, fo, maxdeg - 1) for dm in monomials(n, fo, maxdeg - 1)]
    polys = [PolyElem._raw(p, q, {(xm, pm): 1}) for pm in monomials(n, so, maxdeg) for xm in monomials(n, fo, 1)]
    return [RawSpencer.tensor(F, t) for F in ops for t in polys]


# ---------------------------------------------------------------------------
# suites


def suite_nilpotency(cfg: RunConfig) -> list:
    checks = []
    for p, q in _dims(cfg):
        D2 = _Identity("D^2", p, q)
        S2 = _Identity("delta^2", p, q)
        D12 = _Identity("[D1,D2] and D1^2, D2^2", p, q)
        S12 = _Identity("[delta1,delta2] and delta1^2, delta2^2", p, q)
        RD = _Identity("raw D normalizes to D", p, q)
        RS = _Identity("raw delta normalizes to delta", p, q)

        def raw_d_zero(e):
            return raw_d1(raw_d2(e)) + raw_d2(raw_d1(e)) + raw_d1(raw_d1(e)) + raw_d2(raw_d2(e))

        def raw_s_zero(e):
            return raw_delta1(raw_delta2(e)) + raw_delta2(raw_delta1(e)) + raw_delta1(raw_delta1(e)) + raw_delta2(raw_delta2(e))

        zero = lambda e: e.zero()  # noqa: E731
        if cfg.exhaustive:
            for v in _key_elements(p, q, _udr_keys(p, q, cfg.maxdeg)):
                D2.test(v, lambda e: big_d(big_d(e)), zero)
            for v in _key_elements(p, q, _spencer_keys(p, q, cfg.maxdeg)):
                S2.test(v, lambda e: spencer_delta(spencer_delta(e)), zero)
            rawdeg = min(cfg.maxdeg, 2)
            for e in _raw_udr_basis(p, q, rawdeg):
                D12.test(e, raw_d_zero, zero)
                RD.test(e, lambda x: raw_big_d(x).normalize(), lambda x: big_d(x.normalize()))
            for e in _raw_spencer_basis(p, q, rawdeg):
                S12.test(e, raw_s_zero, zero)
                RS.test(e, lambda x: raw_spencer_delta(x).normalize(), lambda x: spencer_delta(x.normalize()))
            checks += [c.check("0") for c in (D2, S2, D12, S12)] + [RD.check(), RS.check()]
            checks += _triple_exhaustive(p, q, cfg.maxdeg)
        else:
            rng = smp.stream(cfg.seed, "nilpotency", p, q)
            T = [_Identity(nm, p, q) for nm in ("dhat^2", "deltahat^2", "dhat deltahat + deltahat dhat", "(dhat+deltahat)^2", "[1(x)delta, D(x)1]")]
            deg = min(cfg.maxdeg, 2)
            for _ in range(cfg.trials):
                u = smp.virtual(rng, p, q, deg, form_slot=True, poly_slot=False)
                D2.test(u, lambda e: big_d(big_d(e)), zero)
                s = smp.virtual(rng, p, q, deg, form_slot=False, poly_slot=True)
                S2.test(s, lambda e: spencer_delta(spencer_delta(e)), zero)
                w = smp.form(rng, p, q, deg)
                F = smp.weyl(rng, p, q, deg)
                tau = smp.polyfield(rng, p, q, deg)
                D12.test(RawUdR.tensor(w, F), raw_d_zero, zero)
                S12.test(RawSpencer.tensor(F, tau), raw_s_zero, zero)
                v = smp.virtual(rng, p, q, deg)
                T[0].test(v, lambda e: dhat(dhat(e)), zero)
                T[1].test(v, lambda e: deltahat(deltahat(e)), zero)
                T[2].test(v, lambda e: dhat(deltahat(e)) + deltahat(dhat(e)), zero)
                T[3].test(v, lambda e: total_d(total_d(e)), zero)
                T[4].test(v, lambda e: big_d(spencer_delta(e)) - spencer_delta(big_d(e)), zero)
            checks += [c.check("0") for c in (D2, S2, D12, S12, *T)]
    return checks


def _leibniz_checks(rng, p, q, trials, deg) -> list:
    dL = _Identity("d(w e) = dw e + (-1)^|w| w de", p, q)
    pL = _Identity("d_a(f g) super Leibniz", p, q)
    lL = _Identity("Lie derivative super Leibniz", p, q)
    cL = _Identity("contraction super Leibniz", p, q)
    for _ in range(trials):
        wp = int(rng.integers(0, 2))
        w = _homog_form(rng, p, q, deg, wp)
        e = smp.form(rng, p, q, deg)
        dL.test(
            (w, e),
            lambda t: exterior_d(t[0] * t[1]),
            lambda t: exterior_d(t[0]) * t[1] + (t[0] * exterior_d(t[1])).scale(-1 if t[0].parity() else 1),
            show=lambda t: f"({_txt(t[0])}) , ({_txt(t[1])})",
        )
        fp = int(rng.integers(0, 2))
        f = smp.function(rng, p, q, deg, fp)
        g = smp.function(rng, p, q, deg)
        a = int(rng.integers(0, p + q))
        sgn = -1 if (fp and a >= p) else 1
        if f:
            pL.test(
                (f, g),
                lambda t: partial(a, t[0] * t[1]),
                lambda t: partial(a, t[0]) * t[1] + (t[0] * partial(a, t[1])).scale(sgn),
                show=lambda t: f"a={a}: ({_txt(t[0])}) , ({_txt(t[1])})",
            )
        xp = int(rng.integers(0, 2))
        X = smp.vector_field(rng, p, q, xp, deg)
        t1 = smp.homogeneous_polyfield(rng, p, q, deg)
        t2 = smp.homogeneous_polyfield(rng, p, q, deg)
        lL.test(
            (t1, t2),
            lambda t: lie_derivative(X, t[0] * t[1]),
            lambda t: lie_derivative(X, t[0]) * t[1] + (t[0] * lie_derivative(X, t[1])).scale(-1 if xp and t[0].parity() else 1),
            show=lambda t: f"X={_txt(X)}: ({_txt(t[0])}) , ({_txt(t[1])})",
        )
        cpar = 0 if a >= p else 1  # parity of the contraction by dx_a
        cL.test(
            (t1, t2),
            lambda t: contract_index(a, t[0] * t[1]),
            lambda t: contract_index(a, t[0]) * t[1] + (t[0] * contract_index(a, t[1])).scale(-1 if cpar and t[0].parity() else 1),
            show=lambda t: f"a={a}: ({_txt(t[0])}) , ({_txt(t[1])})",
        )
    return [c.check() for c in (dL, pL, lL, cL)]


def _homog_form(rng, p, q, deg, parity):
    for _ in range(20):
        w = smp.form(rng, p, q, deg)
        parts = {}
        for k, c in w.terms.items():
            if w.term_parity(k) == parity:
                parts[k] = c
        if parts:
            return FormElem._raw(p, q, parts)
    return FormElem.dx(p, q, 0) if parity else FormElem.const(p, q)


def suite_leibniz(cfg: RunConfig) -> list:
    out = []
    for p, q in _dims(cfg):
        out += _leibniz_checks(smp.stream(cfg.seed, "leibniz", p, q), p, q, cfg.trials, min(cfg.maxdeg, 2))
    return out


def _empirical_eigen(v: VirtualForm, r: VirtualForm):
    """The scalar ``c`` with ``r == c v`` or ``None``."""
    if not r:
        return 0
    k, c0 = next(iter(v.terms.items()))
    lam = Fraction(r.terms.get(k, 0)) / c0
    return lam if r == v.scale(lam) else None


def suite_homotopy_dr(cfg: RunConfig) -> list:
    checks = []
    for p, q in _dims(cfg):
        eig = _Identity("(HD+DH)(m) = c(m) m on co-normal monomials", p, q)
        locus_ok = True
        locus_bad = None
        n = p + q
        so, fo = shift_mask(p, q), fun_mask(p, q)
        u = unit(n)
        if cfg.exhaustive:
            keys = [(fm, J, A, u) for fm in monomials(n, so, cfg.maxdeg) for J in monomials(n, fo, cfg.maxdeg) for A in monomials(n, fo, cfg.maxdeg)]
        else:
            rng = smp.stream(cfg.seed, "homotopy-dr", p, q)
            keys = [
                (smp.monomial(rng, n, so, cfg.maxdeg), smp.monomial(rng, n, fo, cfg.maxdeg), smp.monomial(rng, n, fo, cfg.maxdeg), u)
                for _ in range(cfg.trials)
            ]
        zero_locus = set()
        for key in keys:
            fm, J, A, _ = key
            m = from_co_normal_terms(p, q, {key: 1})
            r = homotopy_h(big_d(m)) + big_d(homotopy_h(m))
            lam = _empirical_eigen(m, r)
            c = eigenvalue_c(fm, J, p, q)
            if lam is None or lam != c:
                eig.fail_with(format_element(m, "udr"), f"{c} * m", format_element(r, "udr"))
            else:
                eig.ok()
            if lam == 0:
                zero_locus.add(key)
            predicted = not any(fm[p:]) and not any(J[:p]) and sum(fm[:p]) == p and sum(J[p:]) == q
            if predicted != (lam == 0) and locus_ok:
                locus_ok = False
                locus_bad = format_element(m, "udr")
        checks.append(eig.check())
        checks.append(
            Check(
                _tag("c = 0 locus: no dtheta, no d_z, all dz, all d_theta", p, q),
                locus_bad or f"{len(keys)} monomials, {len(zero_locus)} with c = 0",
                "locus matches",
                "locus matches" if locus_ok else "mismatch",
                locus_ok,
            )
        )
        # classical scaling homotopy on forms
        sc = _Identity("dk + kd = id - eval0 on forms", p, q)
        for w in form_basis(p, q, cfg.maxdeg, cfg.maxdeg) if cfg.exhaustive else [smp.form(rng, p, q, cfg.maxdeg) for _ in range(cfg.trials)]:
            sc.test(w, lambda e: exterior_d(derham_homotopy(e)) + derham_homotopy(exterior_d(e)), lambda e: e - _eval0(e))
        checks.append(sc.check())
    return checks


def _eval0(w: FormElem) -> FormElem:
    u = unit(w.p + w.q)
    return FormElem._raw(w.p, w.q, {k: c for k, c in w.terms.items() if k == (u, u)})


def suite_homotopy_spencer(cfg: RunConfig) -> list:
    checks = []
    for p, q in _dims(cfg):
        eig = _Identity("(K delta + delta K)(m) = (deg F + deg tau) m", p, q)
        kern_ok = True
        kern_bad = None
        if cfg.exhaustive:
            keys = _spencer_keys(p, q, cfg.maxdeg)
        else:
            rng = smp.stream(cfg.seed, "homotopy-spencer", p, q)
            keys = [next(iter(smp.virtual(rng, p, q, cfg.maxdeg, 1, form_slot=False).terms)) for _ in range(cfg.trials)]
        for key in keys:
            m = VirtualForm._raw(p, q, {key: 1})
            r = homotopy_k(spencer_delta(m)) + spencer_delta(homotopy_k(m))
            lam = _empirical_eigen(m, r)
            w = spencer_eigenvalue(key[2], key[3])
            if lam is None or lam != w:
                eig.fail_with(format_element(m, "spencer"), f"{w} * m", format_element(r, "spencer"))
            else:
                eig.ok()
            slice_member = not any(key[2]) and not any(key[3])
            if slice_member != (lam == 0) and kern_ok:
                kern_ok = False
                kern_bad = format_element(m, "spencer")
        checks.append(eig.check())
        checks.append(
            Check(_tag("kernel of the Laplacian is the function (x) function slice", p, q),
                  kern_bad or f"{len(keys)} monomials", "slice", "slice" if kern_ok else "mismatch", kern_ok)
        )
        # lifted homotopy on the triple tensor
        kh = _Identity("deltahat Khat + Khat deltahat = weight", p, q)
        deg = min(cfg.maxdeg, 2)
        if cfg.exhaustive:
            elems = list(_key_elements(p, q, _virtual_keys(p, q, deg)))
        else:
            elems = [smp.virtual(rng, p, q, deg, 1) for _ in range(cfg.trials)]
        for v in elems:
            key = next(iter(v.terms))
            kh.test(v, lambda e: deltahat(khat(e)) + khat(deltahat(e)), lambda e: e.scale(spencer_weight(key)))
        checks.append(kh.check())
    return checks


def _lie_checks(rng, p, q, trials, deg) -> list:
    c1 = _Identity("L_X(tau) = pi [X, pi tau] on degree one", p, q)
    c2 = _Identity("L_X super Leibniz", p, q)
    c3 = _Identity("L_{fX} tau = f L_X tau + (-1)^{|X||f|} pi X <df, tau>", p, q)
    c4 = _Identity("L_X <w, tau> recursion with the one-form Lie derivative", p, q)
    c5 = _Identity("L_X(f) = X(f)", p, q)
    for _ in range(trials):
        xp = int(rng.integers(0, 2))
        X = smp.vector_field(rng, p, q, xp, deg)
        tp = int(rng.integers(0, 2))

        def degree_one():
            t = PolyElem.const(p, q, 0)
            for a in range(p + q):
                t = t + smp.function(rng, p, q, deg, (tp + 1 + (a >= p)) & 1, 2) * PolyElem.pd(p, q, a)
            return t

        tau1 = smp.nonzero(degree_one)

        def bracket(t):
            Y = VectorField(p, q, {
                a: SuperPoly._raw(p, q, {xm: c for (xm, pm), c in t.terms.items() if sum(pm) == 1 and pm[a] == 1})
                for a in range(p + q)
            })
            br = super_commutator(X.to_weyl(), Y.to_weyl())
            return PolyElem._raw(p, q, dict(br.terms))

        c1.test(tau1, lambda t: lie_derivative(X, t), bracket)
        t1 = smp.homogeneous_polyfield(rng, p, q, deg)
        t2 = smp.homogeneous_polyfield(rng, p, q, deg)
        c2.test(
            (t1, t2),
            lambda t: lie_derivative(X, t[0] * t[1]),
            lambda t: lie_derivative(X, t[0]) * t[1] + (t[0] * lie_derivative(X, t[1])).scale(-1 if xp and t[0].parity() else 1),
            show=lambda t: f"X={_txt(X)}: ({_txt(t[0])}) , ({_txt(t[1])})",
        )
        fp = int(rng.integers(0, 2))
        f = smp.nonzero(lambda: smp.function(rng, p, q, deg, fp))
        c3.test(
            t1,
            lambda t: lie_derivative(X.times(f), t),
            lambda t: f * lie_derivative(X, t) + (X.to_poly() * contract_one(d_function(f), t)).scale(-1 if xp and fp else 1),
            show=lambda t: f"X={_txt(X)}, f={_txt(f)}: {_txt(t)}",
        )
        c5.test(f, lambda g: lie_derivative(X, PolyElem.from_poly(g)), lambda g: PolyElem.from_poly(X(g)))
        wp = int(rng.integers(0, 2))

        def one_form():
            w = FormElem.const(p, q, 0)
            for a in range(p + q):
                w = w + FormElem.dx(p, q, a) * FormElem.from_poly(smp.function(rng, p, q, 1, (wp + (a < p)) & 1, 2))
            return w

        w = smp.nonzero(one_form)
        tau = smp.polyfield(rng, p, q, min(deg + 1, 3))
        c4.test(
            tau,
            lambda t: lie_derivative(X, contract_one(w, t)),
            lambda t: contract_one(lie_derivative_one_form(X, w), t) + contract_one(w, lie_derivative(X, t)).scale(-1 if wp and xp else 1),
            show=lambda t: f"X={_txt(X)}, w={_txt(w)}: {_txt(t)}",
        )
    return [c.check() for c in (c1, c2, c3, c5, c4)]


def _lie_examples(p, q) -> list:
    out = []
    if p < 1 or q < 1:
        return out
    Dz = VectorField.coordinate(p, q, 0)
    zDz = VectorField(p, q, {0: SuperPoly.z(p, q, 1)})
    thDz = VectorField(p, q, {0: SuperPoly.theta(p, q, 1)})
    pz, pth = PolyElem.pd(p, q, 0), PolyElem.pd(p, q, p)
    for X, t, want in ((Dz, pth, "0"), (zDz, pz, "- Pz1"), (thDz, pth, "Pz1")):
        out.append(_single(_tag("L_X example", p, q), f"X={_txt(X)}, tau={_txt(t)}", want, _txt(lie_derivative(X, t))))
    return out


def suite_lie(cfg: RunConfig) -> list:
    out = []
    for p, q in _dims(cfg):
        out += _lie_examples(p, q)
        out += _lie_checks(smp.stream(cfg.seed, "lie", p, q), p, q, cfg.trials, min(cfg.maxdeg, 2))
    return out


def suite_e_x(cfg: RunConfig) -> list:
    out = []
    for p, q in _dims(cfg):
        z, th = SuperPoly.z(p, q, 1), SuperPoly.theta(p, q, 1)
        pz, pth = PolyElem.pd(p, q, 0), PolyElem.pd(p, q, p)
        for t, want in ((pz, "0"), (z * pz, "- 1"), (th * pth, "1")):
            out.append(_single(_tag("e_x example", p, q), _txt(t), want, _txt(e_x(t))))
        for a, t, want in ((0, pz, "- 1"), (p, pth * pth, "2*Pth1"), (p, pz, "0")):
            out.append(_single(_tag("contraction example", p, q), f"a={a}: {_txt(t)}", want, _txt(contract_der(a, t))))
        rng = smp.stream(cfg.seed, "e-x", p, q)
        ide = _Identity("e_x(f tau) = (-1)^|f| f e_x(tau) + sum_a (-1)^{|f|(|x_a|+1)} (d_a f) <dx_a, tau>", p, q)
        for _ in range(cfg.trials):
            fp = int(rng.integers(0, 2))
            f = smp.nonzero(lambda: smp.function(rng, p, q, min(cfg.maxdeg, 2), fp))
            tau = smp.polyfield(rng, p, q, min(cfg.maxdeg, 2))

            def rhs(t, f=f, fp=fp):
                s = (f * e_x(t)).scale(-1 if fp else 1)
                for a in range(p + q):
                    s = s + (partial(a, f) * contract_index(a, t)).scale(-1 if fp and a < p else 1)
                return s

            ide.test(tau, lambda t, f=f: e_x(f * t), rhs, show=lambda t, f=f: f"f={_txt(f)}: {_txt(t)}")
        out.append(ide.check())
    return out


def suite_invariance(cfg: RunConfig) -> list:
    p, q = cfg.p, cfg.q
    rng = smp.stream(cfg.seed, "invariance", p, q)
    prng = smp.python_rng(rng)
    names = [
        "pairing <dx_a, pi d_b> transported",
        "d commutes with transport",
        "D commutes with transport",
        "delta commutes with transport",
        "raw delta1 + delta2 commutes with transport",
        "transport of a composite map",
    ]
    ids = [_Identity(nm, p, q) for nm in names]
    deg = min(cfg.maxdeg, 1)
    for i in range(cfg.maps):
        g = random_admissible_map(p, q, prng)
        T = lambda x, g=g: transport(g, x)  # noqa: E731
        mtxt = format_map(g).replace("\n", "; ")
        for a in range(p + q):
            for b in range(p + q):
                w, t = FormElem.dx(p, q, a), PolyElem.pd(p, q, b)
                ids[0].test((w, t), lambda x: contract_one(T(x[0]), T(x[1])), lambda x: T(contract_one(x[0], x[1])),
                            show=lambda x: f"map {mtxt}: a={a}, b={b}")
        f = smp.function(rng, p, q, 2)
        ids[1].test(f, lambda x: T(d_function(x)), lambda x: d_function(T(x)), show=lambda x: f"map {mtxt}: {_txt(x)}")
        u = smp.virtual(rng, p, q, deg, 2, form_slot=True, poly_slot=False)
        ids[2].test(u, lambda x: big_d(T(x)), lambda x: T(big_d(x)), show=lambda x: f"map {mtxt}: {format_element(x, 'udr')}")
        s = smp.virtual(rng, p, q, deg, 2, form_slot=False, poly_slot=True)
        ids[3].test(s, lambda x: spencer_delta(T(x)), lambda x: T(spencer_delta(x)), show=lambda x: f"map {mtxt}: {format_element(x, 'spencer')}")
        F = smp.weyl(rng, p, q, 1, 2)
        tau = smp.polyfield(rng, p, q, 1, None, 2)
        raw = RawSpencer.tensor(F, tau)
        ids[4].test(raw, lambda x: raw_spencer_delta(T(x)).normalize(), lambda x: T(spencer_delta(x.normalize())),
                    show=lambda x: f"map {mtxt}: {_txt(x)}")
        h = random_admissible_map(p, q, prng)
        G = smp.weyl(rng, p, q, 1, 2)
        ids[5].test(G, lambda x: transport(compose_maps(h, g), x), lambda x: transport(h, transport(g, x)),
                    show=lambda x: f"maps {mtxt} then {format_map(h)}: {_txt(x)}")
    out = [c.check() for c in ids]
    out.append(_delta1_witness(cfg.seed, p, q, max(cfg.maps, 1)))
    return out


def _delta1_witness(seed, p, q, budget, limit=200) -> Check:
    """Find a map and an element where delta1 alone is not invariant but delta1 + delta2 is.

    Searches the suite's maps first, then keeps drawing up to ``limit`` maps.
    """
    name = _tag("witness: delta1 alone breaks invariance, delta1 + delta2 restores it", p, q)
    prng = smp.python_rng(smp.stream(seed, "invariance-witness", p, q))
    # simplest candidates first: 1 (x) pi d_a, then small operators and polyfields
    cands = [RawSpencer.tensor(WeylOp.const(p, q), PolyElem.pd(p, q, a)) for a in range(p + q)]
    cands += [RawSpencer.tensor(F, t) for F in weyl_basis(p, q, 1, 1) for t in poly_basis(p, q, 2, 1)]
    for i in range(max(budget, limit)):
        g = random_admissible_map(p, q, prng)
        for e in cands:
            want = transport(g, spencer_delta(e.normalize()))
            alone = raw_delta1(transport(g, e)).normalize()
            both = raw_spencer_delta(transport(g, e)).normalize()
            if alone != want and both == want:
                mtxt = format_map(g).replace("\n", "; ")
                return Check(
                    name,
                    f"map #{i} {mtxt}: {_txt(e)}",
                    "delta1 alone differs; delta1 + delta2 matches",
                    f"transported delta = {format_element(want, 'spencer')}; delta1 alone = {format_element(alone, 'spencer')}",
                    True,
                )
    return Check(name, f"{max(budget, limit)} maps", "a witness", "none found", False)


def suite_ber_action(cfg: RunConfig) -> list:
    out = []
    for p, q in _dims(cfg):
        phi = IntegralForm.const(p, q)
        kill = _Identity("Ber . d_a = 0", p, q)
        for a in range(p + q):
            kill.test(WeylOp.deriv(p, q, a), lambda A: ber_right_action(phi, A), lambda A: phi.zero())
        out.append(kill.check("0"))
        rng = smp.stream(cfg.seed, "ber-action", p, q)
        act = _Identity("Ber f . X equals the closed form", p, q)
        lie = _Identity("Ber f . X = -(-1)^{|Ber f||X|} L_X(Ber f)", p, q)
        for _ in range(cfg.trials):
            xp = int(rng.integers(0, 2))
            X = smp.vector_field(rng, p, q, xp, min(cfg.maxdeg, 2))
            fp = int(rng.integers(0, 2))
            f = smp.function(rng, p, q, min(cfg.maxdeg, 2), fp) or SuperPoly.const(p, q)
            fp = f.parity()
            act.test(f, lambda g: ber_right_action(IntegralForm.ber(g), X.to_weyl()), lambda g: action_lie(g, X),
                     show=lambda g: f"Ber*{_txt(g)} . ({_txt(X)})")
            sg = -1 if ((p + q + fp) * xp) & 1 else 1
            lie.test(f, lambda g: ber_right_action(IntegralForm.ber(g), X.to_weyl()), lambda g: ber_lie(X, g).scale(-sg),
                     show=lambda g: f"Ber*{_txt(g)} . ({_txt(X)})")
        out += [act.check(), lie.check()]
    return out


def window_keys(p, q, maxdeg):
    n = p + q
    so, fo = shift_mask(p, q), fun_mask(p, q)
    return [
        (fm, xm, dm, pm)
        for fm in monomials(n, so, maxdeg)
        for pm in monomials(n, so, maxdeg)
        for xm in monomials(n, fo, maxdeg)
        for dm in monomials(n, fo, maxdeg)
        if sum(fm) + sum(xm) + sum(dm) + sum(pm) <= maxdeg + 1
    ]


def suite_double_complex(cfg: RunConfig) -> list:
    out = []
    for p, q in _dims(cfg):
        deg = min(cfg.maxdeg, 2)
        keys = window_keys(p, q, deg)
        closed = closed_window(p, q, keys)
        checked, failures = closed_nonzero_weight_exact(p, q, closed)
        out.append(Check(
            _tag("deltahat-closed with nonzero weight is exact via Khat", p, q),
            f"{checked} closed elements" if not failures else format_element(failures[0], "virtual"),
            "exact", "exact" if not failures else "not exact", not failures and checked > 0,
        ))
        hom = delta_homology_weight_zero(p, q, closed)
        bad = [g for g, dims in hom.items() if g[0] != 0 and any(e or o for e, o in dims.values())]
        out.append(Check(_tag("deltahat-homology only at weight zero", p, q), f"{len(hom)} blocks", "[]", str(bad), not bad))
        om = _Identity("induced differential on forms = d", p, q)
        for w in form_basis(p, q, deg + 1, deg + 1):
            om.test(w, induced_on_omega, exterior_d)
        out.append(om.check())
        sg = _Identity("induced differential on integral forms = integral delta", p, q)
        sgt = _Identity("twisted induced differential = (-1)^|s| integral delta", p, q)
        n = p + q
        for pm in monomials(n, shift_mask(p, q), deg + 1):
            for xm in monomials(n, fun_mask(p, q), deg + 1):
                s = IntegralForm._raw(p, q, {(xm, pm): 1})
                sg.test(s, induced_on_sigma, integral_delta)
                sign = -1 if s.term_parity((xm, pm)) else 1
                sgt.test(s, lambda e: induced_on_sigma(e, twisted=True), lambda e, sign=sign: integral_delta(e).scale(sign))
        out += [sg.check(), sgt.check()]
    return out


def closed_window(p, q, keys):
    """Close a key set under deltahat and Khat images (both preserve the weight blocks)."""
    seen = set(keys)
    todo = list(keys)
    while todo:
        k = todo.pop()
        v = VirtualForm._raw(p, q, {k: 1})
        for img in (deltahat(v), khat(v)):
            for k2 in img.terms:
                if k2 not in seen:
                    seen.add(k2)
                    todo.append(k2)
    return sorted(seen)


def suite_poincare_integral(cfg: RunConfig) -> list:
    out = []
    for p, q in _dims(cfg):
        hom = _Identity("delta h + h delta = id - P0", p, q)
        n = p + q
        so, fo = shift_mask(p, q), fun_mask(p, q)
        if cfg.exhaustive:
            elems = [
                IntegralForm._raw(p, q, {(xm, pm): 1})
                for pm in monomials(n, so, cfg.maxz)
                for xm in monomials(n, fo, cfg.maxz + q)
                if sum(xm[:p]) <= cfg.maxz
            ]
        else:
            rng = smp.stream(cfg.seed, "poincare-integral", p, q)
            elems = []
            for _ in range(cfg.trials):
                pm = smp.monomial(rng, n, so, cfg.maxz)
                f = smp.function(rng, p, q, cfg.maxz)
                elems.append(IntegralForm.ber(f, PolyElem._raw(p, q, {(unit(n), pm): 1})))
        for s in elems:
            hom.test(s, lambda e: integral_delta(poincare_h(e)) + poincare_h(integral_delta(e)), lambda e: e - projection_p0(e))
        out.append(hom.check())
        gen0 = s0(p, q)
        out.append(_single(_tag("delta(s0) = 0", p, q), format_element(gen0), "0", format_element(integral_delta(gen0))))
        win = TruncationWindow(p, q, cfg.maxz)
        for side in ("integral", "deRham"):
            table = truncated_cohomology(win, side)
            want = {d: (0, 0) for d in table}
            want[0] = _s0_parity_pair(p, q) if side == "integral" else (1, 0)
            out.append(_single(_tag(f"truncated cohomology ({side})", p, q), f"window maxz={cfg.maxz}",
                               _fmt_table(want), _fmt_table(table)))
    return out


def _s0_parity_pair(p, q):
    gen0 = s0(p, q)
    k = next(iter(gen0.terms))
    return (0, 1) if gen0.term_parity(k) else (1, 0)


def _fmt_table(t: dict) -> str:
    return ", ".join(f"H{d}={e}|{o}" for d, (e, o) in sorted(t.items()))


_RUNNERS = {
    "nilpotency": suite_nilpotency,
    "leibniz": suite_leibniz,
    "homotopy-dr": suite_homotopy_dr,
    "homotopy-spencer": suite_homotopy_spencer,
    "lie": suite_lie,
    "e-x": suite_e_x,
    "invariance": suite_invariance,
    "ber-action": suite_ber_action,
    "double-complex": suite_double_complex,
    "poincare-integral": suite_poincare_integral,
}


def run_verify(cfg: RunConfig) -> Report:
    """Run one suite (or all) and collect a report; failures are entries, not exceptions."""
    cfg.validate()
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    rep = Report(cfg.suite, cfg.params(), cfg.seed)
    for nm in names:
        t0 = time.perf_counter()
        checks = _RUNNERS[nm](cfg)
        if cfg.suite == "all":
            for c in checks:
                c.name = f"{nm}: {c.name}"
        rep.checks += checks
        rep.timings[nm] = round(time.perf_counter() - t0, 3)
    return rep
