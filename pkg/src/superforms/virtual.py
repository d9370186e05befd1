"""The double complex of virtual forms.

``dhat`` is the de Rham differential on the first two slots; ``deltahat`` is
the Spencer differential on the last two, twisted by the parity of the term
so that the two anticommute.  Bidegree of a term is ``(-poly degree, form
degree)``.
"""

from __future__ import annotations

from collections import defaultdict

from . import linalg
from .berezin import IntegralForm
from .forms import FormElem
from .superpoly import acc
from .tensor import VirtualForm
from .universal import (
    big_d,
    co_normal_terms,
    eigenvalue_c,
    from_co_normal_terms,
    homotopy_k,
    spencer_delta,
    spencer_eigenvalue,
)


def dhat(v: VirtualForm) -> VirtualForm:
    return big_d(v)


def _parity_twist(v: VirtualForm, flip: int = 0) -> VirtualForm:
    d = {}
    for k, c in v.terms.items():
        d[k] = -c if (v.term_parity(k) + flip) & 1 else c
    return VirtualForm._raw(v.p, v.q, d)


def deltahat(v: VirtualForm) -> VirtualForm:
    """``(-1)^{|eta|}`` times the Spencer differential on the last two slots."""
    return spencer_delta(_parity_twist(v))


def total_d(v: VirtualForm) -> VirtualForm:
    return dhat(v) + deltahat(v)


def khat(v: VirtualForm) -> VirtualForm:
    """Lift of the Spencer homotopy with ``deltahat khat + khat deltahat = (deg F + deg tau)``."""
    return homotopy_k(_parity_twist(v, 1))


def spencer_weight(key) -> int:
    return spencer_eigenvalue(key[2], key[3])


# ---------------------------------------------------------------------------
# page-one checks


def _blocks(keys, grade):
    out = defaultdict(list)
    for k in keys:
        out[grade(k)].append(k)
    return out


def closed_nonzero_weight_exact(p: int, q: int, keys) -> tuple:
    """Check that deltahat-closed elements of nonzero Spencer weight are exact via ``khat``.

    ``keys`` must span a deltahat-stable window.  Kernels are computed per
    block of (weight, x-degree, bidegree, parity).  Returns ``(checked, failures)``.
    """
    def grade(k):
        fm, xm, dm, pm = k
        return (spencer_weight(k), sum(xm), sum(fm), sum(pm), VirtualForm._raw(p, q, {}).term_parity(k))

    checked = 0
    failures = []
    for (w, *_), ks in sorted(_blocks(keys, grade).items()):
        if w == 0:
            continue
        images = [deltahat(VirtualForm._raw(p, q, {k: 1})) for k in ks]
        rows: dict = {}
        dod: dict = {}
        for j, img in enumerate(images):
            for t, c in img.terms.items():
                i = rows.setdefault(t, len(rows))
                dod.setdefault(i, {})[j] = c
        M = linalg.from_dod(dod, (len(rows), len(ks)))
        N = linalg.kernel(M)
        nd = N.to_dod()
        for col in range(N.shape[1]):
            vec = {ks[i]: linalg.to_fraction(r[col]) for i, r in nd.items() if col in r}
            y = VirtualForm(p, q, vec)
            checked += 1
            if deltahat(khat(y)).scale(linalg.to_fraction(1) / w) != y:
                failures.append(y)
    return checked, failures


def delta_homology_weight_zero(p: int, q: int, keys) -> dict:
    """Dimensions of deltahat-homology per block of weight; only weight zero may survive."""
    def grade(k):
        fm, xm, dm, pm = k
        return (spencer_weight(k), sum(xm), sum(fm))

    par = VirtualForm._raw(p, q, {})
    out = {}
    for g, ks in sorted(_blocks(keys, grade).items()):
        dims = linalg.cohomology_dims(
            ks,
            lambda k: deltahat(VirtualForm._raw(p, q, {k: 1})).terms,
            lambda k: -sum(k[3]),
            par.term_parity,
        )
        out[g] = dims
    return out


def omega_representative(w: FormElem) -> VirtualForm:
    """``dx^I f  ->  dx^I (x) f (x) 1``."""
    return VirtualForm.tensor(w, _unit_op(w.p, w.q), None)


def _unit_op(p, q):
    from .weyl import WeylOp

    return WeylOp.const(p, q)


def induced_on_omega(w: FormElem) -> FormElem:
    """Class of ``dhat`` of an E1 representative, read back as a form."""
    p, q = w.p, w.q
    img = dhat(omega_representative(w))
    d: dict = {}
    for (fm, xm, dm, pm), c in img.terms.items():
        if spencer_eigenvalue(dm, pm) == 0:
            acc(d, (fm, xm), c)
    return FormElem._raw(p, q, d)


def _top(p, q):
    return (1,) * p + (0,) * q, (0,) * p + (1,) * q


def sigma_representative(s: IntegralForm) -> VirtualForm:
    """``phi f (x) pi^I  ->  dz_1..dz_p (x) d_theta^Q f (x) pi^I``."""
    p, q = s.p, s.q
    fm, J = _top(p, q)
    return from_co_normal_terms(p, q, {(fm, J, xm, pm): c for (xm, pm), c in s.terms.items()})


def read_sigma(v: VirtualForm) -> IntegralForm:
    """Inverse of :func:`sigma_representative` on the eigenvalue-zero component."""
    p, q = v.p, v.q
    fm0, J0 = _top(p, q)
    d: dict = {}
    for (fm, J, A, pm), c in co_normal_terms(v).items():
        if eigenvalue_c(fm, J, p, q) != 0:
            continue
        if fm != fm0 or J != J0:
            raise ValueError("eigenvalue-zero component outside the Berezinian locus")
        acc(d, (A, pm), c)
    return IntegralForm._raw(p, q, d)


def induced_on_sigma(s: IntegralForm, twisted: bool = False) -> IntegralForm:
    """Differential induced on E1 representatives of integral forms.

    With ``twisted`` the parity-twisted ``deltahat`` is used; otherwise the
    bare Spencer differential.
    """
    rep = sigma_representative(s)
    img = deltahat(rep) if twisted else spencer_delta(rep)
    return read_sigma(img)
