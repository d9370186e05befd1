"""Homotopy operators for the Poincare lemmas and truncated cohomology.

The integral-form homotopy rescales the coefficient by ``t``, integrates
against ``t^Q`` and multiplies by ``x_b (x) pi_d_b``.  The exponent ``Q``
depends on the theta degree of the coefficient and the polyfield monomial,
so every term is treated separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .berezin import IntegralForm, integral_delta, s0
from .forms import FormElem, exterior_d
from .linalg import cohomology_dims
from .superpoly import (
    SuperPoly,
    acc,
    fun_mask,
    gen,
    mono_lderiv,
    mono_mul,
    mono_parity,
    monomials,
    scaling_integral,
    shift_mask,
)


def q_exponent(f: SuperPoly, pm: tuple) -> int:
    """Integration exponent for a theta-homogeneous coefficient and polyfield monomial."""
    p, q = f.p, f.q
    tdegs = {sum(m[p:]) for m in f.terms}
    if len(tdegs) > 1:
        raise ValueError("coefficient is not homogeneous in theta")
    td = tdegs.pop() if tdegs else 0
    return p + q + sum(pm[p:]) - sum(pm[:p]) - 2 * td - 1


def failure_index(p: int, q: int, xm: tuple, pm: tuple) -> int:
    return p + q + sum(pm[p:]) - sum(pm[:p]) - sum(xm[p:])


def projection_p0(s: IntegralForm) -> IntegralForm:
    """Component along the generator ``s0``."""
    key = next(iter(s0(s.p, s.q).terms))
    c = s.terms.get(key, 0)
    return IntegralForm._raw(s.p, s.q, {key: c} if c else {})


def poincare_h(s: IntegralForm) -> IntegralForm:
    """Homotopy with ``delta h + h delta = id - P0`` on integral forms."""
    p, q = s.p, s.q
    n = p + q
    fo, so = fun_mask(p, q), shift_mask(p, q)
    key0 = next(iter(s0(p, q).terms))
    d: dict = {}
    for (xm, pm), c in s.terms.items():
        if (xm, pm) == key0:
            continue
        f = SuperPoly._raw(p, q, {xm: c})
        fpar = mono_parity(xm, fo)
        s_out = 1 if mono_parity(pm, so) else -1
        g = scaling_integral(f, q_exponent(f, pm))
        for b in range(n):
            rp = mono_mul(gen(n, b), pm, so)
            if rp is None:
                continue
            # (-1)^{|F| + 1 + |x_b|(|f| + 1)}
            sb = -1 if (b >= p and not fpar) else 1
            for m, v in g.terms.items():
                rx = mono_mul(gen(n, b), m, fo)
                if rx is None:
                    continue
                acc(d, (rx[1], rp[1]), s_out * sb * rp[0] * rx[0] * v)
    return IntegralForm(p, q, d)


@dataclass(frozen=True)
class TruncationWindow:
    """Finite slice of a complex closed under its differential.

    ``max_z`` caps the z-degree budget and ``max_theta_poly`` caps the
    number of even polyfield (or form) generators; ``None`` means ``max_z``.
    """

    p: int
    q: int
    max_z: int
    max_theta_poly: int | None = None

    def __post_init__(self):
        if self.max_z < 0 or self.p < 0 or self.q < 0:
            raise ValueError("window parameters must be non-negative")

    @property
    def cap(self) -> int:
        return self.max_z if self.max_theta_poly is None else self.max_theta_poly


def integral_window(w: TruncationWindow) -> list:
    """Basis keys of integral forms in the window.

    The differential preserves ``zdeg - #pi_d_z`` and ``thetadeg - #pi_d_theta``,
    so whole blocks of these two gradings are taken: ``zdeg - #pi_d_z + p <= N``
    and ``#pi_d_theta - thetadeg + q <= M``.
    """
    p, q = w.p, w.q
    n = p + q
    fo, so = fun_mask(p, q), shift_mask(p, q)
    out = []
    for pm in monomials(n, so, p + w.cap):
        if sum(pm[p:]) > w.cap:
            continue
        for xm in monomials(n, fo, w.max_z + p + q):
            u = sum(xm[:p]) - sum(pm[:p])
            v = sum(xm[p:]) - sum(pm[p:])
            if u + p <= w.max_z and q - v <= w.cap:
                out.append((xm, pm))
    return out


def truncated_cohomology(window: TruncationWindow, side: str = "integral") -> dict:
    """Cohomology of the windowed complex: ``{degree: (even_dim, odd_dim)}``.

    ``side='integral'`` uses integral forms graded by complex degree ``p - #pi``;
    ``side='deRham'`` uses differential forms graded by form degree.
    """
    p, q = window.p, window.q
    if side == "integral":
        keys = integral_window(window)

        def image(k):
            return integral_delta(IntegralForm._raw(p, q, {k: 1})).terms

        def deg(k):
            return p - sum(k[1])

        def par(k):
            return IntegralForm._raw(p, q, {}).term_parity(k)

    elif side == "deRham":
        keys = derham_window(window)

        def image(k):
            return exterior_d(FormElem._raw(p, q, {k: 1})).terms

        def deg(k):
            return sum(k[0])

        def par(k):
            return FormElem._raw(p, q, {}).term_parity(k)

    else:
        raise ValueError(f"unknown side {side!r}")
    return cohomology_dims(keys, image, deg, par)


def derham_window(w: TruncationWindow) -> list:
    """Basis keys ``(fm, xm)`` of forms closed under ``d``.

    ``d`` preserves ``zdeg + #dz`` and ``thetadeg + #dtheta``; whole blocks with
    ``zdeg + #dz <= N`` and ``thetadeg + #dtheta <= M`` are taken.
    """
    p, q = w.p, w.q
    n = p + q
    fo, so = fun_mask(p, q), shift_mask(p, q)
    out = []
    for fm in monomials(n, so, p + w.cap):
        for xm in monomials(n, fo, w.max_z + q):
            if sum(xm[:p]) + sum(fm[:p]) <= w.max_z and sum(xm[p:]) + sum(fm[p:]) <= w.cap:
                out.append((fm, xm))
    return out


def derham_homotopy(w: FormElem) -> FormElem:
    """Scaling homotopy: ``k(dx^I x^A) = (1/(|I|+|A|)) sum_a +- x_a i_a(dx^I) x^A``.

    Satisfies ``d k + k d = id - eval0`` where ``eval0`` keeps constants.
    """
    p, q = w.p, w.q
    n = p + q
    fo, so = fun_mask(p, q), shift_mask(p, q)
    d: dict = {}
    for (fm, xm), c in w.terms.items():
        wt = sum(fm) + sum(xm)
        if wt == 0:
            continue
        for a in range(n):
            r = mono_lderiv(fm, a, so)
            if r is None:
                continue
            # x_a placed right after the form monomial, before x^A
            rx = mono_mul(gen(n, a), xm, fo)
            if rx is None:
                continue
            s = r[0] * rx[0]
            if a >= p and mono_parity(r[1], so):
                s = -s
            acc(d, (r[1], rx[1]), Fraction(s * c, wt))
    return FormElem(p, q, d)
