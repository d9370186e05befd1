"""Spectral sequence of a finite double complex of super vector spaces.

Pages are computed directly from the column filtration
``F^p = sum_{p' >= p} C^{p', *}`` of the total complex:

    Z_r^p = {x in F^p : D x in F^{p+r}}
    E_r^p = Z_r^p / (Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1})

separately for each total degree and parity.  ``d_r`` is induced by ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from . import linalg
from .forms import FormElem, exterior_d
from .superpoly import SuperPoly

Bideg = Tuple[int, int]


class IllFormed(ValueError):
    """The complex is not a complex, or an induced map is not well defined."""


@dataclass
class SuperVS:
    even: int
    odd: int
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.even < 0 or self.odd < 0:
            raise ValueError("dimensions must be non-negative")
        if self.labels and len(self.labels) != self.even + self.odd:
            raise ValueError("label count does not match dimension")

    @property
    def dim(self) -> int:
        return self.even + self.odd

    def as_pair(self) -> tuple:
        return (self.even, self.odd)


@dataclass
class Generators:
    """Basis of one object: labels and parities (0 even, 1 odd)."""

    labels: List[str]
    parities: List[int]

    def __post_init__(self):
        if len(self.labels) != len(self.parities):
            raise ValueError("labels and parities differ in length")

    def __len__(self):
        return len(self.labels)

    def space(self) -> SuperVS:
        ev = sum(1 for x in self.parities if x == 0)
        return SuperVS(ev, len(self.parities) - ev, list(self.labels))


class DoubleComplexFD:
    """Finite double complex: ``dh: (p,q) -> (p+1,q)``, ``dv: (p,q) -> (p,q+1)``.

    Matrices are ``{(row, col): coeff}`` maps with rows indexing the target
    basis.  With ``anticommute=False`` the vertical map is twisted by
    ``(-1)^p`` when forming the total differential.
    """

    def __init__(self, objects: Dict[Bideg, Generators], dh=None, dv=None, anticommute: bool = True):
        self.objects = dict(objects)
        self.dh = dict(dh or {})
        self.dv = dict(dv or {})
        self.anticommute = anticommute
        for (p, q) in list(self.dh) + list(self.dv):
            if (p, q) not in self.objects:
                raise IllFormed(f"differential out of missing object {(p, q)}")

    def gens(self, b: Bideg) -> Generators:
        return self.objects.get(b, Generators([], []))

    def total_degrees(self) -> list:
        return sorted({p + q for p, q in self.objects})

    def columns(self) -> list:
        return sorted({p for p, _ in self.objects})

    # total complex ------------------------------------------------------
    def _basis(self, n: int, par: int) -> list:
        """Ordered basis of ``C^{n}`` of parity ``par``: list of ``(p, q, index)``."""
        out = []
        for (p, q) in sorted(self.objects):
            if p + q != n:
                continue
            g = self.objects[(p, q)]
            out += [(p, q, i) for i, pr in enumerate(g.parities) if pr == par]
        return out

    def total_matrix(self, n: int, par: int):
        src = self._basis(n, par)
        tgt = self._basis(n + 1, 1 - par)
        tindex = {b: i for i, b in enumerate(tgt)}
        dod: dict = {}
        for j, (p, q, i) in enumerate(src):
            for (mat, shift, sign) in (
                (self.dh.get((p, q), {}), (1, 0), 1),
                (self.dv.get((p, q), {}), (0, 1), 1 if self.anticommute or p % 2 == 0 else -1),
            ):
                for (r, c), v in mat.items():
                    if c != i:
                        continue
                    key = (p + shift[0], q + shift[1], r)
                    if key not in tindex:
                        raise IllFormed(f"differential lands outside the basis at {key}")
                    dod.setdefault(tindex[key], {})
                    dod[tindex[key]][j] = dod[tindex[key]].get(j, 0) + sign * v
        return src, tgt, linalg.from_dod(dod, (len(tgt), len(src)))

    def check(self) -> None:
        """Raise :class:`IllFormed` unless the total differential squares to zero."""
        for n in self.total_degrees():
            for par in (0, 1):
                _, _, A = self.total_matrix(n, par)
                _, _, B = self.total_matrix(n + 1, 1 - par)
                if A.shape[1] and B.shape[0] and A.shape[0]:
                    prod = B * A
                    if any(v for row in prod.to_dod().values() for v in row.values()):
                        raise IllFormed(f"D^2 != 0 in total degree {n}")

    def total_cohomology(self) -> dict:
        """``{n: (even, odd)}`` for the total complex."""
        out = {}
        for n in self.total_degrees():
            dims = []
            for par in (0, 1):
                src, _, A = self.total_matrix(n, par)
                _, _, B = self.total_matrix(n - 1, 1 - par)
                dims.append(len(src) - linalg.rank(A) - linalg.rank(B))
            out[n] = tuple(dims)
        return out


@dataclass
class SpectralPage:
    r: int
    objects: Dict[Bideg, SuperVS]
    differentials: List[dict]
    source: "SpectralSequence" = field(repr=False, default=None)

    def table(self) -> dict:
        return {b: v.as_pair() for b, v in sorted(self.objects.items())}

    def to_json(self) -> dict:
        return {
            "page": self.r,
            "entries": [
                {"p": p, "q": q, "evenDim": v.even, "oddDim": v.odd, "labels": list(v.labels)}
                for (p, q), v in sorted(self.objects.items())
            ],
            "differentials": [dict(d, **{"from": list(d["from"]), "to": list(d["to"])}) for d in self.differentials],
        }


class SpectralSequence:
    """Column-filtration spectral sequence of a :class:`DoubleComplexFD`."""

    def __init__(self, dc: DoubleComplexFD):
        dc.check()
        self.dc = dc
        self._mats: dict = {}

    def _mat(self, n, par):
        if (n, par) not in self._mats:
            self._mats[(n, par)] = self.dc.total_matrix(n, par)
        return self._mats[(n, par)]

    def _cols_at_least(self, basis, p):
        return [j for j, b in enumerate(basis) if b[0] >= p]

    def _z(self, n, par, p, r):
        """Columns of a matrix spanning ``Z_r^p`` in total degree ``n``."""
        src, tgt, A = self._mat(n, par)
        cols = self._cols_at_least(src, p)
        rows = [i for i, b in enumerate(tgt) if b[0] < p + r]
        if not cols:
            return linalg.zeros(len(src), 0)
        sub = A.extract(rows, cols) if rows else linalg.zeros(0, len(cols))
        K = linalg.kernel(sub)
        # embed into the full coordinate space
        kd = K.to_dod()
        dod: dict = {}
        for i, row in kd.items():
            for c, v in row.items():
                dod.setdefault(cols[i], {})[c] = v
        return linalg.DomainMatrix.from_dod(dod, (len(src), K.shape[1]), linalg.QQ)

    def _denominator(self, n, par, p, r):
        src, _, _ = self._mat(n, par)
        Z1 = self._z(n, par, p + 1, r - 1)
        Zb = self._z(n - 1, 1 - par, p - r + 1, r - 1)
        _, _, Ab = self._mat(n - 1, 1 - par)
        B = Ab * Zb if Zb.shape[1] and Ab.shape[0] else linalg.zeros(len(src), 0)
        return linalg.column_basis(linalg.hstack(Z1, B, nrows=len(src)))

    def _entry(self, p, q, r):
        """``(SuperVS, {parity: (Z, Den, src)})`` for ``E_r^{p,q}``."""
        n = p + q
        g = self.dc.gens((p, q))
        dims = {}
        labels_by_par = {}
        data = {}
        for par in (0, 1):
            src, _, _ = self._mat(n, par)
            Z = self._z(n, par, p, r)
            Den = self._denominator(n, par, p, r)
            data[par] = (Z, Den, src)
            own = [j for j, b in enumerate(src) if b[0] == p]
            PZ = linalg.column_basis(Z.extract(own, list(range(Z.shape[1])))) if own and Z.shape[1] else linalg.zeros(len(own), 0)
            PD = linalg.column_basis(Den.extract(own, list(range(Den.shape[1])))) if own and Den.shape[1] else linalg.zeros(len(own), 0)
            dim = PZ.shape[1] - PD.shape[1]
            dims[par] = dim
            labels_by_par[par] = self._labels(g, own, src, PZ, PD, dim)
        labels = labels_by_par[0] + labels_by_par[1]
        return SuperVS(dims[0], dims[1], labels), data

    @staticmethod
    def _labels(g, own, src, PZ, PD, dim):
        chosen = PD
        labels = []
        for k, j in enumerate(own):
            if len(labels) == dim:
                break
            e = linalg.from_dod({k: {0: 1}}, (len(own), 1))
            if not linalg.in_span(PZ, e) or linalg.in_span(chosen, e):
                continue
            chosen = linalg.hstack(chosen, e, nrows=len(own))
            labels.append(g.labels[src[j][2]])
        if len(labels) < dim:
            for c in range(PZ.shape[1]):
                if len(labels) == dim:
                    break
                v = linalg.cols(PZ, [c])
                if linalg.in_span(chosen, v):
                    continue
                chosen = linalg.hstack(chosen, v, nrows=len(own))
                vd = v.to_dod()
                parts = [f"{linalg.to_fraction(vd[i][0])}*{g.labels[src[own[i]][2]]}" for i in sorted(vd)]
                labels.append(" + ".join(parts))
        return labels

    def page(self, r: int) -> SpectralPage:
        if r < 0:
            raise ValueError("page index must be non-negative")
        objs = {}
        data = {}
        for b in sorted(self.dc.objects):
            vs, dt = self._entry(b[0], b[1], r)
            objs[b] = vs
            data[b] = dt
        diffs = []
        for (p, q) in sorted(self.dc.objects):
            tgt = (p + r, q - r + 1)
            if tgt not in self.dc.objects:
                continue
            rk = 0
            for par in (0, 1):
                Z, Den, _ = data[(p, q)][par]
                Zt, Dent, _ = data[tgt][1 - par]
                _, _, A = self._mat(p + q, par)
                img = A * Z if Z.shape[1] and A.shape[0] else linalg.zeros(A.shape[0], 0)
                imgD = A * Den if Den.shape[1] and A.shape[0] else linalg.zeros(A.shape[0], 0)
                nrows = A.shape[0]
                if img.shape[1] and not linalg.in_span(Zt, img):
                    raise IllFormed(f"d_{r} leaves Z at {(p, q)}")
                if imgD.shape[1] and not linalg.in_span(Dent, imgD):
                    raise IllFormed(f"d_{r} is not well defined at {(p, q)}")
                rk += linalg.rank(linalg.hstack(img, Dent, nrows=nrows)) - linalg.rank(Dent)
            diffs.append({"from": (p, q), "to": tgt, "rank": rk})
        return SpectralPage(r, objs, diffs, self)


def next_page(pg: SpectralPage) -> SpectralPage:
    """The page after ``pg``; its objects are the homology of ``pg``."""
    return pg.source.page(pg.r + 1)


def euler_characteristic(objects: Dict[Bideg, SuperVS]) -> tuple:
    """``(sum (-1)^n dim, sum (even - odd))`` over all entries."""
    chi = sum((-1) ** ((p + q) % 2) * v.dim for (p, q), v in objects.items())
    schi = sum(v.even - v.odd for v in objects.values())
    return chi, schi


def totals_by_degree(objects: Dict[Bideg, SuperVS], max_column: int | None = None) -> dict:
    out: dict = {}
    for (p, q), v in objects.items():
        if max_column is not None and p > max_column:
            continue
        out[p + q] = out.get(p + q, 0) + v.dim
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# super elliptic curve fixture


def _se_generators(k: int) -> list:
    """``[(label, parity, form)]`` spanning column ``k`` of the first page."""
    p, q = 1, 1
    one = FormElem.const(p, q)
    th = FormElem.from_poly(SuperPoly.theta(p, q, 1))
    dz = FormElem.dx(p, q, 0)
    dth = FormElem.dx(p, q, 1)

    def dth_pow(m):
        out = one
        for _ in range(m):
            out = out * dth
        return out

    def lab(*parts):
        return " ".join(x for x in parts if x) or "1"

    def pw(m):
        return "" if m == 0 else ("dθ" if m == 1 else f"dθ^{m}")

    if k == 0:
        return [("1", 0, one), ("θ", 1, th)]
    return [
        (lab(pw(k)), 0, dth_pow(k)),
        (lab("θ", "dz", pw(k - 1)), 0, th * dz * dth_pow(k - 1)),
        (lab("dz", pw(k - 1)), 1, dz * dth_pow(k - 1)),
        (lab("θ", pw(k)), 1, th * dth_pow(k)),
    ]


def _express(target: FormElem, gens: list) -> dict:
    """Coordinates of ``target`` in the span of generator forms."""
    keys = sorted({k for _, _, g in gens for k in g.terms} | set(target.terms))
    idx = {k: i for i, k in enumerate(keys)}
    dod: dict = {}
    for j, (_, _, g) in enumerate(gens):
        for k, c in g.terms.items():
            dod.setdefault(idx[k], {})[j] = c
    B = linalg.from_dod(dod, (len(keys), len(gens)))
    v = linalg.from_dod({idx[k]: {0: c} for k, c in target.terms.items()}, (len(keys), 1))
    sol = linalg.solve(B, v)
    if sol is None:
        raise IllFormed("image of a generator leaves the next column")
    return {i: linalg.to_fraction(row[0]) for i, row in sol.to_dod().items() if 0 in row}


def build_super_elliptic(K: int, q_row: int) -> DoubleComplexFD:
    """One row of the first page: columns ``0..K-1`` with ``d_1`` from the de Rham differential.

    Row 1 multiplies every generator by the closed odd form ``dz̄``; this
    flips parities and leaves the matrices unchanged.
    """
    if K < 2:
        raise ValueError("need at least two columns")
    if q_row not in (0, 1):
        raise ValueError("row must be 0 or 1")
    objects = {}
    dh = {}
    cols = [_se_generators(k) for k in range(K)]
    for k in range(K):
        labels = [lab if q_row == 0 else (lab + " dz̄" if lab != "1" else "dz̄") for lab, _, _ in cols[k]]
        pars = [(par + q_row) % 2 for _, par, _ in cols[k]]
        objects[(k, q_row)] = Generators(labels, pars)
        if k + 1 < K:
            mat = {}
            for j, (_, _, g) in enumerate(cols[k]):
                for i, c in _express(exterior_d(g), cols[k + 1]).items():
                    if c:
                        mat[(i, j)] = c
            dh[(k, q_row)] = mat
    return DoubleComplexFD(objects, dh=dh)


def super_elliptic(K: int) -> DoubleComplexFD:
    rows = [build_super_elliptic(K, r) for r in (0, 1)]
    objects = {}
    dh = {}
    for r in rows:
        objects.update(r.objects)
        dh.update(r.dh)
    return DoubleComplexFD(objects, dh=dh)


def e2_table(K: int) -> SpectralPage:
    """Second page of the super elliptic fixture (columns ``K-1`` and beyond are edge effects)."""
    if K < 4:
        raise ValueError("need at least four columns")
    return SpectralSequence(super_elliptic(K)).page(2)
