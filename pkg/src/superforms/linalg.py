"""Exact linear algebra over the rationals, backed by sympy's DomainMatrix.

Matrices are ``DomainMatrix`` objects over ``QQ``; subspaces are matrices
whose columns form a basis.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def from_dod(dod: dict, shape: tuple) -> DomainMatrix:
    conv = {i: {j: QQ.convert(v) for j, v in row.items() if v} for i, row in dod.items()}
    return DomainMatrix.from_dod({i: r for i, r in conv.items() if r}, shape, QQ)


def dense(rows: Sequence[Sequence], ncols: int | None = None) -> DomainMatrix:
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return from_dod({i: {j: v for j, v in enumerate(r) if v} for i, r in enumerate(rows)}, (nrows, ncols))


def zeros(nrows: int, ncols: int) -> DomainMatrix:
    return DomainMatrix.zeros((nrows, ncols), QQ)


def identity(n: int) -> DomainMatrix:
    return DomainMatrix.eye(n, QQ)


def rank(M: DomainMatrix) -> int:
    if 0 in M.shape:
        return 0
    return M.rank()


def kernel(M: DomainMatrix) -> DomainMatrix:
    """Columns span the null space of ``M``."""
    n = M.shape[1]
    if n == 0:
        return zeros(0, 0)
    if M.shape[0] == 0:
        return identity(n)
    N = M.nullspace()
    return N.transpose() if N.shape[0] else zeros(n, 0)


def hstack(*Ms: DomainMatrix, nrows: int | None = None) -> DomainMatrix:
    Ms = [m for m in Ms if m.shape[1] > 0]
    if not Ms:
        return zeros(nrows or 0, 0)
    out = Ms[0]
    for m in Ms[1:]:
        out = out.hstack(m)
    return out


def column_basis(M: DomainMatrix) -> DomainMatrix:
    """A basis (as columns) for the column space of ``M``."""
    if M.shape[1] == 0 or M.shape[0] == 0:
        return zeros(M.shape[0], 0)
    _, pivots = M.rref()
    return cols(M, list(pivots))


def cols(M: DomainMatrix, idx: Iterable[int]) -> DomainMatrix:
    idx = list(idx)
    if not idx:
        return zeros(M.shape[0], 0)
    return M.extract(list(range(M.shape[0])), idx)


def solve(B: DomainMatrix, v: DomainMatrix):
    """Coefficients ``c`` with ``B c = v`` or ``None`` when ``v`` is outside the span."""
    n = B.shape[1]
    if n == 0:
        return zeros(0, v.shape[1]) if all(not x for x in v.to_dod().values()) else None
    aug = B.hstack(v)
    if rank(aug) != rank(B):
        return None
    R, pivots = aug.rref()
    sol = zeros(n, v.shape[1]).to_dod()
    rd = R.to_dod()
    for row, pc in enumerate(pivots):
        if pc >= n:
            return None
        for j in range(v.shape[1]):
            val = rd.get(row, {}).get(n + j)
            if val:
                sol.setdefault(pc, {})[j] = val
    return DomainMatrix.from_dod(sol, (n, v.shape[1]), QQ)


def in_span(B: DomainMatrix, v: DomainMatrix) -> bool:
    if B.shape[1] == 0:
        return all(not x for row in v.to_dod().values() for x in row.values())
    return rank(B.hstack(v)) == rank(B)


def cohomology_dims(
    keys: Sequence[Hashable],
    image: Callable[[Hashable], dict],
    degree_of: Callable[[Hashable], int],
    parity_of: Callable[[Hashable], int],
) -> dict:
    """Dimensions of cohomology of an odd differential on a finite basis.

    ``image(k)`` returns the differential of basis element ``k`` as a
    ``{key: coeff}`` map; every key of an image must itself lie in ``keys``.
    Returns ``{degree: (even_dim, odd_dim)}``.
    """
    index = {k: i for i, k in enumerate(keys)}
    groups: dict = defaultdict(list)
    for k in keys:
        groups[(degree_of(k), parity_of(k))].append(k)
    # rank of the differential out of each (degree, parity) group
    out_rank: dict = {}
    for g, ks in groups.items():
        targets: dict = {}
        dod: dict = {}
        for j, k in enumerate(ks):
            for t, c in image(k).items():
                if t not in index:
                    raise ValueError(f"window not closed: {k} -> {t}")
                i = targets.setdefault(t, len(targets))
                dod.setdefault(i, {})[j] = c
        out_rank[g] = rank(from_dod(dod, (len(targets), len(ks)))) if targets else 0
    result: dict = {}
    for (deg, par), ks in groups.items():
        incoming = out_rank.get((deg - 1, 1 - par), 0)
        h = len(ks) - out_rank[(deg, par)] - incoming
        ev, od = result.get(deg, (0, 0))
        result[deg] = (ev + h, od) if par == 0 else (ev, od + h)
    return dict(sorted(result.items()))
