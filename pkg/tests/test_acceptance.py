"""Acceptance criteria 1-9, exact arithmetic throughout.

Each test prints one ``criterion N: PASS`` or ``criterion N: FAIL`` line.
"""

import contextlib
import time

import pytest

from superforms.specseq import SpectralSequence, super_elliptic, totals_by_degree
from superforms.verify import RunConfig, run_verify


@pytest.fixture
def report(capsys):
    @contextlib.contextmanager
    def run(n):
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}")

    return run


def _suite(suite, **kw):
    rep = run_verify(RunConfig(suite=suite, **kw))
    failed = [(c.name, c.input, c.expected, c.actual) for c in rep.checks if not c.passed]
    assert rep.checks and not failed, failed
    return rep


def _names(rep):
    return " | ".join(c.name for c in rep.checks)


def test_criterion_1_nilpotency_and_commutation(report):
    with report(1):
        t0 = time.perf_counter()
        ex = _suite("nilpotency", p=2, q=2, maxdeg=3, exhaustive=True)
        rnd = _suite("nilpotency", p=3, q=3, trials=200, seed=42)
        elapsed = time.perf_counter() - t0
        names = _names(ex)
        for needle in ("dhat^2", "deltahat^2", "dhat deltahat + deltahat dhat", "(dhat+deltahat)^2", "[1(x)delta, D(x)1]"):
            assert needle in names
        assert all(f"[p={a},q={b}]" in names for a in (1, 2) for b in (1, 2))
        assert "200" in " ".join(c.input for c in rnd.checks)
        assert elapsed < 60, f"{elapsed:.1f} s"


def test_criterion_2_de_rham_eigenvalue(report):
    with report(2):
        rep = _suite("homotopy-dr", p=2, q=2, maxdeg=3, exhaustive=True)
        assert "c = 0 locus" in _names(rep)


def test_criterion_3_spencer_eigenvalue(report):
    with report(3):
        rep = _suite("homotopy-spencer", p=2, q=2, maxdeg=3, exhaustive=True)
        assert "kernel of the Laplacian" in _names(rep)


def test_criterion_4_berezinian_right_action(report):
    with report(4):
        rep = _suite("ber-action", p=2, q=2, trials=50, exhaustive=True)
        assert "Ber . d_a = 0" in _names(rep)
        assert all(c.input.endswith("inputs") for c in rep.checks)


def test_criterion_5_lie_derivative_properties(report):
    with report(5):
        lie = _suite("lie", p=2, q=2, trials=100, exhaustive=True)
        ex = _suite("e-x", p=2, q=2, trials=100, exhaustive=True)
        assert "super Leibniz" in _names(lie) and "e_x(f tau)" in _names(ex)


def test_criterion_6_coordinate_invariance(report):
    with report(6):
        rep = _suite("invariance", p=2, q=2, maps=20, seed=7)
        names = _names(rep)
        assert "D commutes with transport" in names and "delta commutes with transport" in names
        witness = [c for c in rep.checks if c.name.startswith("witness")]
        assert len(witness) == 1
        print(f"\n  witness: {witness[0].input}")


def test_criterion_7_poincare_lemma_for_integral_forms(report):
    with report(7):
        t0 = time.perf_counter()
        rep = _suite("poincare-integral", p=2, q=2, maxz=3, exhaustive=True)
        assert "truncated cohomology (integral)" in _names(rep)
        assert time.perf_counter() - t0 < 60


def test_criterion_8_page_one_identifications(report):
    with report(8):
        rep = _suite("double-complex", p=2, q=2, exhaustive=True)
        names = _names(rep)
        assert "exact via Khat" in names and "induced differential on forms = d" in names
        assert "induced differential on integral forms" in names


def test_criterion_9_super_elliptic_example(report):
    with report(9):
        t0 = time.perf_counter()
        K = 6
        seq = SpectralSequence(super_elliptic(K))
        e1, e2 = seq.page(1), seq.page(2)
        interior = {b: (v.as_pair(), v.labels) for b, v in e2.objects.items() if b[0] <= K - 2 and v.dim}
        assert interior == {
            (0, 0): ((1, 0), ["1"]),
            (1, 0): ((0, 1), ["dz"]),
            (0, 1): ((0, 1), ["dz̄"]),
            (1, 1): ((1, 0), ["dz dz̄"]),
        }
        d1 = {tuple(d["from"]) for d in e1.differentials if d["rank"]}
        assert d1 == {(c, r) for c in range(K - 1) for r in (0, 1)}
        assert not any(d["rank"] for d in e2.differentials)
        totals = {n: t for n, t in totals_by_degree(e2.objects, K - 2).items() if t}
        assert totals == {0: 1, 1: 2, 2: 1}
        assert time.perf_counter() - t0 < 5
