"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a failed check, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .grammar import ParseError, eval_expr
from .verify import SUITES, InvalidConfig, RunConfig, run_verify

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int, default=1, help="number of even coordinates")
    sp.add_argument("--q", type=int, default=1, help="number of odd coordinates")
    sp.add_argument("--maxdeg", type=int, default=3, help="degree cap per slot")
    sp.add_argument("--maxz", type=int, default=3, help="z-degree cap of truncation windows")
    sp.add_argument("--json", dest="output", metavar="PATH", help="write a JSON report")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="superforms", description="Exact checks for differential, integral and virtual superforms.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    _common(v)
    v.add_argument("--suite", default="all", choices=("all",) + SUITES)
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--exhaustive", action="store_true", help="enumerate all dims up to (p, q) and degrees up to maxdeg")
    v.add_argument("--maps", type=int, default=20, help="random coordinate changes for the invariance suite")

    h = sub.add_parser("homology", help="deltahat-homology of the triple tensor per weight block")
    _common(h)

    pc = sub.add_parser("poincare", help="truncated cohomology of integral or de Rham forms")
    _common(pc)
    pc.add_argument("--side", choices=("integral", "deRham"), default="integral")

    ss = sub.add_parser("specseq", help="pages of the super elliptic double complex")
    ss.add_argument("--columns", type=int, default=6)
    ss.add_argument("--page", type=int, default=2)
    ss.add_argument("--json", dest="output", metavar="PATH")

    e = sub.add_parser("eval", help="evaluate an expression and print its canonical form")
    e.add_argument("expr")
    e.add_argument("--p", type=int, default=None)
    e.add_argument("--q", type=int, default=None)
    return ap


def _config(ns) -> RunConfig:
    fields = {k: getattr(ns, k) for k in RunConfig.__dataclass_fields__ if getattr(ns, k, None) is not None}
    return RunConfig(**fields).validate()


def _write(path, data) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, ensure_ascii=False, sort_keys=True)
            fh.write("\n")


def _cmd_verify(ns) -> int:
    cfg = _config(ns)
    rep = run_verify(cfg)
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.input})")
        if not c.passed:
            print(f"      expected: {c.expected}\n      actual:   {c.actual}")
    print(f"{sum(c.passed for c in rep.checks)}/{len(rep.checks)} checks passed (seed {cfg.seed})")
    _write(cfg.output, rep.to_json())
    return EXIT_PASS if rep.passed else EXIT_FAIL


def _cmd_homology(ns) -> int:
    from .verify import closed_window, window_keys
    from .virtual import delta_homology_weight_zero

    cfg = _config(ns)
    deg = min(cfg.maxdeg, 2)
    keys = closed_window(cfg.p, cfg.q, window_keys(cfg.p, cfg.q, deg))
    hom = delta_homology_weight_zero(cfg.p, cfg.q, keys)
    rows = []
    ok = True
    for (w, xdeg, fdeg), dims in sorted(hom.items()):
        for d, (ev, od) in sorted(dims.items()):
            if ev or od:
                rows.append({"weight": w, "xdeg": xdeg, "formdeg": fdeg, "polydeg": -d, "even": ev, "odd": od})
                ok &= w == 0
    for r in rows:
        print(f"weight {r['weight']}  x-degree {r['xdeg']}  form degree {r['formdeg']}  poly degree {r['polydeg']}: {r['even']}|{r['odd']}")
    print("homology concentrated at weight zero" if ok else "homology found at nonzero weight")
    _write(cfg.output, {"p": cfg.p, "q": cfg.q, "maxdeg": deg, "blocks": rows, "pass": ok})
    return EXIT_PASS if ok else EXIT_FAIL


def _cmd_poincare(ns) -> int:
    from .poincare import TruncationWindow, truncated_cohomology

    cfg = _config(ns)
    table = truncated_cohomology(TruncationWindow(cfg.p, cfg.q, cfg.maxz), cfg.side)
    for d, (ev, od) in sorted(table.items()):
        print(f"H^{d}: {ev}|{od}")
    nonzero = [d for d, (ev, od) in table.items() if ev or od]
    ok = nonzero == [0] and sum(table[0]) == 1
    _write(cfg.output, {"side": cfg.side, "p": cfg.p, "q": cfg.q, "maxz": cfg.maxz,
                        "table": {str(d): list(v) for d, v in sorted(table.items())}, "pass": ok})
    return EXIT_PASS if ok else EXIT_FAIL


def _cmd_specseq(ns) -> int:
    from .specseq import SpectralSequence, super_elliptic

    if ns.columns < 4 or ns.page < 0:
        raise InvalidConfig("need --columns >= 4 and --page >= 0")
    seq = SpectralSequence(super_elliptic(ns.columns))
    pages = [seq.page(r) for r in range(ns.page + 1)]
    for pg in pages:
        print(f"E{pg.r}:")
        for (p, q), vs in sorted(pg.objects.items()):
            if vs.dim:
                print(f"  ({p},{q}) {vs.even}|{vs.odd}  {', '.join(vs.labels)}")
        nz = [d for d in pg.differentials if d["rank"]]
        print(f"  nonzero d{pg.r}: " + (", ".join(f"{tuple(d['from'])}->{tuple(d['to'])} rank {d['rank']}" for d in nz) or "none"))
    _write(ns.output, {"columns": ns.columns, "pages": [pg.to_json() for pg in pages]})
    return EXIT_PASS


def _cmd_eval(ns) -> int:
    print(eval_expr(ns.expr, ns.p, ns.q))
    return EXIT_PASS


_COMMANDS = {
    "verify": _cmd_verify,
    "homology": _cmd_homology,
    "poincare": _cmd_poincare,
    "specseq": _cmd_specseq,
    "eval": _cmd_eval,
}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return _COMMANDS[ns.command](ns)
    except InvalidConfig as exc:
        print(f"superforms: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"superforms: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
