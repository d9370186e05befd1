"""Text syntax for elements, operators and coordinate maps.

Generators: ``z1 th1`` (coordinates), ``Dz1 Dth1`` (derivations), ``dz1 dth1``
(differentials), ``Pz1 Pth1`` (parity-shifted derivations), ``Ber``.  An
unindexed name means index 1.  ``@`` (or ``⊗``) separates tensor slots and
binds tighter than ``+``; a top-level ``,`` also separates slots.  Operators
are applied as ``NAME( expr )`` and ``LieX[ field ]( expr )``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .berezin import IntegralForm, ber_lie, integral_delta
from .forms import FormElem, exterior_d
from .polyfields import PolyElem, VectorField, lie_derivative
from .superpoly import SuperPoly
from .tensor import RawPair, VirtualForm
from .weyl import WeylOp


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int | None = None):
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} at position {pos}")


class UnknownOperator(ParseError):
    pass


# kinds of parsed values
FUN, FORM, WEYL, POLY, INTEGRAL, UDR, SPENCER, VIRTUAL = (
    "function", "form", "weyl", "polyfield", "integral", "udr", "spencer", "virtual",
)

_GENERATORS = {"z": "x", "th": "x", "Dz": "D", "Dth": "D", "dz": "d", "dth": "d", "Pz": "P", "Pth": "P", "Ber": "B"}
OPERATORS = ("D", "H", "delta", "K", "dhat", "deltahat", "hk", "d", "LieX")

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z]+)(?P<idx>\d*)(?P<prime>')?|(?P<sym>[-+*^/@(),=\[\]]|⊗))"
)


@dataclass(frozen=True)
class Tok:
    kind: str  # num, name, sym, end
    text: str
    pos: int
    index: int = 1


def tokenize(text: str) -> list:
    out = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        if m.group("num"):
            out.append(Tok("num", m.group("num"), m.start("num")))
        elif m.group("name"):
            name = m.group("name")
            start = m.start("name")
            if m.group("prime"):
                out.append(Tok("prime", name, start, int(m.group("idx") or 1)))
            elif name in _GENERATORS:
                out.append(Tok("gen", name, start, int(m.group("idx") or 1)))
            else:
                if m.group("idx"):
                    raise ParseError(f"unknown generator {name + m.group('idx')!r}", start)
                out.append(Tok("name", name, start))
        else:
            s = m.group("sym")
            out.append(Tok("sym", "@" if s == "⊗" else s, m.start("sym")))
        i = m.end()
    out.append(Tok("end", "", n))
    return out


# ---------------------------------------------------------------------------
# syntax tree


@dataclass
class Num:
    value: Fraction


@dataclass
class Gen:
    name: str
    index: int
    pos: int


@dataclass
class Prod:
    factors: list  # of (atom, power)


@dataclass
class Sum:
    terms: list  # of (sign, [slot Prod, ...])


@dataclass
class Apply:
    op: str
    arg: object
    field: object = None
    pos: int = 0


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Tok:
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, sym: str) -> Tok:
        t = self.next()
        if t.kind != "sym" or t.text != sym:
            raise ParseError(f"expected {sym!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def at(self, sym: str) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.text == sym

    def command(self):
        t = self.peek()
        if t.kind == "name" and self.toks[self.i + 1].text in ("(", "["):
            self.next()
            if t.text not in OPERATORS:
                raise UnknownOperator(f"unknown operator {t.text!r}", t.pos)
            field = None
            if t.text == "LieX":
                self.expect("[")
                field = self.tsum()
                self.expect("]")
            elif self.at("["):
                raise ParseError(f"operator {t.text!r} takes no bracket argument", self.peek().pos)
            self.expect("(")
            arg = self.command()
            self.expect(")")
            return Apply(t.text, arg, field, t.pos)
        if t.kind == "name":
            raise UnknownOperator(f"unknown operator {t.text!r}", t.pos)
        return self.slots()

    def slots(self):
        parts = [self.tsum()]
        while self.at(","):
            self.next()
            parts.append(self.tsum())
        if len(parts) == 1:
            return parts[0]
        # a , b , c  ->  single tensor of parenthesised slots
        for s in parts:
            if any(len(sl) != 1 for _, sl in s.terms):
                raise ParseError("cannot mix ',' and '@' separators", self.peek().pos)
        terms = [(1, [])]
        for s in parts:
            terms = [(a * b, sl + t) for a, sl in terms for b, t in s.terms]
        return Sum(terms)

    def tsum(self) -> Sum:
        terms = []
        sign = 1
        if self.at("-") or self.at("+"):
            sign = -1 if self.next().text == "-" else 1
        terms.append((sign, self.tterm()))
        while self.at("+") or self.at("-"):
            sign = -1 if self.next().text == "-" else 1
            terms.append((sign, self.tterm()))
        return Sum(terms)

    def tterm(self) -> list:
        slots = [self.product()]
        while self.at("@"):
            self.next()
            slots.append(self.product())
        return slots

    def product(self) -> Prod:
        factors = [self.factor()]
        while self.at("*"):
            self.next()
            factors.append(self.factor())
        return Prod(factors)

    def factor(self):
        a = self.atom()
        if self.at("^"):
            self.next()
            t = self.next()
            if t.kind != "num":
                raise ParseError("exponent must be a non-negative integer", t.pos)
            return (a, int(t.text))
        return (a, 1)

    def atom(self):
        t = self.next()
        if t.kind == "num":
            v = Fraction(int(t.text))
            if self.at("/"):
                self.next()
                d = self.next()
                if d.kind != "num" or int(d.text) == 0:
                    raise ParseError("bad rational denominator", d.pos)
                v = v / int(d.text)
            return Num(v)
        if t.kind == "gen":
            return Gen(t.text, t.index, t.pos)
        if t.kind == "sym" and t.text == "(":
            inner = self.tsum()
            self.expect(")")
            return inner
        if t.kind == "sym" and t.text == "-":
            # unary minus inside a product, e.g. z1 * -1
            return Sum([(-1, [Prod([self.factor()])])])
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)

    def done(self):
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.text!r}", t.pos)


# ---------------------------------------------------------------------------
# evaluation


def _gens_in(node, acc: set, maxidx: dict):
    if isinstance(node, Gen):
        acc.add(_GENERATORS[node.name])
        key = "z" if node.name.endswith("z") else ("th" if node.name.endswith("th") else None)
        if key:
            maxidx[key] = max(maxidx.get(key, 0), node.index)
    elif isinstance(node, Prod):
        for a, _ in node.factors:
            _gens_in(a, acc, maxidx)
    elif isinstance(node, Sum):
        for _, slots in node.terms:
            for s in slots:
                _gens_in(s, acc, maxidx)
    elif isinstance(node, Apply):
        _gens_in(node.arg, acc, maxidx)
        if node.field is not None:
            _gens_in(node.field, acc, maxidx)


class _Algebra:
    def __init__(self, kind: str, p: int, q: int):
        self.kind, self.p, self.q = kind, p, q

    def one(self):
        p, q = self.p, self.q
        return {FUN: SuperPoly, FORM: FormElem, WEYL: WeylOp, POLY: PolyElem, INTEGRAL: PolyElem}[self.kind].const(p, q)

    def gen(self, g: Gen):
        p, q = self.p, self.q
        if g.name.endswith("th"):
            if not 1 <= g.index <= q:
                raise ParseError(f"index {g.index} out of range for q={q}", g.pos)
            a = p + g.index - 1
        else:
            if not 1 <= g.index <= p:
                raise ParseError(f"index {g.index} out of range for p={p}", g.pos)
            a = g.index - 1
        cls = _GENERATORS[g.name]
        k = self.kind
        if cls == "x":
            f = SuperPoly.var(p, q, a)
            return {FUN: f, FORM: FormElem.from_poly(f) if k == FORM else None, WEYL: WeylOp.coord(p, q, a) if k == WEYL else None,
                    POLY: PolyElem.from_poly(f) if k in (POLY, INTEGRAL) else None}.get(k if k != INTEGRAL else POLY)
        if cls == "d" and k == FORM:
            return FormElem.dx(p, q, a)
        if cls == "D" and k == WEYL:
            return WeylOp.deriv(p, q, a)
        if cls == "P" and k in (POLY, INTEGRAL):
            return PolyElem.pd(p, q, a)
        raise ParseError(f"generator {g.name}{g.index} not allowed in a {k} slot", g.pos)

    def eval(self, node, allow_ber: bool = False):
        if isinstance(node, Num):
            return self.one().scale(node.value)
        if isinstance(node, Gen):
            return self.gen(node)
        if isinstance(node, Sum):
            out = self.one().scale(0)
            for sign, slots in node.terms:
                if len(slots) != 1:
                    raise ParseError("'@' inside parentheses is not supported")
                out = out + self.eval(slots[0], allow_ber).scale(sign)
            return out
        if isinstance(node, Prod):
            out = self.one()
            seen_ber = False
            for i, (a, k) in enumerate(node.factors):
                if isinstance(a, Gen) and a.name == "Ber":
                    if not allow_ber or seen_ber or k != 1:
                        raise ParseError("Ber may appear once per term, to the first power", a.pos)
                    if any(not isinstance(b, Num) for b, _ in node.factors[:i]):
                        raise ParseError("Ber must be the leftmost non-scalar factor", a.pos)
                    seen_ber = True
                    continue
                v = self.eval(a)
                for _ in range(k):
                    out = out * v
                if k == 0:
                    out = out * self.one()
            if allow_ber and not seen_ber:
                raise ParseError("every term of an integral form must contain Ber")
            return out
        raise ParseError("cannot evaluate node")


_PATTERNS = {
    1: None,
    2: {UDR: (FORM, WEYL), SPENCER: (WEYL, POLY), INTEGRAL: (INTEGRAL, POLY)},
    3: {VIRTUAL: (FORM, WEYL, POLY)},
}

_ALLOWED = {FUN: {"x"}, FORM: {"x", "d"}, WEYL: {"x", "D"}, POLY: {"x", "P"}, INTEGRAL: {"x", "P", "B"}}

# preferred shape for a two-slot expression with no distinguishing generator
_HINT = {"D": UDR, "H": UDR, "delta": SPENCER, "K": SPENCER}


def _slot_kind_single(gens: set) -> str:
    if "B" in gens:
        return INTEGRAL
    for g, k in (("d", FORM), ("D", WEYL), ("P", POLY)):
        if g in gens:
            return k
    return FUN


@dataclass
class Value:
    kind: str
    value: object

    def __str__(self):
        return format_element(self.value, self.kind)


def _evaluate_sum(node: Sum, p: int, q: int, hint: str | None = None) -> Value:
    widths = {len(s) for _, s in node.terms}
    if len(widths) != 1:
        raise ParseError("terms have different numbers of tensor slots")
    w = widths.pop()
    if w > 3:
        raise ParseError("at most three tensor slots")
    slot_gens = []
    for i in range(w):
        g: set = set()
        for _, slots in node.terms:
            _gens_in(slots[i], g, {})
        slot_gens.append(g)
    if w == 1:
        kind = _slot_kind_single(slot_gens[0])
        # a function-only element may be read as a form, operator or polyfield on request
        if kind == FUN and hint in (FORM, WEYL, POLY):
            kind = hint
        if "d" in slot_gens[0] and "D" in slot_gens[0]:
            raise ParseError("mixed generator types in one slot")
        slot_kinds = (kind,)
    else:
        fits = [k for k, pat in _PATTERNS[w].items() if all(g <= _ALLOWED[s] for g, s in zip(slot_gens, pat))]
        if not fits:
            raise ParseError("slot contents match no tensor shape")
        kind = fits[0] if len(fits) == 1 else (hint if hint in fits else fits[0])
        slot_kinds = _PATTERNS[w][kind]
    for g, s in zip(slot_gens, slot_kinds):
        bad = g - _ALLOWED[s]
        if bad:
            raise ParseError(f"generator type {sorted(bad)} not allowed in a {s} slot")
    algs = [_Algebra(s, p, q) for s in slot_kinds]
    total = None
    for sign, slots in node.terms:
        vals = [alg.eval(sl, allow_ber=(alg.kind == INTEGRAL)) for alg, sl in zip(algs, slots)]
        v = _combine(kind, vals, p, q).scale(sign)
        total = v if total is None else total + v
    return Value(kind, total)


def _combine(kind, vals, p, q):
    if kind in (FUN, FORM, WEYL, POLY):
        return vals[0]
    if kind == INTEGRAL:
        poly = vals[0] if len(vals) == 1 else vals[0] * vals[1]
        return IntegralForm._raw(p, q, dict(poly.terms))
    if kind == UDR:
        return VirtualForm.tensor(vals[0], vals[1], None)
    if kind == SPENCER:
        return VirtualForm.tensor(None, vals[0], vals[1])
    return VirtualForm.tensor(vals[0], vals[1], vals[2])


def _dims(node, p, q):
    g: set = set()
    mx: dict = {}
    _gens_in(node, g, mx)
    ip, iq = mx.get("z", 0), mx.get("th", 0)
    if p is None:
        p = max(1, ip)
    if q is None:
        q = max(1, iq)
    return p, q


def parse(text: str, p: int | None = None, q: int | None = None, hint: str | None = None) -> Value:
    """Parse an element (no operator application)."""
    ps = _Parser(text)
    node = ps.slots()
    ps.done()
    p, q = _dims(node, p, q)
    return _evaluate_sum(node, p, q, hint)


def _vector_field(v: Value) -> VectorField:
    if v.kind not in (WEYL, FUN):
        raise ParseError("LieX expects a first-order operator such as z1*Dth1")
    W = v.value if v.kind == WEYL else WeylOp.from_poly(v.value)
    p, q = W.p, W.q
    comps: dict = {}
    for (xm, dm), c in W.terms.items():
        if sum(dm) != 1:
            raise ParseError("LieX expects a vector field (each term exactly one derivative)")
        a = dm.index(1)
        f = SuperPoly._raw(p, q, {xm: c})
        comps[a] = comps[a] + f if a in comps else f
    return VectorField(p, q, comps)


def _apply(op: str, v: Value, field: VectorField | None) -> Value:
    from . import poincare, universal, virtual

    k = v.kind
    if op == "D" and k in (UDR, VIRTUAL):
        return Value(k, universal.big_d(v.value))
    if op == "H" and k == UDR:
        return Value(k, universal.homotopy_h(v.value))
    if op == "delta" and k == SPENCER:
        return Value(k, universal.spencer_delta(v.value))
    if op == "delta" and k == INTEGRAL:
        return Value(k, integral_delta(v.value))
    if op == "K" and k == SPENCER:
        return Value(k, universal.homotopy_k(v.value))
    if op in ("dhat", "deltahat") and k in (UDR, SPENCER, VIRTUAL):
        fn = virtual.dhat if op == "dhat" else virtual.deltahat
        return Value(VIRTUAL, fn(v.value))
    if op == "hk" and k == INTEGRAL:
        return Value(k, poincare.poincare_h(v.value))
    if op == "d" and k in (FUN, FORM):
        w = v.value if k == FORM else FormElem.from_poly(v.value)
        return Value(FORM, exterior_d(w))
    if op == "LieX":
        if k == FUN:
            return Value(FUN, field(v.value))
        if k == POLY:
            return Value(POLY, lie_derivative(field, v.value))
        if k == INTEGRAL:
            return Value(INTEGRAL, ber_lie(field, v.value.coefficient()))
    raise ParseError(f"operator {op} does not apply to a {k} element")


def evaluate(text: str, p: int | None = None, q: int | None = None) -> Value:
    """Parse, apply any operators, and return the typed result."""
    ps = _Parser(text)
    node = ps.command()
    ps.done()
    p, q = _dims(node, p, q)

    def run(n, hint=None):
        if isinstance(n, Apply):
            inner = run(n.arg, _HINT.get(n.op))
            field = None
            if n.field is not None:
                field = _vector_field(_evaluate_sum(n.field, p, q, None))
            return _apply(n.op, inner, field)
        return _evaluate_sum(n, p, q, hint)

    return run(node)


def eval_expr(text: str, p: int | None = None, q: int | None = None) -> str:
    return str(evaluate(text, p, q))


# ---------------------------------------------------------------------------
# printing


def _names(p: int, q: int, prefix_z: str, prefix_th: str) -> list:
    return [f"{prefix_z}{i + 1}" for i in range(p)] + [f"{prefix_th}{i + 1}" for i in range(q)]


def _mono(m, names) -> list:
    out = []
    for e, nm in zip(m, names):
        if e == 1:
            out.append(nm)
        elif e > 1:
            out.append(f"{nm}^{e}")
    return out


def _coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _join_terms(items) -> str:
    """``items``: sorted ``(coeff, [slot strings])`` with '' for a unit slot."""
    parts = []
    for c, slots in items:
        c = Fraction(c)
        slots = list(slots)
        neg = c < 0
        a = -c if neg else c
        if len(slots) == 1:
            body = slots[0]
            if a != 1:
                body = _coef(a) + ("*" + body if body else "")
            elif not body:
                body = "1"
        else:
            first = slots[0]
            if a != 1:
                first = _coef(a) + ("*" + first if first else "")
            slots[0] = first
            body = " @ ".join(s or "1" for s in slots)
        if not parts:
            parts.append(("- " if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts) or "0"


def _order(key):
    # deterministic term order: by total degree, then lexicographically descending
    flat = []
    for part in key if isinstance(key[0], tuple) else (key,):
        flat.extend(part)
    return (sum(flat), tuple(-x for x in flat))


def format_element(obj, kind: str | None = None) -> str:
    """Canonical text for any element type; parses back to the same element."""
    if isinstance(obj, Value):
        return format_element(obj.value, obj.kind)
    if isinstance(obj, RawPair):
        parts = [f"({format_element(A)}) @ ({format_element(B)})" for A, B in obj.pieces()]
        return " + ".join(parts) or "0"
    p, q = obj.p, obj.q
    X = _names(p, q, "z", "th")
    Dn = _names(p, q, "Dz", "Dth")
    dn = _names(p, q, "dz", "dth")
    Pn = _names(p, q, "Pz", "Pth")
    items = []
    for key, c in sorted(obj.terms.items(), key=lambda kv: _order(kv[0])):
        if isinstance(obj, SuperPoly):
            items.append((c, ["*".join(_mono(key, X))]))
        elif isinstance(obj, WeylOp):
            xm, dm = key
            items.append((c, ["*".join(_mono(xm, X) + _mono(dm, Dn))]))
        elif isinstance(obj, FormElem):
            fm, xm = key
            items.append((c, ["*".join(_mono(fm, dn) + _mono(xm, X))]))
        elif isinstance(obj, PolyElem):
            xm, pm = key
            items.append((c, ["*".join(_mono(xm, X) + _mono(pm, Pn))]))
        elif isinstance(obj, IntegralForm):
            xm, pm = key
            items.append((c, ["*".join(["Ber"] + _mono(xm, X)), "*".join(_mono(pm, Pn))]))
        elif isinstance(obj, VirtualForm):
            fm, xm, dm, pm = key
            k = kind or _virtual_kind(obj)
            op = "*".join(_mono(xm, X) + _mono(dm, Dn))
            if k == UDR:
                items.append((c, ["*".join(_mono(fm, dn)), op]))
            elif k == SPENCER:
                items.append((c, [op, "*".join(_mono(pm, Pn))]))
            else:
                items.append((c, ["*".join(_mono(fm, dn)), op, "*".join(_mono(pm, Pn))]))
        else:
            raise TypeError(f"cannot format {type(obj).__name__}")
    return _join_terms(items)


def _virtual_kind(v: VirtualForm) -> str:
    has_f = any(any(k[0]) for k in v.terms)
    has_p = any(any(k[3]) for k in v.terms)
    if has_f and has_p:
        return VIRTUAL
    if has_p:
        return SPENCER
    return UDR


# ---------------------------------------------------------------------------
# coordinate maps


def format_map(g) -> str:
    names = _names(g.p, g.q, "z", "th")
    return "\n".join(f"{nm}' = {format_element(t, FUN)}" for nm, t in zip(names, g.targets))


def parse_map(text: str, p: int | None = None, q: int | None = None):
    """Parse ``z1' = ...`` lines; unlisted coordinates stay unchanged."""
    from .coords import SuperCoordMap

    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        ps = _Parser(line)
        lhs = ps.next()
        if lhs.kind != "prime" or lhs.text not in ("z", "th"):
            raise ParseError(f"line {lineno}: expected a primed coordinate such as z1'", lhs.pos)
        ps.expect("=")
        rhs = ps.tsum()
        ps.done()
        rows.append((lhs.text, lhs.index, rhs, lineno))
    mx: dict = {}
    for name, idx, rhs, _ in rows:
        mx[name] = max(mx.get(name, 0), idx)
        _gens_in(rhs, set(), mx)
    p = p if p is not None else max(1, mx.get("z", 0))
    q = q if q is not None else max(1, mx.get("th", 0))
    targets = [SuperPoly.var(p, q, a) for a in range(p + q)]
    seen = set()
    for name, idx, rhs, lineno in rows:
        a = idx - 1 if name == "z" else p + idx - 1
        if (name == "z" and idx > p) or (name == "th" and idx > q) or idx < 1:
            raise ParseError(f"line {lineno}: coordinate {name}{idx} out of range")
        if a in seen:
            raise ParseError(f"line {lineno}: {name}{idx}' assigned twice")
        seen.add(a)
        v = _evaluate_sum(rhs, p, q)
        if v.kind != FUN:
            raise ParseError(f"line {lineno}: right-hand side must be a function")
        targets[a] = v.value
    try:
        return SuperCoordMap(p, q, targets)
    except ValueError as e:
        raise ParseError(str(e)) from e
