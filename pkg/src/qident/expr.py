"""Expression language for q-series: AST, recursive-descent parser, renderer, evaluator.

Grammar (whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' expo)?
    atom    := INT | 'q' | NAME '(' args ')' | sum | '(' expr ')'
             | '(' base (',' base)* ';' step ')' '_' length
    sum     := 'sum' '(' NAME '>=' INT ',' expr ')'
    expo    := INT | '-' INT | NAME | '(' poly ')'
    length  := 'inf' | INT | NAME | '(' poly ')'
    poly    := rational polynomial in index names using + - * / ^ and parentheses

Functions: ``f(a,b)``, ``phi(a)``, ``psi(a)``, ``fneg(a)`` (``f(-a,-a^2)``) and
the false theta function ``Psi(a,b)``.  Pochhammer bases, the step and
function arguments must be monomials such as ``-q^(3/2)``, ``-1`` or
``q^(n+2)``.  Index names may appear only inside exponents and lengths.

>>> print(expand("psi(q)", 11))
1 + q + q^3 + q^6 + q^10 (+O(q^11))
>>> render(parse("(q;q)_inf * (q^2;q^2)_inf^-1"))
'(q;q)_inf * (q^2;q^2)_inf^(-1)'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .errors import DivergentBase, DomainViolation, ExprSyntaxError, NonTerminating, ZeroLeadingTerm
from .polys import IndexPoly
from .products import FactorProduct, f_neg, false_theta, phi, psi, theta_f
from .series import Monomial, QSeries, as_fraction, series_sum

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class MonoT:
    """Monomial template ``coeff * q^exp`` whose exponent may involve indices."""

    coeff: Fraction
    exp: IndexPoly

    def at(self, env=None) -> Monomial:
        return Monomial(self.coeff, self.exp(env))


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class QPow:
    exp: IndexPoly


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: IndexPoly


@dataclass(frozen=True)
class Poch:
    bases: Tuple[MonoT, ...]
    step: MonoT
    length: Optional[IndexPoly]


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[MonoT, ...]


@dataclass(frozen=True)
class Sum:
    var: str
    start: int
    body: "Node"


Node = Union[Num, QPow, Neg, BinOp, Pow, Poch, Call, Sum]

FUNCTIONS = {"f": 2, "phi": 1, "psi": 1, "fneg": 1, "Psi": 2}
RESERVED = set(FUNCTIONS) | {"q", "inf", "sum"}

# ---------------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(>=|[-+*/^(),;_]))")


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'name', 'op', 'eof'
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            if not rest.strip():
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        start = m.start(m.lastindex)
        kind = {1: "int", 2: "name", 3: "op"}[m.lastindex]
        tokens.append(Token(kind, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


# ---------------------------------------------------------------------------
# parser


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    # token helpers ---------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _is(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "name") and t.text == text

    def _advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def _error(self, message: str, expected=(), tok: Token | None = None):
        tok = tok or self.tok
        raise ExprSyntaxError(f"{message}, found {_describe(tok)}", self.text, tok.pos, expected)

    def _expect(self, text: str) -> Token:
        if not self._is(text):
            self._error(f"expected {text!r}", [repr(text)])
        return self._advance()

    def _close(self, opener: Token) -> None:
        if not self._is(")"):
            tok = self.tok
            raise ExprSyntaxError(
                f"unclosed '(', found {_describe(tok)} at column {tok.pos + 1}",
                self.text,
                opener.pos,
                ["')'"],
            )
        self._advance()

    # grammar -------------------------------------------------------------------

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "eof":
            self._error("unexpected token", ["'+'", "'-'", "'*'", "'/'", "end of input"])
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._is("+") or self._is("-"):
            op = self._advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self._is("*") or self._is("/"):
            op = self._advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self._is("-"):
            self._advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self._is("^"):
            self._advance()
            e = self.expo()
            if base == QPow(IndexPoly.const(1)):
                return QPow(e)
            return Pow(base, e)
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "int":
            self._advance()
            return Num(int(t.text))
        if t.kind == "name":
            if t.text == "q":
                self._advance()
                return QPow(IndexPoly.const(1))
            if t.text == "sum":
                return self.sum()
            if t.text in FUNCTIONS:
                return self.call()
            if t.text == "inf":
                self._error("'inf' is only valid as a Pochhammer length", ["expression"])
            self._error(f"index {t.text!r} may only appear in exponents and lengths", ["expression"])
        if self._is("("):
            return self.paren()
        self._error("expected an expression", ["integer", "'q'", "'('", "function name", "'sum'"])

    def paren(self) -> Node:
        opener = self._advance()
        first = self.expr()
        if self._is(",") or self._is(";"):
            bases = [self._monomial(first, opener)]
            while self._is(","):
                self._advance()
                start = self.tok
                bases.append(self._monomial(self.expr(), start))
            self._expect(";")
            step_tok = self.tok
            step = self._monomial(self.expr(), step_tok)
            if not step.exp.is_const() or step.exp.constant <= 0:
                raise ExprSyntaxError(
                    "Pochhammer step must be a fixed positive power of q", self.text, step_tok.pos
                )
            self._close(opener)
            self._expect("_")
            return Poch(tuple(bases), step, self.length())
        self._close(opener)
        return first

    def length(self) -> Optional[IndexPoly]:
        t = self.tok
        if t.kind == "name" and t.text == "inf":
            self._advance()
            return None
        if t.kind == "int":
            self._advance()
            return IndexPoly.const(int(t.text))
        if t.kind == "name" and t.text not in RESERVED:
            self._advance()
            return IndexPoly.var(t.text)
        if self._is("("):
            opener = self._advance()
            p = self.poly()
            self._close(opener)
            return p
        self._error("expected a Pochhammer length", ["'inf'", "integer", "index name", "'('"])

    def expo(self) -> IndexPoly:
        t = self.tok
        if t.kind == "int":
            self._advance()
            return IndexPoly.const(int(t.text))
        if self._is("-"):
            self._advance()
            t = self.tok
            if t.kind != "int":
                self._error("expected an integer exponent", ["integer"])
            self._advance()
            return IndexPoly.const(-int(t.text))
        if t.kind == "name" and t.text not in RESERVED:
            self._advance()
            return IndexPoly.var(t.text)
        if self._is("("):
            opener = self._advance()
            p = self.poly()
            self._close(opener)
            return p
        self._error("expected an exponent", ["integer", "'-'", "index name", "'('"])

    # polynomial sub-grammar ---------------------------------------------------

    def poly(self) -> IndexPoly:
        p = self.pterm()
        while self._is("+") or self._is("-"):
            op = self._advance().text
            rhs = self.pterm()
            p = p + rhs if op == "+" else p - rhs
        return p

    def pterm(self) -> IndexPoly:
        p = self.pfactor()
        while self._is("*") or self._is("/"):
            op_tok = self._advance()
            rhs = self.pfactor()
            if op_tok.text == "*":
                p = p * rhs
            else:
                if not rhs.is_const() or rhs.constant == 0:
                    raise ExprSyntaxError(
                        "exponents may only be divided by nonzero constants", self.text, op_tok.pos
                    )
                p = p / rhs
        return p

    def pfactor(self) -> IndexPoly:
        if self._is("-"):
            self._advance()
            return -self.pfactor()
        t = self.tok
        if t.kind == "int":
            self._advance()
            p = IndexPoly.const(int(t.text))
        elif t.kind == "name" and t.text not in RESERVED:
            self._advance()
            p = IndexPoly.var(t.text)
        elif self._is("("):
            opener = self._advance()
            p = self.poly()
            self._close(opener)
        else:
            self._error("expected a polynomial term", ["integer", "index name", "'('"])
        if self._is("^"):
            self._advance()
            t = self.tok
            if t.kind != "int":
                self._error("polynomial powers must be nonnegative integers", ["integer"])
            self._advance()
            p = p ** int(t.text)
        return p

    # functions and sums ---------------------------------------------------------

    def call(self) -> Call:
        name_tok = self._advance()
        opener = self._expect("(")
        args = []
        start = self.tok
        args.append(self._monomial(self.expr(), start))
        while self._is(","):
            self._advance()
            start = self.tok
            args.append(self._monomial(self.expr(), start))
        self._close(opener)
        want = FUNCTIONS[name_tok.text]
        if len(args) != want:
            raise ExprSyntaxError(
                f"{name_tok.text} takes {want} argument(s), got {len(args)}", self.text, name_tok.pos
            )
        return Call(name_tok.text, tuple(args))

    def sum(self) -> Sum:
        self._advance()
        opener = self._expect("(")
        t = self.tok
        if t.kind != "name" or t.text in RESERVED:
            self._error("expected a summation index", ["index name"])
        var = self._advance().text
        self._expect(">=")
        t = self.tok
        neg = False
        if self._is("-"):
            self._advance()
            neg = True
            t = self.tok
        if t.kind != "int":
            self._error("expected the starting index", ["integer"])
        start = int(self._advance().text) * (-1 if neg else 1)
        self._expect(",")
        body = self.expr()
        self._close(opener)
        return Sum(var, start, body)

    def _monomial(self, node: Node, tok: Token) -> MonoT:
        m = to_monomial(node)
        if m is None:
            raise ExprSyntaxError("expected a monomial such as -q^(3/2)", self.text, tok.pos, ["monomial"])
        return m


def to_monomial(node: Node) -> Optional[MonoT]:
    """Fold a constant-coefficient power of q into a :class:`MonoT`, else ``None``."""
    if isinstance(node, Num):
        return MonoT(Fraction(node.value), IndexPoly()) if node.value else None
    if isinstance(node, QPow):
        return MonoT(Fraction(1), node.exp)
    if isinstance(node, Neg):
        m = to_monomial(node.arg)
        return MonoT(-m.coeff, m.exp) if m else None
    if isinstance(node, BinOp) and node.op in "*/":
        a, b = to_monomial(node.left), to_monomial(node.right)
        if a is None or b is None:
            return None
        if node.op == "*":
            return MonoT(a.coeff * b.coeff, a.exp + b.exp)
        return MonoT(a.coeff / b.coeff, a.exp - b.exp)
    if isinstance(node, Pow) and node.exp.is_const() and node.exp.constant.denominator == 1:
        m = to_monomial(node.base)
        if m is None:
            return None
        k = int(node.exp.constant)
        return MonoT(m.coeff**k, m.exp * k)
    return None


def parse(text: str) -> Node:
    """Parse text into an AST; raises :class:`ExprSyntaxError` with position info."""
    return Parser(text).parse()


# ---------------------------------------------------------------------------
# renderer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _render_expo(p: IndexPoly) -> str:
    if p.is_const():
        c = p.constant
        if c.denominator == 1 and c >= 0:
            return str(c.numerator)
    if len(p.terms) == 1:
        key, c = p.terms[0]
        if c == 1 and len(key) == 1 and key[0][1] == 1:
            return key[0][0]
    return f"({p.render()})"


def _render_q(exp: IndexPoly) -> str:
    if exp == IndexPoly.const(1):
        return "q"
    return "q^" + _render_expo(exp)


def render_monomial(m: MonoT) -> str:
    c = m.coeff
    if m.exp == IndexPoly():
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    body = _render_q(m.exp)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return f"{cs}*{body}"


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow) or (isinstance(node, QPow) and node.exp != IndexPoly.const(1)):
        return 4
    return 5


def render(node: Node) -> str:
    """Canonical text; ``parse(render(ast)) == ast`` for every AST."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, QPow):
        return _render_q(node.exp)
    if isinstance(node, Neg):
        inner = render(node.arg)
        return "-" + (inner if _prec(node.arg) >= 3 else f"({inner})")
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left = render(node.left)
        if _prec(node.left) < p:
            left = f"({left})"
        right = render(node.right)
        if _prec(node.right) <= p:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    if isinstance(node, Pow):
        base = render(node.base)
        if _prec(node.base) < 5:
            base = f"({base})"
        e = node.exp
        if e.is_const() and e.constant < 0 and e.constant.denominator == 1:
            return f"{base}^({e.constant.numerator})"
        return f"{base}^{_render_expo(e)}"
    if isinstance(node, Poch):
        bases = ",".join(render_monomial(b) for b in node.bases)
        if node.length is None:
            length = "inf"
        else:
            length = _render_expo(node.length) if not (
                node.length.is_const() and node.length.constant < 0
            ) else f"({node.length.render()})"
        return f"({bases};{render_monomial(node.step)})_{length}"
    if isinstance(node, Call):
        return f"{node.name}({','.join(render_monomial(a) for a in node.args)})"
    if isinstance(node, Sum):
        return f"sum({node.var}>={node.start}, {render(node.body)})"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# evaluator

Env = Dict[str, int]
_MAX_TERMS = 100_000


def _int_power(p: IndexPoly, env: Env) -> int:
    k = p(env)
    if k.denominator != 1:
        raise DomainViolation(f"power {k} is not an integer")
    return int(k)


def _flatten(node: Node, power: int, env: Env, fp: FactorProduct, deferred: list) -> None:
    if isinstance(node, BinOp) and node.op in "*/":
        _flatten(node.left, power, env, fp, deferred)
        _flatten(node.right, power if node.op == "*" else -power, env, fp, deferred)
    elif isinstance(node, Neg):
        fp.scalar(-1 if power % 2 else 1)
        _flatten(node.arg, power, env, fp, deferred)
    elif isinstance(node, Pow):
        _flatten(node.base, power * _int_power(node.exp, env), env, fp, deferred)
    elif isinstance(node, Num):
        if node.value == 0 and power < 0:
            raise ZeroDivisionError("division by zero in expression")
        fp.scalar(Fraction(node.value) ** power)
    elif isinstance(node, QPow):
        fp.monomial(Monomial(1, node.exp(env)), power)
    elif isinstance(node, Poch):
        step = node.step.at(env)
        length = None if node.length is None else _int_power(node.length, env)
        for b in node.bases:
            base = b.at(env)
            if length is None and base.exp == 0 and base.coeff == 1:
                raise DivergentBase(f"(1;q)_inf in {render(node)}")
            if length is None and base.exp < 0:
                raise DomainViolation(f"infinite product base {base} has negative exponent")
            fp.poch(base, step, length, power)
    else:
        deferred.append((node, power))


def _flat(node: Node, env: Env):
    fp = FactorProduct()
    deferred: list = []
    _flatten(node, 1, env, fp, deferred)
    return fp, deferred


def _eval(node: Node, order: Fraction, env: Env) -> QSeries:
    if isinstance(node, BinOp) and node.op in "+-":
        a = _eval(node.left, order, env)
        b = _eval(node.right, order, env)
        return a + b if node.op == "+" else a - b
    if isinstance(node, Sum):
        return _eval_sum(node, order, env)
    if isinstance(node, Call):
        return _eval_call(node, order, env)
    fp, deferred = _flat(node, env)
    return _finish_product(fp, deferred, order, env)


def _finish_product(fp: FactorProduct, deferred: list, order: Fraction, env: Env) -> QSeries:
    if fp.is_zero():
        return QSeries.zero(order)
    if not deferred:
        return fp.build(order)
    base_exp = fp.exp
    values = []
    for sub, p in deferred:
        values.append(_eval(sub, order - base_exp, env))
    # deferred factors shift the valuation; re-expand any that are too coarse
    final_exp = base_exp
    for s, (sub, p) in zip(values, deferred):
        if s.is_zero():
            if p > 0:
                return QSeries.zero(order)
            s = _find_valuation(sub, s.order, env)
        final_exp += s.valuation() * p
    for idx, (s, (sub, p)) in enumerate(zip(values, deferred)):
        if s.is_zero():
            s = _find_valuation(sub, s.order, env)
        need = order - final_exp + s.valuation()
        if s.order < need:
            s = _eval(sub, need, env)
        values[idx] = s
    for s, (_, p) in zip(values, deferred):
        fp.series(s, p)
    return fp.build(order)


def _find_valuation(node: Node, start: Fraction, env: Env) -> QSeries:
    order = max(start, Fraction(1))
    for _ in range(12):
        order *= 2
        s = _eval(node, order, env)
        if not s.is_zero():
            return s
    raise ZeroLeadingTerm(f"cannot divide by {render(node)}: zero to order {order}")


def _eval_call(node: Call, order: Fraction, env: Env) -> QSeries:
    args = [a.at(env) for a in node.args]
    if node.name == "f":
        return theta_f(args[0], args[1], order)
    if node.name == "Psi":
        return false_theta(args[0], args[1], order)
    if node.name == "phi":
        return phi(args[0], order)
    if node.name == "psi":
        return psi(args[0], order)
    if node.name == "fneg":
        return f_neg(args[0], order)
    raise ValueError(f"unknown function {node.name}")


def _lower_valuation(node: Node, env: Env) -> Optional[Fraction]:
    """Cheap exact valuation for sums of monomials, else ``None``."""
    m = to_monomial(node) if not isinstance(node, (Sum, Call, Poch)) else None
    if m is not None:
        return m.exp(env)
    if isinstance(node, BinOp) and node.op in "+-":
        a, b = _lower_valuation(node.left, env), _lower_valuation(node.right, env)
        if a is None or b is None or a == b:
            return None
        return min(a, b)
    return None


def _term_valuation(fp: FactorProduct, deferred: list, order: Fraction, env: Env):
    """Valuation of a summand, or ``None`` when it needs full expansion to tell."""
    if fp.is_zero():
        return None
    v = fp.exp
    for sub, p in deferred:
        lv = _lower_valuation(sub, env)
        if lv is None:
            return None
        v += lv * p
    return v


def _eval_sum(node: Sum, order: Fraction, env: Env) -> QSeries:
    terms = []
    # valuations of recent summands; None marks a summand that vanishes identically
    history: List[Optional[Fraction]] = []
    n = node.start
    for _ in range(_MAX_TERMS):
        local = dict(env)
        local[node.var] = n
        fp, deferred = _flat(node.body, local)
        v = None if fp.is_zero() else _term_valuation(fp, deferred, order, local)
        if v is None and not fp.is_zero():
            t = _finish_product(fp, deferred, order, local)
            if not t.is_zero():
                v = t.valuation()
                terms.append(t)
            else:
                v = order
        elif v is not None and v < order:
            terms.append(_finish_product(fp, deferred, order, local))
        history.append(v)
        if len(history) >= 3 and _settled(history[-3:], order):
            break
        n += 1
    else:
        raise NonTerminating(f"sum over {node.var} did not reach order {order}")
    return series_sum(terms, order)


def _settled(last: List[Optional[Fraction]], order: Fraction) -> bool:
    """True once summands sit past ``order`` and their exponents grow convexly."""
    a, b, c = last
    if c is not None and c < order:
        return False
    if b is not None and b < order:
        return False
    if None in last:
        return True
    return c >= b and c - b >= b - a


def grid_hint(node: Node) -> int:
    """2 when a half-integer (or finer) exponent coefficient appears, else 1."""
    dens = set()

    def poly(p: Optional[IndexPoly]):
        if p is not None:
            for _, c in p.terms:
                dens.add(c.denominator)

    def walk(n: Node):
        if isinstance(n, QPow):
            poly(n.exp)
        elif isinstance(n, (Neg,)):
            walk(n.arg)
        elif isinstance(n, BinOp):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Pow):
            walk(n.base)
        elif isinstance(n, Poch):
            for b in n.bases:
                poly(b.exp)
            poly(n.step.exp)
        elif isinstance(n, Call):
            for a in n.args:
                poly(a.exp)
        elif isinstance(n, Sum):
            walk(n.body)

    walk(node)
    return 2 if any(d > 1 for d in dens) else 1


def expand(expr: Union[str, Node], order, env: Env | None = None) -> QSeries:
    """Expand an expression (text or AST) to a series truncated at exactly ``order``."""
    node = parse(expr) if isinstance(expr, str) else expr
    order = as_fraction(order)
    env = dict(env or {})
    work = order
    for _ in range(8):
        s = _eval(node, work, env)
        if s.order >= order:
            return s.truncate(order)
        work += order - s.order + 1
    raise ZeroLeadingTerm(f"could not reach order {order} for {render(node)}")
