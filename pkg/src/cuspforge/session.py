"""Plain-text session format: rings, polynomials, and ideals in ".cas" files.

A session declares one coefficient field, one ring, an order, and then named
bindings.  The expression grammar (normative):

    poly   := ['+'|'-'] term {('+'|'-') term}
    term   := factor {'*' factor}
    factor := atom ['^' nat]
    atom   := ident | nat | nat '/' nat | '(' poly ')'
    ident  := letter {letter | digit | '_'}

Whitespace is insignificant, '#' starts a line comment, multiplication is
always explicit.  Statements begin with one of the keywords `field`, `ring`,
`order`, `poly`, `ideal`; identifiers must be declared before use.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from cuspforge.fields import QQ, MinimalPolynomial, NumberField
from cuspforge.polys import (
    GREVLEX,
    MonomialOrder,
    PolyRing,
    Polynomial,
    format_polynomial,
    order_from_name,
)

_KEYWORDS = {"field", "ring", "order", "poly", "ideal"}


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    token: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message} (at {self.token!r})"


class ParseError(ValueError):
    def __init__(self, diagnostic: ParseDiagnostic):
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


@dataclass
class SessionDocument:
    field: object = QQ
    ring: PolyRing | None = None
    order: MonomialOrder = GREVLEX
    bindings: dict = dc_field(default_factory=dict)
    comments: list = dc_field(default_factory=list)

    def poly(self, name: str) -> Polynomial:
        v = self.bindings[name]
        if not isinstance(v, Polynomial):
            raise KeyError(f"{name!r} is not a polynomial binding")
        return v

    def ideal_gens(self, name: str) -> tuple:
        v = self.bindings[name]
        if isinstance(v, tuple):
            return v
        raise KeyError(f"{name!r} is not an ideal binding")


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_PUNCT = set("+-*^/(),=:[]")


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> list[_Token]:
    toks = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Token("nat", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            toks.append(_Token(ch, ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(ParseDiagnostic(line, start_col, "unexpected character", ch))
    toks.append(_Token("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.doc = SessionDocument()
        self.generator_name: str | None = None

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(ParseDiagnostic(tok.line, tok.col, message, tok.text))

    def expect(self, kind: str, what: str = "") -> _Token:
        t = self.peek()
        if t.kind != kind:
            self.fail(what or f"expected {kind!r}", t)
        return self.next()

    # -- statements ----------------------------------------------------------

    def parse(self) -> SessionDocument:
        while True:
            t = self.peek()
            if t.kind == "eof":
                break
            if t.kind != "ident" or t.text not in _KEYWORDS:
                self.fail("expected a statement keyword (field/ring/order/poly/ideal)")
            kw = self.next().text
            getattr(self, f"_stmt_{kw}")()
        return self.doc

    def _stmt_field(self):
        t = self.expect("ident", "expected field name")
        if t.text != "Q":
            self.fail("only Q and Q[a]/(m) fields are supported", t)
        if self.peek().kind != "[":
            self.doc.field = QQ
            return
        self.next()
        gen = self.expect("ident", "expected generator symbol")
        if gen.text in _KEYWORDS:
            self.fail("keyword cannot name the field generator", gen)
        self.expect("]")
        self.expect("/")
        self.expect("(")
        self.generator_name = gen.text
        temp_ring = PolyRing((gen.text,), QQ)
        modulus = self._expr(temp_ring, {})
        self.expect(")")
        try:
            coeffs = modulus.univariate_coeffs(gen.text)
            mp = MinimalPolynomial(gen.text, coeffs)
        except (ValueError, ZeroDivisionError) as exc:
            self.fail(f"bad modulus: {exc}", gen)
        self.doc.field = NumberField(mp)

    def _stmt_ring(self):
        names = [self.expect("ident", "expected variable name")]
        while self.peek().kind == ",":
            self.next()
            names.append(self.expect("ident", "expected variable name"))
        for t in names:
            if t.text in _KEYWORDS:
                self.fail("keyword cannot be a variable name", t)
            if self.generator_name == t.text:
                self.fail("variable shadows the field generator", t)
        seen = set()
        for t in names:
            if t.text in seen:
                self.fail("duplicate variable name", t)
            seen.add(t.text)
        self.doc.ring = PolyRing(tuple(t.text for t in names), self.doc.field)

    def _stmt_order(self):
        t = self.expect("ident", "expected order name")
        name = t.text
        if name == "block":
            self.expect(":")
            k = int(self.expect("nat", "expected block size").text)
            name = f"block:{k}"
        try:
            self.doc.order = order_from_name(name)
        except ValueError as exc:
            self.fail(str(exc), t)

    def _need_ring(self) -> PolyRing:
        if self.doc.ring is None:
            self.fail("ring must be declared before bindings")
        return self.doc.ring

    def _bind_name(self) -> str:
        t = self.expect("ident", "expected binding name")
        name = t.text
        ring = self._need_ring()
        if name in _KEYWORDS or name in ring._index or name == self.generator_name:
            self.fail("name collides with a keyword, variable, or generator", t)
        if name in self.doc.bindings:
            self.fail("name already bound", t)
        return name

    def _stmt_poly(self):
        name = self._bind_name()
        self.expect("=")
        self.doc.bindings[name] = self._expr(self._need_ring(), self.doc.bindings)

    def _stmt_ideal(self):
        name = self._bind_name()
        self.expect("=")
        gens = [self._expr(self._need_ring(), self.doc.bindings)]
        while self.peek().kind == ",":
            self.next()
            gens.append(self._expr(self._need_ring(), self.doc.bindings))
        self.doc.bindings[name] = tuple(gens)

    # -- expressions ----------------------------------------------------------

    def _expr(self, ring: PolyRing, env: dict) -> Polynomial:
        t = self.peek()
        negate = False
        if t.kind in "+-":
            self.next()
            negate = t.kind == "-"
        p = self._term(ring, env)
        if negate:
            p = -p
        while True:
            t = self.peek()
            if t.kind == "+":
                self.next()
                p = p + self._term(ring, env)
            elif t.kind == "-":
                self.next()
                p = p - self._term(ring, env)
            else:
                return p

    def _term(self, ring: PolyRing, env: dict) -> Polynomial:
        p = self._factor(ring, env)
        while self.peek().kind == "*":
            self.next()
            p = p * self._factor(ring, env)
        return p

    def _factor(self, ring: PolyRing, env: dict) -> Polynomial:
        p = self._atom(ring, env)
        if self.peek().kind == "^":
            self.next()
            e = self.expect("nat", "expected a natural-number exponent")
            p = p ** int(e.text)
        return p

    def _atom(self, ring: PolyRing, env: dict) -> Polynomial:
        t = self.next()
        if t.kind == "nat":
            num = int(t.text)
            if self.peek().kind == "/":
                self.next()
                den_tok = self.expect("nat", "expected a natural-number denominator")
                den = int(den_tok.text)
                if den == 0:
                    self.fail("zero denominator", den_tok)
                return ring.constant(Fraction(num, den))
            return ring.constant(num)
        if t.kind == "ident":
            name = t.text
            if name in _KEYWORDS:
                self.fail("keyword used as an identifier", t)
            if name in ring._index:
                return ring.var(name)
            if name == self.generator_name and isinstance(ring.field, NumberField):
                return ring.constant(ring.field.gen)
            if name in env:
                v = env[name]
                if not isinstance(v, Polynomial):
                    self.fail("ideal binding used inside an expression", t)
                return v
            self.fail("undeclared identifier", t)
        if t.kind == "(":
            p = self._expr(ring, env)
            self.expect(")")
            return p
        self.fail("expected an atom", t)


def parse_session(text: str) -> SessionDocument:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def print_canonical(value, order: MonomialOrder = GREVLEX) -> str:
    """Canonical text of a polynomial or of an ideal's generator list."""
    if isinstance(value, Polynomial):
        return format_polynomial(value, order)
    gens = getattr(value, "gens", None)
    if gens is not None and not callable(gens):
        seq = gens
    elif isinstance(value, (tuple, list)):
        seq = value
    else:
        raise TypeError(f"cannot print {type(value).__name__}")
    return ", ".join(format_polynomial(g, order) for g in seq)


def _field_decl(field) -> str:
    if isinstance(field, NumberField):
        m = field.minimal
        temp = PolyRing((m.symbol,), QQ)
        poly = temp.zero
        for i, c in enumerate(m.coeffs):
            if c:
                poly = poly + temp.monomial([i], c)
        return f"field Q[{m.symbol}]/({format_polynomial(poly)})"
    return "field Q"


def print_session(doc: SessionDocument) -> str:
    """Render a whole document back to source (used for checkpoint files)."""
    if doc.ring is None:
        raise ValueError("cannot print a session without a ring")
    lines = [f"# {c}" for c in doc.comments]
    lines.append(_field_decl(doc.field))
    lines.append("ring " + ",".join(doc.ring.vars))
    lines.append(f"order {doc.order!r}")
    for name, v in doc.bindings.items():
        if isinstance(v, Polynomial):
            lines.append(f"poly {name} = {format_polynomial(v, doc.order)}")
        else:
            body = ", ".join(format_polynomial(g, doc.order) for g in v)
            lines.append(f"ideal {name} = {body}")
    return "\n".join(lines) + "\n"
