"""Text grammar for polynomials and input documents.

One grammar serves input files, JSON-embedded polynomials, and test
fixtures. Identifiers are x<k> (states), u<k> (controls), y<k> (auxiliary,
certificates only); a derivative is written with repeated primes or ^(j);
coefficients are integers or a/b; operators + - * ^ with nonnegative integer
exponents; multiplication is always explicit; # starts a line comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .diffcore import order_of
from .reduce import GeneralSystem, SemiexplicitSystem
from .ring import AUX, CONTROL, STATE, DiffPoly, JetVar, poly_to_text

_IDENT_RE = re.compile(r"^([xuy])([1-9][0-9]*)$")
_KEYWORDS = {"states", "controls", "ode", "eq", "diff", "claim"}


class InputError(Exception):
    """Base for input-language errors; carries position and a kind tag."""

    kind = "input"

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class LexicalError(InputError):
    kind = "lexical"


class GrammarError(InputError):
    kind = "syntax"


class UndeclaredIdentifierError(InputError):
    kind = "undeclared-identifier"


class NonSemiexplicitError(InputError):
    kind = "non-semiexplicit"


@dataclass(frozen=True)
class _Token:
    type: str
    value: str
    line: int
    col: int


_SYMBOLS = {"+": "PLUS", "-": "MINUS", "*": "STAR", "^": "CARET",
            "/": "SLASH", "(": "LPAREN", ")": "RPAREN", "=": "EQ",
            ",": "COMMA", ";": "SEMI", ":": "COLON", "'": "PRIME"}


def _tokenize(text: str):
    tokens = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "\n":
            tokens.append(_Token("NEWLINE", "\n", line, col))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("WORD", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _SYMBOLS:
            tokens.append(_Token(_SYMBOLS[ch], ch, line, col))
            i += 1
            col += 1
            continue
        raise LexicalError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens, declared: Optional[dict] = None):
        self.tokens = tokens
        self.pos = 0
        # declared: (family, index) -> declaration order; None = free-form
        self.declared = declared

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, type_: str) -> _Token:
        tok = self.peek()
        if tok.type != type_:
            raise GrammarError(f"expected {type_}, found {tok.value!r}",
                               tok.line, tok.col)
        return self.next()

    def skip_separators(self):
        while self.peek().type in ("NEWLINE", "SEMI"):
            self.next()

    # -- polynomial grammar ------------------------------------------------

    def parse_ident(self) -> JetVar:
        tok = self.expect("WORD")
        m = _IDENT_RE.match(tok.value)
        if not m:
            raise GrammarError(f"bad identifier {tok.value!r}", tok.line, tok.col)
        family, index = m.group(1), int(m.group(2))
        if self.declared is not None and (family, index) not in self.declared:
            raise UndeclaredIdentifierError(
                f"identifier {tok.value!r} was not declared", tok.line, tok.col)
        der = 0
        while True:
            if self.peek().type == "PRIME":
                self.next()
                der += 1
                continue
            if self.peek().type == "CARET" and self.peek(1).type == "LPAREN":
                self.next()
                self.next()
                j = self.expect("INT")
                self.expect("RPAREN")
                der += int(j.value)
                continue
            break
        return JetVar(family, index, der)

    def parse_atom(self) -> DiffPoly:
        tok = self.peek()
        if tok.type == "INT":
            self.next()
            num = int(tok.value)
            if self.peek().type == "SLASH":
                self.next()
                den_tok = self.expect("INT")
                den = int(den_tok.value)
                if den == 0:
                    raise GrammarError("zero denominator", den_tok.line, den_tok.col)
                return DiffPoly.const(Fraction(num, den))
            return DiffPoly.const(num)
        if tok.type == "WORD":
            return DiffPoly.var(self.parse_ident())
        if tok.type == "LPAREN":
            self.next()
            p = self.parse_expr()
            self.expect("RPAREN")
            return p
        raise GrammarError(f"expected a term, found {tok.value!r}",
                           tok.line, tok.col)

    def parse_factor(self) -> DiffPoly:
        p = self.parse_atom()
        if self.peek().type == "CARET":
            self.next()
            e = self.expect("INT")
            p = p ** int(e.value)
        return p

    def parse_term(self) -> DiffPoly:
        p = self.parse_factor()
        while self.peek().type == "STAR":
            self.next()
            p = p * self.parse_factor()
        return p

    def parse_expr(self) -> DiffPoly:
        negate = False
        if self.peek().type == "MINUS":
            self.next()
            negate = True
        p = self.parse_term()
        if negate:
            p = -p
        while self.peek().type in ("PLUS", "MINUS"):
            op = self.next().type
            q = self.parse_term()
            p = p + q if op == "PLUS" else p - q
        return p


def parse_poly(text: str) -> DiffPoly:
    """Parse a single polynomial (free-form: no declarations needed)."""
    parser = _Parser(_tokenize(text))
    parser.skip_separators()
    p = parser.parse_expr()
    parser.skip_separators()
    tok = parser.peek()
    if tok.type != "EOF":
        raise GrammarError(f"unexpected trailing input {tok.value!r}",
                           tok.line, tok.col)
    return p


@dataclass(frozen=True)
class InputDocument:
    """A parsed system: declared variables, ode/eq/diff equation lines, and an
    optional claim polynomial. Certificate generator indices refer to
    family() order: ode lines first (x_i' - rhs), then eq lines, then diff
    lines, each in source order."""

    states: tuple       # declared state indices
    controls: tuple     # declared control indices
    odes: tuple         # (state index, rhs DiffPoly) in source order
    constraints: tuple  # eq: polynomials
    general: tuple      # diff: polynomials
    claim: Optional[DiffPoly] = None

    def family(self) -> tuple:
        fam = [DiffPoly.var(JetVar(STATE, i, 1)) - rhs for i, rhs in self.odes]
        return tuple(fam) + tuple(self.constraints) + tuple(self.general)

    def semiexplicit(self) -> SemiexplicitSystem:
        if self.general:
            raise NonSemiexplicitError(
                "diff: lines are not part of a semiexplicit system", 0, 0)
        rhs_by_state = dict(self.odes)
        missing = [i for i in self.states if i not in rhs_by_state]
        if missing:
            raise NonSemiexplicitError(
                f"state x{missing[0]} has no ode line", 0, 0)
        for g in self.constraints:
            if order_of(g) > 0:
                raise NonSemiexplicitError(
                    "constraints of a semiexplicit system are derivative-free",
                    0, 0)
        return SemiexplicitSystem(
            tuple(JetVar(STATE, i) for i in self.states),
            tuple(JetVar(CONTROL, i) for i in self.controls),
            tuple(rhs_by_state[i] for i in self.states),
            tuple(self.constraints))

    def general_system(self) -> GeneralSystem:
        if self.controls:
            raise NonSemiexplicitError(
                "order reduction ranges over state variables only", 0, 0)
        eqs = [DiffPoly.var(JetVar(STATE, i, 1)) - rhs for i, rhs in self.odes]
        eqs += list(self.constraints) + list(self.general)
        n = max(self.states) if self.states else 1
        return GeneralSystem.of(tuple(eqs), n=n)


def parse_document(text: str) -> InputDocument:
    tokens = _tokenize(text)
    declared: dict = {}
    states: list = []
    controls: list = []
    odes: list = []
    constraints: list = []
    general: list = []
    claim: Optional[DiffPoly] = None
    parser = _Parser(tokens, declared)
    parser.skip_separators()
    while parser.peek().type != "EOF":
        tok = parser.expect("WORD")
        word = tok.value
        if word not in _KEYWORDS:
            raise GrammarError(f"expected a statement keyword, found {word!r}",
                               tok.line, tok.col)
        if word in ("states", "controls"):
            family = STATE if word == "states" else CONTROL
            while True:
                ident = parser.expect("WORD")
                m = _IDENT_RE.match(ident.value)
                if not m or m.group(1) != family:
                    raise GrammarError(
                        f"{word} are declared with the {family!r} prefix",
                        ident.line, ident.col)
                index = int(m.group(2))
                if (family, index) in declared:
                    raise GrammarError(f"{ident.value} declared twice",
                                       ident.line, ident.col)
                declared[(family, index)] = len(declared)
                (states if family == STATE else controls).append(index)
                if parser.peek().type == "COMMA":
                    parser.next()
                    continue
                break
        elif word == "ode":
            parser.expect("COLON")
            lhs_tok = parser.peek()
            lhs = parser.parse_ident()
            if lhs.family != STATE or lhs.der_order != 1:
                raise NonSemiexplicitError(
                    "ode left sides are first derivatives of states",
                    lhs_tok.line, lhs_tok.col)
            if any(i == lhs.index for i, _ in odes):
                raise NonSemiexplicitError(
                    f"duplicate ode for x{lhs.index}", lhs_tok.line, lhs_tok.col)
            parser.expect("EQ")
            rhs = parser.parse_expr()
            if order_of(rhs) > 0:
                raise NonSemiexplicitError(
                    "ode right-hand sides are derivative-free",
                    lhs_tok.line, lhs_tok.col)
            odes.append((lhs.index, rhs))
        elif word == "eq":
            parser.expect("COLON")
            constraints.append(parser.parse_expr())
        elif word == "diff":
            parser.expect("COLON")
            general.append(parser.parse_expr())
        elif word == "claim":
            parser.expect("COLON")
            if claim is not None:
                raise GrammarError("only one claim is allowed", tok.line, tok.col)
            claim = parser.parse_expr()
        nxt = parser.peek()
        if nxt.type not in ("NEWLINE", "SEMI", "EOF"):
            raise GrammarError(f"unexpected {nxt.value!r} after statement",
                               nxt.line, nxt.col)
        parser.skip_separators()
    return InputDocument(tuple(states), tuple(controls), tuple(odes),
                         tuple(constraints), tuple(general), claim)


def document_to_text(doc: InputDocument) -> str:
    lines = []
    if doc.states:
        lines.append("states " + ", ".join(f"x{i}" for i in doc.states) + ";")
    if doc.controls:
        lines.append("controls " + ", ".join(f"u{i}" for i in doc.controls) + ";")
    for i, rhs in doc.odes:
        lines.append(f"ode: x{i}' = {poly_to_text(rhs)};")
    for g in doc.constraints:
        lines.append(f"eq: {poly_to_text(g)};")
    for g in doc.general:
        lines.append(f"diff: {poly_to_text(g)};")
    if doc.claim is not None:
        lines.append(f"claim: {poly_to_text(doc.claim)};")
    return "\n".join(lines) + "\n"


def system_to_document(sys: SemiexplicitSystem) -> InputDocument:
    return InputDocument(
        states=tuple(v.index for v in sys.states),
        controls=tuple(v.index for v in sys.controls),
        odes=tuple((v.index, rhs) for v, rhs in zip(sys.states, sys.ode_rhs)),
        constraints=tuple(sys.constraints),
        general=(),
        claim=None)
