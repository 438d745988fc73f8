"""Text form of bipartite Fock states.

Grammar::

    expr   := sign? term (('+' | '-') term)*
    term   := scalar? factor (('*' | 'x') factor)*
    factor := ket | '(' expr ')'
    ket    := '|' occ_list ';' occ_list '>'
    scalar := number ('/' number)? ('/' 'sqrt' int)?
    number := integer | decimal

``*`` and ``x`` between factors are the party-wise tensor product, so
``|0;1> x |1;0>`` is ``|0,1;1,0>``. Alice's occupations precede ``;``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import EmptyStateError, ParseError
from .fock import BasisLabel, ModeLayout, PureState, from_amplitudes, tensor

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<sqrt>sqrt)
  | (?P<op>[|;,>()+\-*/x])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for i, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line, line_start = line + 1, i + 1
        else:
            tokens.append(Token(kind if kind != "op" else m.group(), m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def parse(self) -> PureState:
        if self.tok.kind == "eof":
            self.fail("empty expression")
        state = self.expr()
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}")
        return state

    def expr(self) -> PureState:
        sign = 1.0
        if self.tok.kind in "+-":
            sign = -1.0 if self.advance().kind == "-" else 1.0
        start = self.tok
        acc = self.term().scaled(sign)
        while self.tok.kind in ("+", "-"):
            op = self.advance()
            t0 = self.tok
            nxt = self.term()
            if nxt.layout != acc.layout:
                self.fail(
                    f"mode-count mismatch: {nxt.layout.alice_modes}+{nxt.layout.bob_modes} vs "
                    f"{acc.layout.alice_modes}+{acc.layout.bob_modes} (expression starts at column {start.col})",
                    t0,
                )
            acc = acc + (nxt.scaled(-1.0) if op.kind == "-" else nxt)
        return acc

    def term(self) -> PureState:
        coeff = self.scalar() if self.tok.kind == "num" else 1.0
        state = self.factor()
        while self.tok.kind in ("*", "x"):
            self.advance()
            state = tensor(state, self.factor())
        return state.scaled(coeff)

    def factor(self) -> PureState:
        if self.tok.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if self.tok.kind == "|":
            return self.ket()
        self.fail(f"expected a ket or '(', found {self.tok.text or 'end of input'!r}")

    def scalar(self) -> float:
        value = self.number()
        if self.tok.kind == "/" and self.tokens[self.i + 1].kind == "num":
            self.advance()
            den_tok = self.tok
            den = self.number()
            if den == 0:
                self.fail("division by zero", den_tok)
            value /= den
        if self.tok.kind == "/" and self.tokens[self.i + 1].kind == "sqrt":
            self.advance()
            self.advance()
            paren = self.tok.kind == "("
            if paren:
                self.advance()
            arg_tok = self.tok
            arg = self.integer()
            if paren:
                self.expect(")")
            if arg == 0:
                self.fail("division by sqrt(0)", arg_tok)
            value /= math.sqrt(arg)
        return value

    def number(self) -> float:
        return float(self.expect("num").text)

    def integer(self) -> int:
        tok = self.expect("num")
        if not tok.text.isdigit():
            self.fail(f"expected a non-negative integer, found {tok.text!r}", tok)
        return int(tok.text)

    def occ_list(self) -> tuple[int, ...]:
        occ = [self.integer()]
        while self.tok.kind == ",":
            self.advance()
            occ.append(self.integer())
        return tuple(occ)

    def ket(self) -> PureState:
        self.expect("|")
        alice = self.occ_list()
        self.expect(";")
        bob = self.occ_list()
        self.expect(">")
        return from_amplitudes(ModeLayout(len(alice), len(bob)), {BasisLabel(alice, bob): 1.0})


def parse_expression(text: str) -> PureState:
    """Parse without normalizing; the zero vector is returned as-is."""
    return _Parser(text).parse()


def parse_state(text: str) -> PureState:
    """Parse and normalize. Cancelling to zero raises :class:`EmptyStateError`."""
    raw = parse_expression(text)
    if raw.is_zero:
        raise EmptyStateError("expression evaluates to the zero state")
    return raw.normalize()


def render(psi: PureState) -> str:
    """Inverse of :func:`parse_expression` for real amplitudes (exact float round trip)."""
    if psi.is_zero:
        raise EmptyStateError("cannot render the zero state")
    parts = []
    for lab, amp in sorted(psi.amps.items()):
        if abs(amp.imag) > 0:
            raise ValueError(f"complex amplitude {amp} has no text form")
        v = amp.real
        sign = "-" if v < 0 else "+"
        parts.append((sign, f"{abs(v)!r} {lab}"))
    head_sign, head = parts[0]
    text = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text
