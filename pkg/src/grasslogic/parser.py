"""Text grammar for circuits and automaton words.

Circuits::

    expr := IDENT '(' args ')' | 'w' INT
    args := expr (',' expr)*

Words, one letter per line::

    letter := IDENT ['(' FLOAT ')']

Gate identifiers resolve against the gate registry.  Every diagnostic
carries a distinct code plus line, column, and the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .automaton import Letter, Word
from .compose import CircuitNode, Wire
from .gates import gate_arity, gate_names, is_parametric


class ParseError(Exception):
    """Diagnostic with a stable code and source position."""

    def __init__(self, code: str, message: str, line: int, col: int, token: str = ""):
        self.code = code
        self.line = line
        self.col = col
        self.token = token
        super().__init__(f"{code} at {line}:{col}: {message}" + (f" (near {token!r})" if token else ""))


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT, WIRE, NUMBER, LPAREN, RPAREN, COMMA
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<WS>[ \t]+)"
    r"|(?P<NUMBER>[-+]?\d+\.\d*(?:[eE][-+]?\d+)?|[-+]?\.\d+(?:[eE][-+]?\d+)?|[-+]?\d+[eE][-+]?\d+)"
    r"|(?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<INT>[-+]?\d+)"
    r"|(?P<LPAREN>\()"
    r"|(?P<RPAREN>\))"
    r"|(?P<COMMA>,)"
)


def _tokenize_line(text: str, line_no: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError("syntax", "unexpected character", line_no, pos + 1, text[pos])
        kind = m.lastgroup
        value = m.group()
        if kind != "WS":
            if kind == "IDENT" and re.fullmatch(r"w\d+", value):
                kind = "WIRE"
            if kind == "INT":
                kind = "NUMBER"
            tokens.append(_Token(kind, value, line_no, m.start() + 1))
        pos = m.end()
    return tokens


class _CircuitParser:
    def __init__(self, tokens: list[_Token], line_no: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line_no

    def _peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self, kind: str, what: str) -> _Token:
        tok = self._peek()
        if tok is None:
            raise ParseError("syntax", f"expected {what}", self.line, _end_col(self.tokens))
        if tok.kind != kind:
            raise ParseError("syntax", f"expected {what}", tok.line, tok.col, tok.text)
        self.pos += 1
        return tok

    def parse(self) -> CircuitNode | Wire:
        node = self._expr()
        tok = self._peek()
        if tok is not None:
            raise ParseError("syntax", "trailing input after expression", tok.line, tok.col, tok.text)
        return node

    def _expr(self) -> CircuitNode | Wire:
        tok = self._peek()
        if tok is None:
            raise ParseError("syntax", "expected an expression", self.line, _end_col(self.tokens))
        if tok.kind == "WIRE":
            self.pos += 1
            return Wire(int(tok.text[1:]))
        if tok.kind == "NUMBER":
            raise ParseError(
                "syntax", "numbers are only valid as word-letter parameters", tok.line, tok.col, tok.text
            )
        name_tok = self._next("IDENT", "a gate name")
        if name_tok.text not in gate_names():
            raise ParseError("unknown-gate", f"unknown gate {name_tok.text!r}", name_tok.line, name_tok.col, name_tok.text)
        if is_parametric(name_tok.text):
            raise ParseError(
                "bad-param",
                f"parametric gate {name_tok.text!r} belongs in word files, not circuits",
                name_tok.line,
                name_tok.col,
                name_tok.text,
            )
        self._next("LPAREN", "'('")
        children: list[CircuitNode | Wire] = [self._expr()]
        while True:
            tok = self._peek()
            if tok is not None and tok.kind == "COMMA":
                self.pos += 1
                children.append(self._expr())
                continue
            break
        rp = self._next("RPAREN", "')'")
        expected = gate_arity(name_tok.text)[0]
        if len(children) != expected:
            raise ParseError(
                "arity-mismatch",
                f"{name_tok.text} requires {expected} inputs, got {len(children)}",
                name_tok.line,
                name_tok.col,
                name_tok.text,
            )
        for child in children:
            if isinstance(child, CircuitNode) and gate_arity(child.gate_name)[1] != 1:
                raise ParseError(
                    "arity-mismatch",
                    f"{child.gate_name} has more than one output and cannot feed an input",
                    name_tok.line,
                    name_tok.col,
                    child.gate_name,
                )
        return CircuitNode(name_tok.text, tuple(children))


def _end_col(tokens: list[_Token]) -> int:
    if not tokens:
        return 1
    last = tokens[-1]
    return last.col + len(last.text)


def _validate_wire_order(node: CircuitNode, line: int) -> None:
    leaves: list[int] = []

    def walk(n):
        for child in n.children:
            if isinstance(child, Wire):
                leaves.append(child.index)
            else:
                walk(child)

    walk(node)
    if leaves != list(range(1, len(leaves) + 1)):
        raise ParseError(
            "wire-order",
            "wire indices must run w1, w2, ... consecutively from left to right",
            line,
            1,
        )


def parse_circuit_text(text: str) -> CircuitNode:
    lines = [(i + 1, s) for i, s in enumerate(text.splitlines()) if s.strip()]
    if not lines:
        raise ParseError("empty", "no input", 1, 1)
    if len(lines) > 1:
        raise ParseError("syntax", "a circuit is a single expression on one line", lines[1][0], 1)
    line_no, content = lines[0]
    tokens = _tokenize_line(content, line_no)
    node = _CircuitParser(tokens, line_no).parse()
    if isinstance(node, Wire):
        raise ParseError("syntax", "a bare wire is not a circuit", line_no, 1, f"w{node.index}")
    _validate_wire_order(node, line_no)
    return node


def _parse_letter(tokens: list[_Token], line_no: int) -> Letter:
    if not tokens or tokens[0].kind != "IDENT":
        tok = tokens[0] if tokens else None
        raise ParseError(
            "syntax",
            "each word line is a gate name with an optional parameter",
            line_no,
            tok.col if tok else 1,
            tok.text if tok else "",
        )
    name = tokens[0].text
    if name not in gate_names():
        raise ParseError("unknown-gate", f"unknown gate {name!r}", line_no, tokens[0].col, name)
    rest = tokens[1:]
    param = None
    if rest:
        if len(rest) != 3 or rest[0].kind != "LPAREN" or rest[2].kind != "RPAREN":
            raise ParseError("syntax", "expected '(' FLOAT ')'", line_no, rest[0].col, rest[0].text)
        if rest[1].kind != "NUMBER":
            raise ParseError("bad-number", f"malformed number {rest[1].text!r}", line_no, rest[1].col, rest[1].text)
        try:
            param = float(rest[1].text)
        except ValueError:
            raise ParseError("bad-number", f"malformed number {rest[1].text!r}", line_no, rest[1].col, rest[1].text)
    if is_parametric(name) and param is None:
        raise ParseError("bad-param", f"gate {name!r} requires a parameter", line_no, tokens[0].col, name)
    if not is_parametric(name) and param is not None:
        raise ParseError("bad-param", f"gate {name!r} takes no parameter", line_no, tokens[0].col, name)
    return Letter(name, param)


def parse_word_text(text: str) -> Word:
    letters = []
    for i, raw in enumerate(text.splitlines()):
        if not raw.strip():
            continue
        tokens = _tokenize_line(raw, i + 1)
        letters.append(_parse_letter(tokens, i + 1))
    if not letters:
        raise ParseError("empty", "no input", 1, 1)
    return tuple(letters)


def parse_text(text: str) -> CircuitNode | Word:
    """Parse either grammar: word lines when every line is a letter,
    otherwise a single circuit expression."""
    lines = [s for s in text.splitlines() if s.strip()]
    if not lines:
        raise ParseError("empty", "no input", 1, 1)
    if len(lines) > 1:
        return parse_word_text(text)
    tokens = _tokenize_line(lines[0], 1)
    looks_like_letter = bool(tokens) and tokens[0].kind == "IDENT" and (
        len(tokens) == 1
        or (
            len(tokens) == 4
            and tokens[1].kind == "LPAREN"
            and tokens[2].kind == "NUMBER"
            and tokens[3].kind == "RPAREN"
        )
    )
    if looks_like_letter:
        return parse_word_text(text)
    return parse_circuit_text(text)


def render_circuit(node: CircuitNode | Wire) -> str:
    if isinstance(node, Wire):
        return f"w{node.index}"
    args = ", ".join(render_circuit(child) for child in node.children)
    return f"{node.gate_name}({args})"
