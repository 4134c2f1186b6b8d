"""Lexer, recursive-descent parser and printer for wire-diagram expressions.

Grammar::

    expr   := term { ";" term }          sequential composition, left to right
    term   := factor { "*" factor }      vertical stacking (tensor product)
    factor := prim | IDENT | "(" expr ")"
    prim   := "id(" INT ")" | "cup(" INT ")" | "cap(" INT ")" | "swap(" INT "," INT ")"

``*`` binds tighter than ``;``; both are left associative. ``#`` starts a
comment that runs to the end of the line.
"""

import re
from dataclasses import dataclass, field, replace

from ..errors import ChoiscopeError

PRIMITIVES = {"id": 1, "cup": 1, "cap": 1, "swap": 2}


@dataclass(frozen=True)
class Span:
    start: int
    end: int


# Nodes compare structurally; spans and inferred wire types are annotations.


@dataclass(frozen=True)
class Prim:
    name: str
    args: tuple
    span: Span | None = field(default=None, compare=False, repr=False)
    dom: tuple | None = field(default=None, compare=False)
    cod: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Named:
    name: str
    span: Span | None = field(default=None, compare=False, repr=False)
    dom: tuple | None = field(default=None, compare=False)
    cod: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Seq:
    left: object
    right: object
    span: Span | None = field(default=None, compare=False, repr=False)
    dom: tuple | None = field(default=None, compare=False)
    cod: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Tensor:
    top: object
    bottom: object
    span: Span | None = field(default=None, compare=False, repr=False)
    dom: tuple | None = field(default=None, compare=False)
    cod: tuple | None = field(default=None, compare=False)


class DiagramSyntaxError(ChoiscopeError):
    """Lexical or syntax error with a 1-based source position."""

    def __init__(self, message, source, offset, expected=()):
        self.source = source
        self.offset = offset
        self.line, self.column = line_col(source, offset)
        self.expected = tuple(sorted(expected))
        self.detail = message
        exp = f"; expected one of {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"{self.line}:{self.column}: {message}{exp}")

    def caret(self):
        """The offending source line with a caret under the error column."""
        text = self.source.splitlines()[self.line - 1] if self.source.splitlines() else ""
        return f"{text}\n{' ' * (self.column - 1)}^"


def line_col(source, offset):
    line = source.count("\n", 0, offset) + 1
    col = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<int>[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[();*,])"
)


def tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise DiagramSyntaxError(f"unexpected character {source[pos]!r}", source, pos)
        kind = m.lastgroup
        if kind == "int":
            tokens.append(Token("INT", m.group(), pos))
        elif kind == "ident":
            tokens.append(Token("IDENT", m.group(), pos))
        elif kind == "punct":
            tokens.append(Token(m.group(), m.group(), pos))
        pos = m.end()
    tokens.append(Token("EOF", "", len(source)))
    return tokens


def _describe(tok):
    return "end of input" if tok.kind == "EOF" else repr(tok.text)


class _Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def tok(self):
        return self.tokens[self.pos]

    def error(self, expected):
        raise DiagramSyntaxError(f"unexpected {_describe(self.tok)}", self.source, self.tok.offset, expected)

    def expect(self, kind):
        tok = self.tok
        if tok.kind != kind:
            self.error({kind})
        self.pos += 1
        return tok

    def expr(self):
        node = self.term()
        while self.tok.kind == ";":
            self.pos += 1
            right = self.term()
            node = Seq(node, right, Span(node.span.start, right.span.end))
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind == "*":
            self.pos += 1
            bottom = self.factor()
            node = Tensor(node, bottom, Span(node.span.start, bottom.span.end))
        return node

    def factor(self):
        tok = self.tok
        if tok.kind == "(":
            self.pos += 1
            node = self.expr()
            close = self.expect(")")
            return _respan(node, Span(tok.offset, close.offset + 1))
        if tok.kind == "IDENT":
            self.pos += 1
            if tok.text in PRIMITIVES:
                return self.prim(tok)
            return Named(tok.text, Span(tok.offset, tok.offset + len(tok.text)))
        self.error({"(", "IDENT", *(f"{p}(" for p in PRIMITIVES)})

    def prim(self, head):
        self.expect("(")
        args = [self.positive_int()]
        for _ in range(PRIMITIVES[head.text] - 1):
            self.expect(",")
            args.append(self.positive_int())
        close = self.expect(")")
        return Prim(head.text, tuple(args), Span(head.offset, close.offset + 1))

    def positive_int(self):
        tok = self.expect("INT")
        value = int(tok.text)
        if value < 1:
            raise DiagramSyntaxError("wire dimension must be positive", self.source, tok.offset)
        return value


def _respan(node, span):
    return replace(node, span=span)


def parse(source):
    """Parse ``source`` into an untyped expression tree."""
    p = _Parser(source)
    node = p.expr()
    if p.tok.kind != "EOF":
        p.error({";", "*", "EOF"})
    return node


def to_text(node):
    """Canonical source text; ``parse(to_text(e)) == e``."""
    if isinstance(node, Prim):
        return f"{node.name}({','.join(map(str, node.args))})"
    if isinstance(node, Named):
        return node.name
    if isinstance(node, Seq):
        right = to_text(node.right)
        if isinstance(node.right, Seq):
            right = f"({right})"
        return f"{to_text(node.left)};{right}"
    if isinstance(node, Tensor):
        top, bottom = to_text(node.top), to_text(node.bottom)
        if isinstance(node.top, Seq):
            top = f"({top})"
        if isinstance(node.bottom, (Seq, Tensor)):
            bottom = f"({bottom})"
        return f"{top}*{bottom}"
    raise TypeError(f"not a diagram node: {node!r}")
