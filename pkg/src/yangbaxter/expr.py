"""A small arithmetic language for spectral-parameter dependent entries.

Grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | pow
    pow    := atom ('^' integer)?
    atom   := number | identifier | '(' expr ')'

``^`` binds tighter than unary minus, so ``-t^2`` is ``-(t^2)``. Exponents are
non-negative integer literals. The identifier ``i`` is the imaginary unit.

>>> evaluate(parse("2*t^2/(q-p)"), {"t": 1, "q": 3, "p": 1})
(1+0j)
"""

import re
from dataclasses import dataclass, field

from .errors import DivisionNearZero, ParseError, ReservedName, UnboundIdentifier

DIVISION_THRESHOLD = 1e-12
IMAGINARY_UNIT = "i"
RESERVED = frozenset({"i", "u", "v"})

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)

_BINARY = {"+": "add", "-": "sub", "*": "mul", "/": "div"}
_SYMBOL = {v: k for k, v in _BINARY.items()}


@dataclass(frozen=True)
class Node:
    """Expression tree node.

    ``kind`` is one of number, identifier, negate, add, sub, mul, div, pow.
    ``value`` holds the literal (number) or name (identifier). Spans are
    excluded from equality so reparsed trees compare equal.
    """

    kind: str
    value: object = None
    children: tuple = ()
    span: tuple = field(default=(0, 0), compare=False)

    def __str__(self):
        return to_source(self)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    start: int

    @property
    def end(self):
        return self.start + len(self.text)


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def offset(self):
        tok = self.peek()
        return tok.start if tok is not None else len(self.text)

    def fail(self, expected):
        tok = self.peek()
        found = f"{tok.text!r}" if tok is not None else "end of input"
        raise ParseError(f"expected {expected}, found {found}", self.offset(), self.text)

    def take(self, kind=None, text=None):
        tok = self.peek()
        if tok is None or (kind and tok.kind != kind) or (text and tok.text != text):
            return None
        self.pos += 1
        return tok

    def parse(self):
        if not self.tokens:
            self.fail("an expression")
        node = self.expr()
        if self.peek() is not None:
            self.fail("an operator or end of input")
        return node

    def expr(self):
        left = self.term()
        while (tok := self.peek()) is not None and tok.text in "+-" and tok.kind == "op":
            self.pos += 1
            right = self.term()
            left = Node(_BINARY[tok.text], children=(left, right), span=(left.span[0], right.span[1]))
        return left

    def term(self):
        left = self.factor()
        while (tok := self.peek()) is not None and tok.text in "*/" and tok.kind == "op":
            self.pos += 1
            right = self.factor()
            left = Node(_BINARY[tok.text], children=(left, right), span=(left.span[0], right.span[1]))
        return left

    def factor(self):
        tok = self.take("op", "-")
        if tok is not None:
            operand = self.factor()
            return Node("negate", children=(operand,), span=(tok.start, operand.span[1]))
        return self.power()

    def power(self):
        base = self.atom()
        if self.take("op", "^") is None:
            return base
        tok = self.peek()
        if tok is None or tok.kind != "number" or not tok.text.isdigit():
            self.fail("an integer exponent")
        self.pos += 1
        exponent = Node("number", int(tok.text), span=(tok.start, tok.end))
        return Node("pow", children=(base, exponent), span=(base.span[0], tok.end))

    def atom(self):
        tok = self.peek()
        if tok is None:
            self.fail("a number, identifier or '('")
        if tok.kind == "number":
            self.pos += 1
            value = int(tok.text) if tok.text.isdigit() else float(tok.text)
            return Node("number", value, span=(tok.start, tok.end))
        if tok.kind == "ident":
            self.pos += 1
            return Node("identifier", tok.text, span=(tok.start, tok.end))
        if tok.text == "(":
            self.pos += 1
            inner = self.expr()
            close = self.take("op", ")")
            if close is None:
                self.fail("')'")
            return Node(inner.kind, inner.value, inner.children, span=(tok.start, close.end))
        self.fail("a number, identifier or '('")


def parse(text):
    """Parse ``text`` into a :class:`Node`; raises :class:`ParseError`."""
    return _Parser(text).parse()


def identifiers(node):
    """Set of identifier names used in ``node`` (excluding ``i``)."""
    if node.kind == "identifier":
        return set() if node.value == IMAGINARY_UNIT else {node.value}
    out = set()
    for child in node.children:
        out |= identifiers(child)
    return out


def check_bindings(env):
    if IMAGINARY_UNIT in env and env[IMAGINARY_UNIT] != 1j:
        raise ReservedName("'i' is the imaginary unit and cannot be rebound")


def evaluate(node, env):
    """Evaluate ``node`` with complex arithmetic under bindings ``env``."""
    check_bindings(env)
    return complex(_eval(node, env))


def _eval(node, env):
    kind = node.kind
    if kind == "number":
        return node.value
    if kind == "identifier":
        if node.value == IMAGINARY_UNIT:
            return 1j
        try:
            return env[node.value]
        except KeyError:
            raise UnboundIdentifier(node.value, node.span) from None
    if kind == "negate":
        return -_eval(node.children[0], env)
    if kind == "pow":
        return _ipow(complex(_eval(node.children[0], env)), node.children[1].value)
    a = _eval(node.children[0], env)
    b = _eval(node.children[1], env)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        if abs(b) < DIVISION_THRESHOLD:
            raise DivisionNearZero(node.children[1].span, b)
        return a / b
    raise ValueError(f"unknown node kind {kind!r}")


def _ipow(base, n):
    result = 1 + 0j
    while n:
        if n & 1:
            result *= base
        base *= base
        n >>= 1
    return result


def to_source(node):
    """Print ``node`` back to text that reparses to an equal tree."""
    kind = node.kind
    if kind == "number":
        return repr(node.value)
    if kind == "identifier":
        return node.value
    if kind == "negate":
        return f"(-{to_source(node.children[0])})"
    if kind == "pow":
        return f"({to_source(node.children[0])}^{node.children[1].value})"
    a, b = node.children
    return f"({to_source(a)} {_SYMBOL[kind]} {to_source(b)})"


def compile_expr(text_or_node, constants=None, param="u"):
    """Return ``f(u)`` evaluating the expression with fixed constants."""
    node = parse(text_or_node) if isinstance(text_or_node, str) else text_or_node
    env = dict(constants or {})
    check_bindings(env)

    def f(u):
        return complex(_eval(node, {**env, param: u}))

    f.node = node
    return f
