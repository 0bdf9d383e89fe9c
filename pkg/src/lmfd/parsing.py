"""Parse equation text back into a canonical structure plus bindings.

The accepted language is exactly the one the renderer produces: the 55
canonical structures over arbitrary sensor identifiers, with constants either
as numeric literals or as unassigned slot ids (c1..c5).  General arithmetic
is rejected so that externally supplied equations can never score shapes
outside the search space.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import EquationSyntaxError, NotInGrammar, UnknownFunction, ValueOutOfBounds
from .grammar import (
    S1,
    S2,
    SLOT_IDS,
    Add,
    ConstSlot,
    Div,
    EquationStructure,
    Ewma,
    Exp,
    ExprNode,
    Mul,
    Scale,
    Sensor,
    Sigmoid,
    enumerate_structures,
)

_FUNCTIONS = {"sigmoid": 1, "exp": 1, "ewma": 2}

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_-]*)"
    r"|(?P<symbol>[()+*/,\-])"
    r")"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "ident" | "symbol" | "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.lastgroup is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise EquationSyntaxError(f"unexpected character {stripped[0]!r}", at)
        tokens.append(_Token(match.lastgroup, match.group(match.lastgroup), match.start(match.lastgroup)))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


# parsed-surface nodes, matched against canonical structures afterwards
@dataclass(frozen=True)
class _PNum:
    value: float
    is_int: bool
    pos: int


@dataclass(frozen=True)
class _PIdent:
    name: str
    pos: int


@dataclass(frozen=True)
class _PCall:
    func: str
    args: tuple
    pos: int


@dataclass(frozen=True)
class _PBin:
    op: str
    left: object
    right: object
    pos: int


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        token = self.tokens[self.i]
        self.i += 1
        return token

    def expect(self, text: str) -> _Token:
        token = self.peek()
        if token.kind != "symbol" or token.text != text:
            raise EquationSyntaxError(
                f"expected {text!r}, found {token.text!r}" if token.text else f"expected {text!r}",
                token.pos,
            )
        return self.advance()

    def parse(self):
        node = self.sum()
        token = self.peek()
        if token.kind != "end":
            raise EquationSyntaxError(f"unexpected trailing {token.text!r}", token.pos)
        return node

    def sum(self):
        node = self.product()
        while self.peek().kind == "symbol" and self.peek().text == "+":
            op = self.advance()
            node = _PBin("+", node, self.product(), op.pos)
        return node

    def product(self):
        node = self.atom()
        while self.peek().kind == "symbol" and self.peek().text in ("*", "/"):
            op = self.advance()
            node = _PBin(op.text, node, self.atom(), op.pos)
        return node

    def atom(self):
        token = self.peek()
        if token.kind == "number":
            self.advance()
            is_int = "." not in token.text and "e" not in token.text.lower()
            return _PNum(float(token.text), is_int, token.pos)
        if token.kind == "symbol" and token.text == "-":
            self.advance()
            number = self.peek()
            if number.kind != "number":
                raise EquationSyntaxError("'-' must be followed by a number", token.pos)
            self.advance()
            is_int = "." not in number.text and "e" not in number.text.lower()
            return _PNum(-float(number.text), is_int, token.pos)
        if token.kind == "ident":
            self.advance()
            if self.peek().kind == "symbol" and self.peek().text == "(":
                if token.text not in _FUNCTIONS:
                    raise UnknownFunction(
                        f"unknown function {token.text!r}; expected sigmoid, exp, or ewma"
                    )
                self.advance()
                args = [self.sum()]
                while self.peek().kind == "symbol" and self.peek().text == ",":
                    self.advance()
                    args.append(self.sum())
                self.expect(")")
                if len(args) != _FUNCTIONS[token.text]:
                    raise EquationSyntaxError(
                        f"{token.text} takes {_FUNCTIONS[token.text]} argument(s), got {len(args)}",
                        token.pos,
                    )
                return _PCall(token.text, tuple(args), token.pos)
            return _PIdent(token.text, token.pos)
        raise EquationSyntaxError(
            f"unexpected {token.text!r}" if token.text else "unexpected end of input",
            token.pos,
        )


class _Mismatch(Exception):
    pass


def _match_const(slot: ConstSlot, pnode, values: dict) -> None:
    if isinstance(pnode, _PIdent) and pnode.name == slot.id:
        return  # unassigned slot marker
    if isinstance(pnode, _PNum):
        if slot.kind == "span" and not pnode.is_int:
            raise _Mismatch
        try:
            slot.check(pnode.value)
        except ValueOutOfBounds:
            raise _Mismatch from None
        values[slot.id] = int(pnode.value) if slot.kind == "span" else pnode.value
        return
    raise _Mismatch


def _match(snode: ExprNode, pnode, roles: dict, values: dict) -> None:
    if isinstance(snode, Sensor):
        if not isinstance(pnode, _PIdent) or pnode.name in SLOT_IDS:
            raise _Mismatch
        bound = roles.get(snode.role)
        if bound is None:
            roles[snode.role] = pnode.name
        elif bound != pnode.name:
            raise _Mismatch
        return
    if isinstance(snode, Sigmoid):
        if not isinstance(pnode, _PCall) or pnode.func != "sigmoid":
            raise _Mismatch
        _match(snode.child, pnode.args[0], roles, values)
        return
    if isinstance(snode, Exp):
        if not isinstance(pnode, _PCall) or pnode.func != "exp":
            raise _Mismatch
        arg = pnode.args[0]
        if not isinstance(arg, _PBin) or arg.op != "*":
            raise _Mismatch
        _match_const(snode.scale, arg.left, values)
        _match(snode.child, arg.right, roles, values)
        return
    if isinstance(snode, Ewma):
        if not isinstance(pnode, _PCall) or pnode.func != "ewma":
            raise _Mismatch
        _match(snode.child, pnode.args[0], roles, values)
        _match_const(snode.span, pnode.args[1], values)
        return
    if isinstance(snode, Scale):
        if not isinstance(pnode, _PBin) or pnode.op != "*":
            raise _Mismatch
        _match_const(snode.coeff, pnode.left, values)
        _match(snode.child, pnode.right, roles, values)
        return
    op = {Add: "+", Mul: "*", Div: "/"}[type(snode)]
    if not isinstance(pnode, _PBin) or pnode.op != op:
        raise _Mismatch
    _match(snode.left, pnode.left, roles, values)
    _match(snode.right, pnode.right, roles, values)


def _placeholder_agreement(roles: dict) -> int:
    score = 0
    for role, name in roles.items():
        canonical = S1 if role == S1 else S2
        other = S2 if role == S1 else S1
        if name == canonical:
            score += 1
        elif name == other:
            score -= 1
    return score


def parse(text: str) -> tuple[EquationStructure, dict, dict]:
    """Parse equation text into (structure, constant values, role names).

    Values map slot ids to numbers (missing ids were left unassigned as
    c1..c5); names map the roles "s1"/"s2" to sensor identifiers (None for a
    role the structure does not read).  When the text admits more than one
    canonical reading (possible only when both operands name the same
    sensor), the reading that keeps placeholder names on their own roles
    wins, then the lowest structure id.
    """
    pnode = _Parser(text).parse()
    matches = []
    for structure in enumerate_structures():
        roles: dict = {}
        values: dict = {}
        try:
            _match(structure.root, pnode, roles, values)
        except _Mismatch:
            continue
        matches.append((structure, values, roles))
    if not matches:
        raise NotInGrammar(
            f"equation {text!r} is not one of the 55 canonical structures "
            "(check functor nesting, scaling positions, and constant ranges)"
        )
    structure, values, roles = max(
        matches, key=lambda m: (_placeholder_agreement(m[2]), -m[0].structure_id)
    )
    names = {S1: roles.get(S1), S2: roles.get(S2)}
    return structure, values, names
