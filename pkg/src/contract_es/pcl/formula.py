"""Propositional contract logic formulas and the contract encoding.

Linear syntax, loosest to tightest binding::

    f -> g        implication (right associative)
    f -->> g      contractual implication (right associative)
    f /\\ g        conjunction (right associative)
    P says f      indexed modality, binds like a prefix operator
    T             truth
    a             atom

``T`` and ``says`` are reserved words; atoms spelled that way cannot be
written in this syntax.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Union

from ..model import Contract, Kind


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Truth:
    def __str__(self) -> str:
        return "T"


@dataclass(frozen=True)
class Conj:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"{_wrap(self.left)} /\\ {_wrap(self.right)}"


@dataclass(frozen=True)
class Impl:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"{_wrap(self.left)} -> {_wrap(self.right)}"


@dataclass(frozen=True)
class CImpl:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"{_wrap(self.left)} -->> {_wrap(self.right)}"


@dataclass(frozen=True)
class Says:
    principal: str
    body: Formula

    def __str__(self) -> str:
        return f"{self.principal} says {_wrap(self.body)}"


Formula = Union[Atom, Truth, Conj, Impl, CImpl, Says]

TRUTH = Truth()


def _wrap(f: Formula) -> str:
    return str(f) if isinstance(f, (Atom, Truth)) else f"({f})"


def conj(operands: Iterable[Formula]) -> Formula:
    """Right-associated conjunction of the operands sorted by their text; T if empty."""
    ops = sorted(set(operands), key=str)
    if not ops:
        return TRUTH
    return reduce(lambda acc, f: Conj(f, acc), reversed(ops[:-1]), ops[-1])


def conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, Conj):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


def says_atom(c: Contract, event: str) -> Says:
    return Says(c.owner[event], Atom(event))


def encode(c: Contract) -> Formula:
    """Map a contract to the conjunction of its encoded clauses.

    A clause ``D o a`` becomes ``owner(a) says ((/\\ owner(d) says d) op a)``
    with ``op`` = ``->`` for standard and ``-->>`` for circular enablings.
    """
    parts = []
    for cl in c.clauses:
        premise = conj(says_atom(c, d) for d in cl.premises)
        op = Impl if cl.kind is Kind.STANDARD else CImpl
        parts.append(Says(c.owner[cl.target], op(premise, Atom(cl.target))))
    return conj(parts)


def is_1n_pcl(f: Formula) -> bool:
    """Well-formedness for the fragment produced by :func:`encode`:
    atoms, truth, conjunctions, says, and implications whose sides
    contain no implication."""

    def flat(g: Formula) -> bool:
        if isinstance(g, (Atom, Truth)):
            return True
        if isinstance(g, Conj):
            return flat(g.left) and flat(g.right)
        if isinstance(g, Says):
            return flat(g.body)
        return False

    def top(g: Formula) -> bool:
        if isinstance(g, (Impl, CImpl)):
            return flat(g.left) and flat(g.right)
        if isinstance(g, Conj):
            return top(g.left) and top(g.right)
        if isinstance(g, Says):
            return top(g.body)
        return flat(g)

    return top(f)


# --------------------------------------------------------------------------
# Parser

_TOKEN = re.compile(r"\s*(-->>|->|/\\|\(|\)|[A-Za-z0-9_]+)")


class FormulaSyntaxError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character at column {pos + 1}: {text[pos:]!r}")
        tokens.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    return tokens


def parse_formula(text: str) -> Formula:
    tokens = _tokenize(text)
    pos = 0

    def peek(offset: int = 0) -> str | None:
        i = pos + offset
        return tokens[i][0] if i < len(tokens) else None

    def expect(tok: str) -> None:
        nonlocal pos
        if peek() != tok:
            where = f"column {tokens[pos][1]}" if pos < len(tokens) else "end of input"
            raise FormulaSyntaxError(f"expected {tok!r} at {where}")
        pos += 1

    def implication() -> Formula:
        nonlocal pos
        left = conjunction()
        if peek() == "->":
            pos += 1
            return Impl(left, implication())
        if peek() == "-->>":
            pos += 1
            return CImpl(left, implication())
        return left

    def conjunction() -> Formula:
        nonlocal pos
        left = unary()
        if peek() == "/\\":
            pos += 1
            return Conj(left, conjunction())
        return left

    def unary() -> Formula:
        nonlocal pos
        tok = peek()
        if tok == "(":
            pos += 1
            inner = implication()
            expect(")")
            return inner
        if tok is None or not re.fullmatch(r"[A-Za-z0-9_]+", tok) or tok == "says":
            where = f"column {tokens[pos][1]}" if pos < len(tokens) else "end of input"
            raise FormulaSyntaxError(f"expected a formula at {where}")
        pos += 1
        if tok == "T":
            return TRUTH
        if peek() == "says":
            pos += 1
            return Says(tok, unary())
        return Atom(tok)

    result = implication()
    if pos != len(tokens):
        raise FormulaSyntaxError(f"unexpected {tokens[pos][0]!r} at column {tokens[pos][1]}")
    return result
