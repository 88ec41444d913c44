"""Full binary parenthesizations over row symbols ``x1 .. xm``."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from typing import Union

from ..errors import ParseError


@dataclass(frozen=True)
class Leaf:
    index: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.index, self.index)

    def __str__(self) -> str:
        return f"x{self.index}"


@dataclass(frozen=True)
class Node:
    left: "ParenTree"
    right: "ParenTree"

    @property
    def span(self) -> tuple[int, int]:
        return (self.left.span[0], self.right.span[1])

    def __str__(self) -> str:
        return f"({self.left} {self.right})"


ParenTree = Union[Leaf, Node]


def leaves(tree: ParenTree) -> list[int]:
    if isinstance(tree, Leaf):
        return [tree.index]
    return leaves(tree.left) + leaves(tree.right)


def internal_nodes(tree: ParenTree) -> Iterator[Node]:
    """Post-order, root last."""
    if isinstance(tree, Node):
        yield from internal_nodes(tree.left)
        yield from internal_nodes(tree.right)
        yield tree


def left_comb(m: int) -> ParenTree:
    """``((x1 x2) x3) ...``"""
    tree: ParenTree = Leaf(1)
    for i in range(2, m + 1):
        tree = Node(tree, Leaf(i))
    return tree


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.data = text.encode()
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, offset=self.pos)

    def skip(self) -> None:
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1].isspace():
            self.pos += 1

    def peek(self) -> bytes:
        self.skip()
        return self.data[self.pos : self.pos + 1]

    def factor(self) -> ParenTree:
        c = self.peek()
        if c == b"(":
            start = self.pos
            self.pos += 1
            items = self.sequence(b")")
            if self.peek() != b")":
                raise self.error(f"unclosed '(' opened at offset {start}")
            self.pos += 1
            if len(items) != 2:
                raise ParseError(f"parenthesis must group exactly two factors, found {len(items)}", offset=start)
            return Node(items[0], items[1])
        if c == b"x":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.data) and self.data[self.pos : self.pos + 1].isdigit():
                self.pos += 1
            if start == self.pos:
                raise self.error("expected digits after 'x'")
            return Leaf(int(self.data[start : self.pos]))
        if not c:
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected character {c.decode(errors='replace')!r}")

    def sequence(self, stop: bytes) -> list[ParenTree]:
        items = []
        while True:
            c = self.peek()
            if not c or c == stop:
                return items
            if c == b")":
                raise self.error("unbalanced ')'")
            items.append(self.factor())


def parse_paren(text: str, m: int | None = None) -> ParenTree:
    """Parse ``((x1 x2) x3)`` style text; a bare top level ``x1(x2 x3)`` is accepted too.

    Leaves must be ``x1 .. xm`` left to right. Errors carry the byte offset.
    """
    p = _Parser(text)
    items = p.sequence(b"")
    if p.pos < len(p.data):
        raise p.error("unbalanced ')'")
    if not items:
        raise ParseError("empty parenthesization", offset=0)
    if len(items) > 2:
        raise ParseError(f"top level must be one or two factors, found {len(items)}", offset=0)
    tree = items[0] if len(items) == 1 else Node(items[0], items[1])
    idx = leaves(tree)
    expected = list(range(1, len(idx) + 1))
    if idx != expected:
        raise ParseError(f"leaves must be x1..x{len(idx)} in order, got {' '.join('x%d' % i for i in idx)}", offset=0)
    if m is not None and len(idx) != m:
        raise ParseError(f"parenthesization has {len(idx)} leaves, table has {m} rows", offset=0)
    return tree
