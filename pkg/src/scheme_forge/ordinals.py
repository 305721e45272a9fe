"""Ordinals below omega*Q and finite sets of them.

Finite ordinals are plain ``int`` values.  Ordinals at or above omega are
``Ord(block, offset)`` standing for omega*block + offset with block >= 1.
The two kinds compare with each other in the natural way, so a sorted
tuple of mixed values is a valid finite ordinal set.
"""

from __future__ import annotations

import functools
import re
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "Ord",
    "Ordinal",
    "ordinal",
    "block_of",
    "offset_of",
    "succ",
    "add",
    "fin_set",
    "ordinals_below",
    "parse_ordinal",
    "ordinal_to_json",
    "ordinal_from_json",
    "format_ordinal",
]


@functools.total_ordering
class Ord:
    """omega*block + offset, for block >= 1."""

    __slots__ = ("block", "offset")

    def __init__(self, block: int, offset: int = 0) -> None:
        if block < 1 or offset < 0:
            raise ValueError(f"Ord needs block >= 1 and offset >= 0, got ({block}, {offset})")
        self.block = int(block)
        self.offset = int(offset)

    def _key(self) -> tuple[int, int]:
        return (self.block, self.offset)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Ord):
            return self._key() == other._key()
        return False

    def __lt__(self, other: object) -> bool:
        if isinstance(other, Ord):
            return self._key() < other._key()
        if isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, Ord):
            return self._key() > other._key()
        if isinstance(other, int):
            return True
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Ord", self.block, self.offset))

    def __repr__(self) -> str:
        return format_ordinal(self)


Ordinal = Union[int, Ord]


def ordinal(block: int, offset: int = 0) -> Ordinal:
    """Normalising constructor: block 0 gives a plain int."""
    if block == 0:
        return int(offset)
    return Ord(block, offset)


def block_of(x: Ordinal) -> int:
    return x.block if isinstance(x, Ord) else 0


def offset_of(x: Ordinal) -> int:
    return x.offset if isinstance(x, Ord) else int(x)


def add(x: Ordinal, n: int) -> Ordinal:
    """x + n for a natural number n."""
    return ordinal(block_of(x), offset_of(x) + n)


def succ(x: Ordinal) -> Ordinal:
    return add(x, 1)


def fin_set(xs: Iterable[Ordinal]) -> tuple[Ordinal, ...]:
    """Strictly increasing tuple of the given ordinals."""
    return tuple(sorted(set(xs)))


def ordinals_below(bound: Ordinal, start: Ordinal = 0) -> Iterator[Ordinal]:
    """Ordinals in [start, bound) in increasing order.

    When a whole omega-block lies inside the window the iterator is
    infinite, so callers must pick ``start`` in the top block.
    """
    b, i = block_of(start), offset_of(start)
    while (b, i) < (block_of(bound), offset_of(bound)):
        yield ordinal(b, i)
        i += 1


_ORD_RE = re.compile(r"^\s*(?:w(?:\*(\d+))?|omega(?:\*(\d+))?)\s*(?:\+\s*(\d+))?\s*$")


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``7``, ``w``, ``w+3``, ``w*2+1`` (``omega`` works in place of ``w``)."""
    text = str(text).strip()
    if text.isdigit():
        return int(text)
    m = _ORD_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse ordinal {text!r}")
    q = int(m.group(1) or m.group(2) or 1)
    i = int(m.group(3) or 0)
    return ordinal(q, i)


def format_ordinal(x: Ordinal) -> str:
    if not isinstance(x, Ord):
        return str(x)
    head = "w" if x.block == 1 else f"w*{x.block}"
    return head if x.offset == 0 else f"{head}+{x.offset}"


def ordinal_to_json(x: Ordinal) -> int | list[int]:
    """ints stay ints; Ord becomes [block, offset]."""
    if isinstance(x, Ord):
        return [x.block, x.offset]
    return int(x)


def ordinal_from_json(v: int | str | Sequence[int]) -> Ordinal:
    """Inverse of ordinal_to_json; the text form ("w*2+3") is accepted too."""
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return parse_ordinal(v)
    b, i = v
    return ordinal(int(b), int(i))
