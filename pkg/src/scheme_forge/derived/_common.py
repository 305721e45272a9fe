"""Small helpers shared by the derived structures."""

from __future__ import annotations

import math
from typing import Iterable

from ..errors import NotATwoType, TypeTooSmall
from ..scheme import SchemeHandle

__all__ = ["require_two_type", "binary_subset", "cantor_pair", "cantor_unpair", "require_exp_levels"]


def require_two_type(h: SchemeHandle, upto: int | None = None) -> None:
    if not h.t.is_two_type(upto):
        raise NotATwoType("this construction needs n_k = 2 on every level")


def binary_subset(i: int, base: Iterable[int]) -> frozenset[int]:
    """Subset of ``base`` coded by the bits of i, wrapping past the power set."""
    base = sorted(base)
    i %= 1 << len(base)
    return frozenset(x for b, x in enumerate(base) if (i >> b) & 1)


def require_exp_levels(h: SchemeHandle, k: int, relative_to_root: bool) -> None:
    """n_k must be large enough to index every subset of the relevant base."""
    t = h.t
    width = t.m(k - 1) - t.r(k) if relative_to_root else t.m(k - 1)
    if t.n(k) < 2 ** width + 1:
        raise TypeTooSmall(f"n_{k}={t.n(k)} is below 2^{width}+1")


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b
