"""Oscillations of the norm functions and the colorings built from them.

The norm function of alpha is l -> ||alpha||_l.  For alpha < beta the
function of alpha sits strictly below that of beta from rho(alpha, beta)
on, so every oscillation set is a subset of [k, rho) and is computed
exactly.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Sequence

from ..errors import BadOrder
from ..metric import rho
from ..ordinals import Ordinal, ordinal_to_json
from ..scheme import SchemeHandle
from ._common import cantor_pair, cantor_unpair

__all__ = [
    "OscRecord",
    "norm_function",
    "osc",
    "partition_lookup",
    "partition_interval",
    "color_o",
    "FiniteMap",
    "decode_list",
    "encode_list",
    "decode_map",
    "encode_map",
    "color_o_star",
    "DEFAULT_COLOR",
]

DEFAULT_COLOR = 17


def norm_function(h: SchemeHandle, alpha: Ordinal, upto: int) -> tuple[int, ...]:
    return tuple(h.norm(alpha, l) for l in range(upto))


@dataclass(frozen=True)
class OscRecord:
    alpha: Ordinal
    beta: Ordinal
    k: int
    points: tuple[int, ...]
    window: tuple[int, int]

    @property
    def count(self) -> int:
        return len(self.points)

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": ordinal_to_json(self.alpha),
            "beta": ordinal_to_json(self.beta),
            "k": self.k,
            "set": list(self.points),
            "count": self.count,
            "window": list(self.window),
        }


def osc(h: SchemeHandle, alpha: Ordinal, beta: Ordinal, k: int = 0) -> OscRecord:
    """Levels s >= k where the function of alpha crosses above that of beta at s + 1."""
    if alpha == beta:
        h.check(alpha)
        return OscRecord(alpha, beta, k, (), (k, k))
    top = rho(h, alpha, beta)
    pts = tuple(
        s
        for s in range(k, top)
        if h.norm(alpha, s) <= h.norm(beta, s) and h.norm(alpha, s + 1) > h.norm(beta, s + 1)
    )
    return OscRecord(alpha, beta, k, pts, (k, max(k, top)))


# ---------------------------------------------------------------- partition
#
# Pairs (n, k) are visited by n + k, then by n.  Each visit hands the whole
# interval [l, 2l + k] to block n, where l is the first unallocated integer.
# Hence every block contains such an interval for every k.

_intervals: list[tuple[int, int, int]] = []  # (start, stop inclusive, block)
_part_lock = threading.Lock()


def _pairs():
    s = 0
    while True:
        for n in range(s + 1):
            yield n, s - n
        s += 1


_pair_stream = _pairs()


def _grow_to(t: int) -> None:
    with _part_lock:
        while not _intervals or _intervals[-1][1] < t:
            l = _intervals[-1][1] + 1 if _intervals else 0
            n, k = next(_pair_stream)
            _intervals.append((l, 2 * l + k, n))


def partition_lookup(t: int) -> int:
    if t < 0:
        raise ValueError("the partition covers the natural numbers")
    _grow_to(t)
    lo, hi = 0, len(_intervals) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _intervals[mid][1] < t:
            lo = mid + 1
        else:
            hi = mid
    return _intervals[lo][2]


def partition_interval(n: int, k: int) -> tuple[int, int]:
    """The interval [l, 2l + k] handed to block n for the pair (n, k)."""
    s = n + k
    index = s * (s + 1) // 2 + n
    while len(_intervals) <= index:
        _grow_to(_intervals[-1][1] + 1 if _intervals else 0)
    start, stop, _ = _intervals[index]
    return start, stop


def color_o(h: SchemeHandle, alpha: Ordinal, beta: Ordinal) -> int:
    """Block of the oscillation number of the pair, taken in increasing order."""
    if alpha == beta:
        raise BadOrder("the coloring is defined on pairs of distinct points")
    a, b = sorted((alpha, beta))
    return partition_lookup(osc(h, a, b).count)


# ---------------------------------------------------------------- finite maps
#
# Layout of the code n of a finite map h_n:
#   * lists of naturals: 0 is the empty list, otherwise (head, tail) is the
#     Cantor unpairing of n - 1 and the tail is decoded recursively;
#   * decode n to a list L; d = L[0] (1 when L is empty) is the domain size;
#     the next d entries (0 when missing) are list codes of the domain
#     sequences, the following d * d entries (0 when missing) are the values
#     h(X[i], X[j]) stored row-major;
#   * a code whose domain is empty, repeats a sequence or contains two
#     comparable sequences decodes to None.


def decode_list(n: int) -> tuple[int, ...]:
    out = []
    while n:
        head, n = cantor_unpair(n - 1)
        out.append(head)
    return tuple(out)


def encode_list(items: Sequence[int]) -> int:
    n = 0
    for x in reversed(items):
        n = cantor_pair(x, n) + 1
    return n


@dataclass(frozen=True)
class FiniteMap:
    domain: tuple[tuple[int, ...], ...]
    values: tuple[int, ...]

    def at(self, i: int, j: int) -> int:
        return self.values[i * len(self.domain) + j]

    def find(self, f: Sequence[int]) -> int | None:
        """Index of the (unique) domain sequence that f extends."""
        for i, s in enumerate(self.domain):
            if len(s) <= len(f) and tuple(f[: len(s)]) == s:
                return i
        return None


def _comparable(s: tuple[int, ...], u: tuple[int, ...]) -> bool:
    n = min(len(s), len(u))
    return s[:n] == u[:n]


def decode_map(n: int) -> FiniteMap | None:
    L = decode_list(n)
    d = L[0] if L else 1
    if d == 0:
        return None
    body = L[1:]

    def get(i: int) -> int:
        return body[i] if i < len(body) else 0

    dom = tuple(decode_list(get(i)) for i in range(d))
    for i in range(d):
        for j in range(i + 1, d):
            if _comparable(dom[i], dom[j]):
                return None
    values = tuple(get(d + i) for i in range(d * d))
    return FiniteMap(dom, values)


def encode_map(domain: Sequence[Sequence[int]], values: Sequence[int]) -> int:
    """A code decoding back to the given map (not necessarily the least one)."""
    d = len(domain)
    if len(values) != d * d:
        raise ValueError("need d * d values")
    return encode_list([d] + [encode_list(s) for s in domain] + list(values))


def color_o_star(h: SchemeHandle, alpha: Ordinal, beta: Ordinal) -> int:
    """Value of the o-th finite map on the domain sequences extended by the norm functions."""
    if alpha == beta:
        raise BadOrder("the coloring is defined on pairs of distinct points")
    a, b = sorted((alpha, beta))
    fmap = decode_map(color_o(h, a, b))
    if fmap is None:
        return DEFAULT_COLOR
    depth = max(len(s) for s in fmap.domain)
    i = fmap.find(norm_function(h, a, depth))
    j = fmap.find(norm_function(h, b, depth))
    if i is None or j is None:
        return DEFAULT_COLOR
    return fmap.at(i, j)
