"""The Luzin-Jones family, its separators, Luzin representations and the
coherent family on an extended scheme.

Sets of triples are kept as unions of boxes {k} x [a0, a1) x [b0, b1) and
expanded to frozensets only on request; every fragment is exact on the
levels it covers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from ..errors import NotAnEmbedding, NotATwoType, OutOfDomain
from ..ordinals import Ordinal, ordinal_to_json
from ..scheme import SchemeHandle
from ._common import require_two_type

__all__ = [
    "Box",
    "LuzinFragment",
    "level_box",
    "a_box",
    "luzin_family",
    "jones_separator",
    "Poset",
    "luzin_representation",
    "coherent_family_eval",
    "coherent_domain",
]

Triple = tuple[int, int, int]


@dataclass(frozen=True)
class Box:
    k: int
    a: tuple[int, int]
    b: tuple[int, int]

    def points(self) -> frozenset[Triple]:
        return frozenset(
            (self.k, x, y) for x in range(self.a[0], self.a[1]) for y in range(self.b[0], self.b[1])
        )

    def to_json(self) -> list[Any]:
        return [self.k, list(self.a), list(self.b)]


def level_box(h: SchemeHandle, k: int) -> Box:
    """The block N_k = {k} x (m_{k-1} minus r_k) x [k m_{k-1}, k m_k)."""
    t = h.t
    return Box(k, (t.r(k), t.m(k - 1)), (k * t.m(k - 1), k * t.m(k)))


def a_box(h: SchemeHandle, alpha: Ordinal, k: int) -> Box | None:
    """The level-k part of the column of alpha, as a box (None when empty)."""
    t = h.t
    x = h.xi(alpha, k)
    if x == -1:
        return None
    nk = h.norm(alpha, k)
    if x == 0:
        return Box(k, (nk, nk + 1), (k * t.m(k - 1), k * t.m(k)))
    if x == 1:
        return Box(k, (t.r(k), t.m(k - 1)), (k * nk, k * nk + k))
    raise NotATwoType(f"piece index {x} does not occur in a 2-type")


def _union(boxes: Iterable[Box | None]) -> frozenset[Triple]:
    out: set[Triple] = set()
    for b in boxes:
        if b is not None:
            out |= b.points()
    return frozenset(out)


@dataclass(frozen=True)
class LuzinFragment:
    alpha: Ordinal
    K: int
    boxes: tuple[Box, ...]

    @property
    def points(self) -> frozenset[Triple]:
        return _union(self.boxes)

    def level(self, k: int) -> frozenset[Triple]:
        return _union(b for b in self.boxes if b.k == k)

    def to_json(self) -> dict[str, Any]:
        return {"alpha": ordinal_to_json(self.alpha), "K": self.K, "boxes": [b.to_json() for b in self.boxes]}


def luzin_family(h: SchemeHandle, alpha: Ordinal, K: int) -> LuzinFragment:
    """The column of alpha restricted to levels 1..K."""
    require_two_type(h, K)
    boxes = tuple(b for b in (a_box(h, alpha, k) for k in range(1, K + 1)) if b is not None)
    return LuzinFragment(alpha, K, boxes)


def jones_separator(h: SchemeHandle, beta: Ordinal, K: int) -> frozenset[Triple]:
    """Separator of the columns below beta, restricted to levels 1..K."""
    require_two_type(h, K)
    boxes = []
    for k in range(K):
        for xi_point in h.closure(beta, k):
            boxes.append(a_box(h, xi_point, k + 1))
    return _union(boxes)


@dataclass(frozen=True)
class Poset:
    """A finite partial order given by its strict relation pairs (closed transitively)."""

    elements: tuple[Hashable, ...]
    below: frozenset[tuple[Hashable, Hashable]]

    @classmethod
    def build(cls, elements: Iterable[Hashable], less: Iterable[tuple[Hashable, Hashable]]) -> "Poset":
        elems = tuple(elements)
        rel = set(less)
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c, d in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        if any(a == b for a, b in rel):
            raise ValueError("the relation has a cycle")
        return cls(elems, frozenset(rel))

    def lt(self, a: Hashable, b: Hashable) -> bool:
        return (a, b) in self.below

    def le(self, a: Hashable, b: Hashable) -> bool:
        return a == b or (a, b) in self.below


def luzin_representation(
    h: SchemeHandle, poset: Poset, phi: Mapping[Hashable, Ordinal], K: int
) -> dict[Hashable, dict[int, frozenset[Triple]]]:
    """Levelled pieces T^k_x for every x, for k < K (so up to column level K)."""
    require_two_type(h, K)
    values = [phi[x] for x in poset.elements]
    if len(set(values)) != len(values):
        raise NotAnEmbedding("the map into the ordinals is not injective")
    for a, b in poset.below:
        if not phi[a] < phi[b]:
            raise NotAnEmbedding(f"{a!r} < {b!r} but their images are not increasing")
    out: dict[Hashable, dict[int, frozenset[Triple]]] = {}
    for x in poset.elements:
        levels = {}
        for k in range(K):
            ball = h.closure_set(phi[x], k)
            M = [z for z in poset.elements if poset.le(z, x) and phi[z] in ball]
            levels[k] = _union(a_box(h, phi[z], k + 1) for z in M)
        out[x] = levels
    return out


def coherent_domain(h: SchemeHandle, alpha: Ordinal, point: Sequence[int]) -> bool:
    k, s, i, j = point
    if k < 1 or not (0 <= s < k):
        return False
    r = h.t.r(k)
    return h.xi(alpha, k) >= 0 and 0 <= i < r and 0 <= j < r


def coherent_family_eval(h: SchemeHandle, alpha: Ordinal, point: Sequence[int]) -> Ordinal:
    """Value of the coherent function of alpha at (k, s, i, j); OutOfDomain off its domain."""
    k = point[0]
    require_two_type(h, k)
    if isinstance(alpha, int):
        raise OutOfDomain("the coherent family is only indexed by infinite ordinals")
    if not coherent_domain(h, alpha, point):
        raise OutOfDomain(f"{tuple(point)} is outside the domain of the function of {alpha!r}")
    _, _, i, j = point
    ball = h.closure(alpha, k)
    return ball[i] if h.xi(alpha, k) == 0 else ball[j]
