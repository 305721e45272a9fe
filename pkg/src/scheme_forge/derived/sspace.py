"""The sets H(beta) and C(beta) behind the S-space constructions."""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Any

from ..errors import DomainExceeded
from ..metric import delta, rho
from ..ordinals import Ordinal, ordinal_to_json
from ..scheme import SchemeHandle

__all__ = ["SSpaceSets", "h_set", "c_set", "c_k_set", "s_space_sets"]

_memo: "weakref.WeakKeyDictionary[SchemeHandle, dict]" = weakref.WeakKeyDictionary()


def _finite(h: SchemeHandle, beta: Ordinal) -> int:
    h.check(beta)
    if not isinstance(beta, int):
        raise DomainExceeded("these sets are enumerated for finite points only")
    return beta


def h_set(h: SchemeHandle, beta: Ordinal) -> frozenset[int]:
    """Points below beta whose distance to beta equals their first norm difference."""
    b = _finite(h, beta)
    return frozenset(a for a in range(b) if rho(h, a, b) == delta(h, a, b))


def c_set(h: SchemeHandle, beta: Ordinal) -> frozenset[int]:
    """beta together with the points that reach it through a closest member of H(beta)."""
    b = _finite(h, beta)
    table = _memo.setdefault(h, {})
    got = table.get(b)
    if got is not None:
        return got
    H = sorted(h_set(h, b))
    rivals = H + [b]
    out = {b}
    for a in range(b):
        for g in H:
            if a not in c_set(h, g):
                continue
            dg = delta(h, a, g)
            if all(dg > delta(h, a, x) for x in rivals if x != g):
                out.add(a)
                break
    res = frozenset(out)
    table[b] = res
    return res


def c_k_set(h: SchemeHandle, beta: Ordinal, k: int) -> frozenset[int]:
    return frozenset(a for a in c_set(h, beta) if delta(h, a, beta) >= k)


@dataclass(frozen=True)
class SSpaceSets:
    beta: int
    k: int
    H: frozenset[int]
    C: frozenset[int]
    C_k: frozenset[int]

    def to_json(self) -> dict[str, Any]:
        return {
            "beta": ordinal_to_json(self.beta),
            "k": self.k,
            "H": sorted(self.H),
            "C": sorted(self.C),
            "C_k": sorted(self.C_k),
        }


def s_space_sets(h: SchemeHandle, beta: Ordinal, k: int = 0) -> SSpaceSets:
    return SSpaceSets(beta, k, h_set(h, beta), c_set(h, beta), c_k_set(h, beta, k))
