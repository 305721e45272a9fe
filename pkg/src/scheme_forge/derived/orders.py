"""The Countryman order on the scheme and the special Aronszajn tree of
patched distance functions."""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from ..errors import DomainExceeded
from ..metric import delta, rho
from ..ordinals import Ordinal, format_ordinal, ordinal_to_json
from ..scheme import SchemeHandle

__all__ = [
    "CountrymanResult",
    "countryman_cmp",
    "countryman_less",
    "chain_class",
    "TreeNode",
    "aronszajn_node",
    "aronszajn_classify",
    "tree_leq",
]

LESS, GREATER, EQUAL = "Less", "Greater", "Equal"


@dataclass(frozen=True)
class CountrymanResult:
    order: str
    trace: tuple[tuple[Ordinal, Ordinal, int, str], ...]
    chain_key: tuple[int, int, int] | None

    def to_json(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "trace": [
                {"alpha": ordinal_to_json(a), "beta": ordinal_to_json(b), "level": k, "case": c}
                for a, b, k, c in self.trace
            ],
            "chain_key": None if self.chain_key is None else list(self.chain_key),
        }


# per-handle memo so that a dropped handle takes its table with it
_memo: "weakref.WeakKeyDictionary[SchemeHandle, dict]" = weakref.WeakKeyDictionary()


def _compare(h: SchemeHandle, a: Ordinal, b: Ordinal) -> tuple[bool, tuple]:
    """(a precedes b, trace) for a != b."""
    table = _memo.setdefault(h, {})
    key = (a, b)
    got = table.get(key)
    if got is not None:
        return got
    d = delta(h, a, b)
    k = int(d) - 1
    A, B = h.closure_set(a, k), h.closure_set(b, k)
    ca, cb = min(A - B), min(B - A)
    if h.norm(ca, k) == h.t.r(k + 1):
        out = (h.xi(a, k + 1) < h.xi(b, k + 1), ((a, b, k, "index"),))
    else:
        less, rest = _compare(h, ca, cb)
        out = (less, ((a, b, k, "recurse"),) + rest)
    table[key] = out
    return out


def chain_class(h: SchemeHandle, alpha: Ordinal, beta: Ordinal) -> tuple[int, int, int]:
    """Class of the pair (sorted by ordinal order): norms at the distance, and the distance."""
    a, b = sorted((alpha, beta))
    z = rho(h, a, b)
    return h.norm(a, z), h.norm(b, z), z


def countryman_cmp(h: SchemeHandle, alpha: Ordinal, beta: Ordinal) -> CountrymanResult:
    h.check(alpha)
    h.check(beta)
    if alpha == beta:
        return CountrymanResult(EQUAL, (), None)
    less, trace = _compare(h, alpha, beta)
    return CountrymanResult(LESS if less else GREATER, trace, chain_class(h, alpha, beta))


def countryman_less(h: SchemeHandle, alpha: Ordinal, beta: Ordinal) -> bool:
    return countryman_cmp(h, alpha, beta).order == LESS


# ---------------------------------------------------------------- tree


@dataclass(frozen=True)
class TreeNode:
    """The distance function to beta on beta + 1, overridden on a finite patch."""

    h: SchemeHandle = field(repr=False, compare=False)
    beta: Ordinal
    patch: tuple[tuple[Ordinal, int], ...]

    def value(self, x: Ordinal) -> int:
        if not x <= self.beta:
            raise DomainExceeded(f"{x!r} is above the top {self.beta!r} of this node")
        for y, v in self.patch:
            if y == x:
                return v
        return rho(self.h, x, self.beta)

    def support(self) -> tuple[Ordinal, ...]:
        """Points where the patch really changes the distance function."""
        return tuple(y for y, v in self.patch if v != rho(self.h, y, self.beta))

    def values(self) -> tuple[int, ...]:
        """All values on 0..beta (finite tops only)."""
        if not isinstance(self.beta, int):
            raise DomainExceeded("full value lists need a finite top")
        return tuple(self.value(x) for x in range(self.beta + 1))

    def to_json(self) -> dict[str, Any]:
        return {
            "beta": ordinal_to_json(self.beta),
            "patch": {format_ordinal(y): v for y, v in self.patch},
        }


def aronszajn_node(h: SchemeHandle, beta: Ordinal, patch: Mapping[Ordinal, int] | Iterable[tuple[Ordinal, int]] = ()) -> TreeNode:
    h.check(beta)
    items = dict(patch.items() if isinstance(patch, Mapping) else patch)
    for y, v in items.items():
        if not y <= beta:
            raise DomainExceeded(f"patch point {y!r} lies above {beta!r}")
        if v < 0:
            raise ValueError("patch values are levels, so nonnegative")
    return TreeNode(h, beta, tuple(sorted(items.items())))


def aronszajn_classify(node: TreeNode) -> tuple[int, int]:
    """Least k with the patch inside (beta)_k and values at most k there; then (k, norm)."""
    h, beta = node.h, node.beta
    support = node.support()
    top = max([v for _, v in node.patch] + [h.level_cap(beta) or 0])
    for k in range(top + 1 + 512):
        ball = h.closure_set(beta, k)
        if any(y not in ball for y in support):
            continue
        if all(node.value(x) <= k for x in ball):
            return k, h.norm(beta, k)
    raise DomainExceeded(f"no class found for the node at {beta!r}")


def tree_leq(f: TreeNode, g: TreeNode) -> bool:
    """f is an initial part of g."""
    if not f.beta <= g.beta:
        return False
    return all(f.value(x) == g.value(x) for x in range(f.beta + 1))
