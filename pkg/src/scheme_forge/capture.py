"""Captured families and the projections defined from them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Sequence

from .errors import BadOrder
from .metric import delta, rho, set_rho
from .ordinals import Ord, Ordinal, fin_set, ordinal_to_json
from .scheme import SchemeHandle, decompose, level_iter

__all__ = [
    "CaptureRecord",
    "NotCaptured",
    "as_family",
    "is_captured",
    "captured_scan",
    "enumerate_captured",
    "pi_n",
    "square_bracket",
    "bracket_projection",
    "dn_condition",
    "h_ideal_member",
]

Family = tuple[tuple[Ordinal, ...], ...]


@dataclass(frozen=True)
class CaptureRecord:
    family: Family
    level: int
    witness: tuple[int, ...]
    fully_captured: bool

    captured = True

    def __bool__(self) -> bool:
        return True

    def to_json(self) -> dict[str, Any]:
        return {
            "family": [[ordinal_to_json(x) for x in D] for D in self.family],
            "level": self.level,
            "witness": list(self.witness),
            "fully_captured": self.fully_captured,
        }


@dataclass(frozen=True)
class NotCaptured:
    reason: str
    level: int | None = None

    captured = False

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict[str, Any]:
        return {"captured": False, "reason": self.reason, "level": self.level}


def as_family(family: Iterable[Any]) -> Family:
    """Normalise a list of sets; a flat set of ordinals becomes singletons."""
    items = list(family)
    if all(isinstance(x, (int, Ord)) for x in items):
        return tuple((x,) for x in fin_set(items))
    return tuple(fin_set(D) for D in items)


def _strongly_isomorphic(h: SchemeHandle, A: Sequence[Ordinal], B: Sequence[Ordinal], k: int) -> bool:
    CA = h.closure(A[-1], k)
    CB = h.closure(B[-1], k)
    if len(CA) != len(CB):
        return False
    image = dict(zip(CA, CB))
    return all(x in image for x in A) and fin_set(image[x] for x in A) == tuple(B)


def is_captured(h: SchemeHandle, family: Iterable[Any], l: int | None = None) -> CaptureRecord | NotCaptured:
    """Check whether the family is captured, optionally at a required level."""
    fam = as_family(family)
    if len(fam) < 2:
        return NotCaptured("a captured family has at least two members")
    if any(not D for D in fam):
        return NotCaptured("members must be nonempty")
    union = fin_set(x for D in fam for x in D)
    for x in union:
        h.check(x)
    level = set_rho(h, union)
    if l is not None and l != level:
        return NotCaptured(f"the union has diameter {level}, not {l}", level)
    if level == 0:
        return NotCaptured("the union is a single point", level)
    if len(fam) > h.t.n(level):
        return NotCaptured(f"more members than pieces at level {level}", level)
    for D in fam:
        if set_rho(h, D) >= level:
            return NotCaptured(f"member {D} has diameter at least {level}", level)
    if all(len(D) == 1 for D in fam):
        # for points, being captured means delta = rho = level pairwise
        for (a,), (b,) in itertools.combinations(fam, 2):
            d = delta(h, a, b)
            if d != level or rho(h, a, b) != level:
                return NotCaptured(f"delta({a!r}, {b!r}) = {d} differs from rho = {rho(h, a, b)}", level)
    by_xi = sorted(fam, key=lambda D: h.xi(D[-1], level))
    xis = [h.xi(D[-1], level) for D in by_xi]
    if xis != list(range(len(fam))):
        return NotCaptured(f"piece indices {xis} are not 0..{len(fam) - 1}", level)
    first = by_xi[0]
    for D in by_xi[1:]:
        if not _strongly_isomorphic(h, first, D, level - 1):
            return NotCaptured(f"{first} and {D} are not strongly isomorphic", level)
    base = h.closure(first[-1], level - 1)
    pos = {x: i for i, x in enumerate(base)}
    witness = tuple(pos[x] for x in first)
    return CaptureRecord(tuple(by_xi), level, witness, len(fam) == h.t.n(level))


def captured_scan(
    h: SchemeHandle, S: Iterable[Ordinal], n: int, level_window: Iterable[int] | None = None
) -> list[CaptureRecord]:
    """Captured n-subsets of S (as singleton families), sorted by level then lexicographically."""
    if n < 2:
        raise ValueError("n must be at least 2")
    window = None if level_window is None else set(level_window)
    out = []
    for D in itertools.combinations(fin_set(S), n):
        rec = is_captured(h, D)
        if rec and (window is None or rec.level in window):
            out.append(rec)
    out.sort(key=lambda r: (r.level, r.family))
    return out


def enumerate_captured(
    h: SchemeHandle, l: int, size: int, bound: Ordinal, set_size: int | None = None
) -> Iterator[Family]:
    """Families {F_i[S] : i < size} for F of level l below ``bound``.

    ``set_size`` restricts |S|; with 1 the families are families of singletons.
    """
    t = h.t
    if not 2 <= size <= t.n(l):
        raise ValueError(f"size must lie in [2, {t.n(l)}]")
    r, mp = t.r(l), t.m(l - 1)
    sizes = range(1, mp + 1) if set_size is None else [set_size]
    seen: set[Family] = set()
    for F in level_iter(h, l, bound):
        pieces = decompose(F, t, l).pieces
        for j in sizes:
            for S in itertools.combinations(range(mp), j):
                if S[-1] < r:
                    continue
                fam = tuple(tuple(pieces[i][s] for s in S) for i in range(size))
                if fam not in seen:
                    seen.add(fam)
                    yield fam


def pi_n(h: SchemeHandle, S: Iterable[Ordinal], n: int) -> set[int]:
    """Levels at which some n-subset of S is captured."""
    return {rec.level for rec in captured_scan(h, S, n)}


def square_bracket(h: SchemeHandle, alpha: Ordinal, beta: Ordinal) -> Ordinal:
    """Least element of (beta)_{rho-1} at or above alpha."""
    if not alpha < beta:
        raise BadOrder(f"square bracket needs alpha < beta, got {alpha!r}, {beta!r}")
    k = rho(h, alpha, beta)
    return min(x for x in h.closure(beta, k - 1) if x >= alpha)


def bracket_projection(h: SchemeHandle, S: Iterable[Ordinal]) -> set[Ordinal]:
    return {square_bracket(h, rec.family[0][0], rec.family[1][0]) for rec in captured_scan(h, S, 2)}


def dn_condition(h: SchemeHandle, p: Iterable[Ordinal], A: Iterable[int], n: int) -> bool:
    """True iff no n-subset of p is captured at a level in A."""
    levels = set(A)
    return not any(rec.level in levels for rec in captured_scan(h, p, n))


def h_ideal_member(h: SchemeHandle, xi_point: Ordinal, alpha: Ordinal, n: int) -> bool:
    """Whether xi_point belongs to the ideal set attached to alpha above level n.

    Only levels in (n, rho] need checking: above rho the piece index of
    alpha is -1 or equal to that of xi_point.
    """
    if not xi_point < alpha:
        raise BadOrder(f"need xi < alpha, got {xi_point!r}, {alpha!r}")
    top = rho(h, xi_point, alpha)
    for m in range(n + 1, top + 1):
        xa = h.xi(alpha, m)
        if xa != -1 and h.xi(xi_point, m) > xa:
            return False
    return True
