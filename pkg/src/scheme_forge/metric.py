"""The ordinal metric of a scheme and the quantities read off closures."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .errors import DomainExceeded, SchemeError, XiUndefined
from .ordinals import Ordinal, fin_set, format_ordinal, ordinal_to_json
from .scheme import SchemeHandle

__all__ = [
    "INFINITY",
    "BallRecord",
    "SetProfile",
    "rho",
    "delta",
    "ball",
    "norm",
    "set_closure",
    "set_rho",
    "set_profile",
    "pair_table",
    "ball_table",
    "table_csv",
]

# Sentinel for delta(alpha, alpha); compares above every level.
INFINITY = math.inf

# Hard ceiling for handles that cannot bound rho in advance.
_LEVEL_CEILING = 512


def _ceiling(h: SchemeHandle, alpha: Ordinal, beta: Ordinal) -> int:
    cap = h.joint_cap(alpha, beta)
    return _LEVEL_CEILING if cap is None else cap


def rho(h: SchemeHandle, alpha: Ordinal, beta: Ordinal) -> int:
    """Least level at which alpha and beta lie in a common member."""
    h.check(alpha)
    h.check(beta)
    if alpha == beta:
        return 0
    if alpha > beta:
        alpha, beta = beta, alpha
    top = _ceiling(h, alpha, beta)
    for k in range(top + 1):
        if alpha in h.closure_set(beta, k):
            return k
    raise DomainExceeded(f"rho({alpha!r}, {beta!r}) not reached by level {top}")


def norm(h: SchemeHandle, alpha: Ordinal, k: int) -> int:
    """k-cardinality: size of (alpha)_k minus one."""
    return h.norm(alpha, k)


def delta(h: SchemeHandle, alpha: Ordinal, beta: Ordinal) -> float | int:
    """Least level where the k-cardinalities differ; INFINITY when equal points."""
    h.check(alpha)
    h.check(beta)
    if alpha == beta:
        return INFINITY
    top = rho(h, alpha, beta)
    for k in range(top + 1):
        if h.norm(alpha, k) != h.norm(beta, k):
            return k
    raise SchemeError("delta exceeds rho, the oracle is inconsistent")


@dataclass(frozen=True)
class BallRecord:
    alpha: Ordinal
    k: int
    members: tuple[Ordinal, ...]
    norm: int
    xi: int

    def at(self, i: int) -> Ordinal:
        """i-th element of the ball in increasing order."""
        return self.members[i]

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": ordinal_to_json(self.alpha),
            "k": self.k,
            "set": [ordinal_to_json(x) for x in self.members],
            "norm": self.norm,
            "xi": self.xi,
        }


def ball(h: SchemeHandle, alpha: Ordinal, k: int) -> BallRecord:
    C = h.closure(alpha, k)
    return BallRecord(alpha, k, C, len(C) - 1, h.xi(alpha, k))


def set_closure(h: SchemeHandle, A: Iterable[Ordinal], k: int) -> tuple[Ordinal, ...]:
    """Union of the k-closures of the points of A."""
    out: set[Ordinal] = set()
    for x in A:
        out.update(h.closure(x, k))
    return fin_set(out)


def set_rho(h: SchemeHandle, A: Iterable[Ordinal]) -> int:
    """Diameter of a nonempty set: the largest distance to its maximum."""
    A = fin_set(A)
    if not A:
        raise ValueError("the diameter of the empty set is undefined")
    top = A[-1]
    return max(rho(h, x, top) for x in A)


@dataclass(frozen=True)
class SetProfile:
    A: tuple[Ordinal, ...]
    diameter: int
    k: int
    closure: tuple[Ordinal, ...]
    is_closed: bool
    is_maximally_closed: bool
    _xi: int | None

    @property
    def xi(self) -> int:
        if self._xi is None:
            raise XiUndefined(f"the set index is only defined above the diameter {self.diameter}, got k={self.k}")
        return self._xi

    def to_json(self) -> dict[str, Any]:
        return {
            "set": [ordinal_to_json(x) for x in self.A],
            "diameter": self.diameter,
            "k": self.k,
            "closure": [ordinal_to_json(x) for x in self.closure],
            "xi": self._xi,
            "is_closed": self.is_closed,
            "is_maximally_closed": self.is_maximally_closed,
        }


def set_profile(h: SchemeHandle, A: Iterable[Ordinal], k: int) -> SetProfile:
    A = fin_set(A)
    d = set_rho(h, A)
    C = set_closure(h, A, k)
    top = A[-1]
    maximal = len(A) == h.t.m(d) and h.closure(top, d) == A
    xi = h.xi(top, k) if k > d else None
    return SetProfile(A, d, k, C, C == A, maximal, xi)


# ---------------------------------------------------------------- tables


def pair_table(h: SchemeHandle, points: Sequence[Ordinal]) -> list[dict[str, Any]]:
    rows = []
    for i, a in enumerate(points):
        for b in points[i + 1 :]:
            d = delta(h, a, b)
            rows.append({"alpha": format_ordinal(a), "beta": format_ordinal(b), "rho": rho(h, a, b), "delta": d})
    return rows


def ball_table(h: SchemeHandle, points: Sequence[Ordinal], levels: Sequence[int]) -> list[dict[str, Any]]:
    return [
        {"alpha": format_ordinal(a), "k": k, "norm": h.norm(a, k), "xi": h.xi(a, k)}
        for a in points
        for k in levels
    ]


def table_csv(rows: list[dict[str, Any]]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
