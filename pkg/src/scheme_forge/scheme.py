"""Finite schemes, the scheme over omega, membership and level enumeration.

Everything is driven by a closure oracle: ``closure(alpha, k)`` is the trace
on ``alpha + 1`` of the level-k member containing ``alpha``.  For the scheme
over omega it is computed by descending through canonical decompositions of
the first level set that contains ``alpha``.
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Sequence

from .errors import DomainExceeded, NotALevelCardinality, SchemeError
from .ordinals import Ord, Ordinal, fin_set, ordinal_from_json, ordinal_to_json
from .typespec import TypeSpec, type_from_json

__all__ = [
    "DecompRecord",
    "canonical_decomposition",
    "decompose",
    "unique_finite_scheme",
    "SchemeHandle",
    "OmegaScheme",
    "FragmentScheme",
    "omega_scheme",
    "is_member",
    "level_iter",
    "export_fragment",
    "import_fragment",
]


# ---------------------------------------------------------------- decomposition


@dataclass(frozen=True)
class DecompRecord:
    level: int
    pieces: tuple[tuple[Ordinal, ...], ...]
    root: tuple[Ordinal, ...]

    def piece_of(self, x: Ordinal) -> int:
        """Index of the piece holding ``x``; -1 for root elements."""
        if x in self.root:
            return -1
        for i, piece in enumerate(self.pieces):
            if x in piece:
                return i
        raise ValueError(f"{x!r} is not in the decomposed set")

    def to_json(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "root": [ordinal_to_json(x) for x in self.root],
            "pieces": [[ordinal_to_json(x) for x in p] for p in self.pieces],
        }


def decompose(F: Sequence[Ordinal], t: TypeSpec, k: int) -> DecompRecord:
    """Canonical decomposition of a sorted set of size m_k, k >= 1."""
    r, mp = t.r(k), t.m(k - 1)
    step = mp - r
    root = tuple(F[:r])
    pieces = tuple(root + tuple(F[r + i * step : r + (i + 1) * step]) for i in range(t.n(k)))
    return DecompRecord(k, pieces, root)


def canonical_decomposition(F: Iterable[Ordinal], t: TypeSpec) -> DecompRecord:
    """Split a set of size m_k (k >= 1) into its root and n_k pieces."""
    F = fin_set(F)
    k = t.level_of_size(len(F))
    if k is None or k == 0:
        raise NotALevelCardinality(f"|F|={len(F)} is not m_k for any k >= 1")
    return decompose(F, t, k)


def unique_finite_scheme(X: Iterable[Ordinal], t: TypeSpec) -> Iterator[tuple[Ordinal, ...]]:
    """All members of the unique scheme over X, biggest level first, then lexicographic."""
    X = fin_set(X)
    k = t.level_of_size(len(X))
    if k is None:
        raise NotALevelCardinality(f"|X|={len(X)} is not a level cardinality")
    found: set[tuple[int, tuple[Ordinal, ...]]] = set()
    stack = [(k, X)]
    while stack:
        j, Y = stack.pop()
        if (j, Y) in found:
            continue
        found.add((j, Y))
        if j > 0:
            stack.extend((j - 1, p) for p in decompose(Y, t, j).pieces)
    for _, Y in sorted(found, key=lambda e: (-e[0], e[1])):
        yield Y


# ---------------------------------------------------------------- handles


class SchemeHandle(ABC):
    """A scheme seen through its closure oracle."""

    t: TypeSpec

    @abstractmethod
    def closure(self, alpha: Ordinal, k: int) -> tuple[Ordinal, ...]:
        """(alpha)_k as a sorted tuple."""

    @abstractmethod
    def xi(self, alpha: Ordinal, k: int) -> int:
        """Piece index of alpha in the level-k member holding it (-1 in the root)."""

    @abstractmethod
    def in_domain(self, alpha: Ordinal) -> bool: ...

    @abstractmethod
    def window(self, size: int) -> list[Ordinal]:
        """A canonical finite list of domain points, used by searches."""

    def level_cap(self, alpha: Ordinal) -> int | None:
        """A level from which closures of alpha stop growing, if known."""
        return None

    def joint_cap(self, alpha: Ordinal, beta: Ordinal) -> int | None:
        """A level at which alpha and beta are known to lie in one member."""
        caps = [self.level_cap(alpha), self.level_cap(beta)]
        return None if None in caps else max(caps)

    def closure_set(self, alpha: Ordinal, k: int) -> frozenset:
        return frozenset(self.closure(alpha, k))

    def norm(self, alpha: Ordinal, k: int) -> int:
        return len(self.closure(alpha, k)) - 1

    def check(self, alpha: Ordinal) -> None:
        if not self.in_domain(alpha):
            raise DomainExceeded(f"{alpha!r} is outside the domain of this scheme")

    def is_member(self, F: Iterable[Ordinal]) -> bool:
        F = fin_set(F)
        if not F:
            return False
        for x in F:
            self.check(x)
        k = self.t.level_of_size(len(F))
        if k is None:
            return False
        return self.closure(F[-1], k) == F

    def member_level(self, F: Sequence[Ordinal]) -> int | None:
        F = fin_set(F)
        if F and self.is_member(F):
            return self.t.level_of_size(len(F))
        return None


class OmegaScheme(SchemeHandle):
    """The unique scheme over omega for a type."""

    def __init__(self, t: TypeSpec) -> None:
        self.t = t
        self._paths: dict[int, tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]] = {}
        self._sets: dict[tuple[int, int], frozenset] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"OmegaScheme({self.t.name or 'custom'})"

    def in_domain(self, alpha: Ordinal) -> bool:
        return isinstance(alpha, int) and alpha >= 0

    def window(self, size: int) -> list[Ordinal]:
        return list(range(size))

    def level_cap(self, alpha: Ordinal) -> int:
        return self.t.level_above(int(alpha))

    def _path(self, a: int):
        got = self._paths.get(a)
        if got is not None:
            return got
        t = self.t
        K = t.level_above(a)
        closures: list[tuple[int, ...]] = [()] * (K + 1)
        xis = [0] * (K + 1)
        C = tuple(range(a + 1))
        closures[K] = C
        for j in range(K, 0, -1):
            pos = len(C) - 1
            r = t.r(j)
            width = t.m(j - 1) - r
            if pos < r:
                xis[j] = -1
            else:
                i = (pos - r) // width
                xis[j] = i
                C = C[:r] + C[r + i * width :]
            closures[j - 1] = C
        out = (tuple(closures), tuple(xis))
        with self._lock:
            self._paths[a] = out
        return out

    def closure(self, alpha: Ordinal, k: int) -> tuple[int, ...]:
        self.check(alpha)
        closures, _ = self._path(alpha)
        if k < len(closures):
            return closures[k]
        return closures[-1]

    def closure_set(self, alpha: Ordinal, k: int) -> frozenset:
        key = (alpha, k)
        s = self._sets.get(key)
        if s is None:
            s = frozenset(self.closure(alpha, k))
            with self._lock:
                self._sets[key] = s
        return s

    def xi(self, alpha: Ordinal, k: int) -> int:
        self.check(alpha)
        if k == 0:
            return 0
        _, xis = self._path(alpha)
        if k < len(xis):
            return xis[k]
        return -1 if alpha < self.t.r(k) else 0


_omega_cache: dict[int, OmegaScheme] = {}
_omega_lock = threading.Lock()


def omega_scheme(t: TypeSpec) -> OmegaScheme:
    """Shared handle of the scheme over omega for ``t``."""
    with _omega_lock:
        h = _omega_cache.get(id(t))
        if h is None or h.t is not t:
            h = OmegaScheme(t)
            _omega_cache[id(t)] = h
        return h


def is_member(h: SchemeHandle, F: Iterable[Ordinal]) -> bool:
    return h.is_member(F)


def level_iter(h: SchemeHandle, k: int, bound: Ordinal) -> Iterator[tuple[Ordinal, ...]]:
    """Members of level k inside [0, bound), ascending by maximum."""
    if isinstance(bound, Ord) and not isinstance(h, FragmentScheme):
        raise DomainExceeded("level enumeration needs a finite bound on this handle")
    mk = h.t.m(k)
    if isinstance(h, FragmentScheme):
        yield from (F for F in h.levels.get(k, ()) if F[-1] < bound)
        return
    for beta in range(int(bound)):
        C = h.closure(beta, k)
        if len(C) == mk:
            yield C


# ---------------------------------------------------------------- fragments


class FragmentScheme(SchemeHandle):
    """A handle answering queries from stored level lists."""

    def __init__(self, t: TypeSpec, bound: Ordinal, levels: dict[int, list[tuple[Ordinal, ...]]]) -> None:
        self.t = t
        self.bound = bound
        self.levels = {k: [fin_set(F) for F in v] for k, v in levels.items()}
        self._index: dict[tuple[Ordinal, int], tuple[Ordinal, ...]] = {}
        self._points: set[Ordinal] = set()
        for k, sets in self.levels.items():
            for F in sets:
                for x in F:
                    self._index.setdefault((x, k), F)
                    self._points.add(x)

    def in_domain(self, alpha: Ordinal) -> bool:
        return alpha in self._points

    def window(self, size: int) -> list[Ordinal]:
        return sorted(self._points)[:size]

    def _holder(self, alpha: Ordinal, k: int) -> tuple[Ordinal, ...]:
        self.check(alpha)
        F = self._index.get((alpha, k))
        if F is None:
            raise DomainExceeded(f"no stored level-{k} set contains {alpha!r}")
        return F

    def closure(self, alpha: Ordinal, k: int) -> tuple[Ordinal, ...]:
        F = self._holder(alpha, k)
        return tuple(x for x in F if x <= alpha)

    def xi(self, alpha: Ordinal, k: int) -> int:
        if k == 0:
            self.check(alpha)
            return 0
        F = self._holder(alpha, k)
        return decompose(F, self.t, k).piece_of(alpha)

    def level_cap(self, alpha: Ordinal) -> int | None:
        return max(self.levels) if self.levels else 0


def export_fragment(h: SchemeHandle, bound: Ordinal, members: Iterable[Sequence[Ordinal]] | None = None) -> dict[str, Any]:
    """JSON-ready dump of every member below ``bound`` (or of ``members``)."""
    levels: dict[int, list[tuple[Ordinal, ...]]] = {}
    if members is None:
        if isinstance(bound, Ord):
            raise DomainExceeded("pass the member list explicitly for transfinite bounds")
        k = 0
        while h.t.m(k) <= int(bound):
            levels[k] = list(level_iter(h, k, bound))
            k += 1
    else:
        for F in members:
            F = fin_set(F)
            k = h.t.level_of_size(len(F))
            if k is None:
                raise NotALevelCardinality(f"member of size {len(F)}")
            levels.setdefault(k, []).append(F)
        for k in levels:
            levels[k] = sorted(set(levels[k]), key=lambda F: (F[-1], F))
    return {
        "type": h.t.to_json(),
        "bound": ordinal_to_json(bound),
        "levels": {str(k): [[ordinal_to_json(x) for x in F] for F in v] for k, v in sorted(levels.items())},
    }


def import_fragment(data: dict[str, Any]) -> FragmentScheme:
    try:
        t = type_from_json(data["type"])
        bound = ordinal_from_json(data["bound"])
        levels = {
            int(k): [tuple(ordinal_from_json(x) for x in F) for F in v] for k, v in data["levels"].items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemeError(f"malformed fragment: {exc}") from exc
    return FragmentScheme(t, bound, levels)
