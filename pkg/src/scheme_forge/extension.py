"""Extending a scheme from gamma to gamma + omega along a deterministic chain.

A condition is a finite set p of size m_k whose part below gamma followed by
a shifted copy of its part above gamma is a member of the ground scheme, and
whose part above gamma is an initial segment of [gamma, gamma + omega).
Requests are met by appending conditions found by a least-witness search:
candidates are ground members G = closure(x, l), scanned by growing window,
then by x, then by level, then by split point.  Every accepted candidate
is checked against the order and the request, so the chain is valid by
construction and fully reproducible.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence, Union

from .errors import (
    DomainExceeded,
    FuelExhausted,
    NoWitnessInSchedule,
    NotAMember,
    RequestOutOfDomain,
    SchemeError,
)
from .ordinals import (
    Ord,
    Ordinal,
    add,
    block_of,
    fin_set,
    offset_of,
    ordinal,
    ordinal_from_json,
    ordinal_to_json,
)
from .scheme import OmegaScheme, SchemeHandle, decompose, omega_scheme, unique_finite_scheme
from .typespec import TypeSpec, type_from_json

__all__ = [
    "Contain",
    "IncludeF",
    "IH1",
    "Request",
    "red",
    "cut",
    "is_condition",
    "cond_leq",
    "in_family_of",
    "alpha_of",
    "ExtensionScheme",
    "extend_scheme",
    "chain_extend",
    "ih1_witness",
    "replay_chain",
    "DEFAULT_FUEL",
]

DEFAULT_FUEL = 10_000
DEFAULT_WINDOW = 1024


# ---------------------------------------------------------------- requests


@dataclass(frozen=True)
class Contain:
    alpha: Ordinal

    def to_json(self) -> dict[str, Any]:
        return {"op": "contain", "alpha": ordinal_to_json(self.alpha)}


@dataclass(frozen=True)
class IncludeF:
    F: tuple[Ordinal, ...]

    def to_json(self) -> dict[str, Any]:
        return {"op": "include", "F": [ordinal_to_json(x) for x in self.F]}


@dataclass(frozen=True)
class IH1:
    alpha: Ordinal
    A: tuple[Ordinal, ...] = ()

    def to_json(self) -> dict[str, Any]:
        return {"op": "ih1", "alpha": ordinal_to_json(self.alpha), "A": [ordinal_to_json(x) for x in self.A]}


Request = Union[Contain, IncludeF, IH1]


def request_from_json(d: dict[str, Any]) -> Request:
    op = d.get("op")
    if op == "contain":
        return Contain(ordinal_from_json(d["alpha"]))
    if op == "include":
        return IncludeF(fin_set(ordinal_from_json(x) for x in d["F"]))
    if op == "ih1":
        return IH1(ordinal_from_json(d["alpha"]), fin_set(ordinal_from_json(x) for x in d.get("A", [])))
    raise SchemeError(f"unknown request op {op!r}")


# ---------------------------------------------------------------- red / cut


def red(p: Iterable[Ordinal], delta: Ordinal) -> tuple[Ordinal, ...]:
    """Keep p below delta and slide the rest down to just above it."""
    p = fin_set(p)
    low = tuple(x for x in p if x < delta)
    extra = len(p) - len(low)
    if not low:
        return tuple(range(len(p)))
    start = add(low[-1], 1)
    return low + tuple(add(start, i) for i in range(extra))


def cut(
    F: Iterable[Ordinal], alpha: Ordinal, gamma: Ordinal, ground: SchemeHandle | None = None
) -> tuple[Ordinal, ...]:
    """Keep F below alpha and move the rest to the start of [gamma, gamma + omega)."""
    F = fin_set(F)
    if ground is not None and not ground.is_member(F):
        raise NotAMember(f"{F} is not a member of the ground scheme")
    low = tuple(x for x in F if x < alpha)
    return low + tuple(add(gamma, i) for i in range(len(F) - len(low)))


def alpha_of(p: Sequence[Ordinal], gamma: Ordinal) -> Ordinal | None:
    """Largest point of p below gamma, if any."""
    low = [x for x in p if x < gamma]
    return low[-1] if low else None


def in_family_of(t: TypeSpec, p: Sequence[Ordinal], q: Sequence[Ordinal]) -> bool:
    """Whether q is a member of the copy of the finite scheme living on p."""
    p, q = fin_set(p), fin_set(q)
    if not q or not set(q) <= set(p):
        return False
    if t.level_of_size(len(p)) is None:
        return False
    index = {x: i for i, x in enumerate(p)}
    return omega_scheme(t).is_member(tuple(index[x] for x in q))


def cond_leq(t: TypeSpec, p: Sequence[Ordinal], q: Sequence[Ordinal]) -> bool:
    """p extends q: q is empty or q belongs to the family on p."""
    if not q:
        return True
    return in_family_of(t, p, q)


def _is_initial_segment(top: Sequence[Ordinal], gamma: Ordinal) -> bool:
    return all(x == add(gamma, i) for i, x in enumerate(top))


def is_condition(ground: SchemeHandle, p: Iterable[Ordinal], gamma: Ordinal) -> bool:
    """Size m_k, reduction a ground member, upper part an initial segment."""
    p = fin_set(p)
    if not p:
        return True
    for x in p:
        if x < gamma:
            ground.check(x)
        elif block_of(x) != block_of(gamma):
            raise DomainExceeded(f"{x!r} lies beyond gamma + omega")
    if ground.t.level_of_size(len(p)) is None:
        return False
    if not _is_initial_segment([x for x in p if x >= gamma], gamma):
        return False
    return ground.is_member(red(p, gamma))


# ---------------------------------------------------------------- witness for omega


def ih1_witness(h: SchemeHandle, alpha: Ordinal, A: Iterable[Ordinal] = (), max_size: int = 1 << 20) -> tuple[Ordinal, ...]:
    """A member F with A inside its first piece and root equal to F below alpha.

    Over omega this is the initial segment m_{k+1} for the least k above
    max(A) with r_{k+1} = alpha.  On an extended handle an IH1 request is
    issued and the resulting tip is returned.
    """
    A = fin_set(A)
    if isinstance(h, ExtensionScheme):
        if not (alpha < h.gamma and all(a < h.gamma for a in A)):
            raise RequestOutOfDomain("the witness is asked for points below gamma")
        return h.request(IH1(alpha, A))
    if not isinstance(h, OmegaScheme):
        raise SchemeError("witnesses are available for the omega scheme and extended handles")
    if not isinstance(alpha, int) or any(not isinstance(a, int) for a in A):
        raise RequestOutOfDomain("points must lie below omega")
    t = h.t
    k = A[-1] + 1 if A else 0
    while True:
        if t.m(k) > max_size:
            raise NoWitnessInSchedule(f"no level with root size {alpha} before sizes exceed {max_size}")
        if t.r(k + 1) == alpha:
            if t.m(k + 1) > max_size:
                raise NoWitnessInSchedule(f"the witness would have {t.m(k + 1)} points")
            return tuple(range(t.m(k + 1)))
        k += 1


# ---------------------------------------------------------------- event log


@dataclass
class Event:
    depth: int
    request: Request
    nested: bool
    appended: list[tuple[Ordinal, ...]] = field(default_factory=list)
    failed: str | None = None

    def to_json(self) -> dict[str, Any]:
        return {
            "depth": self.depth,
            "request": self.request.to_json(),
            "nested": self.nested,
            "failed": self.failed,
            "appended": [[ordinal_to_json(x) for x in p] for p in self.appended],
        }


@dataclass
class _Tower:
    """State shared by a stack of extensions over the same omega scheme."""

    events: list[Event] = field(default_factory=list)
    busy: int = 0
    lock: threading.RLock = field(default_factory=threading.RLock)


# ---------------------------------------------------------------- the handle


class ExtensionScheme(SchemeHandle):
    """Scheme over gamma + omega grown lazily by a deterministic chain."""

    def __init__(self, ground: SchemeHandle, fuel: int = DEFAULT_FUEL, window: int = DEFAULT_WINDOW) -> None:
        self.ground = ground
        self.t = ground.t
        self.fuel = fuel
        self.spent = 0
        self.window_limit = window
        if isinstance(ground, ExtensionScheme):
            self.gamma: Ord = Ord(ground.gamma.block + 1)
            self.depth = ground.depth + 1
            self._tower = ground._tower
        elif isinstance(ground, OmegaScheme):
            self.gamma = Ord(1)
            self.depth = 1
            self._tower = _Tower()
        else:
            raise SchemeError("extensions are built over the omega scheme or another extension")
        self.omega = omega_scheme(self.t)
        self.chain: list[tuple[Ordinal, ...]] = []

    def __repr__(self) -> str:
        return f"ExtensionScheme(depth={self.depth}, tip_size={len(self.tip)})"

    # -- basic accessors

    @property
    def tip(self) -> tuple[Ordinal, ...]:
        return self.chain[-1] if self.chain else ()

    @property
    def tip_level(self) -> int:
        return self.t.level_of_size(len(self.tip)) if self.tip else -1

    @property
    def events(self) -> list[Event]:
        return self._tower.events

    def tower(self) -> list["ExtensionScheme"]:
        out: list[ExtensionScheme] = []
        h: SchemeHandle = self
        while isinstance(h, ExtensionScheme):
            out.append(h)
            h = h.ground
        return out[::-1]

    def in_domain(self, alpha: Ordinal) -> bool:
        if alpha < self.gamma:
            return self.ground.in_domain(alpha)
        return block_of(alpha) == self.gamma.block

    def window(self, size: int) -> list[Ordinal]:
        return self.ground.window(size) + [add(self.gamma, i) for i in range(size)]

    # -- the oracle

    def _upper(self, alpha: Ordinal, k: int) -> tuple[int, tuple[Ordinal, ...]]:
        """Grow the chain until alpha is in the tip at level >= k."""
        with self._tower.lock:
            while True:
                q = self.tip
                if alpha in q and self.tip_level >= k:
                    return q.index(alpha), q
                if alpha not in q:
                    self.request(Contain(alpha))
                else:
                    self.request(Contain(add(self.gamma, sum(1 for x in q if x >= self.gamma))))

    def closure(self, alpha: Ordinal, k: int) -> tuple[Ordinal, ...]:
        self.check(alpha)
        if alpha < self.gamma:
            return self.ground.closure(alpha, k)
        pos, q = self._upper(alpha, k)
        return tuple(q[i] for i in self.omega.closure(pos, k))

    def xi(self, alpha: Ordinal, k: int) -> int:
        self.check(alpha)
        if alpha < self.gamma:
            return self.ground.xi(alpha, k)
        if k == 0:
            return 0
        pos, _ = self._upper(alpha, k)
        return self.omega.xi(pos, k)

    def joint_cap(self, alpha: Ordinal, beta: Ordinal) -> int:
        """A level at which alpha and beta are known to meet."""
        if alpha < self.gamma and beta < self.gamma:
            return self.ground.joint_cap(alpha, beta)
        with self._tower.lock:
            for x in (alpha, beta):
                if x not in self.tip:
                    self.request(Contain(x))
            return self.tip_level

    # -- requests

    def _validate(self, req: Request) -> None:
        def inside(x: Ordinal) -> bool:
            try:
                return self.in_domain(x)
            except SchemeError:
                return False

        if isinstance(req, Contain):
            pts: Sequence[Ordinal] = (req.alpha,)
        elif isinstance(req, IncludeF):
            if not req.F or any(not x < self.gamma for x in req.F):
                raise RequestOutOfDomain("IncludeF expects a nonempty ground set below gamma")
            if not self.ground.is_member(req.F):
                raise NotAMember(f"{req.F} is not a ground member")
            pts = req.F
        else:
            pts = (req.alpha,) + tuple(req.A)
        bad = [x for x in pts if not inside(x)]
        if bad:
            raise RequestOutOfDomain(f"{bad[0]!r} is outside [0, {self.gamma!r} + omega)")

    def satisfied(self, req: Request, p: Sequence[Ordinal] | None = None) -> bool:
        p = self.tip if p is None else fin_set(p)
        if isinstance(req, Contain):
            return req.alpha in p
        if isinstance(req, IncludeF):
            return in_family_of(self.t, p, req.F)
        if not p or req.alpha not in p or any(a not in p for a in req.A):
            return False
        k = self.t.level_of_size(len(p))
        if not k:
            return False
        dec = decompose(p, self.t, k)
        first = set(dec.pieces[0])
        return all(a in first for a in req.A) and dec.root == tuple(x for x in p if x < req.alpha)

    def request(self, req: Request) -> tuple[Ordinal, ...]:
        """Serve a request and return the new tip."""
        self._validate(req)
        tower = self._tower
        with tower.lock:
            event = Event(self.depth, req, tower.busy > 0)
            tower.events.append(event)
            tower.busy += 1
            try:
                if not self.satisfied(req):
                    p = self._search(req)
                    self._append(p)
                    event.appended.append(p)
            except SchemeError as exc:
                event.failed = type(exc).__name__
                raise
            finally:
                tower.busy -= 1
            return self.tip

    def _append(self, p: tuple[Ordinal, ...]) -> None:
        if self.spent >= self.fuel:
            raise FuelExhausted(f"fuel of {self.fuel} conditions used up")
        self.spent += 1
        self.chain.append(p)

    # -- the search

    def _splits(self, G: tuple[Ordinal, ...]) -> list[int]:
        c = len(G) - 1
        while c > 0 and add(G[c - 1], 1) == G[c]:
            c -= 1
        js = [0] if (c == 0 and G[0] == 0) else []
        js.extend(range(c + 1, len(G) + 1))
        return js

    def _search(self, req: Request) -> tuple[Ordinal, ...]:
        t, gamma, ground = self.t, self.gamma, self.ground
        q = self.tip
        Q = tuple(x for x in q if x < gamma)
        s = len(q) - len(Q)
        kq = self.tip_level
        lmin = max(kq, 1 if isinstance(req, IH1) else 0)
        tried: set[tuple[Ordinal, int]] = set()
        seen: set[tuple[Ordinal, ...]] = set()
        B = 0
        while t.m(B) <= self.window_limit:
            for x in ground.window(t.m(B)):
                for l in range(lmin, B + 1):
                    if (x, l) in tried:
                        continue
                    tried.add((x, l))
                    G = ground.closure(x, l)
                    if len(G) != t.m(l) or G in seen:
                        continue
                    seen.add(G)
                    for j in self._splits(G):
                        P, tail = G[:j], G[j:]
                        if q:
                            if len(tail) < s or not set(Q) <= set(P):
                                continue
                            E = Q + tail[:s]
                            if not ground.is_member(E):
                                continue
                        p = P + tuple(add(gamma, i) for i in range(len(tail)))
                        if p != q and self._accepts(req, p, G, l, j):
                            return p
            B += 1
        raise NoWitnessInSchedule(f"no witness for {req} among ground members with at most {self.window_limit} points")

    def _accepts(self, req: Request, p: tuple[Ordinal, ...], G: tuple[Ordinal, ...], l: int, j: int) -> bool:
        if isinstance(req, (Contain, IncludeF)):
            return self.satisfied(req, p)
        return l >= 1 and self.satisfied(req, p)

    # -- exports

    def fragment_members(self) -> list[tuple[Ordinal, ...]]:
        """Every member of the family living on the current tip."""
        q = self.tip
        if not q:
            return []
        return [tuple(q[i] for i in F) for F in unique_finite_scheme(range(len(q)), self.t)]

    def chain_log(self) -> dict[str, Any]:
        return {
            "type": self.t.to_json(),
            "depth": self.depth,
            "fuel": self.fuel,
            "window": self.window_limit,
            "events": [e.to_json() for e in self.events],
            "chains": [[[ordinal_to_json(x) for x in p] for p in h.chain] for h in self.tower()],
        }


def extend_scheme(h: SchemeHandle, fuel: int = DEFAULT_FUEL, window: int = DEFAULT_WINDOW) -> ExtensionScheme:
    return ExtensionScheme(h, fuel, window)


def chain_extend(h: ExtensionScheme, request: Request) -> tuple[Ordinal, ...]:
    return h.request(request)


def build_tower(t: TypeSpec, depth: int, fuel: int = DEFAULT_FUEL, window: int = DEFAULT_WINDOW) -> ExtensionScheme:
    h: SchemeHandle = omega_scheme(t)
    for _ in range(depth):
        h = ExtensionScheme(h, fuel, window)
    assert isinstance(h, ExtensionScheme)
    return h


def replay_chain(log: dict[str, Any]) -> ExtensionScheme:
    """Rebuild a tower from a chain log by re-issuing its top-level requests."""
    try:
        t = type_from_json(log["type"])
        top = build_tower(t, int(log["depth"]), int(log["fuel"]), int(log.get("window", DEFAULT_WINDOW)))
        events = log["events"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemeError(f"malformed chain log: {exc}") from exc
    levels = top.tower()
    for e in events:
        if e["nested"]:
            continue
        try:
            levels[int(e["depth"]) - 1].request(request_from_json(e["request"]))
        except SchemeError as exc:
            # a logged failure must fail again in the same way
            if e.get("failed") != type(exc).__name__:
                raise
        else:
            if e.get("failed"):
                raise SchemeError(f"replayed request {e['request']} succeeded but was logged as failed")
    return top


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))
