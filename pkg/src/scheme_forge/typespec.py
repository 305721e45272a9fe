"""Types: the sequences of level sizes, fan-outs and root sizes.

A type is an explicit prefix of triples ``(m_k, n_{k+1}, r_{k+1})`` followed
by an optional tail rule giving ``(n, r)`` for the remaining levels.  The
level sizes obey ``m_{k+1} = r_{k+1} + (m_k - r_{k+1}) * n_{k+1}``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence, Union

from .errors import InvalidType, NotALevelCardinality

__all__ = [
    "PartitionSpec",
    "FairRounds",
    "ConstantRoot",
    "BlockFair",
    "OpaqueTail",
    "TypeSpec",
    "make_type",
    "step_cardinality",
    "level_cardinality",
    "is_good",
    "partition_compatible",
    "GoodnessReport",
    "CompatibilityReport",
    "PRESETS",
    "preset",
    "type_from_json",
]


# ---------------------------------------------------------------- partitions


@dataclass(frozen=True)
class PartitionSpec:
    """A partition of the levels into blocks.

    ``kind`` is one of ``single`` (one block), ``mod`` (residues mod
    ``param[0]``) or ``finite`` (block 0 is the finite set ``param``,
    block 1 is everything else).
    """

    kind: str
    param: tuple[int, ...] = ()
    names: tuple[str, ...] = ()

    @classmethod
    def single(cls) -> "PartitionSpec":
        return cls("single", (), ("all",))

    @classmethod
    def modulo(cls, q: int, names: Sequence[str] | None = None) -> "PartitionSpec":
        if q < 1:
            raise ValueError("modulus must be positive")
        names = tuple(names) if names else tuple(f"mod{q}={i}" for i in range(q))
        return cls("mod", (q,), names)

    @classmethod
    def parity(cls) -> "PartitionSpec":
        return cls.modulo(2, ("even", "odd"))

    @classmethod
    def finite_block(cls, levels: Sequence[int]) -> "PartitionSpec":
        return cls("finite", tuple(sorted(set(levels))), ("finite", "rest"))

    @property
    def block_count(self) -> int:
        if self.kind == "single":
            return 1
        if self.kind == "mod":
            return self.param[0]
        return 2

    def block(self, k: int) -> int:
        if self.kind == "single":
            return 0
        if self.kind == "mod":
            return k % self.param[0]
        if self.kind == "finite":
            return 0 if k in self.param else 1
        raise ValueError(f"unknown partition kind {self.kind!r}")

    def finite_blocks(self) -> list[int]:
        """Blocks containing only finitely many levels."""
        if self.kind == "finite":
            return [0]
        return []

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "param": list(self.param), "names": list(self.names)}

    @classmethod
    def from_json(cls, d: dict[str, Any]) -> "PartitionSpec":
        kind = d["kind"]
        if kind == "single":
            return cls.single()
        if kind == "mod":
            return cls.modulo(int(d["param"][0]), d.get("names") or None)
        if kind == "finite":
            return cls.finite_block(d["param"])
        raise InvalidType(f"unknown partition kind {kind!r}")


# ---------------------------------------------------------------- tail rules

NRule = Union[int, str]


def _n_value(n_rule: NRule, m_prev: int, r: int) -> int:
    if isinstance(n_rule, int):
        return n_rule
    if n_rule == "exp":
        return 2 ** m_prev + 1
    if n_rule == "exp-root":
        return 2 ** (m_prev - r) + 1
    raise InvalidType(f"unknown n rule {n_rule!r}")


def _rounds(first_round: int) -> Iterator[int]:
    """0..t, then 0..t+1, and so on, starting with t = first_round."""
    t = first_round
    while True:
        yield from range(t + 1)
        t += 1


def _fair_pick(stream: Iterator[int], m_prev: int) -> int:
    # values that are too large for the current level are skipped
    for x in stream:
        if x < m_prev:
            return x
    raise AssertionError("unreachable: the rounds stream is infinite")


@dataclass(frozen=True)
class FairRounds:
    """Roots cycle through rounds 0..t for t = first_round, first_round+1, ...

    ``offset`` drops that many leading entries of the stream.  Every root
    size appears in every round from some point on, so the tail is good.
    """

    n: NRule = 2
    first_round: int = 0
    offset: int = 0

    def __call__(self, j: int, ms: Sequence[int], start: int) -> tuple[int, int]:
        stream = _rounds(self.first_round)
        for _ in range(self.offset):
            next(stream)
        r = 0
        for i in range(j + 1):
            r = _fair_pick(stream, ms[start + i])
        return _n_value(self.n, ms[start + j], r), r

    def to_json(self) -> dict[str, Any]:
        return {"rule": "rounds", "n": self.n, "first_round": self.first_round, "offset": self.offset}


@dataclass(frozen=True)
class ConstantRoot:
    """Every tail level has the same root size."""

    n: NRule = 2
    r: int = 0

    def __call__(self, j: int, ms: Sequence[int], start: int) -> tuple[int, int]:
        return _n_value(self.n, ms[start + j], self.r), self.r

    def to_json(self) -> dict[str, Any]:
        return {"rule": "constant", "n": self.n, "r": self.r}


@dataclass(frozen=True)
class BlockFair:
    """Each block of ``partition`` runs its own copy of the rounds stream."""

    partition: PartitionSpec
    n: NRule = 2

    def __call__(self, j: int, ms: Sequence[int], start: int) -> tuple[int, int]:
        streams: dict[int, Iterator[int]] = {}
        r = 0
        for i in range(j + 1):
            b = self.partition.block(start + i + 1)
            stream = streams.setdefault(b, _rounds(0))
            r = _fair_pick(stream, ms[start + i])
        return _n_value(self.n, ms[start + j], r), r

    def to_json(self) -> dict[str, Any]:
        return {"rule": "block-fair", "n": self.n, "partition": self.partition.to_json()}


@dataclass(frozen=True)
class OpaqueTail:
    """Arbitrary callable ``level -> (n, r)``; nothing is decided about it."""

    fn: Callable[[int], tuple[int, int]]
    name: str = "callable"

    def __call__(self, j: int, ms: Sequence[int], start: int) -> tuple[int, int]:
        return self.fn(start + j + 1)

    def to_json(self) -> dict[str, Any]:
        raise InvalidType("an opaque tail rule cannot be serialised")


TailRule = Union[FairRounds, ConstantRoot, BlockFair, OpaqueTail]


def _rule_from_json(d: dict[str, Any] | None) -> TailRule | None:
    if d is None:
        return None
    kind = d.get("rule")
    n = d.get("n", 2)
    if kind == "rounds":
        return FairRounds(n, int(d.get("first_round", 0)), int(d.get("offset", 0)))
    if kind == "constant":
        return ConstantRoot(n, int(d.get("r", 0)))
    if kind == "block-fair":
        return BlockFair(PartitionSpec.from_json(d["partition"]), n)
    raise InvalidType(f"unknown tail rule {kind!r}")


# ---------------------------------------------------------------- the type


def step_cardinality(m: int, n: int, r: int) -> int:
    """One step of the size recurrence, with the validity checks."""
    if n < 2:
        raise InvalidType(f"fan-out must be at least 2, got n={n}")
    if not 0 <= r < m:
        raise InvalidType(f"root size must satisfy 0 <= r < m_k, got r={r}, m_k={m}")
    return r + (m - r) * n


@dataclass
class TypeSpec:
    """Sizes ``m_k``, fan-outs ``n_k`` and roots ``r_k`` (the latter for k >= 1)."""

    prefix: tuple[tuple[int, int], ...]
    tail: TailRule | None = None
    name: str | None = None
    _ms: list[int] = field(default_factory=lambda: [1], repr=False, compare=False)
    _nr: list[tuple[int, int]] = field(default_factory=list, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self) -> None:
        for n, r in self.prefix:
            self._push(n, r)

    def _push(self, n: int, r: int) -> None:
        m = step_cardinality(self._ms[-1], n, r)
        self._nr.append((n, r))
        self._ms.append(m)

    def _ensure(self, k: int) -> None:
        if k < len(self._ms):
            return
        if self.tail is None:
            raise NotALevelCardinality(
                f"level {k} is beyond the explicit prefix of {len(self.prefix)} levels and there is no tail rule"
            )
        with self._lock:
            start = len(self.prefix)
            while len(self._ms) <= k:
                j = len(self._ms) - 1 - start
                n, r = self.tail(j, self._ms, start)
                self._push(n, r)

    @property
    def finite_depth(self) -> int | None:
        """Number of levels past 0 that exist, or None for an infinite type."""
        return None if self.tail is not None else len(self.prefix)

    def m(self, k: int) -> int:
        if k < 0:
            raise ValueError("levels are non-negative")
        self._ensure(k)
        return self._ms[k]

    def n(self, k: int) -> int:
        if k < 1:
            raise ValueError("n_k is defined for k >= 1")
        self._ensure(k)
        return self._nr[k - 1][0]

    def r(self, k: int) -> int:
        if k < 1:
            raise ValueError("r_k is defined for k >= 1")
        self._ensure(k)
        return self._nr[k - 1][1]

    def has_level(self, k: int) -> bool:
        return self.tail is not None or k <= len(self.prefix)

    def level_of_size(self, size: int) -> int | None:
        """k with m_k == size, or None."""
        k = 0
        while self.has_level(k):
            mk = self.m(k)
            if mk == size:
                return k
            if mk > size:
                return None
            k += 1
        return None

    def level_above(self, alpha_offset: int) -> int:
        """Least K with alpha_offset < m_K."""
        k = 0
        while self.m(k) <= alpha_offset:
            k += 1
        return k

    def is_two_type(self, upto: int | None = None) -> bool:
        """True when n_k == 2 on every level we can inspect."""
        if isinstance(self.tail, (FairRounds, ConstantRoot, BlockFair)):
            if self.tail.n != 2:
                return False
            return all(n == 2 for n, _ in self.prefix)
        depth = len(self.prefix) if upto is None else upto
        return all(self.n(k) == 2 for k in range(1, depth + 1))

    def triples(self, depth: int) -> list[tuple[int, int, int]]:
        return [(self.m(k), self.n(k + 1), self.r(k + 1)) for k in range(depth)]

    def to_json(self) -> dict[str, Any]:
        if self.name in PRESETS:
            return {"preset": self.name}
        out: dict[str, Any] = {
            "prefix": [[self.m(k), n, r] for k, (n, r) in enumerate(self.prefix)],
        }
        if self.tail is not None:
            out["rule"] = self.tail.to_json()
        if self.name:
            out["name"] = self.name
        return out

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other: object) -> bool:
        return self is other


def make_type(
    prefix: Sequence[Sequence[int]],
    tail_rule: TailRule | None = None,
    name: str | None = None,
) -> TypeSpec:
    """Build and validate a type from triples ``(m_k, n_{k+1}, r_{k+1})``.

    Pairs ``(n, r)`` are accepted too; then the m values are computed.
    """
    if not prefix and tail_rule is None:
        raise InvalidType("a type needs a nonempty prefix or a tail rule")
    pairs: list[tuple[int, int]] = []
    m = 1
    for idx, entry in enumerate(prefix):
        entry = tuple(int(x) for x in entry)
        if len(entry) == 3:
            mk, n, r = entry
            if idx == 0 and mk != 1:
                raise InvalidType(f"m_0 must be 1, got {mk}")
            if mk != m:
                raise InvalidType(f"m_{idx}={mk} contradicts the recurrence value {m}")
        elif len(entry) == 2:
            n, r = entry
        else:
            raise InvalidType(f"prefix entry {entry!r} is neither (m,n,r) nor (n,r)")
        m = step_cardinality(m, n, r)
        pairs.append((n, r))
    return TypeSpec(tuple(pairs), tail_rule, name)


def level_cardinality(t: TypeSpec, k: int) -> int:
    return t.m(k)


# ---------------------------------------------------------------- goodness


@dataclass(frozen=True)
class GoodnessReport:
    status: str  # "Good", "NotGood" or "Undetermined"
    certificate: str
    r_seen: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.status == "Good"


@dataclass(frozen=True)
class CompatibilityReport:
    status: str  # "Compatible", "Incompatible" or "Undetermined"
    certificate: str
    witness: Any = None


# Evidence stops once sizes pass this: exponential fan-outs explode right after.
_EVIDENCE_SIZE_LIMIT = 1 << 16


def _r_prefix(t: TypeSpec, depth: int) -> tuple[int, ...]:
    out = []
    k = 1
    while k <= depth and t.has_level(k) and t.m(k - 1) <= _EVIDENCE_SIZE_LIMIT:
        out.append(t.r(k))
        k += 1
    return tuple(out)


def is_good(t: TypeSpec, evidence_depth: int = 32) -> GoodnessReport:
    """Decide whether every root size occurs infinitely often.

    Only the rule classes can be decided; a raw prefix or an opaque
    callable is reported as undetermined together with the roots seen.
    """
    seen = _r_prefix(t, evidence_depth)
    tail = t.tail
    if isinstance(tail, FairRounds):
        return GoodnessReport("Good", "rounds schedule lists every root size in every late round", seen)
    if isinstance(tail, BlockFair):
        return GoodnessReport(
            "Good", "each block replays the rounds schedule and blocks of a rule partition are infinite", seen
        )
    if isinstance(tail, ConstantRoot):
        missing = 1 if tail.r == 0 else 0
        return GoodnessReport("NotGood", f"root size {missing} occurs only finitely often", seen)
    return GoodnessReport("Undetermined", "goodness quantifies beyond any finite prefix", seen)


def partition_compatible(t: TypeSpec, p: PartitionSpec, evidence_depth: int = 32) -> CompatibilityReport:
    """Decide whether every root size occurs infinitely often inside each block."""
    finite = p.finite_blocks()
    if finite:
        b = finite[0]
        return CompatibilityReport("Incompatible", f"block {p.names[b]!r} is finite", p.names[b])
    tail = t.tail
    if isinstance(tail, ConstantRoot):
        missing = 1 if tail.r == 0 else 0
        return CompatibilityReport("Incompatible", f"root size {missing} occurs only finitely often", missing)
    if isinstance(tail, BlockFair) and tail.partition == p:
        return CompatibilityReport("Compatible", "the schedule replays the rounds stream inside each block")
    if isinstance(tail, (FairRounds, BlockFair)) and p.block_count == 1:
        return CompatibilityReport("Compatible", "single block: same as goodness of the schedule")
    return CompatibilityReport("Undetermined", "compatibility quantifies beyond any finite prefix")


# ---------------------------------------------------------------- presets

# Fixed reference types.  These are choices of this package; no canonical
# good type is singled out in the literature.
PRESETS: dict[str, Callable[[], TypeSpec]] = {
    "tau2": lambda: make_type([(1, 2, 0), (2, 2, 1), (3, 2, 0), (6, 2, 2)], FairRounds(2, 2, 0), "tau2"),
    "tau4": lambda: make_type([(1, 4, 0), (4, 4, 1)], FairRounds(4, 1, 1), "tau4"),
    "tauE": lambda: make_type([(1, 3, 0), (3, 9, 0)], FairRounds("exp", 0, 0), "tauE"),
    "tauS": lambda: make_type([(1, 3, 0), (3, 9, 0)], FairRounds("exp-root", 0, 0), "tauS"),
}

_preset_cache: dict[str, TypeSpec] = {}
_preset_lock = threading.Lock()


def preset(name: str) -> TypeSpec:
    """Shared instance of a named reference type."""
    with _preset_lock:
        if name not in _preset_cache:
            if name not in PRESETS:
                raise InvalidType(f"unknown type preset {name!r}; known: {', '.join(sorted(PRESETS))}")
            _preset_cache[name] = PRESETS[name]()
        return _preset_cache[name]


def type_from_json(d: dict[str, Any]) -> TypeSpec:
    if "preset" in d:
        return preset(d["preset"])
    return make_type(d["prefix"], _rule_from_json(d.get("rule")), d.get("name"))
