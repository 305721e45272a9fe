"""Registry of executable invariant checks.

Every check receives a RunContext (type, handle, point bound, fuel, seed) and
returns how many instances it examined together with the counterexamples it
met.  Checks are deterministic; the few that sample use ``random.Random``
seeded from the context.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable, Sequence

from ..capture import captured_scan, enumerate_captured
from ..derived import (
    a_box,
    aronszajn_classify,
    aronszajn_node,
    bounded_color_c,
    c_k_set,
    c_set,
    chain_class,
    coherent_family_eval,
    countryman_cmp,
    decode_map,
    entangled_realization,
    h_set,
    hausdorff_gap,
    luzin_family,
    osc,
    partition_interval,
    partition_lookup,
    tree_leq,
)
from ..derived.luzin import coherent_domain
from ..derived.oscillation import DEFAULT_COLOR, color_o_star, norm_function
from ..errors import NoWitnessInSchedule, NotAMember, NotATwoType, SchemeError, TypeTooSmall, UnknownCheck
from ..extension import (
    DEFAULT_WINDOW,
    IH1,
    Contain,
    ExtensionScheme,
    IncludeF,
    Request,
    alpha_of,
    canonical_json,
    cond_leq,
    cut,
    extend_scheme,
    is_condition,
    red,
    replay_chain,
)
from ..metric import INFINITY, delta, rho, set_closure
from ..ordinals import Ord, Ordinal, add, fin_set, format_ordinal, ordinal_to_json, succ
from ..scheme import OmegaScheme, SchemeHandle, decompose, export_fragment, level_iter, omega_scheme, unique_finite_scheme
from ..typespec import TypeSpec

__all__ = [
    "CheckReport",
    "RunContext",
    "CHECKS",
    "check_names",
    "run_check",
    "run_suite",
    "default_bound",
    "scheme_axiom_violations",
    "SwappedDecomposition",
    "extension_schedule",
]

MAX_COUNTEREXAMPLES = 20


class Skip(Exception):
    """The check does not apply to this type."""


@dataclass
class CheckReport:
    name: str
    params: dict[str, Any]
    passed: bool
    checked: int = 0
    counterexamples: list[dict[str, Any]] = field(default_factory=list)
    skipped: str | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "params": self.params,
            "passed": self.passed,
            "checked": self.checked,
            "skipped": self.skipped,
            "counterexamples": self.counterexamples,
            "notes": self.notes,
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" (skipped: {self.skipped})" if self.skipped else f" ({self.checked} checked)"
        return f"{status} {self.name}{extra}"


def default_bound(t: TypeSpec, cap: int = 64) -> int:
    """m_4 when it is at most ``cap``, else the largest level size within it."""
    best = t.m(0)
    for k in range(1, 5):
        mk = t.m(k)
        if mk > cap:
            break
        best = mk
    return best


class RunContext:
    """Shared inputs and memo tables for one run."""

    def __init__(
        self,
        t: TypeSpec,
        bound: int | None = None,
        fuel: int = 10_000,
        seed: int = 0,
        levels: int = 4,
        handle: SchemeHandle | None = None,
    ) -> None:
        self.t = t
        self.h = handle if handle is not None else omega_scheme(t)
        self.bound = default_bound(t) if bound is None else int(bound)
        self.fuel = fuel
        self.seed = seed
        # never look past the level that already swallows the window
        self.levels = min(levels, t.level_above(max(self.bound - 1, 0)) + 1)
        self._rho: dict[tuple[int, int], int] = {}
        self._delta: dict[tuple[int, int], float] = {}

    @property
    def points(self) -> range:
        return range(self.bound)

    def params(self) -> dict[str, Any]:
        return {"type": self.t.name or "custom", "bound": self.bound, "fuel": self.fuel, "seed": self.seed}

    def rho(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        v = self._rho.get(key)
        if v is None:
            v = self._rho[key] = rho(self.h, *key)
        return v

    def delta(self, a: int, b: int) -> float:
        key = (a, b) if a <= b else (b, a)
        v = self._delta.get(key)
        if v is None:
            v = self._delta[key] = delta(self.h, *key)
        return v

    @cached_property
    def two_type(self) -> bool:
        return self.t.is_two_type(self.levels + 1)


Result = tuple[int, list[dict[str, Any]]]


@dataclass(frozen=True)
class Check:
    name: str
    module: str
    description: str
    fn: Callable[[RunContext], Result]


CHECKS: dict[str, Check] = {}


def register(name: str, module: str, description: str):
    def deco(fn: Callable[[RunContext], Result]) -> Callable[[RunContext], Result]:
        CHECKS[name] = Check(name, module, description, fn)
        return fn

    return deco


def check_names() -> list[str]:
    return list(CHECKS)


class _Collector:
    def __init__(self) -> None:
        self.checked = 0
        self.bad: list[dict[str, Any]] = []

    def expect(self, ok: bool, **info: Any) -> None:
        self.checked += 1
        if not ok and len(self.bad) < MAX_COUNTEREXAMPLES:
            self.bad.append({k: _jsonable(v) for k, v in info.items()})

    def result(self) -> Result:
        return self.checked, self.bad


def _jsonable(v: Any) -> Any:
    if isinstance(v, Ord):
        return format_ordinal(v)
    if isinstance(v, float) and v == INFINITY:
        return "inf"
    if isinstance(v, (set, frozenset)):
        return [_jsonable(x) for x in sorted(v, key=lambda x: (str(type(x)), x))]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


# ---------------------------------------------------------------- metric and closures


@register("metric-axioms", "metric", "rho vanishes exactly on the diagonal, is symmetric, obeys the one-sided triangle law, balls are finite")
def _metric_axioms(ctx: RunContext) -> Result:
    c = _Collector()
    h, P = ctx.h, ctx.points
    for a in P:
        for b in P:
            r = rho(h, a, b)
            c.expect((r == 0) == (a == b), axiom="a", alpha=a, beta=b, rho=r)
            c.expect(r == rho(h, b, a), axiom="b", alpha=a, beta=b)
    for a in P:
        for b in P:
            if b < a:
                continue
            for g in P:
                if g < a:
                    continue
                lhs, rhs = ctx.rho(a, b), max(ctx.rho(a, g), ctx.rho(b, g))
                c.expect(lhs <= rhs, axiom="c", alpha=a, beta=b, gamma=g, lhs=lhs, rhs=rhs)
    for b in P:
        for k in range(ctx.levels + 1):
            C = h.closure(b, k)
            c.expect(len(C) <= b + 1 and h.norm(b, k) == len(C) - 1, axiom="d", beta=b, k=k)
    return c.result()


def _set_rho(ctx: RunContext, F: Sequence[int]) -> int:
    return max((ctx.rho(a, b) for a, b in itertools.combinations(F, 2)), default=0)


def _ball_by_rho(ctx: RunContext, top: int, k: int) -> tuple[int, ...]:
    return tuple(a for a in range(top + 1) if ctx.rho(a, top) <= k)


@register("closure-props", "metric", "closure of finite sets: diameter, ball description, traces, closedness (sets of size at most 3)")
def _closure_props(ctx: RunContext) -> Result:
    c = _Collector()
    h, P = ctx.h, ctx.points
    for size in (1, 2, 3):
        for F in itertools.combinations(P, size):
            top = F[-1]
            rF = _set_rho(ctx, F)
            c.expect(rF == max(ctx.rho(a, top) for a in F), prop=1, F=F)
            for k in range(rF, ctx.levels + 1):
                Fk = set_closure(h, F, k)
                c.expect(Fk == _ball_by_rho(ctx, top, k) == h.closure(top, k), prop=2, F=F, k=k)
                for b in F:
                    lhs = tuple(x for x in Fk if x <= b)
                    c.expect(lhs == set_closure(h, [x for x in F if x <= b], k), prop=3, F=F, k=k, beta=b)
                rG = _set_rho(ctx, Fk)
                c.expect(set_closure(h, Fk, k) == Fk and rG <= k, prop=4, F=F, k=k)
                if k == rF:
                    c.expect(rG == k, prop=4, F=F, k=k, diameter=rG)
                if size <= 2:
                    for g in P:
                        G = h.closure_set(g, k)
                        inter = [x for x in F if x in G]
                        c.expect(tuple(inter) == F[: len(inter)], prop=6, F=F, k=k, gamma=g)
            closed = set_closure(h, F, rF) == F
            c.expect(closed == (F == h.closure(top, rF)), prop=5, F=F)
    return c.result()


@register("closure-coherence", "scheme", "every closure ends at its point and restricts to the closures of its members")
def _closure_coherence(ctx: RunContext) -> Result:
    c = _Collector()
    h, t = ctx.h, ctx.t
    for b in ctx.points:
        for k in range(ctx.levels + 1):
            C = h.closure(b, k)
            c.expect(bool(C) and C[-1] == b and len(C) <= t.m(k), beta=b, k=k, closure=C, issue="shape")
            for a in C:
                got = h.closure(a, k)
                want = tuple(x for x in C if x <= a)
                c.expect(got == want, alpha=a, beta=b, k=k, expected=want, got=got, issue="restriction")
            if k < ctx.levels:
                c.expect(set(C) <= h.closure_set(b, k + 1), beta=b, k=k, issue="monotone")
    return c.result()


@register("xi-lemma", "scheme", "piece indices agree below the first norm difference and separate the pair at the distance")
def _xi_lemma(ctx: RunContext) -> Result:
    c = _Collector()
    h = ctx.h
    for a, b in itertools.combinations(ctx.points, 2):
        r, d = ctx.rho(a, b), ctx.delta(a, b)
        for k in range(1, ctx.levels + 1):
            xa, xb = h.xi(a, k), h.xi(b, k)
            if k < d:
                c.expect(xa == xb, part="a", alpha=a, beta=b, k=k, xi=(xa, xb))
            if k == r:
                c.expect(0 <= xa < xb, part="b", alpha=a, beta=b, k=k, xi=(xa, xb))
            if k > r:
                c.expect(xa == -1 or xa == xb, part="c", alpha=a, beta=b, k=k, xi=(xa, xb))
            if k == d:
                c.expect(xa >= 0 and xb >= 0 and xa != xb, part="d", alpha=a, beta=b, k=k, xi=(xa, xb))
    return c.result()


@register("delta-lemma", "metric", "equal norms at k force the first norm difference above k")
def _delta_lemma(ctx: RunContext) -> Result:
    c = _Collector()
    h = ctx.h
    for a, b in itertools.permutations(ctx.points, 2):
        d = ctx.delta(a, b)
        for k in range(ctx.levels + 1):
            if h.norm(a, k) == h.norm(b, k):
                c.expect(k < d, alpha=a, beta=b, k=k, delta=d)
    return c.result()


@register("delta-transfer", "metric", "a smaller first difference passes to the third point")
def _delta_transfer(ctx: RunContext) -> Result:
    c = _Collector()
    for a, b, d in itertools.permutations(ctx.points, 3):
        if ctx.delta(a, b) < ctx.delta(b, d):
            c.expect(ctx.delta(a, d) == ctx.delta(a, b), alpha=a, beta=b, delta_point=d)
    return c.result()


@register("oracle-equivalence", "scheme", "rho equals the least level of a member holding both points, by brute force over the finite scheme")
def _oracle_equivalence(ctx: RunContext) -> Result:
    c = _Collector()
    t = ctx.t
    top = t.level_above(max(ctx.bound - 1, 0))
    if t.m(top) > ctx.bound:
        top -= 1
    size = t.m(top)
    best: dict[tuple[int, int], int] = {}
    for F in unique_finite_scheme(range(size), t):
        k = t.level_of_size(len(F))
        for a, b in itertools.combinations(F, 2):
            if best.get((a, b), k + 1) > k:
                best[(a, b)] = k
    for a, b in itertools.combinations(range(size), 2):
        c.expect(best.get((a, b)) == ctx.rho(a, b), alpha=a, beta=b, brute=best.get((a, b)), oracle=ctx.rho(a, b))
    return c.result()


# ---------------------------------------------------------------- capture


@register("capture-equivalence", "capture", "the capture criterion and the witness enumeration give the same singleton families")
def _capture_equivalence(ctx: RunContext) -> Result:
    c = _Collector()
    t, h = ctx.t, ctx.h
    for l in range(1, min(ctx.levels, 3) + 1):
        if t.m(l) > ctx.bound:
            break
        for size in range(2, min(t.n(l), 3) + 1):
            listed = set(enumerate_captured(h, l, size, ctx.bound, set_size=1))
            scanned = {rec.family for rec in captured_scan(h, ctx.points, size, level_window=[l])}
            c.expect(listed == scanned, level=l, size=size, only_listed=listed - scanned, only_scanned=scanned - listed)
    return c.result()


# ---------------------------------------------------------------- derived


def _need_two_type(ctx: RunContext) -> None:
    if not ctx.two_type:
        raise Skip("needs a 2-type")


def _window_levels(ctx: RunContext) -> int:
    return ctx.t.level_above(max(ctx.bound - 1, 0)) + 1


@register("gap-laws", "derived.gaps", "left and right sets are disjoint, the pair witness sits at 2 rho + 1, differences stay below 2 rho + 2")
def _gap_laws(ctx: RunContext) -> Result:
    _need_two_type(ctx)
    c = _Collector()
    K = _window_levels(ctx)
    gaps = {a: hausdorff_gap(ctx.h, a, K) for a in ctx.points}
    for a, g in gaps.items():
        c.expect(not (g.left & g.right), law="disjoint", alpha=a)
        for k in range(1, K + 1):
            c.expect(len(g.left & {2 * k, 2 * k + 1}) <= 1, law="one-point", alpha=a, k=k)
    for a, b in itertools.combinations(ctx.points, 2):
        r = ctx.rho(a, b)
        ga, gb = gaps[a], gaps[b]
        c.expect(2 * r + 1 in (gb.left & ga.right), law="witness", alpha=a, beta=b, rho=r)
        c.expect(all(x < 2 * r + 2 for x in ga.left - gb.left), law="tower", alpha=a, beta=b, rho=r)
    return c.result()


@register("luzin-laws", "derived.luzin", "columns meet in at least rho points, only up to level rho, and the separators behave")
def _luzin_laws(ctx: RunContext) -> Result:
    _need_two_type(ctx)
    c = _Collector()
    h = ctx.h
    K = _window_levels(ctx)
    fam = {a: luzin_family(h, a, K) for a in ctx.points}
    pts = {a: f.points for a, f in fam.items()}
    for a, b in itertools.combinations(ctx.points, 2):
        r = ctx.rho(a, b)
        common = pts[a] & pts[b]
        c.expect(len(common) >= r, law="size", alpha=a, beta=b, rho=r, size=len(common))
        c.expect(all(p[0] <= r for p in common), law="levels", alpha=a, beta=b, rho=r)
    for b in ctx.points:
        for k in range(K):
            part: set = set()
            for x in h.closure(b, k):
                box = a_box(h, x, k + 1)
                if box is not None:
                    part |= box.points()
            for a in ctx.points:
                box = a_box(h, a, k + 1)
                if box is None or k < ctx.rho(a, b):
                    continue
                if a <= b:
                    c.expect(box.points() <= part, law="jones-below", alpha=a, beta=b, k=k)
                else:
                    c.expect(not (box.points() & part), law="jones-above", delta_point=a, beta=b, k=k)
    return c.result()


@register("countryman-order", "derived.orders", "the order is total and transitive, and same-class pairs compare coherently")
def _countryman(ctx: RunContext) -> Result:
    c = _Collector()
    h, t = ctx.h, ctx.t
    small = range(min(ctx.bound, t.m(3)))

    def less(a: int, b: int) -> bool:
        return countryman_cmp(h, a, b).order == "Less"

    for a, b in itertools.permutations(small, 2):
        c.expect(less(a, b) != less(b, a), law="total", alpha=a, beta=b)
    for a, b, d in itertools.permutations(small, 3):
        if less(a, b) and less(b, d):
            c.expect(less(a, d), law="transitive", triple=(a, b, d))
    classes: dict[tuple[int, int, int], list[tuple[int, int]]] = defaultdict(list)
    for a, b in itertools.combinations(ctx.points, 2):
        classes[chain_class(h, a, b)].append((a, b))
    for key, pairs in classes.items():
        for (a, b), (g, d) in itertools.combinations(pairs, 2):
            # the two pairs must be comparable coordinatewise
            lhs = countryman_cmp(h, a, g).order
            rhs = countryman_cmp(h, b, d).order
            c.expect({lhs, rhs} != {"Less", "Greater"}, law="chain", cls=key, pairs=((a, b), (g, d)), first=lhs, second=rhs)
    return c.result()


def random_patches(ctx: RunContext, count: int = 100) -> list[tuple[int, dict[int, int]]]:
    rng = random.Random(ctx.seed)
    out = []
    for _ in range(count):
        beta = rng.randrange(ctx.bound)
        size = rng.randint(1, 3)
        patch = {rng.randint(0, beta): rng.randint(0, ctx.levels + 3) for _ in range(size)}
        out.append((beta, patch))
    return out


@register("tree-antichains", "derived.orders", "nodes sharing a class are pairwise incomparable (full nodes plus seeded random patches)")
def _tree_antichains(ctx: RunContext) -> Result:
    c = _Collector()
    h = ctx.h
    nodes = {}
    for beta in ctx.points:
        n = aronszajn_node(h, beta)
        nodes[(beta, n.values())] = n
    for beta, patch in random_patches(ctx):
        n = aronszajn_node(h, beta, patch)
        nodes.setdefault((beta, n.values()), n)
    buckets: dict[tuple[int, int], list] = defaultdict(list)
    for n in nodes.values():
        buckets[aronszajn_classify(n)].append(n)
    for key, group in buckets.items():
        for f, g in itertools.combinations(group, 2):
            c.expect(not tree_leq(f, g) and not tree_leq(g, f), bucket=key, nodes=(f.to_json(), g.to_json()))
    return c.result()


@register("osc-window", "derived.oscillation", "oscillation sets match a brute-force scan and stay inside [k, rho)")
def _osc_window(ctx: RunContext) -> Result:
    c = _Collector()
    h = ctx.h
    K = _window_levels(ctx) + 1
    for a, b in itertools.permutations(ctx.points, 2):
        fa, fb = norm_function(h, a, K + 1), norm_function(h, b, K + 1)
        r = ctx.rho(a, b)
        for k in range(ctx.levels + 1):
            brute = tuple(s for s in range(k, K) if fa[s] <= fb[s] and fa[s + 1] > fb[s + 1])
            got = osc(h, a, b, k).points
            c.expect(got == brute and all(k <= s < r for s in got), alpha=a, beta=b, k=k, brute=brute, got=got)
    return c.result()


@register("osc-base-step", "derived.oscillation", "captured disjoint set pairs do not oscillate above their diameter")
def _osc_base(ctx: RunContext) -> Result:
    c = _Collector()
    h, t = ctx.h, ctx.t
    for s in range(1, ctx.levels + 1):
        if t.m(s) > ctx.bound:
            break
        for fam in enumerate_captured(h, s, 2, ctx.bound):
            a, b = fam
            if set(a) & set(b):
                continue
            ra = _set_rho(ctx, a)
            if ra >= s or _set_rho(ctx, b) != ra:
                continue
            vals = {osc(h, x, y, ra).count for x in a for y in b}
            c.expect(vals == {0}, level=s, a=a, b=b, k=ra, values=vals)
    return c.result()


@register("o-partition", "derived.oscillation", "the level partition is a partition and hands each block the promised intervals")
def _o_partition(ctx: RunContext) -> Result:
    c = _Collector()
    blocks = [partition_lookup(x) for x in range(4000)]
    c.expect(all(b >= 0 for b in blocks), issue="cover")
    for s in range(8):
        for n in range(s + 1):
            lo, hi = partition_interval(n, s - n)
            c.expect(hi == 2 * lo + s - n, n=n, k=s - n, interval=(lo, hi))
            probe = range(lo, hi + 1) if hi < 5000 else (lo, (lo + hi) // 2, hi)
            c.expect(all(partition_lookup(x) == n for x in probe), n=n, k=s - n, interval=(lo, hi))
    return c.result()


@register("o-star-default", "derived.oscillation", "o* falls back to 17 exactly when no domain sequence is extended")
def _o_star(ctx: RunContext) -> Result:
    c = _Collector()
    h = ctx.h
    from ..derived import color_o

    for a, b in itertools.combinations(ctx.points, 2):
        fmap = decode_map(color_o(h, a, b))
        got = color_o_star(h, a, b)
        if fmap is None:
            c.expect(got == DEFAULT_COLOR, alpha=a, beta=b, got=got, issue="invalid code")
            continue
        depth = max(len(s) for s in fmap.domain)
        fa, fb = norm_function(h, a, depth), norm_function(h, b, depth)
        hits_a = [i for i, s in enumerate(fmap.domain) if fa[: len(s)] == s]
        hits_b = [i for i, s in enumerate(fmap.domain) if fb[: len(s)] == s]
        c.expect(len(hits_a) <= 1 and len(hits_b) <= 1, alpha=a, beta=b, issue="uniqueness")
        want = fmap.at(hits_a[0], hits_b[0]) if hits_a and hits_b else DEFAULT_COLOR
        c.expect(got == want, alpha=a, beta=b, got=got, expected=want)
    return c.result()


@register("bounded-coloring", "derived.colorings", "no code of the bounded coloring occurs three times; components are in range")
def _bounded(ctx: RunContext) -> Result:
    c = _Collector()
    h = ctx.h
    seen: dict[int, list] = defaultdict(list)
    for a, b in itertools.combinations(ctx.points, 2):
        rec = bounded_color_c(h, a, b)
        c.expect(rec.rho >= 1 and 0 <= rec.a < ctx.t.m(rec.rho), alpha=a, beta=b, triple=rec.triple)
        seen[rec.code].append((a, b))
    for code, pairs in seen.items():
        c.expect(len(pairs) <= 2, code=code, pairs=pairs)
    return c.result()


@register("entangled-realization", "derived.colorings", "each full level-1 family of points realizes both order types")
def _entangled(ctx: RunContext) -> Result:
    c = _Collector()
    h, t = ctx.h, ctx.t
    if t.m(1) > ctx.bound:
        raise Skip("the window holds no level-1 member")
    try:
        fams = list(enumerate_captured(h, 1, t.n(1), ctx.bound, set_size=1))
        for fam in fams:
            real = entangled_realization(h, [D[0] for D in fam], 1)
            c.expect(set(real.types) == {"<", ">"}, family=real.family, types=real.types)
    except TypeTooSmall as exc:
        raise Skip(str(exc)) from exc
    return c.result()


@register("coherent-family", "derived.luzin", "functions of an extended scheme agree above the distance")
def _coherent_family(ctx: RunContext) -> Result:
    _need_two_type(ctx)
    if not isinstance(ctx.h, OmegaScheme):
        raise Skip("needs the omega scheme as ground")
    c = _Collector()
    ext = extend_scheme(ctx.h, fuel=ctx.fuel)
    for i in range(12):
        ext.request(Contain(Ord(1, i)))
    top = [x for x in ext.tip if isinstance(x, Ord)]
    K = ext.tip_level
    for a, b in itertools.combinations(top, 2):
        r = rho(ext, a, b)
        for k in range(r + 1, K + 1):
            rk = ctx.t.r(k)
            for s in range(k):
                for i in range(rk):
                    for j in range(rk):
                        pt = (k, s, i, j)
                        if coherent_domain(ext, a, pt) and coherent_domain(ext, b, pt):
                            va, vb = coherent_family_eval(ext, a, pt), coherent_family_eval(ext, b, pt)
                            c.expect(va == vb, alpha=a, beta=b, point=pt, values=(va, vb))
    return c.result()


@register("sspace-lemma", "derived.sspace", "the closest-point sets are decreasing in k and C of a member of H(beta) passes into C(beta)")
def _sspace(ctx: RunContext) -> Result:
    c = _Collector()
    h = ctx.h
    for b in ctx.points:
        C = c_set(h, b)
        for g in h_set(h, b):
            l = int(ctx.delta(g, b)) + 1
            sub = c_k_set(h, g, l)
            c.expect(sub <= C, beta=b, gamma=g, l=l, extra=sub - C)
        for k in range(ctx.levels + 1):
            c.expect(c_k_set(h, b, k + 1) <= c_k_set(h, b, k), beta=b, k=k)
    return c.result()


# ---------------------------------------------------------------- extension


def scheme_axiom_violations(t: TypeSpec, members: Iterable[Sequence[Ordinal]]) -> list[dict[str, Any]]:
    """Sizes, initial-segment intersections and decompositions inside a finite family."""
    bad: list[dict[str, Any]] = []
    by_level: dict[int, set[tuple[Ordinal, ...]]] = defaultdict(set)
    for F in members:
        F = fin_set(F)
        k = t.level_of_size(len(F))
        if k is None:
            bad.append({"axiom": "b", "set": _jsonable(F)})
            continue
        by_level[k].add(F)
    for k, sets in by_level.items():
        for E, F in itertools.combinations(sorted(sets), 2):
            common = [x for x in E if x in set(F)]
            if tuple(common) != E[: len(common)] or tuple(common) != F[: len(common)]:
                bad.append({"axiom": "c", "sets": _jsonable([E, F])})
        if k == 0:
            continue
        for F in sets:
            for piece in decompose(F, t, k).pieces:
                if piece not in by_level.get(k - 1, set()):
                    bad.append({"axiom": "d", "set": _jsonable(F), "missing": _jsonable(piece)})
    return bad[:MAX_COUNTEREXAMPLES]


SCHEDULE_LENGTH = 300


def extension_schedule(count: int = SCHEDULE_LENGTH) -> list[Request]:
    """Ground requests first, then containment of omega + i."""
    ground: list[Request] = [IH1(2, (0, 3)), IncludeF((0, 1)), IH1(0, ()), IH1(1, (0,)), IncludeF((0, 1, 2))]
    return ground + [Contain(Ord(1, i)) for i in range(count)]


def _ih1_ok(t: TypeSpec, p: Sequence[Ordinal], req: IH1) -> bool:
    k = t.level_of_size(len(p))
    if not k:
        return False
    dec = decompose(p, t, k)
    return (
        req.alpha in p
        and set(req.A) <= set(dec.pieces[0])
        and tuple(x for x in p if x < req.alpha) == dec.root
    )


def run_extension(ctx: RunContext, requests: Sequence[Request] | None = None) -> tuple[ExtensionScheme, list[tuple[Request, tuple | None]]]:
    ext = extend_scheme(ctx.h, fuel=ctx.fuel)
    served: list[tuple[Request, tuple | None]] = []
    for req in requests if requests is not None else extension_schedule():
        try:
            served.append((req, ext.request(req)))
        except (NoWitnessInSchedule, NotAMember):
            served.append((req, None))
    return ext, served


@register("extension-chain", "extension", "the deterministic chain is valid, meets its requests, round-trips red and cut, and replays identically")
def _extension(ctx: RunContext) -> Result:
    if not isinstance(ctx.h, OmegaScheme):
        raise Skip("needs the omega scheme as ground")
    t = ctx.t
    k = 0
    while t.m(k + 1) <= DEFAULT_WINDOW:
        k += 1
    if t.m(k) < 2 * SCHEDULE_LENGTH:
        raise Skip(f"level sizes jump past the search window of {DEFAULT_WINDOW} points")
    c = _Collector()
    ext, served = run_extension(ctx)
    gamma = ext.gamma
    for req, tip in served:
        if tip is None:
            # ground requests may be foreign to the type; containment never is
            c.expect(not isinstance(req, Contain), issue="unserved", request=req.to_json())
            continue
        if isinstance(req, Contain):
            c.expect(req.alpha in tip, issue="contain", request=req.to_json())
        elif isinstance(req, IncludeF):
            c.expect(ext.satisfied(req, tip), issue="include", request=req.to_json())
        else:
            c.expect(_ih1_ok(t, tip, req), issue="ih1", request=req.to_json())
    c.expect(sum(tip is not None for _, tip in served) >= 200, issue="served", count=len(served))
    prev: tuple = ()
    for p in ext.chain:
        c.expect(is_condition(ctx.h, p, gamma), issue="condition", p=p)
        c.expect(cond_leq(t, p, prev), issue="order", p=p, q=prev)
        prev = p
        low = [x for x in p if x < gamma]
        if low:
            a = alpha_of(p, gamma)
            c.expect(cut(red(p, gamma), succ(a), gamma) == p, issue="cut-red", p=p)
            F = red(p, gamma)
            c.expect(red(cut(F, succ(a), gamma), gamma) == F, issue="red-cut", F=F)
    for bad in scheme_axiom_violations(t, ext.fragment_members()):
        c.expect(False, issue="axioms", **bad)
    top = add(ext.tip[-1], 1)
    first = canonical_json(export_fragment(ext, top, ext.fragment_members()))
    again = replay_chain(ext.chain_log())
    second = canonical_json(export_fragment(again, top, again.fragment_members()))
    c.expect(first == second, issue="replay")
    return c.result()


# ---------------------------------------------------------------- fault injection


class SwappedDecomposition(SchemeHandle):
    """Wraps a handle and swaps pieces 0 and 1 of one level-k member.

    Points of those pieces then report the closure and piece index of the
    other piece, which is what a broken decomposition routine would do.
    """

    def __init__(self, base: SchemeHandle, level: int, bound: int) -> None:
        if level < 1:
            raise ValueError("pieces exist from level 1 on")
        self.base = base
        self.t = base.t
        self.level = level
        F = next(level_iter(base, level, bound), None)
        if F is None:
            raise ValueError(f"no level-{level} member below {bound}")
        dec = decompose(F, self.t, level)
        self.root = set(dec.root)
        self.pieces = dec.pieces
        self.where = {x: (i, p) for i in (0, 1) for p, x in enumerate(dec.pieces[i]) if x not in self.root}

    def in_domain(self, alpha: Ordinal) -> bool:
        return self.base.in_domain(alpha)

    def window(self, size: int) -> list[Ordinal]:
        return self.base.window(size)

    def level_cap(self, alpha: Ordinal) -> int | None:
        return self.base.level_cap(alpha)

    def closure(self, alpha: Ordinal, k: int) -> tuple[Ordinal, ...]:
        if k == self.level - 1 and alpha in self.where:
            i, p = self.where[alpha]
            return tuple(self.pieces[1 - i][: p + 1])
        return self.base.closure(alpha, k)

    def closure_set(self, alpha: Ordinal, k: int) -> frozenset:
        return frozenset(self.closure(alpha, k))

    def xi(self, alpha: Ordinal, k: int) -> int:
        if k == self.level and alpha in self.where:
            return 1 - self.where[alpha][0]
        return self.base.xi(alpha, k)


# ---------------------------------------------------------------- running


def run_check(name: str, ctx: RunContext) -> CheckReport:
    chk = CHECKS.get(name)
    if chk is None:
        raise UnknownCheck(f"no check named {name!r}; known: {', '.join(CHECKS)}")
    params = ctx.params()
    try:
        checked, bad = chk.fn(ctx)
    except Skip as exc:
        return CheckReport(name, params, True, 0, [], str(exc))
    except (NotATwoType, TypeTooSmall) as exc:
        return CheckReport(name, params, True, 0, [], str(exc))
    except SchemeError as exc:
        return CheckReport(name, params, False, 0, [{"error": type(exc).__name__, "message": str(exc)}])
    return CheckReport(name, params, not bad, checked, bad)


def run_suite(
    names: Iterable[str] | None,
    t: TypeSpec,
    bound: int | None = None,
    fuel: int = 10_000,
    seed: int = 0,
    handle: SchemeHandle | None = None,
) -> list[CheckReport]:
    """Run the named checks (all of them for ``None``); reports come back sorted by name."""
    selected = list(CHECKS) if names is None else list(names)
    for n in selected:
        if n not in CHECKS:
            raise UnknownCheck(f"no check named {n!r}; known: {', '.join(CHECKS)}")
    ctx = RunContext(t, bound, fuel, seed, handle=handle)
    return sorted((run_check(n, ctx) for n in selected), key=lambda r: r.name)
