"""Colorings read off the norms and piece indices: the 2-bounded coloring,
entangled functions and the coherent Suslin functions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from ..errors import BadOrder
from ..metric import rho
from ..ordinals import Ord, Ordinal, ordinal_to_json
from ..scheme import SchemeHandle
from ..typespec import PartitionSpec
from ._common import binary_subset, cantor_pair, require_exp_levels

__all__ = [
    "BoundedColor",
    "bounded_color_c",
    "entangled_eval",
    "entangled_vector",
    "EntangledRealization",
    "entangled_realization",
    "coherent_tree_eval",
    "COHERENT_BLOCK",
    "ALMOST_BLOCK",
]

# Blocks of the level partition used by the coherent Suslin functions.
COHERENT_BLOCK = 0
ALMOST_BLOCK = 1


def _ordinal_code(x: Ordinal) -> int:
    """n -> pair(0, n) and omega * b + i -> pair(b, i)."""
    if isinstance(x, Ord):
        return cantor_pair(x.block, x.offset)
    return cantor_pair(0, x)


@dataclass(frozen=True)
class BoundedColor:
    beta: Ordinal
    rho: int
    a: int
    case: int
    code: int

    @property
    def triple(self) -> tuple[Ordinal, int, int]:
        return self.beta, self.rho, self.a

    def to_json(self) -> dict[str, Any]:
        return {"beta": ordinal_to_json(self.beta), "rho": self.rho, "a": self.a, "case": self.case, "code": self.code}


def bounded_color_c(h: SchemeHandle, alpha: Ordinal, beta: Ordinal) -> BoundedColor:
    """Triple (beta, rho, a) and its code pair(pair(code(beta), rho), a)."""
    if not alpha < beta:
        raise BadOrder(f"need alpha < beta, got {alpha!r}, {beta!r}")
    r = rho(h, alpha, beta)
    if h.xi(beta, r) > 2:
        a, case = h.norm(alpha, r), 1
    else:
        a, case = h.norm(alpha, r - 1), 2
    code = cantor_pair(cantor_pair(_ordinal_code(beta), r), a)
    return BoundedColor(beta, r, a, case, code)


def entangled_eval(h: SchemeHandle, alpha: Ordinal, k: int) -> int:
    """Signed piece index: +Xi when the norm one level down lies in the coded subset, else -Xi."""
    if k == 0:
        h.check(alpha)
        return 0
    require_exp_levels(h, k, relative_to_root=False)
    x = h.xi(alpha, k)
    if x <= 0:
        return 0
    t = h.t
    C = binary_subset(x - 1, range(t.r(k), t.m(k - 1)))
    return x if h.norm(alpha, k - 1) in C else -x


def entangled_vector(h: SchemeHandle, alpha: Ordinal, upto: int) -> tuple[int, ...]:
    return tuple(entangled_eval(h, alpha, k) for k in range(upto + 1))


@dataclass(frozen=True)
class EntangledRealization:
    family: tuple[Ordinal, ...]
    level: int
    lex_order: tuple[Ordinal, ...]
    types: tuple[str, ...]

    def to_json(self) -> dict[str, Any]:
        return {
            "family": [ordinal_to_json(x) for x in self.family],
            "level": self.level,
            "lex_order": [ordinal_to_json(x) for x in self.lex_order],
            "types": list(self.types),
        }


def entangled_realization(h: SchemeHandle, family: Sequence[Ordinal], level: int) -> EntangledRealization:
    """Lexicographic order of the entangled vectors of a family of points.

    ``types[i - 1]`` is "<" when the vector of the first point is below that of
    the i-th one.  Vectors are cut at ``level``; for a family captured there
    they already differ by then.
    """
    fam = tuple(sorted(family))
    vecs = {x: entangled_vector(h, x, level) for x in fam}
    order = tuple(sorted(fam, key=lambda x: vecs[x]))
    first = vecs[fam[0]]
    types = tuple("<" if first < vecs[x] else ">" for x in fam[1:])
    return EntangledRealization(fam, level, order, types)


def coherent_tree_eval(
    h: SchemeHandle, beta: Ordinal, xi_point: Ordinal, partition: PartitionSpec | None = None
) -> int:
    """Bit at xi of the coherent Suslin function of beta.

    ``partition`` splits the levels; block COHERENT_BLOCK gets the constant
    case and block ALMOST_BLOCK the coded-subset case (default: parity).
    """
    if not xi_point < beta:
        raise BadOrder(f"need xi < beta, got {xi_point!r}, {beta!r}")
    part = partition or PartitionSpec.parity()
    l = rho(h, xi_point, beta)
    require_exp_levels(h, l, relative_to_root=True)
    if h.xi(xi_point, l) != 0:
        return 0
    block = part.block(l)
    xb = h.xi(beta, l)
    if block == COHERENT_BLOCK:
        return 1 if xb == 1 else 0
    if block == ALMOST_BLOCK:
        t = h.t
        g = binary_subset(xb - 1, range(t.r(l), t.m(l - 1)))
        return 1 if h.norm(xi_point, l) in g else 0
    return 0
