"""Hausdorff gaps read off the piece indices of a 2-type scheme.

Level k contributes the pair {2k, 2k+1}: the left set takes 2k + xi and the
right set takes 2k + 1 - xi whenever xi = Xi_alpha(k) is not -1.  Because
level k only touches those two numbers, truncating at K levels gives the
exact traces on [0, 2K + 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Union

from ..errors import BadOrder, InexactWindow
from ..metric import rho
from ..ordinals import Ordinal, ordinal_to_json
from ..scheme import SchemeHandle
from ._common import require_two_type

__all__ = ["GapFragment", "GapPairData", "hausdorff_gap", "gap_pair_data"]

LevelMask = Union[None, Iterable[int], Callable[[int], bool]]


def _mask_fn(mask: LevelMask) -> Callable[[int], bool]:
    if mask is None:
        return lambda k: True
    if callable(mask):
        return mask
    allowed = set(mask)
    return lambda k: k in allowed


@dataclass(frozen=True)
class GapFragment:
    alpha: Ordinal
    K: int
    left: frozenset[int]
    right: frozenset[int]
    exact_below: int

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": ordinal_to_json(self.alpha),
            "K": self.K,
            "left": sorted(self.left),
            "right": sorted(self.right),
            "exact_below": self.exact_below,
        }


def hausdorff_gap(h: SchemeHandle, alpha: Ordinal, K: int, mask: LevelMask = None) -> GapFragment:
    """Left and right sets of alpha on [0, 2K + 2); ``mask`` restricts the levels used."""
    require_two_type(h, K)
    keep = _mask_fn(mask)
    left, right = set(), set()
    for k in range(1, K + 1):
        if not keep(k):
            continue
        x = h.xi(alpha, k)
        if x >= 0:
            left.add(2 * k + x)
            right.add(2 * k + 1 - x)
    return GapFragment(alpha, K, frozenset(left), frozenset(right), 2 * K + 2)


@dataclass(frozen=True)
class GapPairData:
    alpha: Ordinal
    beta: Ordinal
    rho: int
    left_alpha_right_beta: frozenset[int]
    left_beta_right_alpha: frozenset[int]
    left_difference: frozenset[int]
    right_difference: frozenset[int]
    chi0_compatible: bool
    chi1_compatible: bool
    exact: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": ordinal_to_json(self.alpha),
            "beta": ordinal_to_json(self.beta),
            "rho": self.rho,
            "L_alpha & R_beta": sorted(self.left_alpha_right_beta),
            "L_beta & R_alpha": sorted(self.left_beta_right_alpha),
            "L_alpha - L_beta": sorted(self.left_difference),
            "R_alpha - R_beta": sorted(self.right_difference),
            "chi0_compatible": self.chi0_compatible,
            "chi1_compatible": self.chi1_compatible,
            "exact": self.exact,
        }


def gap_pair_data(h: SchemeHandle, alpha: Ordinal, beta: Ordinal, K: int, allow_partial: bool = False) -> GapPairData:
    """Intersections and differences of two gap columns.

    Every set involved lives below 2 rho + 2, so the answer is exact once
    K >= rho.  With a smaller K an InexactWindow is raised (carrying the
    partial record) unless ``allow_partial`` is set.
    """
    if not alpha < beta:
        raise BadOrder(f"need alpha < beta, got {alpha!r}, {beta!r}")
    r = rho(h, alpha, beta)
    a = hausdorff_gap(h, alpha, K)
    b = hausdorff_gap(h, beta, K)
    rec = GapPairData(
        alpha,
        beta,
        r,
        a.left & b.right,
        b.left & a.right,
        a.left - b.left,
        a.right - b.right,
        not ((a.left | b.left) & (a.right | b.right)),
        bool((a.left & b.right) | (b.left & a.right)),
        K >= r,
    )
    if not rec.exact and not allow_partial:
        err = InexactWindow(f"K={K} is below rho={r}; the data is only partial")
        err.partial = rec  # type: ignore[attr-defined]
        raise err
    return rec
