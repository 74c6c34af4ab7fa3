"""Intersection predicates, t-stars and compatible families."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .setcore import ElementSet, Family, elements_of, layer_masks, mask_of


@dataclass(frozen=True)
class StarDescriptor:
    n: int
    r: int
    center: ElementSet

    def __post_init__(self):
        if self.center.universe_size != self.n:
            raise ValueError(f"star center {self.center} not a subset of [{self.n}]")
        if not len(self.center) <= self.r <= self.n:
            raise ValueError(f"need |T| <= r <= n, got |T|={len(self.center)}, r={self.r}, n={self.n}")

    @classmethod
    def of(cls, n: int, r: int, center) -> "StarDescriptor":
        return cls(n, r, ElementSet.of(n, center))


def is_t_intersecting(family: Family, t: int) -> bool:
    if t < 1:
        raise ValueError("t must be >= 1")
    ms = [s.bits for s in family.sets]
    return all((a & b).bit_count() >= t for a, b in combinations(ms, 2))


def _same_universe(*families: Family) -> None:
    if len({f.universe_size for f in families}) > 1:
        raise ValueError("universe mismatch")


def first_cross_violation(a: Family, b: Family, t: int) -> tuple[ElementSet, ElementSet] | None:
    """First pair (canonical order) meeting in fewer than ``t`` elements."""
    if t < 1:
        raise ValueError("t must be >= 1")
    _same_universe(a, b)
    for x in a.sets:
        for y in b.sets:
            if (x.bits & y.bits).bit_count() < t:
                return x, y
    return None


def first_t_violation(family: Family, t: int) -> tuple[ElementSet, ElementSet] | None:
    if t < 1:
        raise ValueError("t must be >= 1")
    for x, y in combinations(family.sets, 2):
        if (x.bits & y.bits).bit_count() < t:
            return x, y
    return None


def is_cross_t_intersecting(a: Family, b: Family, t: int) -> bool:
    return first_cross_violation(a, b, t) is None


def is_cross_t_intersecting_k(families: Sequence[Family], t: int) -> bool:
    if len(families) < 2:
        raise ValueError("need at least two families")
    _same_universe(*families)
    return all(is_cross_t_intersecting(x, y, t) for x, y in combinations(families, 2))


def star(desc: StarDescriptor) -> Family:
    """All r-subsets of [n] containing the center."""
    n, c = desc.n, desc.center.bits
    rest = [e for e in range(1, n + 1) if not c >> (e - 1) & 1]
    extra = desc.r - len(desc.center)
    return Family(n, (c | mask_of(x) for x in combinations(rest, extra)))


def star_masks(n: int, r: int, center: int) -> frozenset[int]:
    return star(StarDescriptor(n, r, ElementSet(n, center))).masks


def common_star_center(families: Sequence[Family], t: int) -> ElementSet | None:
    """A t-set T with every family equal to the full star on T in its own layer.

    Families must be nonempty and uniform; returns the first such T in
    canonical order, or ``None``.
    """
    if not families or any(len(f) == 0 for f in families):
        return None
    _same_universe(*families)
    n = families[0].universe_size
    rs = []
    for f in families:
        r = f.uniformity
        if r is None:
            raise ValueError("star recognition needs uniform families")
        if r < t:
            return None
        rs.append(r)
    core = ~0
    for f in families:
        for m in f.masks:
            core &= m
    for combo in combinations(elements_of(core), t):
        center = ElementSet.of(n, combo)
        if all(f == star(StarDescriptor(n, r, center)) for f, r in zip(families, rs)):
            return center
    return None


def recognize_star(family: Family, t: int) -> ElementSet | None:
    """Return T when ``family`` is the full t-star on T in its layer."""
    if len(family) and family.uniformity is None:
        raise ValueError("star recognition needs a uniform family")
    return common_star_center([family], t)


def compatible_family(a: Family, s: int, t: int) -> Family:
    """The largest s-uniform family cross-t-intersecting with ``a``."""
    n = a.universe_size
    if not 1 <= t <= s <= n:
        raise ValueError(f"need 1 <= t <= s <= n, got t={t}, s={s}, n={n}")
    if len(a):
        r = a.uniformity
        if r is None or not t <= r <= s:
            raise ValueError(f"need a uniform family with t <= r <= s, got r={r}")
    return Family(n, compatible_masks(a.masks, n, s, t))


def compatible_masks(masks, n: int, s: int, t: int) -> list[int]:
    ms = list(masks)
    return [b for b in layer_masks(n, s) if all((a & b).bit_count() >= t for a in ms)]
