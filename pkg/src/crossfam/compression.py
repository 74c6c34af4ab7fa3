"""Shifting operators and fixpoint drivers.

``delta`` moves element ``j`` to ``i`` inside one set; ``big_delta`` applies
it to a family, keeping a set in place whenever its image is already
present. Left-compressions (``i < j``) strictly lower the element-sum
potential whenever they change a family, which bounds the number of
changing steps of the fixpoint drivers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .setcore import ElementSet, Family


@dataclass(frozen=True, order=True)
class CompressionIndex:
    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError(f"compression index needs i != j, got ({self.i}, {self.j})")

    @property
    def is_left(self) -> bool:
        return self.i < self.j

    def check(self, n: int) -> None:
        if not (1 <= self.i <= n and 1 <= self.j <= n):
            raise ValueError(f"compression index ({self.i}, {self.j}) outside [{n}]")

    def as_tuple(self) -> tuple[int, int]:
        return (self.i, self.j)


def left_indices(n: int) -> Iterator[CompressionIndex]:
    """Left-compression indices in lexicographic order."""
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            yield CompressionIndex(i, j)


def all_indices(n: int) -> Iterator[CompressionIndex]:
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                yield CompressionIndex(i, j)


def _delta_mask(bits: int, ib: int, jb: int) -> int:
    if bits & jb and not bits & ib:
        return bits ^ jb ^ ib
    return bits


def _big_delta_masks(masks: frozenset[int] | set[int], ib: int, jb: int) -> set[int]:
    out = set()
    for a in masks:
        d = _delta_mask(a, ib, jb)
        out.add(a if d in masks else d)
    return out


def delta(a: ElementSet, idx: CompressionIndex) -> ElementSet:
    idx.check(a.universe_size)
    return ElementSet(a.universe_size, _delta_mask(a.bits, 1 << (idx.i - 1), 1 << (idx.j - 1)))


def big_delta(family: Family, idx: CompressionIndex) -> Family:
    idx.check(family.universe_size)
    ib, jb = 1 << (idx.i - 1), 1 << (idx.j - 1)
    return Family(family.universe_size, _big_delta_masks(family.masks, ib, jb))


def _mask_potential(bits: int) -> int:
    total, e = 0, 1
    while bits:
        if bits & 1:
            total += e
        bits >>= 1
        e += 1
    return total


def potential(family: Family) -> int:
    """Sum of all elements over all member sets."""
    return sum(_mask_potential(m) for m in family.masks)


def violating_index(family: Family) -> CompressionIndex | None:
    """First left-compression (lexicographic order) that changes ``family``."""
    masks = family.masks
    for idx in left_indices(family.universe_size):
        ib, jb = 1 << (idx.i - 1), 1 << (idx.j - 1)
        for a in masks:
            if a & jb and not a & ib and (a ^ jb ^ ib) not in masks:
                return idx
    return None


def is_left_compressed(family: Family) -> bool:
    return violating_index(family) is None


@dataclass(frozen=True)
class CompressionStep:
    index: CompressionIndex
    changed: tuple[bool, ...]
    potential: int


@dataclass
class CompressionTrace:
    """Changing steps of a fixpoint run; ``potential`` is summed over all families."""

    steps: list[CompressionStep] = field(default_factory=list)
    sweeps: int = 0
    initial_potential: int = 0
    final_potential: int = 0

    def potentials(self) -> list[int]:
        return [self.initial_potential] + [s.potential for s in self.steps]

    def to_dict(self) -> dict:
        return {
            "sweeps": self.sweeps,
            "initial_potential": str(self.initial_potential),
            "final_potential": str(self.final_potential),
            "steps": [
                {"i": s.index.i, "j": s.index.j, "changed": list(s.changed), "potential": str(s.potential)}
                for s in self.steps
            ],
        }


def _compress_masks(families: list[set[int]], n: int, trace: CompressionTrace) -> list[set[int]]:
    # Restart the lexicographic sweep after every changing step.
    pot = sum(_mask_potential(m) for f in families for m in f)
    trace.initial_potential = pot
    pairs = [(1 << (i - 1), 1 << (j - 1), CompressionIndex(i, j))
             for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    while True:
        trace.sweeps += 1
        for ib, jb, idx in pairs:
            images = [_big_delta_masks(f, ib, jb) for f in families]
            changed = tuple(img != f for img, f in zip(images, families))
            if any(changed):
                families = images
                pot = sum(_mask_potential(m) for f in families for m in f)
                trace.steps.append(CompressionStep(idx, changed, pot))
                break
        else:
            trace.final_potential = pot
            return families


def compress_to_fixpoint(family: Family) -> tuple[Family, CompressionTrace]:
    trace = CompressionTrace()
    (out,) = _compress_masks([set(family.masks)], family.universe_size, trace)
    return Family(family.universe_size, out), trace


def compress_pair_to_fixpoint(a: Family, b: Family) -> tuple[Family, Family, CompressionTrace]:
    """Compress two families simultaneously.

    Every left-compression that changes at least one family is applied to
    both, so cross-t-intersection is preserved at each step.
    """
    if a.universe_size != b.universe_size:
        raise ValueError(f"universe mismatch: {a.universe_size} vs {b.universe_size}")
    n = a.universe_size
    trace = CompressionTrace()
    fa, fb = _compress_masks([set(a.masks), set(b.masks)], n, trace)
    return Family(n, fa), Family(n, fb), trace


def compress_families_to_fixpoint(families: Iterable[Family]) -> tuple[list[Family], CompressionTrace]:
    families = list(families)
    sizes = {f.universe_size for f in families}
    if len(sizes) != 1:
        raise ValueError("universe mismatch")
    n = sizes.pop()
    trace = CompressionTrace()
    out = _compress_masks([set(f.masks) for f in families], n, trace)
    return [Family(n, f) for f in out], trace
