"""Ground sets, uniform families and exact counting.

Sets are stored as integer bit-vectors (bit ``e - 1`` holds element ``e``);
elements are 1-based everywhere outside this module.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_UNIVERSE = 128


class FamilyParseError(ValueError):
    """Raised when a family file cannot be parsed."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient; zero when ``k > n``."""
    if n < 0 or k < 0:
        raise ValueError(f"binomial needs nonnegative arguments, got ({n}, {k})")
    return math.comb(n, k)


def _check_universe(n: int) -> None:
    if not isinstance(n, int) or n < 1 or n > MAX_UNIVERSE:
        raise ValueError(f"universe size must be in [1, {MAX_UNIVERSE}], got {n!r}")


def mask_of(members: Iterable[int]) -> int:
    bits = 0
    for e in members:
        bits |= 1 << (e - 1)
    return bits


def elements_of(bits: int) -> tuple[int, ...]:
    out = []
    e = 1
    while bits:
        if bits & 1:
            out.append(e)
        bits >>= 1
        e += 1
    return tuple(out)


@dataclass(frozen=True)
class ElementSet:
    """A subset of ``[n]``."""

    universe_size: int
    bits: int

    def __post_init__(self):
        _check_universe(self.universe_size)
        if self.bits < 0 or self.bits >> self.universe_size:
            raise ValueError(
                f"set {elements_of(max(self.bits, 0))} not contained in [{self.universe_size}]"
            )

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "ElementSet":
        members = list(members)
        for e in members:
            if not isinstance(e, int) or e < 1 or e > n:
                raise ValueError(f"element {e!r} outside [{n}]")
        if len(set(members)) != len(members):
            raise ValueError(f"duplicate element in {members}")
        return cls(n, mask_of(members))

    @property
    def members(self) -> tuple[int, ...]:
        return elements_of(self.bits)

    def cardinality(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, e: object) -> bool:
        return isinstance(e, int) and 1 <= e <= self.universe_size and bool(self.bits >> (e - 1) & 1)

    def _same(self, other: "ElementSet") -> None:
        if other.universe_size != self.universe_size:
            raise ValueError("universe mismatch")

    def __and__(self, other: "ElementSet") -> "ElementSet":
        self._same(other)
        return ElementSet(self.universe_size, self.bits & other.bits)

    def __or__(self, other: "ElementSet") -> "ElementSet":
        self._same(other)
        return ElementSet(self.universe_size, self.bits | other.bits)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        self._same(other)
        return ElementSet(self.universe_size, self.bits & ~other.bits)

    def issubset(self, other: "ElementSet") -> bool:
        return self.bits & ~other.bits == 0

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.cardinality(), self.members)

    def __lt__(self, other: "ElementSet") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


def canonical_key(bits: int) -> tuple[int, tuple[int, ...]]:
    return (bits.bit_count(), elements_of(bits))


class Family:
    """An immutable, deduplicated, canonically ordered family of subsets of ``[n]``.

    Canonical order is by cardinality, then lexicographic on sorted elements.
    """

    __slots__ = ("universe_size", "sets", "_masks", "_hash")

    def __init__(self, universe_size: int, sets: Iterable[ElementSet | int] = ()):
        _check_universe(universe_size)
        masks = set()
        for s in sets:
            if isinstance(s, ElementSet):
                if s.universe_size != universe_size:
                    raise ValueError("universe mismatch")
                masks.add(s.bits)
            else:
                if s < 0 or s >> universe_size:
                    raise ValueError(f"mask {s} outside [{universe_size}]")
                masks.add(s)
        ordered = sorted(masks, key=canonical_key)
        self.universe_size = universe_size
        self.sets = tuple(ElementSet(universe_size, m) for m in ordered)
        self._masks = frozenset(masks)
        self._hash = None

    @classmethod
    def of(cls, n: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls(n, (ElementSet.of(n, s) for s in sets))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "Family":
        return cls(n, masks)

    @property
    def masks(self) -> frozenset[int]:
        return self._masks

    @property
    def uniformity(self) -> int | None:
        """Common set size, or ``None`` when empty or mixed."""
        sizes = {s.cardinality() for s in self.sets}
        return sizes.pop() if len(sizes) == 1 else None

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[ElementSet]:
        return iter(self.sets)

    def __contains__(self, s: object) -> bool:
        if isinstance(s, ElementSet):
            return s.universe_size == self.universe_size and s.bits in self._masks
        return False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return self.universe_size == other.universe_size and self._masks == other._masks

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.universe_size, self._masks))
        return self._hash

    def sort_key(self) -> tuple:
        return tuple(s.sort_key() for s in self.sets)

    def to_lists(self) -> list[list[int]]:
        return [list(s.members) for s in self.sets]

    def __repr__(self) -> str:
        return "{" + ", ".join(map(repr, self.sets)) + "}"


@dataclass(frozen=True)
class Params:
    """Problem instance: universe size, threshold and uniformities ``r_1 <= ... <= r_k``."""

    n: int
    t: int
    uniformities: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "uniformities", tuple(self.uniformities))
        us = self.uniformities
        if len(us) < 2:
            raise ValueError("need at least two uniformities")
        if not 1 <= self.t:
            raise ValueError(f"need t >= 1, got t={self.t}")
        chain = (self.t, *us, self.n)
        if any(a > b for a, b in zip(chain, chain[1:])):
            raise ValueError(
                f"need 1 <= t <= r_1 <= ... <= r_k <= n, got n={self.n}, t={self.t}, r={list(us)}"
            )
        _check_universe(self.n)

    @classmethod
    def pair(cls, n: int, r: int, s: int, t: int) -> "Params":
        return cls(n, t, (r, s))

    @property
    def k(self) -> int:
        return len(self.uniformities)

    @property
    def is_pair(self) -> bool:
        return len(self.uniformities) == 2

    @property
    def r(self) -> int:
        return self.uniformities[0]

    @property
    def s(self) -> int:
        return self.uniformities[-1]

    def to_dict(self) -> dict:
        d = {"n": self.n, "t": self.t}
        if self.is_pair:
            d.update(r=self.r, s=self.s)
        d["uniformities"] = list(self.uniformities)
        return d


def layer_masks(n: int, r: int) -> list[int]:
    """Bitmasks of all r-subsets of [n] in canonical order."""
    return [mask_of(c) for c in combinations(range(1, n + 1), r)]


def generate_uniform(n: int, r: int) -> Family:
    """The full layer of r-subsets of ``[n]``."""
    _check_universe(n)
    if r < 0 or r > n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    return Family(n, layer_masks(n, r))


_SPLIT = re.compile(r"[\s,]+")


def read_family(text: str, n: int) -> Family:
    """Parse the plain-text family format.

    One set per line, elements separated by spaces or commas in any order.
    ``#`` starts a comment and blank lines are skipped. A line holding only
    ``{}`` is the empty set.
    """
    _check_universe(n)
    sets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "{}":
            sets.append(0)
            continue
        bits = 0
        for tok in _SPLIT.split(line.strip(", ")):
            if not tok:
                continue
            try:
                e = int(tok, 10)
            except ValueError:
                raise FamilyParseError(lineno, f"not an integer: {tok!r}") from None
            if not 1 <= e <= n:
                raise FamilyParseError(lineno, f"element {e} outside [{n}]")
            if bits >> (e - 1) & 1:
                raise FamilyParseError(lineno, f"duplicate element {e}")
            bits |= 1 << (e - 1)
        sets.append(bits)
    return Family(n, sets)


def write_family(family: Family) -> str:
    lines = []
    for s in family.sets:
        lines.append(" ".join(map(str, s.members)) if s.bits else "{}")
    return "".join(line + "\n" for line in lines)


def subfamilies(layer: Sequence[int], max_size: int | None = None) -> Iterator[tuple[int, ...]]:
    """All subfamilies of ``layer`` (as mask tuples) of size at most ``max_size``."""
    top = len(layer) if max_size is None else min(max_size, len(layer))
    for size in range(top + 1):
        yield from combinations(layer, size)
