"""Exact maximisation of the product of sizes of cross-t-intersecting families.

Internally a family is a bitmask over the indices of its layer (layers are
listed in canonical order), so ``compat`` and its reverse are plain AND
folds over precomputed adjacency masks.

Three pair modes are provided:

``brute``
    every nonempty subfamily ``A`` of the r-layer, paired with the largest
    compatible ``B``. No structural facts are used.
``closure``
    depth-first enumeration of closed pairs ``A = back(B)``, ``B = compat(A)``
    (each closed pair is reached exactly once via a canonicity test), pruned
    with ``(|A| + remaining) * |B| < best``. Optimal pairs are always closed,
    so the full witness set is recovered.
``compressed``
    enumeration restricted to left-compressed ``A``; gives the optimum only.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .bounds import bound_for, threshold_applicable
from .intersection import common_star_center
from .setcore import ElementSet, Family, Params, binomial, layer_masks, mask_of

MODES = ("brute", "closure", "compressed")
MAX_WITNESSES = 10_000
BRUTE_GUARD = 16
BNB_GUARD = 40
K_GUARD = 1 << 20


class SearchGuardError(RuntimeError):
    """The instance is larger than the configured enumeration guard."""


@dataclass
class SearchReport:
    params: Params
    mode: str
    optimum: int
    witnesses: list[tuple[Family, ...]]
    witness_count: int
    nodes_explored: int
    all_witnesses_are_star_tuples: bool | None = None
    common_centers: list[ElementSet | None] = field(default_factory=list)

    @property
    def truncated(self) -> bool:
        return self.witness_count > len(self.witnesses)

    @property
    def witnesses_complete(self) -> bool:
        return self.mode != "compressed" and not self.truncated

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "mode": self.mode,
            "optimum": str(self.optimum),
            "witness_count": self.witness_count,
            "witnesses": [[f.to_lists() for f in w] for w in self.witnesses],
            "all_witnesses_are_star_tuples": self.all_witnesses_are_star_tuples,
            "common_centers": [list(c.members) if c is not None else None for c in self.common_centers],
            "nodes_explored": self.nodes_explored,
        }


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _PairInstance:
    def __init__(self, n: int, r: int, s: int, t: int):
        self.n, self.r, self.s, self.t = n, r, s, t
        self.left = layer_masks(n, r)
        self.right = layer_masks(n, s)
        self.fwd = [mask_of(j for j, b in enumerate(self.right, 1) if (a & b).bit_count() >= t)
                    for a in self.left]
        self.back = [mask_of(i for i, a in enumerate(self.left, 1) if (a & b).bit_count() >= t)
                     for b in self.right]
        self.full_left = (1 << len(self.left)) - 1
        self.full_right = (1 << len(self.right)) - 1

    def compat(self, amask: int) -> int:
        b = self.full_right
        for i in _bits(amask):
            b &= self.fwd[i]
        return b

    def back_closure(self, bmask: int) -> int:
        a = self.full_left
        for j in _bits(bmask):
            a &= self.back[j]
        return a

    def star_lower_bound(self) -> int:
        center = (1 << self.t) - 1
        a = mask_of(i for i, m in enumerate(self.left, 1) if m & center == center)
        return a.bit_count() * self.compat(a).bit_count()

    def families(self, amask: int, bmask: int) -> tuple[Family, Family]:
        return (Family(self.n, [self.left[i] for i in _bits(amask)]),
                Family(self.n, [self.right[j] for j in _bits(bmask)]))


class _Collector:
    """Running optimum with all ties (stored up to ``MAX_WITNESSES``)."""

    def __init__(self, best: int = 0):
        self.best = best
        self.items: list[tuple[int, int]] = []
        self.count = 0
        self.nodes = 0

    def offer(self, product: int, item) -> None:
        if product > self.best:
            self.best = product
            self.items = []
            self.count = 0
        if product == self.best:
            self.count += 1
            if len(self.items) < MAX_WITNESSES:
                self.items.append(item)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def _pair_params(params: Params) -> None:
    if not params.is_pair:
        raise ValueError("pair search needs exactly two uniformities; use max_product_k")


def _finish(params: Params, mode: str, inst, best: int, items, count: int, nodes: int,
            check_stars: bool) -> SearchReport:
    witnesses = [inst.families(a, b) for a, b in items]
    witnesses.sort(key=lambda w: tuple((len(f), f.sort_key()) for f in w))
    centers = [common_star_center(list(w), params.t) for w in witnesses]
    all_stars = None
    if check_stars and count == len(witnesses):
        all_stars = all(c is not None for c in centers)
    return SearchReport(params, mode, best, witnesses, count, nodes, all_stars, centers)


def max_product_brute(params: Params, guard: int = BRUTE_GUARD, include_empty: bool = False) -> SearchReport:
    """Exhaustive optimum over every subfamily of the r-layer."""
    _pair_params(params)
    m = binomial(params.n, params.r)
    if m > guard:
        raise SearchGuardError(f"brute force refuses C({params.n},{params.r}) = {m} > guard {guard}")
    inst = _PairInstance(params.n, params.r, params.s, params.t)
    col = _Collector()
    start = 0 if include_empty else 1
    for amask in range(start, 1 << m):
        col.nodes += 1
        bmask = inst.compat(amask)
        col.offer(amask.bit_count() * bmask.bit_count(), (amask, bmask))
    return _finish(params, "brute", inst, col.best, col.items, col.count, col.nodes, True)


def _closure_subtree(inst: _PairInstance, a: int, b: int, y: int, col: _Collector) -> None:
    col.nodes += 1
    if a:
        col.offer(a.bit_count() * b.bit_count(), (a, b))
    m = len(inst.left)
    for j in range(y, m):
        bit = 1 << j
        if a & bit:
            continue
        b2 = b & inst.fwd[j]
        tail = ((1 << m) - 1) ^ ((1 << j) - 1)
        # Canonical descendants only gain indices >= j.
        if ((a | tail).bit_count()) * b2.bit_count() < col.best:
            continue
        a2 = inst.back_closure(b2)
        low = bit - 1
        if a2 & low != a & low:
            continue
        rest = (tail ^ bit) & ~a2
        if (a2.bit_count() + rest.bit_count()) * b2.bit_count() < col.best:
            continue
        _closure_subtree(inst, a2, b2, j + 1, col)


def _closure_task(args) -> tuple[int, list, int, int]:
    n, r, s, t, j, lower = args
    inst = _PairInstance(n, r, s, t)
    col = _Collector(lower)
    b0 = inst.full_right
    a0 = inst.back_closure(b0)
    b1 = b0 & inst.fwd[j]
    a1 = inst.back_closure(b1)
    low = (1 << j) - 1
    col.nodes += 1
    if a1 & low == a0 & low:
        _closure_subtree(inst, a1, b1, j + 1, col)
    return col.best, col.items, col.count, col.nodes


def _compressed_predecessors(inst: _PairInstance) -> list[int]:
    index = {m: k for k, m in enumerate(inst.left)}
    preds = []
    for x in inst.left:
        p = 0
        for i in range(1, inst.n + 1):
            for j in range(i + 1, inst.n + 1):
                ib, jb = 1 << (i - 1), 1 << (j - 1)
                if x & jb and not x & ib:
                    p |= 1 << index[x ^ jb ^ ib]
        preds.append(p)
    return preds


def _compressed_search(inst: _PairInstance, col: _Collector) -> None:
    preds = _compressed_predecessors(inst)
    m = len(inst.left)

    def rec(a: int, b: int, pos: int) -> None:
        for x in range(pos, m):
            if preds[x] & ~a:
                continue
            a2 = a | (1 << x)
            b2 = b & inst.fwd[x]
            col.nodes += 1
            col.offer(a2.bit_count() * b2.bit_count(), (a2, b2))
            if (a2.bit_count() + m - x - 1) * b2.bit_count() < col.best:
                continue
            rec(a2, b2, x + 1)

    rec(0, inst.full_right, 0)


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("CROSSFAM_THREADS")
        threads = int(env) if env else 1
    return max(1, threads)


def max_product_bnb(params: Params, mode: str = "closure", guard: int = BNB_GUARD,
                    threads: int | None = None) -> SearchReport:
    """Branch-and-bound optimum; ``closure`` also returns every optimal pair.

    Top-level subtrees are independent tasks seeded with the star-pair
    product as lower bound, so the report does not depend on ``threads``.
    """
    _check_mode(mode)
    _pair_params(params)
    if mode == "brute":
        return max_product_brute(params)
    m = binomial(params.n, params.r)
    if m > guard:
        raise SearchGuardError(f"branch-and-bound refuses C({params.n},{params.r}) = {m} > guard {guard}")
    inst = _PairInstance(params.n, params.r, params.s, params.t)
    lower = inst.star_lower_bound()

    if mode == "compressed":
        col = _Collector(lower)
        _compressed_search(inst, col)
        return _finish(params, mode, inst, col.best, col.items, col.count, col.nodes, False)

    root = _Collector(lower)
    root.nodes += 1
    a0 = inst.back_closure(inst.full_right)
    if a0:
        root.offer(a0.bit_count() * inst.full_right.bit_count(), (a0, inst.full_right))
    tasks = [(params.n, params.r, params.s, params.t, j, lower) for j in range(m) if not a0 >> j & 1]
    workers = resolve_threads(threads)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_closure_task, tasks))
    else:
        results = [_closure_task(task) for task in tasks]

    best = max([root.best] + [res[0] for res in results])
    items, count, nodes = [], 0, root.nodes
    for res_best, res_items, res_count, res_nodes in [(root.best, root.items, root.count, 0)] + results:
        nodes += res_nodes
        if res_best == best:
            items.extend(res_items)
            count += res_count
    return _finish(params, mode, inst, best, items[:MAX_WITNESSES] if len(items) > MAX_WITNESSES else items,
                   count, nodes, True)


def max_product(params: Params, mode: str = "closure", guard: int | None = None,
                threads: int | None = None) -> SearchReport:
    _check_mode(mode)
    if not params.is_pair:
        return max_product_k(params.n, params.uniformities, params.t, guard or K_GUARD)
    if mode == "brute":
        return max_product_brute(params, guard or BRUTE_GUARD)
    return max_product_bnb(params, mode, guard or BNB_GUARD, threads)


class _KInstance:
    def __init__(self, n: int, rs: tuple[int, ...], t: int):
        self.n, self.t = n, t
        self.layers = [layer_masks(n, r) for r in rs]
        self.adj = [[[mask_of(y for y, b in enumerate(lb, 1) if (a & b).bit_count() >= t) for a in la]
                     for lb in self.layers] for la in self.layers]

    def families(self, masks: tuple[int, ...]) -> tuple[Family, ...]:
        return tuple(Family(self.n, [layer[i] for i in _bits(m)]) for layer, m in zip(self.layers, masks))


def max_product_k(n: int, r_list, t: int, guard: int = K_GUARD, include_empty: bool = False) -> SearchReport:
    """Exact optimum of the product of k pairwise cross-t-intersecting families.

    ``A_1 .. A_{k-1}`` are enumerated as subfamilies of what the earlier
    choices allow; ``A_k`` is then the largest compatible family.
    """
    params = Params(n, t, tuple(r_list))
    rs = params.uniformities
    k = len(rs)
    work = 1
    for r in rs[:-1]:
        work <<= binomial(n, r)
    if work > guard:
        raise SearchGuardError(f"k-ary enumeration refuses {work} candidate tuples > guard {guard}")
    inst = _KInstance(n, rs, t)
    col = _Collector()

    def rec(level: int, chosen: tuple[int, ...], allowed: list[int]) -> None:
        if level == k - 1:
            last = allowed[level]
            col.nodes += 1
            if last or include_empty:
                prod = last.bit_count()
                for c in chosen:
                    prod *= c.bit_count()
                col.offer(prod, chosen + (last,))
            return
        pool = allowed[level]
        subs = [0] if include_empty else []
        sub = pool
        while sub:
            subs.append(sub)
            sub = (sub - 1) & pool
        for sub in sorted(subs):
            nxt = list(allowed)
            for lv in range(level + 1, k):
                for x in _bits(sub):
                    nxt[lv] &= inst.adj[level][lv][x]
            rec(level + 1, chosen + (sub,), nxt)

    rec(0, (), [(1 << len(layer)) - 1 for layer in inst.layers])
    witnesses = [inst.families(w) for w in col.items]
    witnesses.sort(key=lambda w: tuple((len(f), f.sort_key()) for f in w))
    centers = [common_star_center(list(w), t) if col.best else None for w in witnesses]
    all_stars = all(c is not None for c in centers) if col.count == len(witnesses) else None
    return SearchReport(params, "brute", col.best, witnesses, col.count, col.nodes, all_stars, centers)


@dataclass
class TheoremVerdict:
    params: Params
    mode: str
    optimum: int
    bound: int
    bound_holds: bool
    bound_tight: bool
    uniqueness: bool | None
    threshold_applicable: bool
    report: SearchReport

    @property
    def passed(self) -> bool:
        """True unless the instance is in range and some assertion fails.

        Compressed mode cannot see every optimal pair, so only the bound is
        asserted there.
        """
        if not self.threshold_applicable:
            return True
        unique_ok = self.uniqueness is True or (self.mode == "compressed" and self.uniqueness is None)
        return self.bound_holds and self.bound_tight and unique_ok

    def to_dict(self) -> dict:
        d = self.report.to_dict()
        d.update(
            bound=str(self.bound),
            bound_holds=self.bound_holds,
            bound_tight=self.bound_tight,
            uniqueness=self.uniqueness,
            threshold_applicable=self.threshold_applicable,
        )
        return d


def verify_theorem(params: Params, mode: str = "brute", guard: int | None = None,
                   threads: int | None = None) -> TheoremVerdict:
    report = max_product(params, mode, guard, threads)
    bound = bound_for(params)
    uniqueness = None
    if report.witnesses_complete:
        uniqueness = bool(report.all_witnesses_are_star_tuples)
    return TheoremVerdict(
        params=params,
        mode=report.mode,
        optimum=report.optimum,
        bound=bound,
        bound_holds=report.optimum <= bound,
        bound_tight=report.optimum == bound,
        uniqueness=uniqueness,
        threshold_applicable=threshold_applicable(params),
        report=report,
    )


def star_tuples(params: Params) -> list[tuple[Family, ...]]:
    """Every tuple of full stars on a common t-set."""
    n, t = params.n, params.t
    out = []
    for center in combinations(range(1, n + 1), t):
        c = mask_of(center)
        out.append(tuple(Family(n, [m for m in layer_masks(n, r) if m & c == c]) for r in params.uniformities))
    return out
