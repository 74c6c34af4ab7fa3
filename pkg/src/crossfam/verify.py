"""Verification suites over parameter grids.

Each suite restates one structural fact over a generated population of
families and counts cases; conditional statements pass vacuously when
their hypothesis does not fire. The first failing case is kept as a
replayable counterexample record.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations

from .bounds import n0_threshold
from .compression import CompressionIndex, _big_delta_masks, all_indices, compress_pair_to_fixpoint
from .intersection import common_star_center
from .search import verify_theorem
from .setcore import Family, Params, binomial, layer_masks, subfamilies

LAYER_GUARD = 12
SUBFAMILY_GUARD = 1 << LAYER_GUARD
SUITES = ("lemma21i", "lemma21ii", "lemma31", "lemma32", "theorem")


class SuiteGuardError(RuntimeError):
    """An exhaustive suite was asked to enumerate too large a layer."""


@dataclass(frozen=True)
class PairCase:
    n: int
    r: int
    s: int
    t: int
    policy: str = "exhaustive"
    max_size: int | None = None
    samples: int = 0


@dataclass(frozen=True)
class LayerCase:
    n: int
    p: int
    t: int


@dataclass(frozen=True)
class TheoremCase:
    n: int
    uniformities: tuple[int, ...]
    t: int
    mode: str = "brute"


@dataclass
class SuiteReport:
    suite: str
    grid: list[dict]
    cases_run: int = 0
    cases_passed: int = 0
    counterexample: dict | None = None
    wall_time: float = 0.0
    seed: int | None = None
    details: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cases_passed == self.cases_run

    def record(self, passed: bool, counterexample=None) -> None:
        self.cases_run += 1
        if passed:
            self.cases_passed += 1
        elif self.counterexample is None:
            self.counterexample = counterexample() if callable(counterexample) else counterexample

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "grid": self.grid,
            "cases_run": self.cases_run,
            "cases_passed": self.cases_passed,
            "counterexample": self.counterexample,
            "wall_time": round(self.wall_time, 6),
            "seed": self.seed,
            "details": self.details,
        }


def _lists(n: int, masks) -> list[list[int]]:
    return Family(n, masks).to_lists()


def _cross_ok(a, b, t: int) -> bool:
    return all((x & y).bit_count() >= t for x in a for y in b)


def _guard(n: int, r: int, max_size: int | None = None) -> list[int]:
    size = binomial(n, r)
    top = size if max_size is None else min(size, max_size)
    count = sum(binomial(size, k) for k in range(top + 1))
    if count > SUBFAMILY_GUARD:
        raise SuiteGuardError(
            f"exhaustive enumeration refuses {count} subfamilies of C({n},{r}) > {SUBFAMILY_GUARD}")
    return layer_masks(n, r)


def exhaustive_cross_pairs(n: int, r: int, s: int, t: int, max_size: int | None = None):
    """Every cross-t-intersecting pair of subfamilies of the r- and s-layers."""
    la, lb = _guard(n, r, max_size), _guard(n, s, max_size)
    bs = list(subfamilies(lb, max_size))
    for a in subfamilies(la, max_size):
        for b in bs:
            if _cross_ok(a, b, t):
                yield frozenset(a), frozenset(b)


def random_cross_pair(rng: random.Random, n: int, r: int, s: int, t: int) -> tuple[frozenset, frozenset]:
    """A random cross-t-intersecting pair.

    Half the time: a star pair on a random t-set, thinned by random
    deletions, then perturbed by un-compression moves (an element ``i`` of
    a member replaced by some ``j > i``) kept only when feasibility
    survives. Otherwise: a few random r-sets and a random part of their
    compatible s-family.
    """
    if rng.random() < 0.5:
        center = sum(1 << (e - 1) for e in rng.sample(range(1, n + 1), t))
        keep = rng.uniform(0.2, 1.0)
        a = {m for m in layer_masks(n, r) if m & center == center and rng.random() < keep}
        b = {m for m in layer_masks(n, s) if m & center == center and rng.random() < keep}
        for _ in range(rng.randint(0, 2 * n)):
            fam, other = (a, b) if rng.random() < 0.5 else (b, a)
            if not fam:
                continue
            x = rng.choice(sorted(fam))
            i = rng.choice([e for e in range(1, n + 1) if x >> (e - 1) & 1])
            js = [e for e in range(i + 1, n + 1) if not x >> (e - 1) & 1]
            if not js:
                continue
            y = x ^ (1 << (i - 1)) ^ (1 << (rng.choice(js) - 1))
            if y not in fam and all((y & z).bit_count() >= t for z in other):
                fam.discard(x)
                fam.add(y)
        return frozenset(a), frozenset(b)
    la = layer_masks(n, r)
    a = rng.sample(la, rng.randint(1, min(3, len(la))))
    compat = [m for m in layer_masks(n, s) if all((m & x).bit_count() >= t for x in a)]
    b = [m for m in compat if rng.random() < 0.5]
    return frozenset(a), frozenset(b)


def _pair_population(case: PairCase, rng: random.Random):
    if case.policy == "exhaustive":
        yield from exhaustive_cross_pairs(case.n, case.r, case.s, case.t, case.max_size)
    elif case.policy == "random":
        for _ in range(case.samples):
            yield random_cross_pair(rng, case.n, case.r, case.s, case.t)
    else:
        raise ValueError(f"unknown sampling policy {case.policy!r}")


def _case_rng(seed: int, k: int) -> random.Random:
    return random.Random(f"{seed}:{k}")


def _run(suite: str, grid, seed, body) -> SuiteReport:
    rep = SuiteReport(suite, [asdict(c) for c in grid], seed=seed)
    start = time.perf_counter()
    for k, case in enumerate(grid):
        body(rep, case, _case_rng(seed or 0, k))
    rep.wall_time = time.perf_counter() - start
    return rep


def check_lemma21i(n: int, a, b, t: int) -> CompressionIndex | None:
    """First index whose images are not cross-t-intersecting, if any."""
    for idx in all_indices(n):
        ib, jb = 1 << (idx.i - 1), 1 << (idx.j - 1)
        if not _cross_ok(_big_delta_masks(a, ib, jb), _big_delta_masks(b, ib, jb), t):
            return idx
    return None


def suite_lemma21i(grid, seed: int | None = 0) -> SuiteReport:
    """Compressing a cross-t-intersecting pair by any index keeps it cross-t-intersecting."""

    def body(rep, case, rng):
        for a, b in _pair_population(case, rng):
            bad = check_lemma21i(case.n, a, b, case.t)
            rep.record(bad is None, lambda: {
                "suite": "lemma21i", "params": asdict(case),
                "families": [_lists(case.n, a), _lists(case.n, b)], "index": list(bad.as_tuple())})

    return _run("lemma21i", grid, seed, body)


def check_lemma21ii(n: int, r: int, s: int, t: int, a, b) -> tuple[Family, Family] | None:
    """Compress the pair; return the compressed pair if the window property fails."""
    ca, cb, _ = compress_pair_to_fixpoint(Family(n, a), Family(n, b))
    window = (1 << (r + s - t)) - 1
    if all((x & y & window).bit_count() >= t for x in ca.masks for y in cb.masks):
        return None
    return ca, cb


def suite_lemma21ii(grid, seed: int | None = 0) -> SuiteReport:
    """Compressed cross-t-intersecting pairs t-intersect inside [r+s-t]."""

    def body(rep, case, rng):
        for a, b in _pair_population(case, rng):
            bad = check_lemma21ii(case.n, case.r, case.s, case.t, a, b)
            rep.record(bad is None, lambda: {
                "suite": "lemma21ii", "params": asdict(case),
                "families": [_lists(case.n, a), _lists(case.n, b)],
                "compressed": [bad[0].to_lists(), bad[1].to_lists()], "index": None})

    return _run("lemma21ii", grid, seed, body)


def _star_center(n: int, masks, t: int):
    if not masks:
        return None
    return common_star_center([Family(n, masks)], t)


def check_lemma32(n: int, t: int, g) -> CompressionIndex | None:
    """First index whose image of ``g`` is a largest t-star while ``g`` is not."""
    if _star_center(n, g, t) is not None:
        return None
    for idx in all_indices(n):
        img = _big_delta_masks(g, 1 << (idx.i - 1), 1 << (idx.j - 1))
        if _star_center(n, img, t) is not None:
            return idx
    return None


def suite_lemma32(grid, seed: int | None = None) -> SuiteReport:
    """A t-intersecting family whose shift is a largest t-star is itself one."""

    def body(rep, case, rng):
        if case.n < 2 * case.p - case.t + 1:
            raise ValueError(f"hypothesis n >= 2p - t + 1 fails for {case}")
        layer = _guard(case.n, case.p)
        triggered = 0
        for g in subfamilies(layer):
            if any((x & y).bit_count() < case.t for x, y in combinations(g, 2)):
                continue
            g = frozenset(g)
            triggered += any(
                _star_center(case.n, _big_delta_masks(g, 1 << (i.i - 1), 1 << (i.j - 1)), case.t) is not None
                for i in all_indices(case.n))
            bad = check_lemma32(case.n, case.t, g)
            rep.record(bad is None, lambda: {
                "suite": "lemma32", "params": asdict(case),
                "families": [_lists(case.n, g)], "index": list(bad.as_tuple())})
        rep.details.append({"case": asdict(case), "hypothesis_fired": triggered})

    return _run("lemma32", grid, seed, body)


def _lemma31_trigger(n: int, t: int, a, b) -> CompressionIndex | None:
    if not a or not b:
        return None
    for idx in all_indices(n):
        ib, jb = 1 << (idx.i - 1), 1 << (idx.j - 1)
        ia, ibb = _big_delta_masks(a, ib, jb), _big_delta_masks(b, ib, jb)
        if common_star_center([Family(n, ia), Family(n, ibb)], t) is not None:
            return idx
    return None


def check_lemma31(n: int, t: int, a, b) -> CompressionIndex | None:
    """First index mapping (a, b) onto a common-center star pair while (a, b) is not one."""
    if not a or not b or common_star_center([Family(n, a), Family(n, b)], t) is not None:
        return None
    return _lemma31_trigger(n, t, a, b)


def uncompressed_star_pair(rng: random.Random, n: int, r: int, s: int, t: int) -> tuple[frozenset, frozenset]:
    """A star pair with some members moved by one un-compression ``i -> j`` (i < j)."""
    center = sum(1 << (e - 1) for e in rng.sample(range(1, n + 1), t))
    a = {m for m in layer_masks(n, r) if m & center == center}
    b = {m for m in layer_masks(n, s) if m & center == center}
    i, j = sorted(rng.sample(range(1, n + 1), 2))
    ib, jb = 1 << (i - 1), 1 << (j - 1)
    move_all = rng.random() < 0.5
    out = []
    for fam in (a, b):
        moved = set()
        for x in fam:
            y = x ^ ib ^ jb
            if x & ib and not x & jb and y not in fam and (move_all or rng.random() < 0.5):
                moved.add(y)
            else:
                moved.add(x)
        out.append(frozenset(moved))
    return out[0], out[1]


def suite_lemma31(grid, seed: int | None = 0) -> SuiteReport:
    """If one shift turns a cross-t-intersecting pair into a common star pair, the pair was one."""

    def body(rep, case, rng):
        if case.n < n0_threshold(case.r, case.s, case.t):
            raise ValueError(f"{case} is below the threshold n0(r, s, t)")
        if case.policy == "exhaustive":
            population = exhaustive_cross_pairs(case.n, case.r, case.s, case.t, case.max_size)
        else:
            population = (uncompressed_star_pair(rng, case.n, case.r, case.s, case.t) for _ in range(case.samples))
        feasible = fired = 0
        for a, b in population:
            if not _cross_ok(a, b, case.t):
                continue
            feasible += 1
            fired += _lemma31_trigger(case.n, case.t, a, b) is not None
            bad = check_lemma31(case.n, case.t, a, b)
            rep.record(bad is None, lambda: {
                "suite": "lemma31", "params": asdict(case),
                "families": [_lists(case.n, a), _lists(case.n, b)], "index": list(bad.as_tuple())})
        rep.details.append({"case": asdict(case), "feasible_pairs": feasible, "hypothesis_fired": fired})

    return _run("lemma31", grid, seed, body)


def suite_theorem(grid, seed: int | None = None, threads: int | None = None) -> SuiteReport:
    """Exact optimum against the product bound, with uniqueness of star tuples in range."""

    def body(rep, case, rng):
        params = Params(case.n, case.t, case.uniformities)
        verdict = verify_theorem(params, case.mode, threads=threads)
        rep.record(verdict.passed, lambda: {
            "suite": "theorem", "params": asdict(case), "verdict": verdict.to_dict(), "index": None})
        rep.details.append({
            "params": params.to_dict(), "mode": verdict.mode, "optimum": str(verdict.optimum),
            "bound": str(verdict.bound), "bound_holds": verdict.bound_holds,
            "bound_tight": verdict.bound_tight, "uniqueness": verdict.uniqueness,
            "threshold_applicable": verdict.threshold_applicable,
            "witness_count": verdict.report.witness_count,
        })

    return _run("theorem", grid, seed, body)


def _pair_grid(n: int, r: int, s: int, t: int) -> TheoremCase:
    return TheoremCase(n, (r, s), t)


NAMED_GRIDS = {
    "lemma21i": {
        "default-tiny": [PairCase(4, 2, 2, 1, max_size=3), PairCase(4, 2, 2, 2, max_size=3)],
        "acceptance": [PairCase(4, 2, 2, 1, max_size=3), PairCase(4, 2, 2, 2, max_size=3),
                       PairCase(8, 3, 3, 2, policy="random", samples=10_000)],
    },
    "lemma21ii": {
        "default-tiny": [PairCase(4, 2, 2, 1, max_size=3), PairCase(4, 2, 2, 2, max_size=3)],
        "acceptance": [PairCase(4, 2, 2, 1, max_size=3), PairCase(4, 2, 2, 2, max_size=3),
                       PairCase(8, 3, 3, 2, policy="random", samples=10_000),
                       PairCase(6, 2, 2, 1, max_size=3), PairCase(7, 2, 3, 2, policy="random", samples=500)],
    },
    "lemma32": {
        "default-tiny": [LayerCase(4, 2, 1), LayerCase(5, 2, 1)],
        "acceptance": [LayerCase(4, 2, 1), LayerCase(5, 2, 1)],
    },
    "lemma31": {
        "default-tiny": [PairCase(4, 1, 2, 1)],
        "acceptance": [PairCase(4, 1, 2, 1), PairCase(9, 2, 3, 2, policy="random", samples=2_000)],
    },
    "theorem": {
        "default-tiny": (
            [_pair_grid(n, 1, 1, 1) for n in range(2, 7)]
            + [_pair_grid(n, 2, 2, 2) for n in range(3, 7)]
            + [_pair_grid(n, 1, 2, 1) for n in range(4, 7)]
            + [TheoremCase(n, (1, 1, 1), 1) for n in range(3, 6)]
        ),
        "acceptance": (
            [_pair_grid(n, 1, 1, 1) for n in range(2, 7)]
            + [_pair_grid(n, 2, 2, 2) for n in range(3, 7)]
            + [_pair_grid(n, 1, 2, 1) for n in range(4, 7)]
            + [TheoremCase(8, (2, 2), 1, "closure")]
            + [TheoremCase(n, (1, 1, 1), 1) for n in range(3, 6)]
        ),
    },
}


def parse_grid(suite: str, spec: str) -> list:
    """A named grid, or ``;``-separated comma tuples.

    Tuples are ``n,r,s,t`` for pair suites (optionally ``,random,SAMPLES``),
    ``n,p,t`` for lemma32 and ``n,t,r1,...,rk`` for the theorem suite.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if spec in NAMED_GRIDS[suite]:
        return list(NAMED_GRIDS[suite][spec])
    cases = []
    for chunk in filter(None, (c.strip() for c in spec.split(";"))):
        parts = [p.strip() for p in chunk.split(",")]
        try:
            if suite == "lemma32":
                n, p, t = map(int, parts)
                cases.append(LayerCase(n, p, t))
            elif suite == "theorem":
                n, t, *rs = map(int, parts)
                cases.append(TheoremCase(n, tuple(rs), t))
            else:
                n, r, s, t = map(int, parts[:4])
                if len(parts) > 4:
                    cases.append(PairCase(n, r, s, t, policy=parts[4], samples=int(parts[5])))
                else:
                    cases.append(PairCase(n, r, s, t))
        except (ValueError, IndexError):
            raise ValueError(f"cannot parse grid entry {chunk!r} for suite {suite}") from None
    if not cases:
        raise ValueError(f"empty grid {spec!r}")
    return cases


def run_suite(suite: str, grid, seed: int | None = 0, threads: int | None = None) -> SuiteReport:
    if suite == "lemma21i":
        return suite_lemma21i(grid, seed)
    if suite == "lemma21ii":
        return suite_lemma21ii(grid, seed)
    if suite == "lemma31":
        return suite_lemma31(grid, seed)
    if suite == "lemma32":
        return suite_lemma32(grid)
    if suite == "theorem":
        return suite_theorem(grid, threads=threads)
    raise ValueError(f"unknown suite {suite!r}")


def replay_counterexample(record: dict) -> bool:
    """Re-check a single counterexample record; True when the statement holds."""
    suite = record["suite"]
    p = record["params"]
    n = p["n"]
    fams = [frozenset(Family.of(n, f).masks) for f in record.get("families", [])]
    if suite == "lemma21i":
        return check_lemma21i(n, fams[0], fams[1], p["t"]) is None
    if suite == "lemma21ii":
        return check_lemma21ii(n, p["r"], p["s"], p["t"], fams[0], fams[1]) is None
    if suite == "lemma32":
        return check_lemma32(n, p["t"], fams[0]) is None
    if suite == "lemma31":
        return check_lemma31(n, p["t"], fams[0], fams[1]) is None
    if suite == "theorem":
        params = Params(n, p["t"], tuple(p["uniformities"]))
        return verify_theorem(params, p.get("mode", "brute")).passed
    raise ValueError(f"unknown suite {suite!r}")
