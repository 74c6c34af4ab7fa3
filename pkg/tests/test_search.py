from itertools import product

import pytest

from crossfam.bounds import k_bound, pair_bound
from crossfam.intersection import is_cross_t_intersecting, is_cross_t_intersecting_k
from crossfam.search import (
    SearchGuardError,
    max_product,
    max_product_bnb,
    max_product_brute,
    max_product_k,
    star_tuples,
    verify_theorem,
)
from crossfam.setcore import Family, Params, binomial

import oracles


def frozen_pair(w):
    return tuple(frozenset(frozenset(s.members) for s in f) for f in w)


def small_grid():
    for s in range(1, 4):
        for r in range(1, s + 1):
            for t in range(1, r + 1):
                for n in range(s, 7):
                    if binomial(n, r) <= 12:
                        yield Params.pair(n, r, s, t)


def test_brute_examples():
    rep = max_product_brute(Params.pair(2, 1, 1, 1))
    assert rep.optimum == 1
    assert [tuple(f.to_lists() for f in w) for w in rep.witnesses] == [([[1]], [[1]]), ([[2]], [[2]])]
    assert rep.all_witnesses_are_star_tuples

    rep = max_product_brute(Params.pair(4, 1, 2, 1))
    assert rep.optimum == 3 and rep.witness_count == 4
    assert set(rep.witnesses) == set(star_tuples(Params.pair(4, 1, 2, 1)))

    rep = max_product_brute(Params.pair(3, 2, 2, 2))
    assert rep.optimum == 1
    assert [w[0] for w in rep.witnesses] == [w[1] for w in rep.witnesses]
    assert rep.witness_count == 3


# Frozen from oracles.max_product_pairs (enumerates every pair of subfamilies).
ORACLE_OPTIMA = {
    (2, 1, 1, 1): (1, 2),
    (4, 1, 2, 1): (3, 4),
    (3, 2, 2, 2): (1, 3),
    (3, 1, 2, 1): (2, 6),
    (4, 2, 2, 1): (9, 20),
}


@pytest.mark.parametrize("p", sorted(ORACLE_OPTIMA))
def test_brute_and_closure_match_pair_oracle(p):
    best, count = ORACLE_OPTIMA[p]
    ob, owins = oracles.max_product_pairs(*p)
    assert (ob, len(owins)) == (best, count)
    for mode in ("brute", "closure"):
        rep = max_product(Params.pair(*p), mode)
        assert rep.optimum == best
        assert rep.witness_count == count
        assert {frozen_pair(w) for w in rep.witnesses} == set(owins)


def test_modes_agree_on_grid():
    for p in small_grid():
        brute = max_product_brute(p)
        closure = max_product_bnb(p, "closure")
        compressed = max_product_bnb(p, "compressed")
        assert brute.optimum == closure.optimum == compressed.optimum, p
        assert brute.witnesses == closure.witnesses, p
        assert brute.optimum >= pair_bound(p)
        for rep in (brute, closure, compressed):
            for a, b in rep.witnesses:
                assert is_cross_t_intersecting(a, b, p.t)
                assert len(a) * len(b) == rep.optimum


def test_below_threshold_instance():
    p = Params.pair(6, 2, 2, 1)
    for mode in ("closure", "compressed"):
        rep = max_product_bnb(p, mode)
        assert rep.optimum >= pair_bound(p) == 25
    assert max_product_bnb(p, "closure").optimum == max_product_brute(p).optimum


def test_smallest_applicable_221():
    p = Params.pair(8, 2, 2, 1)
    rep = max_product_bnb(p, "closure")
    assert rep.optimum == 49 == pair_bound(p)
    assert rep.witness_count == 8
    assert set(rep.witnesses) == set(star_tuples(p))
    assert max_product_bnb(p, "compressed").optimum == 49


def test_compressed_witnesses_are_compressed():
    from crossfam.compression import is_left_compressed
    rep = max_product_bnb(Params.pair(6, 2, 3, 1), "compressed")
    assert rep.all_witnesses_are_star_tuples is None
    assert all(is_left_compressed(a) for a, _ in rep.witnesses)


def test_report_is_independent_of_thread_count():
    p = Params.pair(7, 2, 2, 1)
    one = max_product_bnb(p, "closure", threads=1).to_dict()
    two = max_product_bnb(p, "closure", threads=2).to_dict()
    assert one == two
    assert max_product_bnb(p, "closure", threads=1).to_dict() == one


def test_threads_from_environment(monkeypatch):
    from crossfam.search import resolve_threads
    monkeypatch.setenv("CROSSFAM_THREADS", "3")
    assert resolve_threads(None) == 3
    assert resolve_threads(2) == 2


def test_guards():
    with pytest.raises(SearchGuardError):
        max_product_brute(Params.pair(8, 2, 2, 1))
    with pytest.raises(SearchGuardError):
        max_product_bnb(Params.pair(10, 3, 3, 1))
    with pytest.raises(SearchGuardError):
        max_product_k(8, (2, 2, 2), 1)
    with pytest.raises(ValueError):
        max_product_bnb(Params.pair(4, 1, 2, 1), "greedy")


def test_include_empty_does_not_change_optimum():
    p = Params.pair(4, 1, 2, 1)
    assert max_product_brute(p, include_empty=True).to_dict()["optimum"] == "3"


def k_oracle(n, rs, t):
    layers = [oracles.powerset(oracles.layer(n, r)) for r in rs]
    best, wins = 0, []
    for combo in product(*layers):
        if any(not f for f in combo):
            continue
        if all(oracles.cross(combo[i], combo[j], t) for i in range(len(rs)) for j in range(i + 1, len(rs))):
            p = 1
            for f in combo:
                p *= len(f)
            if p > best:
                best, wins = p, []
            if p == best:
                wins.append(combo)
    return best, wins


@pytest.mark.parametrize("n,rs,t", [(3, (1, 1, 1), 1), (4, (1, 1, 2), 1), (3, (2, 2), 2), (4, (1, 1, 1), 1)])
def test_k_search_matches_oracle(n, rs, t):
    best, wins = k_oracle(n, rs, t)
    rep = max_product_k(n, rs, t)
    assert rep.optimum == best
    assert {frozen_pair(w) for w in rep.witnesses} == set(wins)
    for w in rep.witnesses:
        assert is_cross_t_intersecting_k(list(w), t)


def test_k_examples():
    rep = max_product_k(3, (1, 1, 1), 1)
    assert rep.optimum == 1 and rep.witness_count == 3 and rep.all_witnesses_are_star_tuples
    assert max_product_k(4, (1, 1, 2), 1).optimum == 3 == k_bound(4, (1, 1, 2), 1)
    assert max_product_k(3, (2, 2), 2).optimum == 1 == max_product_brute(Params.pair(3, 2, 2, 2)).optimum


@pytest.mark.parametrize("p,applicable", [((2, 1, 1, 1), True), ((4, 1, 2, 1), True)])
def test_verify_theorem_applicable(p, applicable):
    v = verify_theorem(Params.pair(*p), "brute")
    assert v.bound_holds and v.bound_tight and v.uniqueness
    assert v.threshold_applicable is applicable
    assert v.passed


def test_verify_theorem_informational():
    v = verify_theorem(Params.pair(3, 1, 2, 1), "brute")
    assert not v.threshold_applicable
    # n < n0: the optimum 2 is attained by 6 pairs, not all stars
    assert v.optimum == 2 and v.bound_holds and v.bound_tight
    assert v.uniqueness is False
    assert v.passed


def test_verify_theorem_compressed_has_no_uniqueness():
    v = verify_theorem(Params.pair(4, 1, 2, 1), "compressed")
    assert v.uniqueness is None and v.bound_tight
    assert v.passed


def test_report_json_shape():
    d = max_product_brute(Params.pair(2, 1, 1, 1)).to_dict()
    assert d["optimum"] == "1" and d["witness_count"] == 2
    assert d["witnesses"][0] == [[[1]], [[1]]]


def test_closure_enumerates_every_closed_pair_once():
    from crossfam.search import _Collector, _PairInstance, _closure_subtree

    class Everything(_Collector):
        def offer(self, product, item):
            self.items.append(item)

    for p in [(4, 1, 2, 1), (4, 2, 2, 1), (5, 2, 3, 2), (5, 2, 2, 1)]:
        inst = _PairInstance(*p)
        closed = set()
        for a in range(1, 1 << len(inst.left)):
            b = inst.compat(a)
            if inst.back_closure(b) == a:
                closed.add((a, b))
        col = Everything(0)
        b0 = inst.full_right
        _closure_subtree(inst, inst.back_closure(b0), b0, 0, col)
        assert len(col.items) == len(set(col.items))
        assert set(col.items) == closed, p
