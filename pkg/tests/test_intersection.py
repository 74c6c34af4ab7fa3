import random
from itertools import combinations

import pytest

from crossfam.intersection import (
    StarDescriptor,
    common_star_center,
    compatible_family,
    is_cross_t_intersecting,
    is_cross_t_intersecting_k,
    is_t_intersecting,
    recognize_star,
    star,
)
from crossfam.setcore import ElementSet, Family, binomial, generate_uniform

import oracles


def fam(n, *sets):
    return Family.of(n, sets)


def test_t_intersecting_examples():
    assert is_t_intersecting(fam(3, [1, 2], [1, 3]), 1)
    assert not is_t_intersecting(fam(3, [1, 2], [1, 3]), 2)
    assert is_t_intersecting(fam(3, [1, 2]), 2)
    assert is_t_intersecting(Family(3), 4)


def test_cross_examples():
    assert is_cross_t_intersecting(fam(3, [1, 2]), fam(3, [1, 3]), 1)
    assert not is_cross_t_intersecting(fam(3, [1, 2]), fam(3, [1, 3]), 2)
    assert is_cross_t_intersecting(Family(6), generate_uniform(6, 2), 5)
    with pytest.raises(ValueError):
        is_cross_t_intersecting(fam(3, [1]), fam(4, [1]), 1)


def test_cross_k_examples():
    assert is_cross_t_intersecting_k([fam(4, [1, 2]), fam(4, [1, 3]), fam(4, [1, 4])], 1)
    assert not is_cross_t_intersecting_k([fam(4, [1, 2]), fam(4, [1, 3]), fam(4, [3, 4])], 1)
    assert not is_cross_t_intersecting_k([Family(4), fam(4, [1, 2]), fam(4, [3, 4])], 1)
    with pytest.raises(ValueError):
        is_cross_t_intersecting_k([fam(4, [1])], 1)


def test_star_examples():
    assert star(StarDescriptor.of(4, 2, [1])) == fam(4, [1, 2], [1, 3], [1, 4])
    assert star(StarDescriptor.of(3, 2, [1, 2])) == fam(3, [1, 2])
    assert len(star(StarDescriptor.of(5, 2, [1]))) == 4
    with pytest.raises(ValueError):
        StarDescriptor.of(3, 2, [4])
    with pytest.raises(ValueError):
        StarDescriptor.of(4, 1, [1, 2])


def test_star_sizes_and_cross_property():
    rng = random.Random(3)
    for n in range(1, 13):
        for r in range(1, n + 1):
            for t in range(1, r + 1):
                center = rng.sample(range(1, n + 1), t)
                st_r = star(StarDescriptor.of(n, r, center))
                assert len(st_r) == binomial(n - t, r - t)
                assert as_frozen(st_r) == oracles.star(n, r, center)
                assert is_t_intersecting(st_r, t)
                s = rng.randint(r, n)
                st_s = star(StarDescriptor.of(n, s, center))
                assert is_cross_t_intersecting(st_r, st_s, t)


def as_frozen(f):
    return frozenset(frozenset(s.members) for s in f)


def test_recognize_star_examples():
    assert recognize_star(fam(4, [1, 2], [1, 3], [1, 4]), 1) == ElementSet.of(4, [1])
    assert recognize_star(fam(4, [1, 2], [3, 4]), 1) is None
    assert recognize_star(fam(4, [1, 2]), 2) == ElementSet.of(4, [1, 2])
    assert recognize_star(Family(4), 1) is None
    with pytest.raises(ValueError):
        recognize_star(fam(4, [1], [1, 2]), 1)


def test_recognize_star_inverts_star():
    for n in range(2, 8):
        for r in range(1, n):
            for t in range(1, r + 1):
                for center in combinations(range(1, n + 1), t):
                    T = ElementSet.of(n, center)
                    assert recognize_star(star(StarDescriptor(n, r, T)), t) == T


def test_common_star_center():
    a = star(StarDescriptor.of(5, 2, [3]))
    b = star(StarDescriptor.of(5, 3, [3]))
    c = star(StarDescriptor.of(5, 3, [2]))
    assert common_star_center([a, b], 1) == ElementSet.of(5, [3])
    assert common_star_center([a, c], 1) is None
    # a single set is a star for several centers; the common center must work for both
    assert common_star_center([fam(2, [1, 2]), fam(2, [2])], 1) == ElementSet.of(2, [2])


def test_compatible_examples():
    assert compatible_family(fam(3, [1]), 2, 1) == fam(3, [1, 2], [1, 3])
    assert compatible_family(fam(4, [1, 2]), 2, 2) == fam(4, [1, 2])
    assert compatible_family(Family(3), 2, 1) == generate_uniform(3, 2)
    with pytest.raises(ValueError):
        compatible_family(fam(3, [1, 2]), 1, 1)
    with pytest.raises(ValueError):
        compatible_family(fam(3, [1]), 4, 1)


def test_compatible_contains_star_and_equals_it_above_window():
    for n in range(2, 11):
        for r in range(1, min(3, n) + 1):
            for s in range(r, min(3, n) + 1):
                for t in range(1, r + 1):
                    T = ElementSet.of(n, range(1, t + 1))
                    comp = compatible_family(star(StarDescriptor(n, r, T)), s, t)
                    st_s = star(StarDescriptor(n, s, T))
                    assert st_s.masks <= comp.masks
                    if n >= r + s - t + 1 and n > r:
                        assert comp == st_s, (n, r, s, t)


def test_cross_iff_subset_of_compatible():
    n = 4
    la = generate_uniform(n, 1).sets
    lb = generate_uniform(n, 2).sets
    for t in (1,):
        for ka in range(len(la) + 1):
            for a in combinations(la, ka):
                fa = Family(n, a)
                comp = compatible_family(fa, 2, t)
                for kb in range(4):
                    for b in combinations(lb, kb):
                        fb = Family(n, b)
                        assert is_cross_t_intersecting(fa, fb, t) == (fb.masks <= comp.masks)
