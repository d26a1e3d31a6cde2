import random

import pytest

from moca.errors import NotFinite
from moca.fields import field_make, rationals
from moca.finiteness import certify_two_sided
from moca.monoids import bicyclic, cyclic, free_commutative, table_monoid
from moca.randomized import (
    action_law_suite,
    antihom_suite,
    element_pool,
    random_matrix,
    random_unit_pair,
)

GF2 = field_make(2)
GF4 = field_make(2, 2)


def test_element_pools():
    pool = element_pool(bicyclic())
    assert [str(e) for e in pool] == [
        "1", "p^1", "p^2", "q^1", "q^1p^1", "q^1p^2",
        "q^2", "q^2p^1", "q^2p^2"]
    assert len(element_pool(free_commutative(2))) == 9
    assert element_pool(cyclic(3)) == cyclic(3).elements()
    assert len(element_pool(bicyclic(), max_exponent=1)) == 4


def test_suites_deterministic():
    r1 = antihom_suite(bicyclic(), GF4, 1, 15, seed=3)
    r2 = antihom_suite(bicyclic(), GF4, 1, 15, seed=3)
    assert r1 == r2
    assert r1.ok and r1.trials == 15
    a1 = action_law_suite(cyclic(2), GF2, 2, 15, seed=3)
    a2 = action_law_suite(cyclic(2), GF2, 2, 15, seed=3)
    assert a1 == a2 and a1.ok


def test_suites_cover_families():
    t = table_monoid(["e", "a", "b"], [[0, 1, 2], [1, 1, 1], [2, 1, 2]])
    for monoid in (bicyclic(), cyclic(4), free_commutative(2), t):
        for field in (GF2, GF4):
            assert antihom_suite(monoid, field, 2, 10, seed=5).ok
            assert action_law_suite(monoid, field, 1, 10, seed=5).ok
    assert action_law_suite(bicyclic(), rationals(), 2, 10, seed=5).ok


def test_random_unit_pairs_certify():
    rng = random.Random(8)
    for monoid in (cyclic(2), cyclic(3)):
        for field in (GF2, GF4, field_make(3)):
            for d in (1, 2):
                for _ in range(5):
                    u, v = random_unit_pair(rng, monoid, field, d)
                    rep = certify_two_sided(u, v)
                    assert rep.ok


def test_random_unit_pairs_infinite_monoid():
    # no rank route for the bicyclic monoid, but the identities hold directly
    rng = random.Random(9)
    from moca.algebra import mat_identity
    b = bicyclic()
    ident = mat_identity(GF2, b, 2)
    for _ in range(5):
        u, v = random_unit_pair(rng, b, GF2, 2)
        assert u * v == ident
        assert v * u == ident


def test_random_matrix_support_in_pool():
    rng = random.Random(10)
    pool = element_pool(bicyclic())
    for _ in range(20):
        m = random_matrix(rng, bicyclic(), GF4, 2, pool)
        assert set(m.support()) <= set(pool)
