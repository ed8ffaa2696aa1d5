import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deloceta.groups import (
    CyclicGroup,
    FreeAbelianGroup,
    GroupError,
    HeisenbergGroup,
    RadiusExceededError,
    group_from_spec,
    group_from_string,
)


def test_multiply_examples():
    z2 = FreeAbelianGroup(2)
    assert z2.multiply((1, 0), (0, 1)) == (1, 1)
    h = HeisenbergGroup()
    assert h.multiply((1, 0, 0), (0, 1, 0)) == (1, 1, 1)
    z4 = CyclicGroup(4)
    assert z4.multiply(3, 3) == 2


def test_multiply_rejects_foreign_elements():
    z4 = CyclicGroup(4)
    with pytest.raises(GroupError):
        z4.word_length(7)


def test_inverses_and_identity():
    h = HeisenbergGroup()
    for g in [(1, 2, 3), (-1, 0, 4), (2, -3, -5)]:
        assert h.multiply(g, h.inverse(g)) == h.identity()
        assert h.multiply(h.inverse(g), g) == h.identity()


def test_word_length_examples():
    z2 = FreeAbelianGroup(2)
    assert z2.word_length((2, -3)) == 5
    assert z2.word_length(z2.identity()) == 0
    h = HeisenbergGroup()
    assert h.word_length((0, 0, 1)) == 4  # commutator x y x^-1 y^-1


def test_word_length_bfs_matches_closed_form():
    z2 = FreeAbelianGroup(2)
    # independent BFS oracle over the Cayley graph
    frontier, seen = [z2.identity()], {z2.identity(): 0}
    for depth in range(1, 5):
        new = []
        for g in frontier:
            for s in z2.generators:
                n = z2.multiply(g, s)
                if n not in seen:
                    seen[n] = depth
                    new.append(n)
        frontier = new
    for g, d in seen.items():
        assert z2.word_length(g) == d


def test_radius_exceeded():
    z1 = FreeAbelianGroup(1)
    with pytest.raises(RadiusExceededError):
        CyclicGroup(4).ball(-1) if False else HeisenbergGroup().word_length((50, 0, 0), max_radius=4)


def test_ball_examples():
    z2 = FreeAbelianGroup(2)
    b1 = z2.ball(1)
    assert set(b1) == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}
    assert len(z2.ball(2)) == 13
    z4 = CyclicGroup(4)
    assert len(z4.ball(10)) == 4


def test_ball_nesting_and_quadratic_count():
    z2 = FreeAbelianGroup(2)
    sizes = [len(z2.ball(r)) for r in range(7)]
    for r in range(6):
        assert set(z2.ball(r)) <= set(z2.ball(r + 1))
        assert sizes[r] == 2 * r * r + 2 * r + 1


def test_shortlex_is_total_and_bfs_canonical():
    z4 = CyclicGroup(4)
    keys = [z4.shortlex_key(g) for g in z4.elements()]
    assert len(set(keys)) == 4
    assert sorted(keys)[0] == (0, ())


def test_metric_invariants():
    h = HeisenbergGroup()
    ball = h.ball(3)
    rng = random.Random(0)
    sample = rng.sample(ball, 12)
    for g in sample:
        assert h.word_length(h.inverse(g)) == h.word_length(g)
    for g, x, k in zip(sample, sample[::-1], sample[4:] + sample[:4]):
        assert h.word_length(h.multiply(g, x), max_radius=12) <= h.word_length(g) + h.word_length(x)
        assert h.distance(h.multiply(k, g), h.multiply(k, x), max_radius=16) == h.distance(g, x, max_radius=16)


def test_conjugacy_class_examples(s3, d4):
    z6 = CyclicGroup(6)
    cl = z6.conjugacy_class(2, radius=6)
    assert set(cl.members) == {2}
    assert cl.order == 3
    cl.validate()

    transposition = s3.parse_element("(12)")
    cl3 = s3.conjugacy_class(transposition, radius=6)
    assert len(cl3.members) == 3
    cl3.validate()

    r = d4.parse_element("r")
    clr = d4.conjugacy_class(r, radius=8)
    assert {d4.element_name(m) for m in clr.members} == {"r", "r3"}
    clr.validate()


def test_conjugacy_witnesses_compose(s3):
    g = s3.parse_element("(12)")
    cl = s3.conjugacy_class(g, radius=6)
    for y, h in cl.members.items():
        assert s3.conjugate(h, g) == y


def test_centralizer_examples(s3):
    z4 = CyclicGroup(4)
    assert z4.centralizer(1, radius=4) == z4.ball(4)
    t = s3.parse_element("(12)")
    assert {s3.element_name(z) for z in s3.centralizer(t, 6)} == {"e", "(12)"}
    h = HeisenbergGroup()
    center = h.centralizer((0, 0, 1), radius=3)
    assert set(center) == set(h.ball(3))


def test_centralizer_closed_under_multiplication(s3):
    t = s3.parse_element("(123)")
    cent = s3.centralizer(t, 6)
    for a, b in itertools.product(cent, repeat=2):
        assert s3.multiply(a, b) in cent


def test_element_order():
    z6 = CyclicGroup(6)
    assert z6.element_order(2) == 3
    assert z6.element_order(0) == 1
    assert FreeAbelianGroup(2).element_order((1, 0)) == 0
    assert HeisenbergGroup().element_order((0, 0, 1)) == 0


def test_centralizer_quotient_enumeration():
    z6 = CyclicGroup(6)
    cl = z6.conjugacy_class(2, radius=6)
    cosets = cl.centralizer_quotient()
    assert len(cosets) == 2  # Z_gamma = Z/6, <gamma> of order 3


def test_growth_degree_fit():
    assert CyclicGroup(4).growth_degree_fit(10)[1] == 0
    assert FreeAbelianGroup(2).growth_degree_fit(8)[1] == 2
    assert HeisenbergGroup().growth_degree_fit(6)[1] == 4


def test_growth_fit_bound_holds():
    z2 = FreeAbelianGroup(2)
    c0, m = z2.growth_degree_fit(8)
    for r in range(9):
        assert len(z2.ball(r)) <= c0 * (r + 1) ** m


def test_product_group_and_specs():
    g = group_from_string("product:cyclic:2,cyclic:3")
    assert g.order == 6
    assert g.element_order((1, 1)) == 6
    round_trip = group_from_spec(g.spec())
    assert round_trip.order == 6
    assert group_from_spec({"kind": "heisenberg"}).kind == "heisenberg"
    with pytest.raises(GroupError):
        group_from_string("free_group:2")


def test_generating_set_symmetry_enforced():
    with pytest.raises(GroupError):
        FreeAbelianGroup(1, generators=[(1,)])


@settings(max_examples=60, deadline=None)
@given(
    a=st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
    b=st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
    c=st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
)
def test_heisenberg_associativity(a, b, c):
    h = HeisenbergGroup()
    assert h.multiply(h.multiply(a, b), c) == h.multiply(a, h.multiply(b, c))


@settings(max_examples=30, deadline=None)
@given(k=st.integers(2, 9), g=st.integers(0, 8), x=st.integers(0, 8))
def test_cyclic_laws(k, g, x):
    grp = CyclicGroup(k)
    g, x = g % k, x % k
    assert grp.multiply(g, grp.identity()) == g
    assert grp.multiply(g, grp.inverse(g)) == 0
    assert grp.element_order(x) in range(1, k + 1)


def test_group_spec_custom_generators():
    g = group_from_spec({"kind": "cyclic", "k": 6, "generators": ["2", "4", "3"]})
    assert g.generators == [2, 4, 3]
    # generated subgroup {0,2,3,4,...} = all of Z/6; word lengths differ
    # from the default +-1 generators
    assert g.word_length(4) == 1
    spec = g.spec()
    spec["generators"] = ["2", "4", "3"]
    assert group_from_spec(spec).generators == [2, 4, 3]


def test_bfs_cache_concurrent_identical():
    import concurrent.futures

    h = HeisenbergGroup()
    targets = [(0, 0, 1), (1, 2, 0), (-1, 0, 2), (2, 2, 2)] * 8
    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        lengths = list(pool.map(lambda g: h.word_length(g, max_radius=10), targets))
    fresh = HeisenbergGroup()
    expected = [fresh.word_length(g, max_radius=10) for g in targets]
    assert lengths == expected


def test_heisenberg_commutator_oracle():
    # independent witness: the 4-letter commutator word reaches (0,0,1),
    # and BFS to radius 3 does not
    h = HeisenbergGroup()
    x, y = (1, 0, 0), (0, 1, 0)
    word = h.multiply(h.multiply(h.multiply(x, y), h.inverse(x)), h.inverse(y))
    assert word == (0, 0, 1)
    assert (0, 0, 1) not in set(h.ball(3))
    assert h.word_length((0, 0, 1)) == 4
