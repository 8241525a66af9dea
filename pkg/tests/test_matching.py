import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from coverentropy.errors import ValidationError
from coverentropy.matching import BipartiteRelation, hall_matching, is_hall_violator, refinement_map
from coverentropy.setcover import min_set_cover


def check(rel):
    res = hall_matching(rel)
    expect = oracles.has_injection(rel.left, rel.right, rel.pairs)
    assert res.ok == expect == oracles.hall_holds(rel.left, rel.pairs)
    if res.ok:
        inj = res.injection
        assert set(inj) == set(rel.left)
        assert len(set(inj.values())) == len(inj)
        assert all((x, y) in rel.pairs for x, y in inj.items())
    else:
        assert is_hall_violator(rel, res.violator)
        assert res.violator <= set(rel.left)


def test_all_relations_up_to_3x3():
    for nl, nr in itertools.product(range(4), repeat=2):
        cells = list(itertools.product(range(nl), range(nr)))
        for k in range(1 << len(cells)):
            pairs = {c for i, c in enumerate(cells) if k >> i & 1}
            check(BipartiteRelation(range(nl), range(nr), pairs))


@st.composite
def relations(draw):
    nl = draw(st.integers(0, 6))
    nr = draw(st.integers(0, 6))
    cells = list(itertools.product(range(nl), range(nr)))
    pairs = draw(st.sets(st.sampled_from(cells))) if cells else set()
    return BipartiteRelation(range(nl), range(nr), pairs)


@settings(max_examples=300)
@given(relations())
def test_random_relations(rel):
    check(rel)


def test_small_examples():
    rel = BipartiteRelation("ab", "xy", {("a", "x"), ("b", "x")})
    res = hall_matching(rel)
    assert not res.ok and res.violator == {"a", "b"}
    rel = BipartiteRelation("ab", "xy", {("a", "x"), ("a", "y"), ("b", "x")})
    assert hall_matching(rel).injection == {"a": "y", "b": "x"}


def test_relation_validation():
    with pytest.raises(ValidationError):
        BipartiteRelation("aa", "x", set())
    with pytest.raises(ValidationError):
        BipartiteRelation("a", "x", {("a", "z")})


# -- refinement map --------------------------------------------------------------

@st.composite
def cover_pairs(draw):
    n = draw(st.integers(1, 6))
    universe = (1 << n) - 1
    family = draw(st.lists(st.integers(1, universe), min_size=1, max_size=8, unique=True))
    for i in range(n):
        if not any(s >> i & 1 for s in family):
            family.append(1 << i)
    family = list(dict.fromkeys(family))
    best = min_set_cover(universe, family)
    u = [family[i] for i in best.chosen]
    # V: a cover from the family, padded with arbitrary extra members
    extra = draw(st.lists(st.sampled_from(family), max_size=4))
    rev = family[::-1]
    v = list(dict.fromkeys(extra + [rev[i] for i in min_set_cover(universe, rev).chosen]))
    return universe, u, v, family


@settings(max_examples=200)
@given(cover_pairs())
def test_refinement_map_is_injective_and_meets(inst):
    universe, u, v, family = inst
    phi = refinement_map(universe, u, v, family)
    assert sorted(phi) == list(range(len(u)))
    assert len(set(phi.values())) == len(u)
    assert all(u[i] & v[j] for i, j in phi.items())


def test_refinement_map_rejects_non_minimal_u():
    family = [0b011, 0b100, 0b001, 0b010]
    with pytest.raises(ValidationError, match="not minimal"):
        refinement_map(0b111, [0b001, 0b010, 0b100], [0b011, 0b100], family)


def test_refinement_map_rejects_non_cover():
    with pytest.raises(ValidationError):
        refinement_map(0b111, [0b011], [0b111], [0b011, 0b111])
