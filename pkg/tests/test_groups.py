import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from coverentropy.errors import GroupFiniteError, ModelMismatchError, ValidationError
from coverentropy.groups import GroupModel, str_to_word, word_to_str

Z = GroupModel.lattice(1)
Z2 = GroupModel.lattice(2)
F2 = GroupModel.free(2)


# frozen from oracles.ball_by_products
@pytest.mark.parametrize("group,sizes", [
    (Z, [1, 3, 5, 7, 9]),
    (Z2, [1, 5, 13, 25, 41]),
    (F2, [1, 5, 17, 53, 161]),
])
def test_word_growth(group, sizes):
    assert [size for _, size in group.word_growth(len(sizes) - 1)] == sizes


@pytest.mark.parametrize("group", [Z, Z2, F2, GroupModel.cyclic(5),
                                   GroupModel.lattice(1, [0, -2, 3]),
                                   GroupModel.permutation(3, [[1, 0, 2], [1, 2, 0]])])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_ball_matches_product_oracle(group, n):
    assert group.ball(n).as_set() == oracles.ball_by_products(group, n) == oracles.ball_by_words(group, n)


def test_cyclic_arithmetic():
    c4 = GroupModel.cyclic(4)
    assert c4.mul(3, 2) == 1
    assert c4.inv(1) == 3


def test_covering_index_cyclic6():
    # brute force gives 3: 1 = 3 + 2 + 2 needs three factors from {0, 2, 3}
    g = GroupModel.cyclic(6, [0, 2, 3])
    assert g.covering_index([1]) == oracles.covering_index(g, [1]) == 3


def test_covering_index_integers():
    g = GroupModel.lattice(1, [-2, 0, 3])
    assert g.covering_index([(1,)]) == oracles.covering_index(g, [(1,)]) == 2
    t = GroupModel.lattice(1, [-2, -1, 0, 1, 2])
    assert Z.covering_index(t.generators) == 2
    assert t.covering_index(Z.generators) == 1


def test_ball_inclusion_c4():
    g = GroupModel.cyclic(4, [0, 1, 3])
    assert g.ball(2).as_set() == {0, 1, 2, 3}


@pytest.mark.parametrize("group", [GroupModel.cyclic(6, [0, 2, 3]), GroupModel.cyclic(7),
                                   GroupModel.permutation(4, [[1, 2, 3, 0], [1, 0, 2, 3]])])
def test_stabilization_equals_diameter(group):
    assert group.stabilization_index() == oracles.group_diameter(group)


def test_identity_required():
    with pytest.raises(ValidationError):
        GroupModel.lattice(1, [1, -1])


def test_element_checks():
    with pytest.raises(ModelMismatchError):
        F2.element("c")
    with pytest.raises(ModelMismatchError):
        Z2.mul((1, 0), (1,))
    with pytest.raises(ValidationError):
        GroupModel.permutation(3, [[0, 0, 1]])


def test_free_word_encoding():
    assert word_to_str((1, 1, -2)) == "aaB"
    assert str_to_word("aAbB", 2) == ()
    assert F2.element("abBA") == ()
    assert F2.to_json(F2.element("ab")) == "ab"


def test_asymmetric_generators_allowed():
    g = GroupModel.lattice(1, [0, 1])
    assert set(g.inverse_set()) != set(g.generators)
    assert g.ball(3).as_set() == {(0,), (1,), (2,), (3,)}


def test_audit_passes():
    for g in (Z, Z2, F2, GroupModel.cyclic(6), GroupModel.permutation(3, [[1, 2, 0]])):
        g.audit(samples=50)


def test_finite_flag():
    assert GroupModel.cyclic(3).is_finite and not F2.is_finite


def test_standard_word_length_matches_ball_index():
    for g in (Z, Z2, F2):
        for n in range(4):
            for x in g.ball(n):
                assert g.standard_word_length(x) == g.ball_index(x)


words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=8)


@given(words, words, words)
def test_free_group_axioms(a, b, c):
    x, y, z = (F2.element(w) for w in (a, b, c))
    assert F2.mul(F2.mul(x, y), z) == F2.mul(x, F2.mul(y, z))
    assert F2.mul(x, F2.inv(x)) == F2.identity
    assert F2.mul(F2.identity, y) == y


vecs = st.tuples(st.integers(-20, 20), st.integers(-20, 20))


@given(vecs, vecs)
def test_lattice_commutes(u, v):
    assert Z2.mul(u, v) == Z2.mul(v, u)


@settings(max_examples=30)
@given(st.integers(2, 9), st.lists(st.integers(0, 8), min_size=1, max_size=3), st.integers(0, 4))
def test_cyclic_ball_monotone(order, gens, n):
    g = GroupModel.cyclic(order, [0] + gens)
    assert g.ball(n).as_set() <= g.ball(n + 1).as_set()
    assert g.ball(n).as_set() == oracles.ball_by_products(g, n)


def test_escape_needs_infinite_group():
    from coverentropy.dualball import escape_sequence
    with pytest.raises(GroupFiniteError):
        escape_sequence(GroupModel.cyclic(6), 3)
