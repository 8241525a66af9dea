import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from coverentropy.dualball import (
    build_witness,
    check_escape,
    escape_sequence,
    lower_bound_entropy,
    verify_witness,
)
from coverentropy.errors import GroupFiniteError, VerificationError
from coverentropy.groups import GroupModel

Z = GroupModel.lattice(1)
Z2 = GroupModel.lattice(2)
F2 = GroupModel.free(2)


def test_escape_sequence_integers():
    s = escape_sequence(Z, 6)
    assert s == ((1,),) * 6
    assert oracles.escape_ok(Z, s)


def test_escape_sequence_free_group():
    s = escape_sequence(F2, 4)
    assert s == (F2.element("a"),) * 4
    assert oracles.escape_ok(F2, s)


@pytest.mark.parametrize("group", [Z, Z2, F2, GroupModel.lattice(1, [0, 3, -2])])
def test_escape_property_against_explicit_balls(group):
    s = escape_sequence(group, 5)
    assert check_escape(group, s) is None
    assert oracles.escape_ok(group, s)


def test_escape_sequence_finite_group():
    with pytest.raises(GroupFiniteError):
        escape_sequence(GroupModel.cyclic(6), 2)


def test_witness_integers_n2():
    w = build_witness(Z, 2)
    assert w.t_seq == ((2,), (2,))
    assert w.prefixes == ((2,), (4,))
    supports = [{Z.mul(Z.inv(p), x) for x in w.f} for p in w.prefixes]
    assert supports == [{(-2,)}, {(-4,)}]
    assert w.pairing == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_witness_free_group_n2():
    w = build_witness(F2, 2)
    assert w.t_seq == (F2.element("aa"),) * 2
    supports = [{F2.mul(F2.inv(p), x) for x in w.f} for p in w.prefixes]
    assert supports == [{F2.element("AA")}, {F2.element("AAAA")}]


def test_single_bit_case():
    w = build_witness(Z2, 1)
    assert w.pairing == ((0,), (w.c,))


@pytest.mark.parametrize("group,n", [(Z, 1), (Z, 4), (Z2, 2), (Z2, 4), (F2, 1), (F2, 2), (F2, 3)])
def test_pairings_match_dense_oracle(group, n):
    w = build_witness(group, n)
    for delta, row in zip(w.deltas, w.pairing):
        assert list(row) == oracles.dense_pairings(group, w.f, w.prefixes, delta)
        assert list(row) == [b * w.c for b in delta]


def test_custom_kernel():
    f = {(0,): Fraction(1), (1,): Fraction(1, 2)}
    w = build_witness(Z, 3, f=f)
    assert w.c == Fraction(5, 4)
    assert all(list(row) == [b * w.c for b in d] for d, row in zip(w.deltas, w.pairing))


def test_overlapping_kernel_is_rejected():
    # support wider than the gap between translates: supports meet
    f = {(0,): Fraction(1), (2,): Fraction(1)}
    with pytest.raises(VerificationError):
        build_witness(Z, 2, f=f)


def test_tampered_pairing_named():
    w = build_witness(Z, 3)
    rows = [list(r) for r in w.pairing]
    rows[5][1] += 1
    bad = dataclasses.replace(w, pairing=tuple(tuple(r) for r in rows))
    with pytest.raises(VerificationError, match=r"P\[101\]\[2\]"):
        verify_witness(bad)


def test_tampered_escape_detected():
    w = build_witness(Z, 2)
    bad = dataclasses.replace(w, s_seq=((1,), (0,), (1,), (1,)))
    with pytest.raises(VerificationError):
        verify_witness(bad)


@pytest.mark.parametrize("group", [Z, F2])
def test_lower_bound_report(group):
    rep = lower_bound_entropy(group, 3)
    assert rep.k == 1 and rep.radius == 6 and rep.certified_count == 8
    assert rep.entropy_bound == Fraction(1, 2)


def test_lower_bound_rejects_compact_group():
    with pytest.raises(GroupFiniteError):
        lower_bound_entropy(GroupModel.cyclic(6), 2)


def test_threads_do_not_change_witness():
    assert build_witness(F2, 6, threads=1).pairing == build_witness(F2, 6, threads=4).pairing


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["Z", "Z2", "F2"]), st.integers(1, 7))
def test_witness_invariants(name, n):
    group = {"Z": Z, "Z2": Z2, "F2": F2}[name]
    w = build_witness(group, n)
    verify_witness(w)
    assert len(w.pairing) == 2 ** n
    assert oracles.escape_ok(group, w.s_seq) if n <= 3 else check_escape(group, w.s_seq) is None
