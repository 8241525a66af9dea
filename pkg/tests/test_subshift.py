import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from coverentropy.errors import ExactnessUnavailable, ValidationError, VerificationError
from coverentropy.groups import GroupModel
from coverentropy.subshift import (
    LOCALLY_ADMISSIBLE,
    TRANSFER_MATRIX,
    SeparationCertificate,
    SubshiftModel,
    verify_separation,
)

Z = GroupModel.lattice(1)
GOLDEN = [{0: 1, 1: 1}]


def test_full_shift_counts_match_oracle():
    m = SubshiftModel.full((0, 1), Z)
    for n in range(1, 5):
        assert m.pattern_count(n).count == oracles.line_global_count(2, [], 2 * n + 1, 0) == 2 ** (2 * n + 1)


def test_golden_mean_counts():
    m = SubshiftModel.golden_mean()
    counts = [m.pattern_count(n).count for n in range(1, 5)]
    # frozen from oracles.line_global_count with padding 4
    assert counts == [5, 13, 34, 89]
    assert counts == [oracles.line_global_count(2, GOLDEN, 2 * n + 1, 4) for n in range(1, 5)]


def test_non_extendable_symbol_is_dropped():
    # symbol 2 can never be followed, so it never occurs in a bi-infinite point
    forb = tuple({(0,): 2, (1,): a} for a in range(3))
    m = SubshiftModel((0, 1, 2), Z, forb)
    assert [m.pattern_count(n).count for n in (1, 2, 3)] == [8, 32, 128]
    assert m.window_graph().count_local_words(3) == 12


@st.composite
def line_sfts(draw):
    pats = []
    for _ in range(draw(st.integers(0, 3))):
        width = draw(st.integers(1, 3))
        offsets = sorted(draw(st.sets(st.integers(0, width - 1), min_size=1, max_size=width)))
        pats.append({o: draw(st.integers(0, 1)) for o in offsets})
    return pats


@settings(max_examples=60, deadline=None)
@given(line_sfts())
def test_transfer_matrix_matches_padded_brute_force(pats):
    m = SubshiftModel((0, 1), Z, tuple({(o,): s for o, s in p.items()} for p in pats))
    graph = m.window_graph()
    states = 2 ** (graph.M - 1)
    for n in (1, 2):
        pc = m.pattern_count(n)
        assert pc.method == (TRANSFER_MATRIX if pats else "exhaustive")
        assert pc.count == oracles.line_global_count(2, pats, 2 * n + 1, states)
        assert pc.count <= graph.count_local_words(2 * n + 1)


@settings(max_examples=40, deadline=None)
@given(line_sfts())
def test_certificates_verify(pats):
    m = SubshiftModel((0, 1), Z, tuple({(o,): s for o, s in p.items()} for p in pats))
    for n in (1, 2):
        r = m.certified_complexity(n)
        assert r.exact and r.lower_bound == r.upper_bound == r.value
        if r.value:
            verify_separation(m, r.certificate, n)


def test_separation_witness():
    m = SubshiftModel.golden_mean()
    r = m.certified_complexity(1)
    cert = r.certificate
    assert len(cert) == 5
    g = cert.witness(0, 1)
    i = cert.domain.index(g)
    assert cert.patterns[0][i] != cert.patterns[1][i]


def test_tampered_certificates_fail():
    m = SubshiftModel.golden_mean()
    cert = m.certified_complexity(2).certificate
    dup = SeparationCertificate(cert.domain, cert.patterns[:-1] + cert.patterns[:1], cert.extensions)
    with pytest.raises(VerificationError):
        verify_separation(m, dup, 2)
    bad = SeparationCertificate(cert.domain, ((1, 1, 0, 0, 0),) + cert.patterns[1:], cert.extensions)
    with pytest.raises(VerificationError):
        verify_separation(m, bad, 2)


def test_extension_is_admissible_configuration():
    m = SubshiftModel.golden_mean()
    g = m.window_graph()
    for w in g.words(5):
        ext = g.extension(w)
        assert g.word_allowed(ext.finite_window(g.M))
        assert ext.core[:5] == w


@pytest.mark.parametrize("group,n,expect", [
    (GroupModel.free(2), 1, 20),
    (GroupModel.lattice(2), 1, 20),
    (GroupModel.lattice(2), 2, 1300),
])
def test_locally_admissible_counts(group, n, expect):
    # frozen from oracles.local_count_on_domain
    m = SubshiftModel.golden_mean(group)
    pc = m.pattern_count(n)
    assert pc.method == LOCALLY_ADMISSIBLE and pc.count == expect
    r = m.certified_complexity(n)
    assert not r.exact and r.lower_bound == 1 and r.upper_bound == expect


def test_local_count_oracle_small():
    g = GroupModel.lattice(2)
    step = (1, 0)
    dom = g.ball(1).elements
    assert oracles.local_count_on_domain(g, 2, [{g.identity: 1, step: 1}], dom, 3) == 20


def test_full_shift_on_free_group():
    m = SubshiftModel.full((0, 1), GroupModel.free(2))
    assert m.pattern_count(1).count == 32
    assert m.certified_complexity(1).exact


def test_entropy_estimate_full_shift():
    est = SubshiftModel.full((0, 1), Z).entropy_estimate(6)
    assert est.estimate.values == tuple(2 ** (2 * n + 1) for n in range(1, 7))
    assert est.closed_form_slopes == tuple((2 * n + 1) / n for n in range(1, 7))


def test_golden_mean_slope():
    est = SubshiftModel.golden_mean().entropy_estimate(10).estimate
    target = 2 * math.log2((1 + math.sqrt(5)) / 2)
    assert abs(est.tail_slope - target) < 0.15


def test_compare_generating_sets_full_shift():
    m = SubshiftModel.full((0, 1), Z)
    rep = m.compare_generating_sets(Z.generators, [(k,) for k in range(-2, 3)], 6)
    assert (rep.m, rep.n) == (2, 1)
    assert rep.s_values == tuple(2 ** (2 * k + 1) for k in range(1, 7))
    assert rep.t_values_scaled == tuple(2 ** (4 * k + 1) for k in range(1, 7))
    assert rep.forward_holds and rep.backward_holds


def test_refined_cover_values():
    m = SubshiftModel.golden_mean()
    assert m.refined_cover_values(1, 3) == [13, 34, 89]


def test_validation():
    with pytest.raises(ValidationError):
        SubshiftModel((0, 0), Z)
    with pytest.raises(ValidationError):
        SubshiftModel((0, 1), Z, ({(0,): 2},))
    with pytest.raises(ExactnessUnavailable):
        SubshiftModel.golden_mean(GroupModel.free(2)).window_graph()
