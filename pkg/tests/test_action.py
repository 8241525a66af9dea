import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from coverentropy import bundled
from coverentropy.action import FiniteAction, compose, image, invert
from coverentropy.errors import ActionLawError
from coverentropy.groups import GroupModel
from coverentropy.specfile import load_spec
from coverentropy.topology import Cover, FiniteSpace

Z = GroupModel.lattice(1)


def rotation4():
    spec = load_spec(bundled.get("rotation4"))
    return spec.action, spec.cover


def test_rotation_spec_cover_constant_two():
    action, cover = rotation4()
    assert [v for _, v in action.complexity_sequence(cover, 6)] == [2] * 6


def test_rotation_finest_cover_constant_four():
    action, _ = rotation4()
    seq = action.complexity_sequence(action.space.finest_cover(), 4)
    assert [v for _, v in seq] == [4] * 4


@pytest.mark.parametrize("name", bundled.FINITE_ACTIONS)
def test_bundled_sequences_match_oracle(name):
    raw = bundled.get(name)
    spec = load_spec(raw)
    a = spec.action
    pts = raw["action"]["points"]
    sub = raw["action"].get("open_basis", [[p] for p in pts])
    maps = {a.group.element(e["element"]): dict(zip(pts, e["map"])) for e in raw["action"]["generator_maps"]}
    cover = spec.cover or a.space.finest_cover()
    labels = [list(a.space.labels(m)) for m in cover.sets]
    got = [v for _, v in a.complexity_sequence(cover, 3)]
    assert got == [oracles.min_refining_cover(pts, sub, maps, labels, n) for n in (1, 2, 3)]


def test_certificates_are_consistent():
    action, cover = rotation4()
    r = action.refinement_at(cover, 2)
    assert r.exact and r.certificate == "separation"
    assert len(r.separated) == r.value == len(r.optimal_cover)
    assert action.s_refines(r.optimal_cover, cover, action.group.ball(2))


def test_map_stabilization():
    action, _ = rotation4()
    assert action.map_stabilization_index() == 2
    assert action.ball_maps(2) == action.ball_maps(5)


def test_action_law_and_homeomorphism_checks():
    space = FiniteSpace(("p", "q"), (("p",), ("p", "q")))
    with pytest.raises(ActionLawError):
        # swapping the open point with the non-open one is not continuous
        FiniteAction.from_labels(Z, space, {(0,): ["p", "q"], (1,): ["q", "p"], (-1,): ["q", "p"]})
    disc = FiniteSpace.discrete((0, 1, 2))
    with pytest.raises(ActionLawError):
        # -1 must act as the inverse of 1
        FiniteAction.from_labels(Z, disc, {(0,): [0, 1, 2], (1,): [1, 2, 0], (-1,): [1, 2, 0]})
    with pytest.raises(ActionLawError):
        FiniteAction.from_labels(Z, disc, {(0,): [1, 0, 2], (1,): [0, 1, 2], (-1,): [0, 1, 2]})


def test_point_map_helpers():
    p, q = (1, 2, 0), (0, 2, 1)
    assert compose(p, invert(p)) == (0, 1, 2)
    assert compose(p, q) == (1, 0, 2)
    assert image(p, 0b011) == 0b110


def test_compare_generating_sets_finite():
    action, cover = rotation4()
    rep = action.compare_generating_sets([0, 1, 3], [0, 1, 2, 3], cover, 4)
    assert rep.forward_holds and rep.backward_holds
    assert (rep.m, rep.n) == (2, 1)


# -- random homeomorphic Z-actions ------------------------------------------------

@st.composite
def z_actions(draw):
    n = draw(st.integers(1, 5))
    pts = tuple(range(n))
    members = draw(st.lists(st.sets(st.sampled_from(pts), min_size=1), max_size=4))
    sub = [tuple(sorted(m)) for m in members] + [pts]
    space = FiniteSpace(pts, tuple(sub))
    homeos = [p for p in itertools.permutations(range(n))
              if all(image(p, space.neighborhoods[i]) == space.neighborhoods[p[i]] for i in range(n))]
    p = draw(st.sampled_from(homeos))
    opens = [m for m in range(1, 1 << n) if space.is_open(m)]
    chosen = draw(st.lists(st.sampled_from(opens), max_size=3))
    # fill up to a cover with the largest open set through each missed point
    covered = 0
    for m in chosen:
        covered |= m
    for i in range(n):
        if not covered >> i & 1:
            big = max((o for o in opens if o >> i & 1), key=int.bit_count)
            chosen.append(big)
            covered |= big
    return space, sub, p, chosen


@settings(max_examples=60, deadline=None)
@given(z_actions())
def test_complexity_matches_brute_force(inst):
    space, sub, p, chosen = inst
    maps = {(0,): tuple(range(len(space))), (1,): p, (-1,): invert(p)}
    action = FiniteAction(Z, space, maps)
    cover = Cover(space, tuple(chosen))
    label_maps = {g: dict(enumerate(m)) for g, m in maps.items()}
    labels = [list(space.labels(m)) for m in cover.sets]
    for n in (1, 2):
        r = action.refinement_at(cover, n)
        assert r.exact
        assert r.value == oracles.min_refining_cover(space.points, sub, label_maps, labels, n)


@settings(max_examples=60, deadline=None)
@given(z_actions())
def test_complexity_invariants(inst):
    space, _, p, chosen = inst
    action = FiniteAction(Z, space, {(0,): tuple(range(len(space))), (1,): p, (-1,): invert(p)})
    cover = Cover(space, tuple(chosen))
    vals = [v for _, v in action.complexity_sequence(cover, 4)]
    finest = [v for _, v in action.complexity_sequence(space.finest_cover(), 4)]
    # e in S makes S^n grow, so the sequence is non-decreasing; the finest cover dominates
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert all(1 <= a <= b <= len(space) for a, b in zip(vals, finest))
    # past the map stabilization radius the sequence is constant
    k = action.map_stabilization_index()
    assert action.refinement_at(cover, k).value == action.refinement_at(cover, k + 3).value


def test_threads_do_not_change_results():
    action, cover = rotation4()
    a = [(r.value, r.optimal_cover.sets, r.separated) for r in action.complexity_results(cover, 5, threads=1)]
    b = [(r.value, r.optimal_cover.sets, r.separated) for r in action.complexity_results(cover, 5, threads=4)]
    assert a == b
