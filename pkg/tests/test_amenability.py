from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coverentropy import bundled
from coverentropy.action import FiniteAction
from coverentropy.amenability import (
    ObservableSet,
    construct_mean,
    invariance_defect,
    liminf_ratio_diagnostic,
    oscillation_cover,
    private_points,
    ratio_condition_index,
)
from coverentropy.errors import OscillationCoverUnavailable, RatioConditionNotReached, ValidationError
from coverentropy.groups import GroupModel
from coverentropy.specfile import load_spec
from coverentropy.topology import Cover, FiniteSpace

Z = GroupModel.lattice(1)


def cycle_action(n):
    p = tuple((i + 1) % n for i in range(n))
    q = tuple((i - 1) % n for i in range(n))
    return FiniteAction(Z, FiniteSpace.discrete(range(n)), {(0,): tuple(range(n)), (1,): p, (-1,): q})


def test_ratio_condition_index_linear():
    # (k+1 - k)/k <= 1/5 first at k = 5
    r = ratio_condition_index(list(range(1, 8)), Fraction(1, 5))
    assert r.index == 5
    assert ratio_condition_index([1, 2, 4, 8], Fraction(1, 2)).index is None


def test_ratio_condition_rejects_bad_sequences():
    with pytest.raises(ValidationError):
        ratio_condition_index([0, 1], Fraction(1, 2))
    with pytest.raises(ValidationError):
        ratio_condition_index([3, 2], Fraction(1, 2))


@settings(max_examples=100)
@given(st.lists(st.integers(1, 50), min_size=2, max_size=12), st.fractions(Fraction(1, 100), 2))
def test_ratio_condition_index_is_least(seq, theta):
    seq = sorted(seq)
    r = ratio_condition_index(seq, theta)
    ok = [n for n in range(1, len(seq)) if seq[n] - seq[n - 1] <= theta * seq[n - 1]]
    assert r.index == (ok[0] if ok else None)


def test_liminf_diagnostic_on_powers_of_two():
    d = liminf_ratio_diagnostic([2 ** n for n in range(1, 30)])
    assert d.bound_holds and d.bound_checks > 0
    assert all(r == 2 for r in d.ratios)


def test_liminf_diagnostic_on_identity_sequence():
    # ratios[n-1] = a[n+1]/a[n]; the ratio at n = 100 needs a[101]
    d = liminf_ratio_diagnostic(list(range(1, 102)))
    assert d.running_min[99] == Fraction(101, 100)
    assert d.running_min[98] > Fraction(101, 100)
    assert d.bound_holds


@settings(max_examples=50)
@given(st.lists(st.integers(1, 10 ** 6), min_size=2, max_size=25))
def test_growth_bound_never_fails(seq):
    # the bound a[m+n0] >= a^m a[n0] is a theorem for any sequence, so no failures
    assert liminf_ratio_diagnostic(sorted(seq)).bound_holds


@pytest.mark.parametrize("name", bundled.FINITE_ACTIONS)
@pytest.mark.parametrize("eps", ["1/2", "1/10", "1/100"])
def test_construct_mean_bundled(name, eps):
    spec = load_spec(bundled.get(name))
    m = construct_mean(spec.action, spec.observables, eps)
    assert m.defect <= Fraction(eps)
    # the bundled actions are symmetric and the mean is exactly invariant
    assert m.defect == 0
    assert m.trace.minimal_cover.sets and len(m.support) == len(m.trace.minimal_cover)


def test_rotation_mean_values():
    spec = load_spec(bundled.get("rotation4"))
    m = construct_mean(spec.action, spec.observables, "1/10")
    assert m.support == (0, 1, 2, 3) and m.n_used == 1
    assert m.mean(spec.observables, 0) == Fraction(1, 4)
    assert m.mean(spec.observables, 1) == 0


def test_theta_formula():
    spec = load_spec(bundled.get("rotation4"))
    m = construct_mean(spec.action, spec.observables, "1/10")
    assert m.theta == Fraction(1, 10) / 3


def test_ratio_condition_not_reached():
    a = cycle_action(12)
    h = ObservableSet.from_tables(a.space, {"half": {i: int(i < 6) for i in range(12)}})
    with pytest.raises(RatioConditionNotReached):
        construct_mean(a, h, "1/2", n_cap=1)
    assert construct_mean(a, h, "1/2").defect <= Fraction(1, 2)


def test_oscillation_cover_unavailable():
    space = FiniteSpace.indiscrete((0, 1))
    a = FiniteAction.trivial(Z, space)
    h = ObservableSet.from_tables(space, {"f": {0: 0, 1: 1}})
    with pytest.raises(OscillationCoverUnavailable):
        construct_mean(a, h, "1/2")


def test_oscillation_cover_merges_level_sets():
    space = FiniteSpace.discrete(range(4))
    h = ObservableSet.from_tables(space, {"f": {0: 0, 1: 1, 2: 0, 3: 1}})
    cover = oscillation_cover(space, h, Fraction(0))
    assert sorted(map(sorted, cover.labels())) == [[0, 2], [1, 3]]


def test_private_points():
    space = FiniteSpace.discrete("abc")
    cover = Cover.from_labels(space, ["ab", "bc"])
    assert [space.points[i] for i in private_points(cover)] == ["a", "c"]


def test_invariance_defect_of_fixed_point_mean():
    a = cycle_action(3)
    h = ObservableSet.indicator(a.space, 0)
    assert invariance_defect(a, [0], h) == 1
    assert invariance_defect(a, [0, 1, 2], h) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 9), st.lists(st.fractions(-2, 2, max_denominator=5), min_size=9, max_size=9),
       st.sampled_from(["1/2", "1/10", "1/100"]))
def test_mean_defect_within_epsilon(n, vals, eps):
    a = cycle_action(n)
    h = ObservableSet.from_tables(a.space, {"f": dict(enumerate(vals[:n]))})
    m = construct_mean(a, h, eps)
    assert m.defect <= Fraction(eps)
    assert invariance_defect(a, m.support_indices, h) == m.defect
