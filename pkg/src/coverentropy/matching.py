"""Hall matching with witnesses, and injective refinement maps between minimal covers.

:func:`hall_matching` returns either a left-saturating injection or a
violating set ``Z`` with ``|Z| > |N(Z)|``.  :func:`refinement_map` builds an
injection ``phi: U -> V`` with ``U`` meeting ``phi(U)`` for two covers drawn
from a family in which ``U`` is a minimum cover.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from coverentropy.errors import InvariantViolation, ValidationError
from coverentropy.setcover import min_set_cover


@dataclass(frozen=True)
class BipartiteRelation:
    left: tuple
    right: tuple
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        lset, rset = set(self.left), set(self.right)
        if len(lset) != len(self.left) or len(rset) != len(self.right):
            raise ValidationError("duplicate vertices in relation")
        bad = [p for p in self.pairs if p[0] not in lset or p[1] not in rset]
        if bad:
            raise ValidationError(f"pairs outside left x right: {sorted(bad, key=repr)[:3]}")

    def neighbors(self, x) -> list:
        return [y for y in self.right if (x, y) in self.pairs]

    def neighborhood(self, subset: Iterable) -> frozenset:
        subset = set(subset)
        return frozenset(y for (x, y) in self.pairs if x in subset)


@dataclass(frozen=True)
class MatchingResult:
    """Exactly one of ``injection`` / ``violator`` is set."""

    injection: Mapping | None = None
    violator: frozenset | None = None

    @property
    def ok(self) -> bool:
        return self.injection is not None


def hall_matching(rel: BipartiteRelation) -> MatchingResult:
    """Maximum matching by augmenting paths; index order breaks ties."""
    adj = {x: rel.neighbors(x) for x in rel.left}
    match_right: dict = {}

    def augment(x, seen: set) -> bool:
        for y in adj[x]:
            if y in seen:
                continue
            seen.add(y)
            if y not in match_right or augment(match_right[y], seen):
                match_right[y] = x
                return True
        return False

    for x in rel.left:
        augment(x, set())

    match_left = {x: y for y, x in match_right.items()}
    if len(match_left) == len(rel.left):
        return MatchingResult(injection={x: match_left[x] for x in rel.left})

    # Koenig cut: everything reachable from free left vertices by alternating paths
    free = [x for x in rel.left if x not in match_left]
    z = set(free)
    stack = list(free)
    while stack:
        x = stack.pop()
        for y in adj[x]:
            x2 = match_right.get(y)
            if x2 is not None and x2 not in z:
                z.add(x2)
                stack.append(x2)
    violator = frozenset(z)
    if len(violator) <= len(rel.neighborhood(violator)):
        raise InvariantViolation("alternating cut did not produce a Hall violator")
    return MatchingResult(violator=violator)


def is_hall_violator(rel: BipartiteRelation, subset: Iterable) -> bool:
    subset = frozenset(subset)
    return len(subset) > len(rel.neighborhood(subset))


def refinement_map(universe: int, u_sets: Sequence[int], v_sets: Sequence[int],
                   family: Sequence[int]) -> dict[int, int]:
    """Injective ``phi`` from ``u_sets`` to ``v_sets`` with ``U & phi(U) != 0``.

    All sets are bitmasks over ``universe``.  Preconditions: both lists cover
    the universe, both lie inside ``family``, and no subfamily of ``family``
    covers with fewer than ``len(u_sets)`` members.  Returns a dict keyed by
    index into ``u_sets`` with values indexing ``v_sets``.
    """
    for name, sets in (("U", u_sets), ("V", v_sets)):
        union = 0
        for s in sets:
            union |= s
        if union != universe:
            raise ValidationError(f"{name} is not a covering")
        if len(set(sets)) != len(sets):
            raise ValidationError(f"{name} has repeated members")
        missing = [s for s in sets if s not in family]
        if missing:
            raise ValidationError(f"{name} is not contained in the family")
    best = min_set_cover(universe, list(family))
    if not best.exact:
        raise ValidationError("minimum cover of the family could not be certified")
    if best.size != len(u_sets):
        raise ValidationError(
            f"U not minimal in N: a cover of size {best.size} exists, |U| = {len(u_sets)}")
    rel = BipartiteRelation(
        range(len(u_sets)), range(len(v_sets)),
        {(i, j) for i, u in enumerate(u_sets) for j, v in enumerate(v_sets) if u & v},
    )
    res = hall_matching(rel)
    if not res.ok:
        raise InvariantViolation(
            f"Hall condition fails on U-indices {sorted(res.violator)} despite verified preconditions")
    return dict(res.injection)

