"""Exact minimum set cover over bitmask families.

Branch-and-bound that branches on the uncovered point with the fewest
candidate sets, seeded with the greedy cover and pruned by a
``ceil(uncovered / largest_remaining_set)`` bound.  Sets are Python ints used
as bitmasks over point indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from coverentropy.errors import NoRefiningCoverError

DEFAULT_NODE_LIMIT = 2_000_000


@dataclass(frozen=True)
class CoverSolution:
    """Best cover found, as indices into the candidate list.

    ``exact`` is True when the search finished; otherwise the optimum lies in
    ``[lower_bound, len(chosen)]``.
    """

    chosen: tuple[int, ...]
    exact: bool
    lower_bound: int
    greedy_size: int
    nodes: int

    @property
    def size(self) -> int:
        return len(self.chosen)


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def maximal_sets(sets: Sequence[int]) -> list[int]:
    """Drop empty, duplicate and dominated masks; keep first-seen order."""
    uniq = []
    for s in sets:
        if s and s not in uniq:
            uniq.append(s)
    return [s for s in uniq if not any(s != t and s | t == t for t in uniq)]


def greedy_cover(universe: int, sets: Sequence[int]) -> list[int]:
    covered = 0
    chosen: list[int] = []
    while covered != universe:
        best, gain = -1, 0
        for i, s in enumerate(sets):
            g = (s & ~covered & universe).bit_count()
            if g > gain:
                best, gain = i, g
        if best < 0:
            raise NoRefiningCoverError("candidate sets do not cover the universe")
        chosen.append(best)
        covered |= sets[best]
    return chosen


def separated_points(universe: int, sets: Sequence[int]) -> list[int]:
    """Greedy family of points no two of which share a candidate set.

    Its size is a lower bound for any cover drawn from ``sets``.
    """
    members = {x: [s for s in sets if s >> x & 1] for x in bits(universe)}
    order = sorted(members, key=lambda x: (len(members[x]), x))
    blocked = 0
    chosen = []
    for x in order:
        if blocked >> x & 1:
            continue
        chosen.append(x)
        for s in members[x]:
            blocked |= s
    return sorted(chosen)


def min_set_cover(universe: int, sets: Sequence[int],
                  node_limit: int = DEFAULT_NODE_LIMIT) -> CoverSolution:
    """Minimum-cardinality subfamily of ``sets`` whose union is ``universe``."""
    sets = list(sets)
    if universe == 0:
        return CoverSolution((), True, 0, 0, 0)
    union = 0
    for s in sets:
        union |= s
    if union & universe != universe:
        raise NoRefiningCoverError("candidate sets do not cover the universe")

    greedy = greedy_cover(universe, sets)
    best = list(greedy)
    containing = {x: [i for i, s in enumerate(sets) if s >> x & 1] for x in bits(universe)}
    root_lb = len(separated_points(universe, sets))
    nodes = 0
    aborted = False

    def search(covered: int, chosen: list[int]) -> None:
        nonlocal best, nodes, aborted
        if aborted:
            return
        nodes += 1
        if nodes > node_limit:
            aborted = True
            return
        uncovered = universe & ~covered
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        largest = max((sets[i] & uncovered).bit_count() for x in bits(uncovered) for i in containing[x])
        need = -(-uncovered.bit_count() // largest)
        if len(chosen) + need >= len(best):
            return
        pivot = min(bits(uncovered), key=lambda x: (len(containing[x]), x))
        branches = sorted(containing[pivot], key=lambda i: (-(sets[i] & uncovered).bit_count(), i))
        for i in branches:
            chosen.append(i)
            search(covered | sets[i], chosen)
            chosen.pop()
            if len(best) <= root_lb:
                return

    if len(best) > root_lb:
        search(0, [])
    exact = not aborted
    return CoverSolution(tuple(sorted(best)), exact, len(best) if exact else root_lb,
                         len(greedy), nodes)
