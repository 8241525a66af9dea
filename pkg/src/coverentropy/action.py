"""Continuous actions of finitely generated groups on finite spaces.

The central quantity is the refinement complexity ``(W:U)``: the least size
of an open cover ``V`` such that for every ``g`` in ``W`` the image cover
``g.V`` refines ``U``.  It is computed exactly by set cover over the maximal
admissible open sets (open ``N`` with ``g.N`` inside some member of ``U`` for
every ``g`` in ``W``).  Any refining cover can be enlarged member-wise to
maximal admissible sets, so nothing is lost by this reduction.

Point maps are tuples ``p`` with ``p[i]`` the index of the image of point
``i``; composition follows the action law ``map(g*h) = map(g) o map(h)``.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from coverentropy.errors import ActionLawError, NotGeneratingError, ResourceLimitError
from coverentropy.estimates import ComparisonReport, EstimateReport, estimate_from_values
from coverentropy.groups import GroupModel
from coverentropy.setcover import (
    DEFAULT_NODE_LIMIT,
    bits,
    maximal_sets,
    min_set_cover,
    separated_points,
)
from coverentropy.topology import Cover, FiniteSpace, refines

PointMap = tuple


def compose(p: PointMap, q: PointMap) -> PointMap:
    """``p o q``: apply ``q`` first."""
    return tuple(p[x] for x in q)


def invert(p: PointMap) -> PointMap:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def image(p: PointMap, mask: int) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << p[i]
    return out


def preimage(p: PointMap, mask: int) -> int:
    out = 0
    for i, j in enumerate(p):
        if mask >> j & 1:
            out |= 1 << i
    return out


@dataclass(frozen=True)
class RefinementResult:
    """Certified value of ``(W:U)``.

    ``optimal_cover`` is the upper witness.  ``separated`` lists points no two
    of which fit in one admissible set, so ``len(separated)`` is a lower
    bound.  ``certificate`` is ``"separation"`` when that bound meets the
    value, ``"exhaustive"`` when the search finished without it, and
    ``"bracketed"`` when the node budget ran out.
    """

    value: int
    optimal_cover: Cover
    separated: tuple
    lower_bound: int
    exact: bool
    certificate: str
    candidates: tuple
    greedy_size: int
    nodes: int


@dataclass(frozen=True, eq=False)
class FiniteAction:
    """A group acting on a finite space by homeomorphisms.

    ``generator_maps`` sends every element of ``group.generators`` to a point
    map given by point indices; :meth:`from_labels` accepts label tables.
    """

    group: GroupModel
    space: FiniteSpace
    generator_maps: Mapping
    node_limit: int = DEFAULT_NODE_LIMIT
    _maps: dict = field(default_factory=dict, init=False, repr=False)
    _queue: deque = field(default_factory=deque, init=False, repr=False)
    _ball_maps: list = field(default_factory=list, init=False, repr=False)
    _memo: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        gm = {}
        size = len(self.space)
        for g, p in self.generator_maps.items():
            self.group.check(g)
            p = tuple(p)
            if sorted(p) != list(range(size)):
                raise ActionLawError(f"map of generator {g!r} is not a bijection of the points")
            if not self._is_homeomorphism(p):
                raise ActionLawError(f"map of generator {g!r} is not a homeomorphism")
            gm[g] = p
        missing = [g for g in self.group.generators if g not in gm]
        if missing:
            raise ActionLawError(f"no map given for generators {missing}")
        extra = [g for g in gm if g not in self.group.generators]
        if extra:
            raise ActionLawError(f"maps given for non-generators {extra}")
        ident = tuple(range(size))
        if gm[self.group.identity] != ident:
            raise ActionLawError("identity must act trivially")
        object.__setattr__(self, "generator_maps", gm)
        self._maps[self.group.identity] = ident
        self._queue.append(self.group.identity)
        self._audit()

    @classmethod
    def from_labels(cls, group: GroupModel, space: FiniteSpace,
                    label_maps: Mapping[Hashable, Mapping[Hashable, Hashable] | Sequence[Hashable]],
                    **kw) -> "FiniteAction":
        """Build from ``{generator: {point: image}}`` or ``{generator: [images in point order]}``."""
        maps = {}
        for g, table in label_maps.items():
            if isinstance(table, Mapping):
                row = [table[p] for p in space.points]
            else:
                row = list(table)
            if len(row) != len(space):
                raise ActionLawError(f"map of {g!r} has {len(row)} entries for {len(space)} points")
            try:
                maps[g] = tuple(space.index[q] for q in row)
            except KeyError as exc:
                raise ActionLawError(f"map of {g!r} mentions unknown point {exc.args[0]!r}") from None
        return cls(group, space, maps, **kw)

    @classmethod
    def trivial(cls, group: GroupModel, space: FiniteSpace, **kw) -> "FiniteAction":
        ident = tuple(range(len(space)))
        return cls(group, space, {g: ident for g in group.generators}, **kw)

    def _is_homeomorphism(self, p: PointMap) -> bool:
        nb = self.space.neighborhoods
        # continuity of p and of its inverse, tested on smallest neighbourhoods
        return all(image(p, nb[i]) == nb[p[i]] for i in range(len(p)))

    # -- maps of group elements ------------------------------------------

    def map_of(self, g) -> PointMap:
        """Point map of an arbitrary group element, found by BFS over ``S`` and ``S^-1``."""
        self.group.check(g)
        steps = [(s, p) for s, p in self.generator_maps.items()]
        steps += [(self.group._inv(s), invert(p)) for s, p in self.generator_maps.items()]
        while g not in self._maps:
            if not self._queue:
                raise NotGeneratingError(f"{g!r} is not reachable from the generators")
            h = self._queue.popleft()
            ph = self._maps[h]
            for s, ps in steps:
                k = self.group._mul(h, s)
                pk = compose(ph, ps)
                known = self._maps.get(k)
                if known is None:
                    self._maps[k] = pk
                    self._queue.append(k)
                elif known != pk:
                    raise ActionLawError(f"element {k!r} acts in two different ways")
            if len(self._maps) > self.group.ball_cap:
                raise ResourceLimitError(f"element search exceeded cap {self.group.ball_cap}")
        return self._maps[g]

    def _audit(self) -> None:
        ball2 = list(self.group.ball(2))
        for g in ball2:
            for h in ball2:
                if compose(self.map_of(g), self.map_of(h)) != self.map_of(self.group._mul(g, h)):
                    raise ActionLawError(f"action law fails for {g!r}, {h!r}")

    def maps_of(self, elements: Iterable) -> tuple:
        """Distinct point maps of ``elements`` in first-seen order."""
        seen = {}
        for g in elements:
            seen.setdefault(self.map_of(g), None)
        return tuple(seen)

    def ball_maps(self, n: int) -> frozenset:
        """Set of point maps induced by ``S^n``, without enumerating the group ball."""
        if not self._ball_maps:
            self._ball_maps.append(frozenset([tuple(range(len(self.space)))]))
        gens = frozenset(self.generator_maps.values())
        while len(self._ball_maps) <= n:
            prev = self._ball_maps[-1]
            self._ball_maps.append(frozenset(compose(p, q) for p in prev for q in gens))
        return self._ball_maps[n]

    def map_stabilization_index(self, n_cap: int = 10_000) -> int:
        """Least n >= 1 from which the map sets of ``S^n`` no longer change.

        Past this radius every complexity value is constant, a proof of
        stabilization rather than an observation.
        """
        for n in range(1, n_cap + 1):
            if self.ball_maps(n) == self.ball_maps(n + 1):
                return n
        raise ResourceLimitError(f"map sets still growing at radius {n_cap}")

    # -- refinement -------------------------------------------------------

    def s_refines(self, finer: Cover, coarser: Cover, elements: Iterable) -> bool:
        """True iff ``g.finer`` refines ``coarser`` for every ``g`` in ``elements``."""
        return all(refines([image(p, v) for v in finer], list(coarser))
                   for p in self.maps_of(elements))

    def admissible_sets(self, cover: Cover, elements: Iterable) -> list[int]:
        """Maximal open sets ``N`` with ``{N}`` refining ``cover`` under every element."""
        return self._admissible(tuple(cover), self.maps_of(elements))

    def _admissible(self, cover_sets: tuple, maps: Iterable[PointMap]) -> list[int]:
        fam = [self.space.full]
        for p in sorted(set(maps)):
            pre = [preimage(p, u) for u in cover_sets]
            fam = maximal_sets([a & b for a in fam for b in pre])
        fam = maximal_sets([self.space.interior(a) for a in fam])
        return sorted(fam, key=lambda m: (-m.bit_count(), bits(m)))

    def min_refining_cover(self, cover: Cover, elements: Iterable) -> RefinementResult:
        return self._solve(cover, frozenset(self.maps_of(elements)))

    def _solve(self, cover: Cover, maps: frozenset) -> RefinementResult:
        key = (frozenset(cover.sets), maps)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        cands = self._admissible(tuple(cover), maps)
        sol = min_set_cover(self.space.full, cands, node_limit=self.node_limit)
        sep = separated_points(self.space.full, cands)
        chosen = Cover(self.space, tuple(cands[i] for i in sol.chosen))
        if len(sep) == sol.size:
            tag = "separation"
        elif sol.exact:
            tag = "exhaustive"
        else:
            tag = "bracketed"
        result = RefinementResult(
            value=sol.size,
            optimal_cover=chosen,
            separated=tuple(self.space.points[i] for i in sep),
            lower_bound=max(len(sep), sol.lower_bound),
            exact=sol.exact,
            certificate=tag,
            candidates=tuple(cands),
            greedy_size=sol.greedy_size,
            nodes=sol.nodes,
        )
        self._memo[key] = result
        return result

    def refinement_at(self, cover: Cover, n: int) -> RefinementResult:
        """``(S^n:U)`` with its certificates."""
        return self._solve(cover, self.ball_maps(n))

    def complexity_results(self, cover: Cover, n_max: int, threads: int = 1) -> list[RefinementResult]:
        if n_max < 1:
            raise ValueError("n_max must be at least 1")
        self.ball_maps(n_max)  # fill the cache before any fan-out
        radii = range(1, n_max + 1)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(lambda n: self.refinement_at(cover, n), radii))
        return [self.refinement_at(cover, n) for n in radii]

    def complexity_sequence(self, cover: Cover, n_max: int, threads: int = 1) -> list[tuple[int, int]]:
        """``[(n, (S^n:U)) for n = 1..n_max]``."""
        return [(n, r.value) for n, r in
                enumerate(self.complexity_results(cover, n_max, threads), start=1)]

    def entropy_estimate(self, cover: Cover, n_max: int) -> EstimateReport:
        if n_max < 2:
            raise ValueError("n_max must be at least 2")
        return estimate_from_values([v for _, v in self.complexity_sequence(cover, n_max)])

    def with_generators(self, generators: Iterable) -> "FiniteAction":
        """Same action viewed through another generating list of the same group."""
        group = self.group.with_generators(generators)
        maps = {g: self.map_of(g) for g in group.generators}
        return FiniteAction(group, self.space, maps, node_limit=self.node_limit)

    def compare_generating_sets(self, s_gens: Iterable, t_gens: Iterable, cover: Cover,
                                n_max: int) -> ComparisonReport:
        """Check ``(S^k:U) <= (T^(kn):U)`` and ``(T^k:U) <= (S^(km):U)`` for k <= n_max."""
        a_s = self.with_generators(s_gens)
        a_t = self.with_generators(t_gens)
        m = a_s.group.covering_index(a_t.group.generators)
        n = a_t.group.covering_index(a_s.group.generators)
        cov_s = Cover(self.space, cover.sets)
        s_vals = [a_s.refinement_at(cov_s, k).value for k in range(1, n_max + 1)]
        t_scaled = [a_t.refinement_at(cov_s, k * n).value for k in range(1, n_max + 1)]
        t_vals = [a_t.refinement_at(cov_s, k).value for k in range(1, n_max + 1)]
        s_scaled = [a_s.refinement_at(cov_s, k * m).value for k in range(1, n_max + 1)]
        est_s = estimate_from_values(s_vals)
        est_t = estimate_from_values(t_vals)
        return ComparisonReport(
            m=m, n=n,
            s_values=tuple(s_vals), t_values_scaled=tuple(t_scaled),
            t_values=tuple(t_vals), s_values_scaled=tuple(s_scaled),
            forward_holds=all(a <= b for a, b in zip(s_vals, t_scaled)),
            backward_holds=all(a <= b for a, b in zip(t_vals, s_scaled)),
            slope_s=est_s.tail_slope, slope_t=est_t.tail_slope,
        )
