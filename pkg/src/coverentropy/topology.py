"""Finite topological spaces and their finite open covers.

Subsets of the point set are bitmasks over point indices.  The given
``open_basis`` is treated as a subbasis: the topology is the one it
generates, so every point ``x`` has a smallest open neighbourhood ``U_x``
(the intersection of the subbasis members containing it).  A set is open iff
it contains ``U_x`` for each of its points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from coverentropy.errors import ResourceLimitError, ValidationError
from coverentropy.setcover import bits

MAX_POINTS = 64


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    points: tuple
    open_basis: tuple
    max_points: int = MAX_POINTS
    index: dict = field(init=False, repr=False)
    neighborhoods: tuple = field(init=False, repr=False)

    def __post_init__(self):
        pts = tuple(self.points)
        if len(set(pts)) != len(pts):
            raise ValidationError("duplicate point labels")
        if not pts:
            raise ValidationError("space must have at least one point")
        if len(pts) > self.max_points:
            raise ResourceLimitError(f"{len(pts)} points exceeds cap of {self.max_points}")
        object.__setattr__(self, "points", pts)
        index = {p: i for i, p in enumerate(pts)}
        object.__setattr__(self, "index", index)
        basis = []
        for member in self.open_basis:
            try:
                basis.append(sum(1 << index[p] for p in set(member)))
            except KeyError as exc:
                raise ValidationError(f"basis member mentions unknown point {exc.args[0]!r}") from None
        object.__setattr__(self, "open_basis", tuple(basis))
        full = (1 << len(pts)) - 1
        nbhds = []
        for i in range(len(pts)):
            u = full
            hit = False
            for b in basis:
                if b >> i & 1:
                    u &= b
                    hit = True
            if not hit:
                raise ValidationError(f"open basis does not cover point {pts[i]!r}")
            nbhds.append(u)
        object.__setattr__(self, "neighborhoods", tuple(nbhds))

    @classmethod
    def discrete(cls, points: Iterable[Hashable]) -> "FiniteSpace":
        pts = tuple(points)
        return cls(pts, tuple([p] for p in pts))

    @classmethod
    def indiscrete(cls, points: Iterable[Hashable]) -> "FiniteSpace":
        pts = tuple(points)
        return cls(pts, (pts,))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    def mask(self, labels: Iterable[Hashable]) -> int:
        m = 0
        for p in labels:
            if p not in self.index:
                raise ValidationError(f"unknown point {p!r}")
            m |= 1 << self.index[p]
        return m

    def labels(self, mask: int) -> tuple:
        return tuple(self.points[i] for i in bits(mask))

    def is_open(self, mask: int) -> bool:
        return all(self.neighborhoods[i] & ~mask == 0 for i in bits(mask))

    def interior(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            if self.neighborhoods[i] & ~mask == 0:
                out |= 1 << i
        return out

    def closure_of_point(self, i: int) -> int:
        """Points whose smallest neighbourhood contains ``i`` (the closure of {i})."""
        return sum(1 << j for j, u in enumerate(self.neighborhoods) if u >> i & 1)

    def finest_cover(self) -> "Cover":
        """Cover by smallest neighbourhoods; it refines every open cover."""
        return Cover(self, self.neighborhoods)


@dataclass(frozen=True, eq=False)
class Cover:
    """Finite open cover, stored as distinct non-empty bitmasks in input order."""

    space: FiniteSpace
    sets: tuple

    def __post_init__(self):
        uniq = []
        for s in self.sets:
            if s and s not in uniq:
                uniq.append(s)
        union = 0
        for s in uniq:
            if s & ~self.space.full:
                raise ValidationError("cover member outside the space")
            if not self.space.is_open(s):
                raise ValidationError(f"cover member {self.space.labels(s)} is not open")
            union |= s
        if union != self.space.full:
            missing = self.space.labels(self.space.full & ~union)
            raise ValidationError(f"cover misses points {list(missing)}")
        object.__setattr__(self, "sets", tuple(uniq))

    @classmethod
    def from_labels(cls, space: FiniteSpace, members: Sequence[Iterable[Hashable]]) -> "Cover":
        return cls(space, tuple(space.mask(m) for m in members))

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cover) and other.space is self.space
                and set(other.sets) == set(self.sets))

    def __hash__(self) -> int:
        return hash(frozenset(self.sets))

    def labels(self) -> list[list]:
        return [list(self.space.labels(s)) for s in self.sets]


def refines(finer: Sequence[int], coarser: Sequence[int]) -> bool:
    """True iff each member of ``finer`` lies inside some member of ``coarser``."""
    return all(any(v & ~u == 0 for u in coarser) for v in finer)
