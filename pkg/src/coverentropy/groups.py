"""Finitely generated discrete groups with exact arithmetic.

Elements are plain hashable Python values in canonical form:

* integer lattice ``Z^d``: tuples of ``d`` ints,
* free group ``F_k``: freely reduced tuples of nonzero ints, ``+i`` is the
  i-th basis letter and ``-i`` its inverse,
* cyclic group ``Z/m``: ints in ``range(m)``,
* permutation groups: one-line tuples, ``(p*q)[x] == p[q[x]]``.

A model carries a generating list ``S`` which must contain the identity.
``S`` need not be symmetric.
"""

from __future__ import annotations

import enum
import os
import random
import string
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Sequence

from coverentropy.errors import (
    ModelMismatchError,
    NotGeneratingError,
    ResourceLimitError,
    ValidationError,
)

Element = Hashable

DEFAULT_BALL_CAP = int(os.environ.get("COVERENTROPY_CAP", 10**6))


class Family(str, enum.Enum):
    LATTICE = "integer_lattice"
    FREE = "free_group"
    PERMUTATION = "permutation"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class Ball:
    """The set ``S^n`` in deterministic (canonical sort) order."""

    radius: int
    elements: tuple
    _members: frozenset = field(repr=False, compare=False, default=frozenset())

    def __post_init__(self):
        if not self._members:
            object.__setattr__(self, "_members", frozenset(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._members

    def as_set(self) -> frozenset:
        return self._members


def _free_reduce(word: Iterable[int]) -> tuple:
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class GroupModel:
    """A finitely generated group together with a generating list ``S``.

    Use the constructors :meth:`lattice`, :meth:`free`, :meth:`cyclic` and
    :meth:`permutation` rather than instantiating directly.
    """

    family: Family
    param: int
    generators: tuple
    perm_generators: tuple = ()
    ball_cap: int = DEFAULT_BALL_CAP
    _layers: list = field(default_factory=list, init=False, repr=False, compare=False)
    _perm_closure: list = field(default_factory=list, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.param < 1:
            raise ValidationError(f"{self.family.value} parameter must be positive, got {self.param}")
        gens = []
        for g in self.generators:
            self.check(g)
            if g not in gens:
                gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))
        if self.identity not in self.generators:
            raise ValidationError("generating set must contain the identity")

    # -- construction -----------------------------------------------------

    @classmethod
    def lattice(cls, dim: int, generators: Sequence | None = None, **kw) -> "GroupModel":
        if generators is None:
            gens: list[tuple] = [(0,) * dim]
            for i in range(dim):
                for sign in (1, -1):
                    v = [0] * dim
                    v[i] = sign
                    gens.append(tuple(v))
        else:
            gens = [_coerce_lattice(g, dim) for g in generators]
        return cls(Family.LATTICE, dim, tuple(gens), **kw)

    @classmethod
    def free(cls, rank: int, generators: Sequence | None = None, **kw) -> "GroupModel":
        if generators is None:
            gens: list[tuple] = [()]
            for i in range(1, rank + 1):
                gens += [(i,), (-i,)]
        else:
            gens = [_coerce_free(g, rank) for g in generators]
        return cls(Family.FREE, rank, tuple(gens), **kw)

    @classmethod
    def cyclic(cls, order: int, generators: Sequence | None = None, **kw) -> "GroupModel":
        if generators is None:
            gens = [0, 1 % order, (order - 1) % order]
        else:
            gens = [int(g) % order for g in generators]
        return cls(Family.CYCLIC, order, tuple(gens), **kw)

    @classmethod
    def permutation(cls, degree: int, perms: Sequence[Sequence[int]],
                    generators: Sequence | None = None, **kw) -> "GroupModel":
        pgens = tuple(tuple(int(x) for x in p) for p in perms)
        for p in pgens:
            if sorted(p) != list(range(degree)):
                raise ValidationError(f"{list(p)} is not a permutation of degree {degree}")
        if generators is None:
            gens = [tuple(range(degree)), *pgens]
        else:
            gens = [tuple(int(x) for x in g) for g in generators]
        return cls(Family.PERMUTATION, degree, tuple(gens), perm_generators=pgens, **kw)

    def with_generators(self, generators: Iterable) -> "GroupModel":
        """Same group, different generating list ``S``."""
        return GroupModel(self.family, self.param, tuple(generators),
                          perm_generators=self.perm_generators, ball_cap=self.ball_cap)

    # -- element plumbing -------------------------------------------------

    @property
    def identity(self):
        if self.family is Family.LATTICE:
            return (0,) * self.param
        if self.family is Family.FREE:
            return ()
        if self.family is Family.CYCLIC:
            return 0
        return tuple(range(self.param))

    @property
    def is_finite(self) -> bool:
        return self.family in (Family.CYCLIC, Family.PERMUTATION)

    def describe(self) -> str:
        names = {Family.LATTICE: "Z^{}", Family.FREE: "F_{}",
                 Family.CYCLIC: "Z/{}", Family.PERMUTATION: "Perm({})"}
        return names[self.family].format(self.param)

    def check(self, g) -> None:
        """Raise :class:`ModelMismatchError` unless ``g`` is a canonical element."""
        fam, p = self.family, self.param
        ok = False
        if fam is Family.LATTICE:
            ok = (isinstance(g, tuple) and len(g) == p
                  and all(isinstance(x, int) and not isinstance(x, bool) for x in g))
        elif fam is Family.FREE:
            ok = (isinstance(g, tuple)
                  and all(isinstance(x, int) and not isinstance(x, bool) and 0 < abs(x) <= p for x in g)
                  and _free_reduce(g) == g)
        elif fam is Family.CYCLIC:
            ok = isinstance(g, int) and not isinstance(g, bool) and 0 <= g < p
        else:
            ok = (isinstance(g, tuple) and sorted(g) == list(range(p))
                  and g in self._permutation_elements())
        if not ok:
            raise ModelMismatchError(f"{g!r} is not an element of {self.describe()}")

    def element(self, raw: Any):
        """Coerce a user-friendly value (int, list, word string) into canonical form."""
        fam = self.family
        if fam is Family.LATTICE:
            g = _coerce_lattice(raw, self.param)
        elif fam is Family.FREE:
            g = _coerce_free(raw, self.param)
        elif fam is Family.CYCLIC:
            if isinstance(raw, bool) or not isinstance(raw, int):
                raise ModelMismatchError(f"{raw!r} is not an element of {self.describe()}")
            g = raw % self.param
        else:
            g = tuple(raw)
        self.check(g)
        return g

    def to_json(self, g):
        """JSON-friendly encoding of an element (inverse of :meth:`element`)."""
        if self.family is Family.FREE:
            return word_to_str(g)
        if self.family is Family.CYCLIC:
            return g
        return list(g)

    def sort_key(self, g):
        if self.family is Family.FREE:
            return (len(g), g)
        return g

    def _mul(self, g, h):
        fam = self.family
        if fam is Family.LATTICE:
            return tuple(a + b for a, b in zip(g, h))
        if fam is Family.FREE:
            return _free_reduce(g + h)
        if fam is Family.CYCLIC:
            return (g + h) % self.param
        return tuple(g[x] for x in h)

    def _inv(self, g):
        fam = self.family
        if fam is Family.LATTICE:
            return tuple(-a for a in g)
        if fam is Family.FREE:
            return tuple(-x for x in reversed(g))
        if fam is Family.CYCLIC:
            return (-g) % self.param
        out = [0] * len(g)
        for i, gi in enumerate(g):
            out[gi] = i
        return tuple(out)

    def mul(self, g, h):
        self.check(g)
        self.check(h)
        return self._mul(g, h)

    def inv(self, g):
        self.check(g)
        return self._inv(g)

    def product(self, seq: Iterable):
        """Left-to-right product ``seq[0] * seq[1] * ...``."""
        out = self.identity
        for g in seq:
            out = self._mul(out, g)
        return out

    def inverse_set(self) -> tuple:
        """``S^{-1}`` in the order of ``S``."""
        return tuple(self._inv(s) for s in self.generators)

    def _permutation_elements(self) -> frozenset:
        if not self._perm_closure:
            ident = tuple(range(self.param))
            seen = {ident}
            frontier = [ident]
            while frontier:
                nxt = []
                for g in frontier:
                    for p in self.perm_generators:
                        h = tuple(g[x] for x in p)
                        if h not in seen:
                            seen.add(h)
                            nxt.append(h)
                            if len(seen) > self.ball_cap:
                                raise ResourceLimitError(
                                    f"permutation group exceeds cap {self.ball_cap}")
                frontier = nxt
            self._perm_closure.append(frozenset(seen))
        return self._perm_closure[0]

    # -- balls ------------------------------------------------------------

    def _layer(self, n: int) -> frozenset:
        layers = self._layers
        if not layers:
            layers.append(frozenset([self.identity]))
            layers.append(frozenset(self.generators))
        while len(layers) <= n:
            prev, prev2 = layers[-1], layers[-2]
            if prev == prev2:
                layers.append(prev)
                continue
            new = set(prev)
            for g in prev - prev2:
                for s in self.generators:
                    new.add(self._mul(g, s))
                if len(new) > self.ball_cap:
                    raise ResourceLimitError(
                        f"ball S^{len(layers)} exceeds cap of {self.ball_cap} elements")
            layers.append(frozenset(new))
        return layers[n]

    def ball(self, n: int) -> Ball:
        """The set ``S^n`` of all n-fold products of generators; ``S^0 = {e}``."""
        if n < 0:
            raise ValidationError(f"radius must be non-negative, got {n}")
        members = self._layer(n)
        return Ball(n, tuple(sorted(members, key=self.sort_key)), members)

    def word_growth(self, n_max: int) -> list[tuple[int, int]]:
        return [(n, len(self._layer(n))) for n in range(n_max + 1)]

    def stabilization_index(self, n_cap: int = 10_000) -> int:
        """Least n with ``S^n == S^(n+1)``; only meaningful for finite groups."""
        for n in range(n_cap + 1):
            if self._layer(n) == self._layer(n + 1):
                return n
        raise NotGeneratingError(f"balls still growing at radius {n_cap}")

    def standard_word_length(self, g) -> int | None:
        """Closed-form word length when ``S`` is the standard symmetric set, else None."""
        gens = set(self.generators)
        fam = self.family
        if fam is Family.LATTICE and gens == set(GroupModel.lattice(self.param).generators):
            return sum(abs(x) for x in g)
        if fam is Family.FREE and gens == set(GroupModel.free(self.param).generators):
            return len(g)
        if fam is Family.CYCLIC and gens == {0, 1 % self.param, (self.param - 1) % self.param}:
            return min(g, self.param - g)
        return None

    def ball_index(self, g, limit: int | None = None) -> int | None:
        """Least n >= 0 with ``g`` in ``S^n``; None if not reached by ``limit``."""
        fast = self.standard_word_length(g)
        if fast is not None:
            return fast if limit is None or fast <= limit else None
        n = 0
        while limit is None or n <= limit:
            layer = self._layer(n)
            if g in layer:
                return n
            if n > 0 and layer == self._layer(n - 1):
                return None
            n += 1
        return None

    def in_ball(self, g, n: int) -> bool:
        return self.ball_index(g, limit=n) is not None

    def covering_index(self, targets: Iterable, n_cap: int | None = None) -> int:
        """Least n >= 1 with every element of ``targets`` in ``S^n``."""
        targets = list(targets)
        if not targets:
            raise ValidationError("covering_index needs a non-empty target set")
        for t in targets:
            self.check(t)
        n = 1
        while True:
            if n_cap is not None and n > n_cap:
                raise NotGeneratingError(f"targets not reached within {n_cap} steps")
            try:
                layer = self._layer(n)
            except ResourceLimitError as exc:
                raise NotGeneratingError(
                    f"targets not reached within ball cap ({exc})") from exc
            if all(t in layer for t in targets):
                return n
            if layer == self._layer(n - 1):
                raise NotGeneratingError("generating list never reaches the targets")
            n += 1

    def audit(self, samples: int = 200, seed: int = 0) -> None:
        """Randomized check of associativity and two-sided inverses on ``S^2``."""
        rng = random.Random(seed)
        pool = list(self.ball(2))
        e = self.identity
        for _ in range(samples):
            a, b, c = (rng.choice(pool) for _ in range(3))
            if self._mul(self._mul(a, b), c) != self._mul(a, self._mul(b, c)):
                raise ValidationError(f"associativity fails on {a}, {b}, {c}")
            if self._mul(a, self._inv(a)) != e or self._mul(self._inv(a), a) != e:
                raise ValidationError(f"inverse fails on {a}")


def _coerce_lattice(raw, dim: int) -> tuple:
    if isinstance(raw, int) and not isinstance(raw, bool) and dim == 1:
        return (raw,)
    if isinstance(raw, (list, tuple)):
        return tuple(raw)
    raise ModelMismatchError(f"{raw!r} is not an element of Z^{dim}")


def _coerce_free(raw, rank: int) -> tuple:
    if isinstance(raw, str):
        return str_to_word(raw, rank)
    if isinstance(raw, (list, tuple)):
        return _free_reduce(int(x) for x in raw)
    raise ModelMismatchError(f"{raw!r} is not an element of F_{rank}")


def word_to_str(word: tuple) -> str:
    """``(1, 1, -2)`` -> ``"aaB"``; the identity is the empty string."""
    return "".join(string.ascii_lowercase[x - 1] if x > 0 else string.ascii_uppercase[-x - 1]
                   for x in word)


def str_to_word(text: str, rank: int) -> tuple:
    letters = []
    for ch in text.strip():
        if ch in string.ascii_lowercase:
            x = string.ascii_lowercase.index(ch) + 1
        elif ch in string.ascii_uppercase:
            x = -(string.ascii_uppercase.index(ch) + 1)
        else:
            raise ModelMismatchError(f"bad letter {ch!r} in free-group word {text!r}")
        if abs(x) > rank:
            raise ModelMismatchError(f"letter {ch!r} exceeds rank {rank}")
        letters.append(x)
    return _free_reduce(letters)
