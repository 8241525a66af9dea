"""Approximately invariant means from vanishing refinement complexity growth.

:func:`construct_mean` runs the finite pipeline behind "vanishing entropy
implies amenability": pick a cover on which every observable oscillates by at
most ``theta/3``, refine it under ``S^-1``, find a radius where the complexity
sequence grows by at most a ``theta`` fraction, and average the observables
over one private point per member of a minimal refining cover.  The
invariance defect of that empirical mean is then measured exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from coverentropy.action import FiniteAction
from coverentropy.errors import (
    InvariantViolation,
    OscillationCoverUnavailable,
    RatioConditionNotReached,
    ValidationError,
)
from coverentropy.exact import log2, to_fraction
from coverentropy.matching import refinement_map
from coverentropy.setcover import bits
from coverentropy.topology import Cover, FiniteSpace


@dataclass(frozen=True)
class ObservableSet:
    """Finitely many real functions on a finite space, stored as exact rationals."""

    space: FiniteSpace
    names: tuple
    values: tuple  # values[k][i] = f_k(point i)

    @classmethod
    def from_tables(cls, space: FiniteSpace, tables: Mapping[str, Mapping[Hashable, object]]) -> "ObservableSet":
        names, rows = [], []
        for name, table in tables.items():
            missing = [p for p in space.points if p not in table]
            if missing:
                raise ValidationError(f"observable {name!r} undefined at {missing}")
            extra = [p for p in table if p not in space.index]
            if extra:
                raise ValidationError(f"observable {name!r} mentions unknown points {extra}")
            names.append(name)
            rows.append(tuple(to_fraction(table[p]) for p in space.points))
        return cls(space, tuple(names), tuple(rows))

    @classmethod
    def indicator(cls, space: FiniteSpace, point: Hashable, name: str | None = None) -> "ObservableSet":
        return cls.from_tables(space, {name or f"1_{point}": {p: int(p == point) for p in space.points}})

    def __len__(self) -> int:
        return len(self.names)

    def sup_norm(self, k: int) -> Fraction:
        return max(abs(v) for v in self.values[k])

    def max_sup_norm(self) -> Fraction:
        return max((self.sup_norm(k) for k in range(len(self))), default=Fraction(0))

    def oscillation(self, k: int, mask: int) -> Fraction:
        vals = [self.values[k][i] for i in bits(mask)]
        return max(vals) - min(vals) if vals else Fraction(0)


@dataclass(frozen=True)
class RatioSearch:
    """Least 1-based ``n`` with ``a[n+1] - a[n] <= theta * a[n]``, or None."""

    index: int | None
    min_relative_gap: Fraction | None


def _validate_sequence(seq: Sequence) -> list[Fraction]:
    vals = [to_fraction(a) for a in seq]
    if any(a < 1 for a in vals):
        raise ValidationError("sequence values must be >= 1")
    for n, (a, b) in enumerate(zip(vals, vals[1:]), start=1):
        if b < a:
            raise ValidationError(f"sequence decreases at n={n}")
    return vals


def ratio_condition_index(seq: Sequence, theta) -> RatioSearch:
    vals = _validate_sequence(seq)
    theta = to_fraction(theta)
    if theta <= 0:
        raise ValidationError("theta must be positive")
    gaps = [(b - a) / a for a, b in zip(vals, vals[1:])]
    for n, g in enumerate(gaps, start=1):
        if g <= theta:
            return RatioSearch(n, min(gaps[:n]))
    return RatioSearch(None, min(gaps) if gaps else None)


@dataclass(frozen=True)
class RatioDiagnostic:
    ratios: tuple  # a[n+1]/a[n], n = 1..N-1
    running_min: tuple
    log_slopes: tuple  # log2(a[n])/n, n = 1..N
    bound_checks: int
    bound_failures: tuple  # (n0, m) pairs violating a[m+n0] >= a^m a[n0]

    @property
    def bound_holds(self) -> bool:
        return not self.bound_failures


def liminf_ratio_diagnostic(seq: Sequence) -> RatioDiagnostic:
    """Successive ratios, running minimum, log-slopes, and the growth bound.

    For every start ``n0`` whose tail ratios are all at least ``a > 1`` the
    bound ``a[m+n0] >= a**m * a[n0]`` is checked exactly, together with the
    slope consequence ``log2(a[m+n0])/(m+n0) >= m/(m+n0) * log2(a)``.
    """
    vals = _validate_sequence(seq)
    ratios = [b / a for a, b in zip(vals, vals[1:])]
    running, cur = [], None
    for r in ratios:
        cur = r if cur is None else min(cur, r)
        running.append(cur)
    slopes = tuple(log2(a) / n for n, a in enumerate(vals, start=1))
    checks, failures = 0, []
    N = len(vals)
    for n0 in range(1, N):
        a = min(ratios[n0 - 1:])
        if a <= 1:
            continue
        for m in range(1, N - n0 + 1):
            checks += 1
            lhs = vals[m + n0 - 1]
            exact_ok = lhs >= a ** m * vals[n0 - 1]
            slope_ok = slopes[m + n0 - 1] >= m / (m + n0) * log2(a) - 1e-12
            if not (exact_ok and slope_ok):
                failures.append((n0, m))
    return RatioDiagnostic(tuple(ratios), tuple(running), slopes, checks, tuple(failures))


def oscillation_cover(space: FiniteSpace, observables: ObservableSet, bound: Fraction) -> Cover:
    """Open cover on whose members every observable varies by at most ``bound``.

    Starts from smallest neighbourhoods (no open set around a point is
    smaller) and greedily merges them while the bound still holds.
    """
    nb = space.neighborhoods
    for k in range(len(observables)):
        for i, u in enumerate(nb):
            osc = observables.oscillation(k, u)
            if osc > bound:
                raise OscillationCoverUnavailable(
                    f"observable {observables.names[k]!r} oscillates by {osc} on the smallest "
                    f"open set around {space.points[i]!r}; needs <= {bound}")

    def fits(mask: int) -> bool:
        return all(observables.oscillation(k, mask) <= bound for k in range(len(observables)))

    members: list[int] = []
    covered = 0
    for i in range(len(space)):
        if covered >> i & 1:
            continue
        cur = nb[i]
        for j in range(len(space)):
            cand = cur | nb[j]
            if cand != cur and fits(cand):
                cur = cand
        members.append(cur)
        covered |= cur
    return Cover(space, tuple(members))


def invariance_defect(action: FiniteAction, support: Iterable[int], observables: ObservableSet,
                      elements: Iterable | None = None) -> Fraction:
    """``max |m(f) - m(f o alpha_{s^-1})|`` over observables and ``s`` in ``elements``.

    ``support`` holds point indices; the mean is uniform on it.
    """
    support = list(support)
    if not support:
        raise ValidationError("empty support")
    if elements is None:
        elements = action.group.generators
    size = len(support)
    worst = Fraction(0)
    for s in elements:
        p = action.map_of(action.group._inv(s))
        for row in observables.values:
            here = sum(row[x] for x in support)
            moved = sum(row[p[x]] for x in support)
            worst = max(worst, abs(here - moved) / size)
    return worst


@dataclass(frozen=True)
class MeanTrace:
    base_cover: Cover  # U0
    refined_cover: Cover  # U, refines U0 under S^-1
    sequence: tuple  # (S^n:U) for n = 1..n_cap+1
    minimal_cover: Cover  # V at S^n
    next_cover: Cover  # W at S^(n+1)
    representatives: tuple  # (member of V, point index)
    phi: tuple  # (index in V, index in W)


@dataclass(frozen=True)
class ApproxInvariantMean:
    support: tuple  # point labels, in point order
    support_indices: tuple
    theta: Fraction
    epsilon: Fraction
    n_used: int
    defect: Fraction
    trace: MeanTrace

    def mean(self, observables: ObservableSet, k: int = 0) -> Fraction:
        row = observables.values[k]
        return sum((row[i] for i in self.support_indices), Fraction(0)) / len(self.support_indices)


def private_points(cover: Cover) -> list[int]:
    """For each member, the first point lying in no other member."""
    out = []
    for i, v in enumerate(cover.sets):
        others = 0
        for j, w in enumerate(cover.sets):
            if j != i:
                others |= w
        own = v & ~others
        if not own:
            raise InvariantViolation(f"cover member {cover.space.labels(v)} is redundant")
        out.append(bits(own)[0])
    return out


def construct_mean(action: FiniteAction, observables: ObservableSet, epsilon,
                   n_cap: int = 32) -> ApproxInvariantMean:
    eps = to_fraction(epsilon)
    if eps <= 0:
        raise ValidationError("epsilon must be positive")
    if len(observables) == 0:
        raise ValidationError("need at least one observable")
    space = action.space
    theta = eps / (1 + 2 * observables.max_sup_norm())
    u0 = oscillation_cover(space, observables, theta / 3)
    u = action.min_refining_cover(u0, action.group.inverse_set()).optimal_cover

    results = [action.refinement_at(u, 1)]
    found = RatioSearch(None, None)
    while found.index is None and len(results) <= n_cap:
        results.append(action.refinement_at(u, len(results) + 1))
        found = ratio_condition_index([r.value for r in results], theta)
    seq = [r.value for r in results]
    if found.index is None:
        raise RatioConditionNotReached(
            f"no n <= {n_cap} with growth ratio <= theta={theta}; sequence {seq}")
    n = found.index
    v = results[n - 1].optimal_cover
    w = results[n].optimal_cover

    reps = private_points(v)
    support = tuple(sorted(reps))
    family = list(dict.fromkeys(list(results[n - 1].candidates) + list(v.sets) + list(w.sets)))
    phi = refinement_map(space.full, list(v.sets), list(w.sets), family)

    defect = invariance_defect(action, support, observables)
    if defect > eps:
        raise InvariantViolation(f"defect {defect} exceeds epsilon {eps} at n={n}")
    return ApproxInvariantMean(
        support=tuple(space.points[i] for i in support),
        support_indices=support,
        theta=theta,
        epsilon=eps,
        n_used=n,
        defect=defect,
        trace=MeanTrace(u0, u, tuple(seq), v, w,
                        tuple(zip(v.sets, reps)), tuple(sorted(phi.items()))),
    )
