"""Shift actions on subshifts of ``A^G`` with the canonical symbol cover.

The group acts by ``(g.x)(h) = x(h*g)``.  With this convention the image
``g.[q]`` of a cylinder lies in the identity cylinder ``[q(g)]`` exactly when
``g`` is in the domain of ``q``, so the refinement complexity of the symbol
cover under ``S^n`` equals the number of globally admissible patterns on the
ball ``S^n``:

* the cylinders of those patterns form an ``S^n``-refining cover (upper side);
* one configuration per pattern gives points that pairwise differ at some
  ``g`` in ``S^n``, so no member of any ``S^n``-refining cover holds two of
  them (lower side).

Counts are exact for full shifts over any group and for one-dimensional SFTs
on interval balls (transfer matrix on the essential window graph).  Other
SFTs get locally admissible counts, which only bound the value from above.

Note the windows are balls, not one-sided intervals: the full 2-shift on
``Z`` with ``S = {-1, 0, 1}`` has entropy ``2``, twice the classical value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from coverentropy.errors import ExactnessUnavailable, ResourceLimitError, ValidationError
from coverentropy.estimates import ComparisonReport, EstimateReport, estimate_from_values
from coverentropy.groups import Family, GroupModel

DEFAULT_PATTERN_CAP = 1 << 20
DEFAULT_SEARCH_CAP = 5_000_000

EXHAUSTIVE = "exhaustive"
TRANSFER_MATRIX = "transfer-matrix"
LOCALLY_ADMISSIBLE = "locally-admissible"


@dataclass(frozen=True)
class PatternCount:
    n: int
    count: int
    method: str
    domain_size: int

    @property
    def exact(self) -> bool:
        return self.method != LOCALLY_ADMISSIBLE


@dataclass(frozen=True)
class CylinderCover:
    """The cover ``{[a]_e : a in A}``, one cylinder per symbol at the identity."""

    alphabet: tuple

    def __len__(self) -> int:
        return len(self.alphabet)

    def member_of(self, symbol_at_identity) -> int:
        """Index of the unique cylinder containing a configuration."""
        return self.alphabet.index(symbol_at_identity)


class WindowGraph:
    """De Bruijn-style graph of a one-dimensional SFT.

    Vertices are words of length ``M - 1``, edges are allowed windows of
    length ``M``.  ``essential`` keeps the vertices lying on bi-infinite paths.
    """

    def __init__(self, size: int, forbidden: Sequence[Sequence[tuple[int, int]]],
                 window_cap: int = 1 << 20):
        self.size = size
        pats = []
        span = 1
        for p in forbidden:
            lo = min(o for o, _ in p)
            norm = tuple(sorted((o - lo, s) for o, s in p))
            pats.append(norm)
            span = max(span, norm[-1][0] + 1)
        self.patterns = pats
        self.M = max(2, span)
        if size ** self.M > window_cap:
            raise ResourceLimitError(f"{size}^{self.M} windows exceed cap {window_cap}")
        self.succ: dict[tuple, list[tuple[int, tuple]]] = {}
        self.pred: dict[tuple, list[tuple[int, tuple]]] = {}
        for w in itertools.product(range(size), repeat=self.M):
            if self.window_allowed(w):
                u, v = w[:-1], w[1:]
                self.succ.setdefault(u, []).append((w[-1], v))
                self.pred.setdefault(v, []).append((w[0], u))
        self.essential = self._trim()
        self._fwd: dict = {}
        self._bwd: dict = {}

    def window_allowed(self, w: Sequence[int]) -> bool:
        for p in self.patterns:
            width = p[-1][0] + 1
            for t in range(len(w) - width + 1):
                if all(w[t + o] == s for o, s in p):
                    return False
        return True

    def word_allowed(self, w: Sequence[int]) -> bool:
        """No forbidden pattern occurs inside the finite word ``w``."""
        return self.window_allowed(w)

    def _trim(self) -> frozenset:
        alive = set(self.succ) | set(self.pred)
        changed = True
        while changed:
            changed = False
            for v in list(alive):
                out = any(t in alive for _, t in self.succ.get(v, ()))
                inn = any(t in alive for _, t in self.pred.get(v, ()))
                if not (out and inn):
                    alive.discard(v)
                    changed = True
        return frozenset(alive)

    def esucc(self, v) -> list[tuple[int, tuple]]:
        return sorted((s, t) for s, t in self.succ.get(v, ()) if t in self.essential)

    def epred(self, v) -> list[tuple[int, tuple]]:
        return sorted((s, t) for s, t in self.pred.get(v, ()) if t in self.essential)

    def count_words(self, length: int) -> int:
        """Number of globally admissible words of the given length."""
        k = self.M - 1
        if length < k:
            return len({v[:length] for v in self.essential})
        vec = {v: 1 for v in self.essential}
        for _ in range(length - k):
            nxt: dict = {}
            for v, c in vec.items():
                for _, t in self.esucc(v):
                    nxt[t] = nxt.get(t, 0) + c
            vec = nxt
        return sum(vec.values())

    def count_local_words(self, length: int) -> int:
        """Words of the given length with no forbidden pattern inside (no extendability)."""
        k = self.M - 1
        if length < k:
            return sum(1 for w in itertools.product(range(self.size), repeat=length)
                       if self.word_allowed(w))
        starts = [v for v in itertools.product(range(self.size), repeat=k) if self.word_allowed(v)]
        vec = {v: 1 for v in starts}
        for _ in range(length - k):
            nxt: dict = {}
            for v, c in vec.items():
                for _, t in self.succ.get(v, ()):
                    nxt[t] = nxt.get(t, 0) + c
            vec = nxt
        return sum(vec.values())

    def words(self, length: int) -> list[tuple]:
        """Globally admissible words in lexicographic order."""
        k = self.M - 1
        if length < k:
            return sorted({v[:length] for v in self.essential})
        out = []

        def walk(v, word):
            if len(word) == length:
                out.append(tuple(word))
                return
            for s, t in self.esucc(v):
                word.append(s)
                walk(t, word)
                word.pop()

        for v in sorted(self.essential):
            walk(v, list(v))
        return out

    def _orbit(self, v, step) -> tuple[tuple, tuple]:
        seen = {v: 0}
        path: list[int] = []
        cur = v
        while True:
            s, cur = step(cur)[0]
            path.append(s)
            if cur in seen:
                i = seen[cur]
                return tuple(path[:i]), tuple(path[i:])
            seen[cur] = len(path)

    def forward(self, v) -> tuple[tuple, tuple]:
        """``(tail, cycle)`` with ``v + tail + cycle*inf`` admissible."""
        if v not in self._fwd:
            self._fwd[v] = self._orbit(v, self.esucc)
        return self._fwd[v]

    def backward(self, v) -> tuple[tuple, tuple]:
        """``(tail, cycle)`` read leftwards: ``reversed(cycle)*inf + reversed(tail) + v``."""
        if v not in self._bwd:
            self._bwd[v] = self._orbit(v, self.epred)
        return self._bwd[v]

    def extension(self, word: Sequence[int]) -> "Extension":
        """Eventually periodic admissible configuration containing ``word``."""
        k = self.M - 1
        word = tuple(word)
        core = word
        if len(word) < k:
            core = next(v for v in sorted(self.essential) if v[:len(word)] == word)
        lt, lc = self.backward(core[:k])
        rt, rc = self.forward(core[-k:])
        return Extension(tuple(reversed(lc)), tuple(reversed(lt)), core, rt, rc)


@dataclass(frozen=True)
class Extension:
    """Configuration ``left_cycle^inf + left_tail + core + right_tail + right_cycle^inf``.

    The pattern sits at the start of ``core``.
    """

    left_cycle: tuple
    left_tail: tuple
    core: tuple
    right_tail: tuple
    right_cycle: tuple

    def finite_window(self, window: int) -> tuple:
        reps_l = math.ceil(window / len(self.left_cycle)) + 1
        reps_r = math.ceil(window / len(self.right_cycle)) + 1
        return (self.left_cycle * reps_l + self.left_tail + self.core
                + self.right_tail + self.right_cycle * reps_r)


@dataclass(frozen=True)
class SeparationCertificate:
    """One admissible configuration per pattern on ``domain``.

    Two points differ at the first domain coordinate where their patterns
    differ; shifting by that element puts them in different symbol
    cylinders, so no member of a refining cover holds both.
    """

    domain: tuple
    patterns: tuple
    extensions: tuple | None = None  # per pattern, for SFTs

    def __len__(self) -> int:
        return len(self.patterns)

    def witness(self, i: int, j: int):
        """Group element separating points ``i`` and ``j``."""
        p, q = self.patterns[i], self.patterns[j]
        for g, a, b in zip(self.domain, p, q):
            if a != b:
                return g
        return None


@dataclass(frozen=True)
class SubshiftRefinement:
    n: int
    value: int
    exact: bool
    method: str
    lower_bound: int
    upper_bound: int
    certificate: SeparationCertificate | None


@dataclass(frozen=True)
class SubshiftEstimate:
    estimate: EstimateReport
    methods: tuple
    closed_form_slopes: tuple | None


@dataclass(frozen=True, eq=False)
class SubshiftModel:
    alphabet: tuple
    group: GroupModel
    forbidden: tuple = ()
    search_cap: int = DEFAULT_SEARCH_CAP
    _graph: list = field(default_factory=list, init=False, repr=False)

    def __post_init__(self):
        alpha = tuple(self.alphabet)
        if not alpha or len(set(alpha)) != len(alpha):
            raise ValidationError("alphabet must be non-empty with distinct symbols")
        object.__setattr__(self, "alphabet", alpha)
        pats = []
        for p in self.forbidden:
            items = p.items() if isinstance(p, Mapping) else p
            norm = []
            for g, s in items:
                self.group.check(g)
                if s not in alpha:
                    raise ValidationError(f"forbidden pattern uses unknown symbol {s!r}")
                norm.append((g, alpha.index(s)))
            if not norm:
                raise ValidationError("forbidden pattern with empty domain")
            if len({g for g, _ in norm}) != len(norm):
                raise ValidationError("forbidden pattern assigns one element twice")
            pats.append(tuple(sorted(norm, key=lambda gs: self.group.sort_key(gs[0]))))
        object.__setattr__(self, "forbidden", tuple(pats))

    @classmethod
    def full(cls, alphabet: Iterable, group: GroupModel, **kw) -> "SubshiftModel":
        return cls(tuple(alphabet), group, (), **kw)

    @classmethod
    def golden_mean(cls, group: GroupModel | None = None) -> "SubshiftModel":
        """Forbid two adjacent 1s along the first non-identity generator."""
        group = group or GroupModel.lattice(1)
        step = next(g for g in group.generators if g != group.identity)
        return cls((0, 1), group, ({group.identity: 1, step: 1},))

    def with_generators(self, generators: Iterable) -> "SubshiftModel":
        return SubshiftModel(self.alphabet, self.group.with_generators(generators),
                             tuple(tuple((g, self.alphabet[s]) for g, s in p) for p in self.forbidden),
                             search_cap=self.search_cap)

    @property
    def is_full(self) -> bool:
        return not self.forbidden

    @property
    def is_line(self) -> bool:
        return self.group.family is Family.LATTICE and self.group.param == 1

    def canonical_cover(self) -> CylinderCover:
        return CylinderCover(self.alphabet)

    def window_graph(self) -> WindowGraph:
        if not self.is_line:
            raise ExactnessUnavailable("window graphs exist only for Z")
        if not self._graph:
            self._graph.append(WindowGraph(
                len(self.alphabet), [[(g[0], s) for g, s in p] for p in self.forbidden]))
        return self._graph[0]

    def _interval(self, domain: Sequence) -> tuple[int, int] | None:
        if not self.is_line:
            return None
        xs = [g[0] for g in domain]
        lo, hi = min(xs), max(xs)
        return (lo, hi) if hi - lo + 1 == len(xs) else None

    def exactness_domain(self, n: int) -> str | None:
        """Method giving an exact count at radius n, or None."""
        if self.is_full:
            return EXHAUSTIVE
        if self._interval(self.group.ball(n).elements) is not None:
            return TRANSFER_MATRIX
        return None

    def pattern_count(self, n: int) -> PatternCount:
        if n < 0:
            raise ValidationError("radius must be non-negative")
        ball = self.group.ball(n)
        k = len(self.alphabet)
        if self.is_full:
            return PatternCount(n, k ** len(ball), EXHAUSTIVE, len(ball))
        iv = self._interval(ball.elements)
        if iv is not None:
            return PatternCount(n, self.window_graph().count_words(iv[1] - iv[0] + 1),
                                TRANSFER_MATRIX, len(ball))
        return PatternCount(n, self.local_count(ball.elements), LOCALLY_ADMISSIBLE, len(ball))

    def _placements(self, domain: Sequence) -> list[list[tuple[int, int]]]:
        """Forbidden-pattern occurrences ``{d*g}`` that fit inside ``domain``."""
        pos = {g: i for i, g in enumerate(domain)}
        out = []
        for p in self.forbidden:
            d0 = p[0][0]
            # d0*g must be some domain element h, so g = d0^-1 * h
            for h in domain:
                g = self.group._mul(self.group._inv(d0), h)
                cells = []
                for d, s in p:
                    j = pos.get(self.group._mul(d, g))
                    if j is None:
                        break
                    cells.append((j, s))
                else:
                    out.append(sorted(cells))
        return out

    def local_count(self, domain: Sequence) -> int:
        """Patterns on ``domain`` with no forbidden occurrence inside it."""
        domain = list(domain)
        by_last: dict[int, list] = {}
        for cells in self._placements(domain):
            by_last.setdefault(cells[-1][0], []).append(cells)
        k = len(self.alphabet)
        word = [0] * len(domain)
        nodes = 0

        def dfs(i: int) -> int:
            nonlocal nodes
            nodes += 1
            if nodes > self.search_cap:
                raise ResourceLimitError(f"pattern enumeration exceeded {self.search_cap} nodes")
            if i == len(domain):
                return 1
            total = 0
            for s in range(k):
                word[i] = s
                if any(all(word[j] == t for j, t in cells) for cells in by_last.get(i, ())):
                    continue
                total += dfs(i + 1)
            return total

        return dfs(0)

    def certified_complexity(self, n: int, pattern_cap: int = DEFAULT_PATTERN_CAP) -> SubshiftRefinement:
        """``(S^n:U)`` for the symbol cover with matching upper and lower witnesses."""
        pc = self.pattern_count(n)
        if not pc.exact:
            lower = 1 if self._has_constant_point() else 0
            return SubshiftRefinement(n, pc.count, False, pc.method, lower, pc.count, None)
        if pc.count > pattern_cap:
            raise ResourceLimitError(f"{pc.count} patterns exceed certificate cap {pattern_cap}")
        domain = self.group.ball(n).elements
        if self.is_full:
            pats = tuple(itertools.product(range(len(self.alphabet)), repeat=len(domain)))
            cert = SeparationCertificate(domain, pats)
        else:
            graph = self.window_graph()
            pats = tuple(graph.words(len(domain)))
            cert = SeparationCertificate(domain, pats, tuple(graph.extension(p) for p in pats))
        if len(pats) != pc.count:
            raise ResourceLimitError("pattern enumeration disagrees with count")
        return SubshiftRefinement(n, pc.count, True, pc.method, len(pats), len(pats), cert)

    def _has_constant_point(self) -> bool:
        return any(all(any(s != a for _, s in p) for p in self.forbidden)
                   for a in range(len(self.alphabet)))

    def entropy_estimate(self, n_max: int) -> SubshiftEstimate:
        if n_max < 2:
            raise ValueError("n_max must be at least 2")
        counts = [self.pattern_count(n) for n in range(1, n_max + 1)]
        closed = None
        if self.is_full:
            lk = math.log2(len(self.alphabet))
            closed = tuple(len(self.group.ball(n)) * lk / n for n in range(1, n_max + 1))
        return SubshiftEstimate(estimate_from_values([c.count for c in counts]),
                                tuple(c.method for c in counts), closed)

    def refined_cover_values(self, r: int, n_max: int) -> list[int]:
        """``(S^n:U_r)`` for the cover by cylinders on ``S^r``; equals count on ``S^(n+r)``."""
        return [self.pattern_count(n + r).count for n in range(1, n_max + 1)]

    def compare_generating_sets(self, s_gens: Iterable, t_gens: Iterable, n_max: int) -> ComparisonReport:
        ms = self.with_generators(s_gens)
        mt = self.with_generators(t_gens)
        m = ms.group.covering_index(mt.group.generators)
        n = mt.group.covering_index(ms.group.generators)
        ks = range(1, n_max + 1)
        s_vals = [ms.pattern_count(k).count for k in ks]
        t_scaled = [mt.pattern_count(k * n).count for k in ks]
        t_vals = [mt.pattern_count(k).count for k in ks]
        s_scaled = [ms.pattern_count(k * m).count for k in ks]
        return ComparisonReport(
            m=m, n=n,
            s_values=tuple(s_vals), t_values_scaled=tuple(t_scaled),
            t_values=tuple(t_vals), s_values_scaled=tuple(s_scaled),
            forward_holds=all(a <= b for a, b in zip(s_vals, t_scaled)),
            backward_holds=all(a <= b for a, b in zip(t_vals, s_scaled)),
            slope_s=estimate_from_values(s_vals).tail_slope,
            slope_t=estimate_from_values(t_vals).tail_slope,
        )


def verify_separation(model: SubshiftModel, cert: SeparationCertificate, n: int) -> None:
    """Re-check a separation certificate; raises ``VerificationError`` on failure.

    Checks the domain is ``S^n``, patterns are pairwise distinct (so every
    pair has a separating coordinate), and each point is a configuration of
    the subshift.
    """
    from coverentropy.errors import VerificationError

    ball = model.group.ball(n)
    if tuple(cert.domain) != ball.elements:
        raise VerificationError(f"certificate domain is not S^{n}")
    k = len(model.alphabet)
    for i, p in enumerate(cert.patterns):
        if len(p) != len(cert.domain) or any(not 0 <= s < k for s in p):
            raise VerificationError(f"pattern {i} malformed")
    if len(set(cert.patterns)) != len(cert.patterns):
        raise VerificationError("two points share a pattern, no separating coordinate")
    if model.is_full:
        return
    if cert.extensions is None or len(cert.extensions) != len(cert.patterns):
        raise VerificationError("missing extension witnesses")
    graph = model.window_graph()
    for i, (p, ext) in enumerate(zip(cert.patterns, cert.extensions)):
        if tuple(ext.core[:len(p)]) != tuple(p):
            raise VerificationError(f"extension {i} does not contain its pattern")
        if not ext.left_cycle or not ext.right_cycle:
            raise VerificationError(f"extension {i} has an empty period")
        if not graph.word_allowed(ext.finite_window(graph.M)):
            raise VerificationError(f"extension {i} contains a forbidden pattern")
