"""Entropy lower bounds for a discrete group acting on the dual unit ball.

With counting measure, a functional on ``l^1(G)`` is represented by a bounded
kernel and the action is ``(g.l)(h) = l(h o lambda(g))`` where
``(h o lambda(g))(x) = h(g*x)``.  For an escape sequence ``s_1, s_2, ...``
(partial products ``s_m ... s_n`` outside ``S^(m-n)``), the translates of
``f = 1_{e}`` by ``P_i = t_i ... t_1`` with ``t_j = s_{2j} s_{2j-1}`` have
disjoint supports.  The ``2^n`` kernels ``f_delta = sum_j delta(j) f o lambda(P_j)``
pair with those translates to ``delta(i) * c``, which forces them into
distinct members of any ``S^(2n)``-refining cover of the two-set cover
``{|l(f)| < 2c/3, |l(f)| > c/3}``.  All arithmetic is exact.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from coverentropy.errors import ExhaustedSearchError, GroupFiniteError, ValidationError, VerificationError
from coverentropy.exact import to_fraction
from coverentropy.groups import GroupModel

Kernel = dict  # group element -> Fraction, finitely supported


def escape_sequence(group: GroupModel, length: int, node_cap: int = 1_000_000) -> tuple:
    """``s_1..s_length`` from ``S`` with ``s_m ... s_n`` outside ``S^(m-n)`` for all m > n.

    Depth-first backtracking; generators are tried in the order of ``S``.
    """
    if group.is_finite:
        raise GroupFiniteError(f"{group.describe()} is finite; escape sequences need an infinite group")
    if length < 0:
        raise ValidationError("length must be non-negative")
    gens = [s for s in group.generators if s != group.identity]
    seq: list = []
    # suffix[n] = s_m ... s_n for the current last index m (1-based n)
    nodes = 0

    def extend(suffixes: list) -> bool:
        nonlocal nodes
        if len(seq) == length:
            return True
        m = len(seq) + 1
        for s in gens:
            nodes += 1
            if nodes > node_cap:
                raise ExhaustedSearchError(f"escape search exceeded {node_cap} nodes")
            new = [group._mul(s, p) for p in suffixes]  # s_m s_{m-1} ... s_n for n < m
            if all(not group.in_ball(q, m - n) for n, q in enumerate(new, start=1)):
                seq.append(s)
                if extend(new + [s]):
                    return True
                seq.pop()
        return False

    if not extend([]):
        raise ExhaustedSearchError(f"no escape sequence of length {length} found")
    return tuple(seq)


def check_escape(group: GroupModel, seq) -> tuple[int, int] | None:
    """First ``(m, n)`` violating the escape property, or None."""
    for m in range(2, len(seq) + 1):
        for n in range(1, m):
            prod = group.product(seq[j - 1] for j in range(m, n - 1, -1))
            if group.in_ball(prod, m - n):
                return (m, n)
    return None


def translate(group: GroupModel, kernel: Mapping, g) -> Kernel:
    """``kernel o lambda(g)``: ``x -> kernel(g*x)``, support ``g^-1 * spt``."""
    gi = group._inv(g)
    return {group._mul(gi, x): v for x, v in kernel.items()}


def pair(a: Mapping, b: Mapping) -> Fraction:
    """``sum_x a(x) b(x)`` (counting measure)."""
    if len(b) < len(a):
        a, b = b, a
    return sum((v * b[x] for x, v in a.items() if x in b), Fraction(0))


@dataclass(frozen=True)
class DualBallWitness:
    group: GroupModel
    n: int
    s_seq: tuple
    t_seq: tuple
    prefixes: tuple  # P_i = t_i ... t_1
    f: Kernel
    c: Fraction
    deltas: tuple  # all of {0,1}^n, lexicographic
    pairing: tuple  # pairing[d][i] = <f_delta, f o lambda(P_i)>

    @property
    def thresholds(self) -> tuple[Fraction, Fraction]:
        """``(c/3, 2c/3)``: V0 is ``|l(f)| < 2c/3``, V1 is ``|l(f)| > c/3``."""
        return (self.c / 3, 2 * self.c / 3)

    def family(self, delta) -> Kernel:
        out: Kernel = {}
        for j, bit in enumerate(delta):
            if bit:
                for x, v in translate(self.group, self.f, self.prefixes[j]).items():
                    out[x] = out.get(x, Fraction(0)) + v
        return {x: v for x, v in out.items() if v != 0}


def _pairing_row(group, f, prefixes, delta) -> tuple:
    translates = [translate(group, f, p) for p in prefixes]
    f_delta: Kernel = {}
    for bit, tr in zip(delta, translates):
        if bit:
            for x, v in tr.items():
                f_delta[x] = f_delta.get(x, Fraction(0)) + v
    return tuple(pair(f_delta, tr) for tr in translates)


def build_witness(group: GroupModel, n: int, f: Mapping | None = None,
                  threads: int = 1) -> DualBallWitness:
    if n < 1:
        raise ValidationError("n must be at least 1")
    s_seq = escape_sequence(group, 2 * n)
    t_seq = tuple(group._mul(s_seq[2 * j + 1], s_seq[2 * j]) for j in range(n))
    prefixes, cur = [], group.identity
    for t in t_seq:
        cur = group._mul(t, cur)
        prefixes.append(cur)
    if f is None:
        f = {group.identity: Fraction(1)}
    else:
        f = {group.element(x) if not isinstance(x, (tuple, int)) else x: to_fraction(v)
             for x, v in f.items()}
        f = {x: v for x, v in f.items() if v != 0}
    c = sum((v * v for v in f.values()), Fraction(0))
    deltas = tuple(itertools.product((0, 1), repeat=n))
    prefixes = tuple(prefixes)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = tuple(pool.map(lambda d: _pairing_row(group, f, prefixes, d), deltas))
    else:
        rows = tuple(_pairing_row(group, f, prefixes, d) for d in deltas)
    witness = DualBallWitness(group, n, s_seq, t_seq, prefixes, f, c, deltas, rows)
    verify_witness(witness)
    return witness


def verify_witness(w: DualBallWitness) -> None:
    """Re-derive every invariant from the escape sequence and ``f``.

    Raises :class:`VerificationError` naming the first failure.
    """
    g = w.group
    if len(w.s_seq) != 2 * w.n:
        raise VerificationError(f"escape sequence has length {len(w.s_seq)}, expected {2 * w.n}")
    for s in w.s_seq:
        g.check(s)
        if s not in g.generators:
            raise VerificationError(f"{s!r} is not a generator")
    bad = check_escape(g, w.s_seq)
    if bad:
        raise VerificationError(f"escape property fails at (m, n) = {bad}")
    for j, t in enumerate(w.t_seq):
        if t != g._mul(w.s_seq[2 * j + 1], w.s_seq[2 * j]):
            raise VerificationError(f"t_{j + 1} is not s_{2 * j + 2} s_{2 * j + 1}")
    cur = g.identity
    for i, t in enumerate(w.t_seq):
        cur = g._mul(t, cur)
        if w.prefixes[i] != cur:
            raise VerificationError(f"P_{i + 1} is not t_{i + 1} ... t_1")
        if not g.in_ball(cur, 2 * w.n):
            raise VerificationError(f"P_{i + 1} lies outside S^{2 * w.n}")
    f = w.f
    if g.identity not in f or f[g.identity] != 1:
        raise VerificationError("f(e) != 1")
    if max(abs(v) for v in f.values()) != 1:
        raise VerificationError("||f||_inf != 1")
    if w.c != sum(v * v for v in f.values()) or w.c <= 0:
        raise VerificationError("c != sum f^2")
    translates = [translate(g, f, p) for p in w.prefixes]
    seen: dict = {}
    for i, tr in enumerate(translates):
        for x in tr:
            if x in seen:
                raise VerificationError(f"supports of translates {seen[x] + 1} and {i + 1} meet")
            seen[x] = i
    if w.deltas != tuple(itertools.product((0, 1), repeat=w.n)):
        raise VerificationError("delta family is not all of {0,1}^n")
    if len(w.pairing) != len(w.deltas):
        raise VerificationError("pairing table has the wrong number of rows")
    for d, (delta, row) in enumerate(zip(w.deltas, w.pairing)):
        kern = w.family(delta)
        if kern and max(abs(v) for v in kern.values()) > 1:
            raise VerificationError(f"||f_delta||_inf > 1 for delta {''.join(map(str, delta))}")
        if len(row) != w.n:
            raise VerificationError(f"pairing row {d} has the wrong length")
        for i in range(w.n):
            actual = pair(kern, translates[i])
            if row[i] != actual or actual != delta[i] * w.c:
                name = "".join(map(str, delta))
                raise VerificationError(f"P[{name}][{i + 1}] = {row[i]} but pairing gives {actual}, "
                                        f"expected delta(i)*c = {delta[i] * w.c}")
    _check_dichotomy(w)


def _side(value: Fraction, lo: Fraction, hi: Fraction) -> str | None:
    """``"V0"`` if only in V0, ``"V1"`` if only in V1, None if in both."""
    in0, in1 = abs(value) < hi, abs(value) > lo
    if in0 and not in1:
        return "V0"
    if in1 and not in0:
        return "V1"
    return None


def _check_dichotomy(w: DualBallWitness) -> None:
    lo, hi = w.thresholds
    sides = [tuple(_side(v, lo, hi) for v in row) for row in w.pairing]
    for a, b in itertools.combinations(range(len(sides)), 2):
        if not any(x is not None and y is not None and x != y for x, y in zip(sides[a], sides[b])):
            raise VerificationError(f"deltas {a} and {b} are not separated by any translate")


@dataclass(frozen=True)
class LowerBoundReport:
    k: int
    n: int
    radius: int  # 2*k*n
    certified_count: int  # 2^n
    entropy_bound: Fraction  # 1/(2k)
    witness: DualBallWitness


def identity_neighborhood_index(group: GroupModel) -> int:
    """Least j with ``S^j`` an identity neighbourhood; discrete groups give 1."""
    for j in range(1, 64):
        if group.identity in group.ball(j):
            return j
    raise ValidationError("generating set never contains the identity")


def lower_bound_entropy(group: GroupModel, n: int, threads: int = 1) -> LowerBoundReport:
    """Certify ``(S^(2kn):V) >= 2^n`` and hence ``eta(alpha, S, V) >= 1/(2k)``."""
    k = identity_neighborhood_index(group)
    witness = build_witness(group.with_generators(group.ball(k).elements) if k > 1 else group,
                            n, threads=threads)
    return LowerBoundReport(k, n, 2 * k * n, 2 ** n, Fraction(1, 2 * k), witness)
