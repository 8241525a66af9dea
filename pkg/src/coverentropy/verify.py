"""Re-verification of run reports from their embedded data alone.

Only the spec parser and group arithmetic are shared with the computing
side.  Point maps of balls, admissibility, openness, SFT word counts and
dual-ball pairings are all recomputed here with separate, simpler code.
Semantic checks run first so failures name the offending field; the
content digest is checked last.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from coverentropy.errors import CoverEntropyError, ValidationError, VerificationError
from coverentropy.exact import to_fraction
from coverentropy.groups import GroupModel
from coverentropy.reports import DIGEST_EXCLUDED, REPORT_FORMAT, REPORT_VERSION, decode_word
from coverentropy.specfile import LoadedSpec, digest, load_spec

BRUTE_SUBSETS = 1 << 16  # open-set enumeration budget for re-deriving optimality
BRUTE_COMBOS = 1_000_000
BRUTE_WORDS = 1 << 20


@dataclass
class Verification:
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def ok(self, name: str) -> None:
        self.checks.append(name)


def _fail(msg: str):
    raise VerificationError(msg)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        _fail(msg)


# -- finite topology, recomputed ---------------------------------------------

class _Space:
    def __init__(self, action_block: dict):
        self.points = list(action_block["points"])
        self.index = {p: i for i, p in enumerate(self.points)}
        self.size = len(self.points)
        self.full = (1 << self.size) - 1
        basis = action_block.get("open_basis", [[p] for p in self.points])
        masks = [self.mask(m) for m in basis]
        self.nb = []
        for i in range(self.size):
            u = self.full
            for b in masks:
                if b >> i & 1:
                    u &= b
            self.nb.append(u)

    def mask(self, labels) -> int:
        m = 0
        for p in labels:
            if p not in self.index:
                _fail(f"unknown point {p!r}")
            m |= 1 << self.index[p]
        return m

    def is_open(self, m: int) -> bool:
        return all(self.nb[i] & ~m == 0 for i in range(self.size) if m >> i & 1)

    def members(self, m: int) -> list[int]:
        return [i for i in range(self.size) if m >> i & 1]


def _apply(p: tuple, m: int) -> int:
    out = 0
    for i, j in enumerate(p):
        if m >> i & 1:
            out |= 1 << j
    return out


def _gen_maps(spec: LoadedSpec, space: _Space) -> dict:
    out = {}
    g = spec.group
    for entry in spec.raw["action"]["generator_maps"]:
        out[g.element(entry["element"])] = tuple(space.index[q] for q in entry["map"])
    return out


def _ball_maps(gen_maps: dict, n: int, size: int) -> set:
    cur = {tuple(range(size))}
    for _ in range(n):
        cur = {tuple(q[p[i]] for i in range(size)) for p in cur for q in gen_maps.values()}
    return cur


def _admissible(m: int, maps, cover: list[int]) -> bool:
    return all(any(_apply(p, m) & ~u == 0 for u in cover) for p in maps)


def _check_open_cover(space: _Space, members: list[int], what: str) -> None:
    union = 0
    for i, m in enumerate(members):
        _require(m != 0, f"{what}: member {i} is empty")
        _require(space.is_open(m), f"{what}: member {i} is not open")
        union |= m
    _require(union == space.full, f"{what}: members do not cover the space")
    _require(len(set(members)) == len(members), f"{what}: repeated members")


def _check_separated(space: _Space, labels: list, maps, cover: list[int], what: str) -> list[int]:
    idx = []
    for p in labels:
        _require(p in space.index, f"{what}: unknown separated point {p!r}")
        idx.append(space.index[p])
    _require(len(set(idx)) == len(idx), f"{what}: repeated separated point")
    for a, b in itertools.combinations(idx, 2):
        hull = space.nb[a] | space.nb[b]
        if _admissible(hull, maps, cover):
            _fail(f"{what}: points {space.points[a]!r} and {space.points[b]!r} fit in one admissible set")
    return idx


def _brute_minimum(space: _Space, maps, cover: list[int], value: int) -> bool | None:
    """True if no admissible open cover has fewer than ``value`` members; None if too big."""
    if (1 << space.size) > BRUTE_SUBSETS:
        return None
    adm = [m for m in range(1, space.full + 1) if space.is_open(m) and _admissible(m, maps, cover)]
    maximal = [m for m in adm if not any(o != m and m & ~o == 0 for o in adm)]
    k = value - 1
    if k < 1:
        return True
    if math.comb(len(maximal), k) > BRUTE_COMBOS:
        return None
    for combo in itertools.combinations(maximal, k):
        union = 0
        for m in combo:
            union |= m
        if union == space.full:
            return False
    return True


def _verify_action_levels(spec: LoadedSpec, res: dict, v: Verification) -> None:
    space = _Space(spec.raw["action"])
    gen_maps = _gen_maps(spec, space)
    cover = [space.mask(m) for m in res["cover"]["members"]]
    _check_open_cover(space, cover, "cover")
    src = res["cover"]["source"]
    if src == "finest":
        expect = sorted(set(space.nb))
    elif src == "spec":
        raw_cover = spec.raw["action"].get("cover")
        _require(raw_cover is not None, "cover source 'spec' but the spec has no cover")
        expect = sorted({space.mask(m) for m in raw_cover} - {0})
    else:
        _fail(f"unknown cover source {src!r}")
    _require(sorted(cover) == expect, "cover does not match its declared source")
    v.ok("cover")
    for k, lv in enumerate(res["levels"], start=1):
        tag = f"level n={k}"
        _require(lv["n"] == k, f"{tag}: radius field is {lv['n']}")
        maps = _ball_maps(gen_maps, k, space.size)
        cert = lv["certificate"]
        members = [space.mask(m) for m in cert["optimal_cover"]]
        _check_open_cover(space, members, f"{tag} optimal_cover")
        for i, m in enumerate(members):
            _require(_admissible(m, maps, cover), f"{tag} optimal_cover: member {i} does not refine the cover")
        _require(lv["value"] == len(members), f"{tag}: value {lv['value']} != cover size {len(members)}")
        sep = _check_separated(space, cert["separated"], maps, cover, tag)
        _require(len(sep) <= lv["lower_bound"] <= lv["value"], f"{tag}: inconsistent lower_bound")
        kind = cert["kind"]
        if kind == "separation":
            _require(len(sep) == lv["value"] and lv["exact"] is True,
                     f"{tag}: separation certificate does not meet the value")
        elif kind == "exhaustive":
            _require(lv["exact"] is True and lv["lower_bound"] == lv["value"], f"{tag}: exhaustive but not exact")
            brute = _brute_minimum(space, maps, cover, lv["value"])
            if brute is None:
                v.notes.append(f"{tag}: optimality from exhaustive search not re-derived (too large)")
            else:
                _require(brute, f"{tag}: a smaller refining cover exists")
        elif kind == "bracketed":
            _require(lv["exact"] is False, f"{tag}: bracketed value marked exact")
        else:
            _fail(f"{tag}: unknown certificate kind {kind!r}")
        v.ok(tag)
    stab = res.get("map_stabilization_index")
    if stab is not None:
        _require(stab >= 1 and _ball_maps(gen_maps, stab, space.size) == _ball_maps(gen_maps, stab + 1, space.size),
                 "map_stabilization_index: map sets still change")
        if stab > 1:
            _require(_ball_maps(gen_maps, stab - 1, space.size) != _ball_maps(gen_maps, stab, space.size),
                     "map_stabilization_index is not the least such radius")
        v.ok("map_stabilization_index")


# -- subshifts, recomputed -----------------------------------------------------

def _line_patterns(spec: LoadedSpec) -> list[list[tuple[int, int]]]:
    alpha = list(spec.raw["subshift"]["alphabet"])
    out = []
    for pat in spec.raw["subshift"].get("forbidden", []):
        cells = [(spec.group.element(c["element"])[0], alpha.index(c["symbol"])) for c in pat]
        lo = min(o for o, _ in cells)
        out.append([(o - lo, s) for o, s in cells])
    return out


def _line_allowed(word, pats) -> bool:
    for p in pats:
        width = max(o for o, _ in p) + 1
        for t in range(len(word) - width + 1):
            if all(word[t + o] == s for o, s in p):
                return False
    return True


def _line_recount(size: int, pats, length: int) -> int:
    """Globally admissible words by depth-K extendability (K = state count + 1)."""
    M = max([2] + [max(o for o, _ in p) + 1 for p in pats])
    k = M - 1
    states = [w for w in itertools.product(range(size), repeat=k) if _line_allowed(w, pats)]
    succ = {w: [] for w in states}
    pred = {w: [] for w in states}
    for w in states:
        for s in range(size):
            win = w + (s,)
            if _line_allowed(win, pats):
                succ[w].append(win[1:])
                pred[win[1:]].append(w)
    depth = len(states) + 1
    right = {w: True for w in states}
    left = {w: True for w in states}
    for _ in range(depth):
        right = {w: any(right[t] for t in succ[w]) for w in states}
        left = {w: any(left[t] for t in pred[w]) for w in states}
    good = [w for w in states if right[w] and left[w]]
    if length < k:
        return len({w[:length] for w in good})
    vec = {w: 1 for w in states if left[w]}
    for _ in range(length - k):
        nxt: dict = {}
        for w, c in vec.items():
            for t in succ[w]:
                nxt[t] = nxt.get(t, 0) + c
        vec = nxt
    return sum(c for w, c in vec.items() if right[w])


def _general_local_recount(spec: LoadedSpec, domain: list) -> int | None:
    size = len(spec.raw["subshift"]["alphabet"])
    if size ** len(domain) > BRUTE_WORDS:
        return None
    g = spec.group
    alpha = list(spec.raw["subshift"]["alphabet"])
    pats = [[(g.element(c["element"]), alpha.index(c["symbol"])) for c in p]
            for p in spec.raw["subshift"].get("forbidden", [])]
    pos = {x: i for i, x in enumerate(domain)}
    occurrences = []
    for p in pats:
        # right translates D*h of the pattern domain that fit in the domain
        d0 = p[0][0]
        for h in [g.mul(g.inv(d0), x) for x in domain]:
            cells = [(pos.get(g.mul(d, h)), s) for d, s in p]
            if all(j is not None for j, _ in cells):
                occurrences.append(cells)
    count = 0
    for word in itertools.product(range(size), repeat=len(domain)):
        if not any(all(word[j] == s for j, s in cells) for cells in occurrences):
            count += 1
    return count


def _verify_subshift_levels(spec: LoadedSpec, res: dict, v: Verification) -> None:
    blk = spec.raw["subshift"]
    size = len(blk["alphabet"])
    full = not blk.get("forbidden")
    g = spec.group
    line = g.family.value == "integer_lattice" and g.param == 1
    pats = _line_patterns(spec) if line and not full else []
    _require(res["cover"] == {"source": "symbol", "members": size},
             "subshift cover must be the symbol partition of the alphabet")
    for k, lv in enumerate(res["levels"], start=1):
        tag = f"level n={k}"
        _require(lv["n"] == k, f"{tag}: radius field is {lv['n']}")
        ball = g.ball(k).elements
        xs = [x[0] for x in ball] if line else []
        interval = line and max(xs) - min(xs) + 1 == len(xs)
        if full:
            expect, method = size ** len(ball), "exhaustive"
        elif interval:
            expect, method = _line_recount(size, pats, len(ball)), "transfer-matrix"
        else:
            expect, method = _general_local_recount(spec, list(ball)), "locally-admissible"
        _require(lv["method"] == method, f"{tag}: method {lv['method']!r}, expected {method!r}")
        if expect is None:
            v.notes.append(f"{tag}: locally admissible count not recounted (too large)")
        else:
            _require(lv["value"] == expect, f"{tag}: value {lv['value']} but recount gives {expect}")
        exact = method != "locally-admissible"
        _require(lv["exact"] is exact, f"{tag}: exact flag wrong")
        _require(lv["upper_bound"] == lv["value"], f"{tag}: upper_bound != value")
        if exact:
            _require(lv["lower_bound"] == lv["value"], f"{tag}: lower_bound != value for an exact count")
        else:
            constant = any(all(any(alpha_i != blk["alphabet"].index(c["symbol"]) for c in p)
                               for p in blk.get("forbidden", []))
                           for alpha_i in range(size))
            _require(lv["lower_bound"] == (1 if constant else 0), f"{tag}: lower_bound unsupported")
        cert = lv["certificate"]
        if cert is not None:
            _require(exact, f"{tag}: certificate attached to a non-exact count")
            _require(cert["domain"] == [g.to_json(x) for x in ball], f"{tag}: certificate domain is not S^{k}")
            words = [decode_word(p, size) for p in cert["patterns"]]
            for i, w in enumerate(words):
                _require(len(w) == len(ball) and all(0 <= s < size for s in w), f"{tag}: pattern {i} malformed")
            _require(len(set(words)) == len(words), f"{tag}: two points share a pattern")
            _require(len(words) == lv["value"], f"{tag}: {len(words)} patterns for value {lv['value']}")
            if not full:
                exts = cert["extensions"]
                _require(exts is not None and len(exts) == len(words), f"{tag}: missing extensions")
                M = max([2] + [max(o for o, _ in p) + 1 for p in pats])
                for i, (w, e) in enumerate(zip(words, exts)):
                    parts = {key: decode_word(e[key], size) for key in
                             ("left_cycle", "left_tail", "core", "right_tail", "right_cycle")}
                    _require(parts["core"][:len(w)] == w, f"{tag}: extension {i} does not contain pattern {i}")
                    _require(parts["left_cycle"] and parts["right_cycle"], f"{tag}: extension {i} has an empty period")
                    reps_l = M // len(parts["left_cycle"]) + 2
                    reps_r = M // len(parts["right_cycle"]) + 2
                    window = (parts["left_cycle"] * reps_l + parts["left_tail"] + parts["core"]
                              + parts["right_tail"] + parts["right_cycle"] * reps_r)
                    _require(_line_allowed(window, pats), f"{tag}: extension {i} contains a forbidden pattern")
        v.ok(tag)


# -- estimates -----------------------------------------------------------------

def _verify_estimate(res: dict, v: Verification) -> None:
    est = res["estimate"]
    values = [lv["value"] for lv in res["levels"]]
    _require(est["values"] == values, "estimate: values differ from levels")
    slopes = [math.log2(a) / n for n, a in enumerate(values, start=1)]
    _require(est["slopes"] == slopes, "estimate: slopes do not match values")
    n_max = len(values)
    start = n_max - math.ceil(n_max / 2) + 1
    _require(est["tail_window"] == [start, n_max], "estimate: tail window wrong")
    _require(est["tail_slope"] == slopes[-1], "estimate: tail_slope wrong")
    _require(est["tail_max"] == max(slopes[start - 1:]), "estimate: tail_max wrong")
    _require(est["non_decreasing"] == all(a <= b for a, b in zip(values, values[1:])),
             "estimate: monotonicity flag wrong")
    stab = None
    for n in range(n_max, 0, -1):
        if values[n - 1] != values[-1]:
            break
        stab = n
    if stab == n_max and n_max > 1:
        stab = None
    _require(est["stabilized_at"] == stab, "estimate: stabilized_at wrong")
    v.ok("estimate")


# -- means ---------------------------------------------------------------------

def _verify_mean(spec: LoadedSpec, res: dict, v: Verification) -> None:
    space = _Space(spec.raw["action"])
    gen_maps = _gen_maps(spec, space)
    obs = {o["name"]: [to_fraction(x) for x in o["values"]] for o in spec.raw["observables"]}
    eps = to_fraction(res["epsilon"])
    _require(eps > 0, "epsilon must be positive")
    sup = max((abs(x) for vals in obs.values() for x in vals), default=Fraction(0))
    theta = eps / (1 + 2 * sup)
    _require(to_fraction(res["theta"]) == theta, f"theta should be {theta}")
    v.ok("theta")

    base = [space.mask(m) for m in res["base_cover"]]
    _check_open_cover(space, base, "base_cover")
    for i, m in enumerate(base):
        for name, vals in obs.items():
            sel = [vals[j] for j in space.members(m)]
            _require(max(sel) - min(sel) <= theta / 3, f"base_cover member {i}: {name} oscillates too much")
    v.ok("base_cover")

    refined = [space.mask(m) for m in res["refined_cover"]]
    _check_open_cover(space, refined, "refined_cover")
    inverse_maps = set()
    for p in gen_maps.values():
        q = [0] * space.size
        for i, j in enumerate(p):
            q[j] = i
        inverse_maps.add(tuple(q))
    for i, m in enumerate(refined):
        _require(_admissible(m, inverse_maps, base), f"refined_cover member {i} does not refine base_cover under S^-1")
    v.ok("refined_cover")

    seq = res["sequence"]
    n = res["n"]
    _require(all(isinstance(a, int) and a >= 1 for a in seq), "sequence values must be positive integers")
    _require(all(a <= b for a, b in zip(seq, seq[1:])), "sequence decreases")
    _require(1 <= n < len(seq), "n out of range of the sequence")
    for j in range(1, n + 1):
        holds = seq[j] - seq[j - 1] <= theta * seq[j - 1]
        if j < n:
            _require(not holds, f"ratio condition already holds at n={j}")
        else:
            _require(holds, f"ratio condition fails at n={n}")
    v.ok("ratio_condition")

    covers = {}
    for key, sep_key, radius in (("minimal_cover", "minimal_cover_separated", n),
                                 ("next_cover", "next_cover_separated", n + 1)):
        maps = _ball_maps(gen_maps, radius, space.size)
        members = [space.mask(m) for m in res[key]]
        _check_open_cover(space, members, key)
        for i, m in enumerate(members):
            _require(_admissible(m, maps, refined), f"{key} member {i} does not refine refined_cover")
        _require(len(members) == seq[radius - 1], f"{key} size differs from sequence value at n={radius}")
        sep = _check_separated(space, res[sep_key], maps, refined, key)
        if len(sep) != len(members):
            brute = _brute_minimum(space, maps, refined, len(members))
            if brute is None:
                v.notes.append(f"{key}: minimality not re-derived (too large)")
            else:
                _require(brute, f"{key}: a smaller refining cover exists")
        covers[key] = members
        v.ok(key)

    vv, ww = covers["minimal_cover"], covers["next_cover"]
    reps = []
    for i, p in enumerate(res["representatives"]):
        _require(p in space.index, f"representative {i} unknown")
        x = space.index[p]
        _require(vv[i] >> x & 1, f"representative {i} not in its member")
        _require(all(not (m >> x & 1) for j, m in enumerate(vv) if j != i),
                 f"representative {i} lies in another member")
        reps.append(x)
    _require(len(reps) == len(vv), "one representative per member required")
    v.ok("representatives")

    phi = res["phi"]
    _require(sorted(i for i, _ in phi) == list(range(len(vv))), "phi is not defined on every member")
    _require(len({j for _, j in phi}) == len(phi), "phi is not injective")
    for i, j in phi:
        _require(0 <= j < len(ww) and vv[i] & ww[j], f"phi({i}) = {j} does not meet")
    v.ok("phi")

    support = sorted(reps)
    _require(res["support"] == [space.points[i] for i in support], "support is not the set of representatives")
    for name, vals in obs.items():
        mean = sum((vals[i] for i in support), Fraction(0)) / len(support)
        _require(to_fraction(res["means"][name]) == mean, f"mean of {name} wrong")
    defect = Fraction(0)
    for p in gen_maps.values():
        q = [0] * space.size
        for i, j in enumerate(p):
            q[j] = i
        for vals in obs.values():
            here = sum(vals[i] for i in support)
            moved = sum(vals[q[i]] for i in support)
            defect = max(defect, abs(here - moved) / len(support))
    _require(to_fraction(res["defect"]) == defect, f"defect should be {defect}")
    _require(defect <= eps, f"defect {defect} exceeds epsilon {eps}")
    v.ok("defect")


# -- dual ball -----------------------------------------------------------------

def _verify_dual_ball(spec: LoadedSpec, res: dict, v: Verification) -> None:
    g: GroupModel = spec.group
    _require(not g.is_finite, "dual-ball witness on a finite group")
    n = res["n"]
    _require(isinstance(n, int) and n >= 1, "n must be a positive integer")
    k = next((j for j in range(1, 64) if g.identity in g.ball(j)), None)
    _require(res["k"] == k, f"k should be {k}")
    _require(res["radius"] == 2 * k * n, "radius should be 2kn")
    _require(res["certified_count"] == 2 ** n, "certified_count should be 2^n")
    _require(to_fraction(res["entropy_bound"]) == Fraction(1, 2 * k), "entropy bound should be 1/(2k)")
    w = res["witness"]
    _require(w["generators"] == [g.to_json(s) for s in g.generators], "witness generators differ from the spec")
    s = [g.element(x) for x in w["escape_sequence"]]
    _require(len(s) == 2 * n, "escape sequence length should be 2n")
    _require(all(x in g.generators for x in s), "escape sequence leaves S")
    for m in range(2, 2 * n + 1):
        prod = g.identity
        for j in range(m, 0, -1):
            prod = g.mul(prod, s[j - 1])
            if j < m:
                _require(not g.in_ball(prod, m - j), f"escape property fails at (m, n) = ({m}, {j})")
    v.ok("escape_sequence")
    t = [g.element(x) for x in w["t"]]
    _require(t == [g.mul(s[2 * j + 1], s[2 * j]) for j in range(n)], "t_j should be s_2j s_2j-1")
    prefixes = [g.element(x) for x in w["prefixes"]]
    cur, want = g.identity, []
    for tj in t:
        cur = g.mul(tj, cur)
        want.append(cur)
    _require(prefixes == want, "prefixes should be t_i ... t_1")
    v.ok("prefixes")
    f = {}
    for x, val in w["f"]:
        e = g.element(x)
        _require(e not in f, "f lists an element twice")
        f[e] = to_fraction(val)
    _require(f.get(g.identity) == 1, "f(e) should be 1")
    _require(max(abs(x) for x in f.values()) == 1, "sup norm of f should be 1")
    c = sum((x * x for x in f.values()), Fraction(0))
    _require(to_fraction(w["c"]) == c, "c should be the sum of f^2")
    _require([to_fraction(x) for x in w["thresholds"]] == [c / 3, 2 * c / 3], "thresholds should be c/3, 2c/3")
    # f o lambda(P): x -> f(P x), supported on P^-1 spt(f)
    trans = [{g.mul(g.inv(p), x): val for x, val in f.items()} for p in prefixes]
    owner = {}
    for i, tr in enumerate(trans):
        for x in tr:
            _require(x not in owner, f"supports of translates {owner.get(x, 0) + 1} and {i + 1} meet")
            owner[x] = i
    v.ok("disjoint_supports")
    table = w["pairing"]
    _require(len(table) == 2 ** n, "pairing table should have 2^n rows")
    sides = []
    for d, row in enumerate(table):
        delta = tuple(int(b) for b in format(d, f"0{n}b"))
        name = "".join(map(str, delta))
        _require(len(row) == n, f"P[{name}] should have n entries")
        kern: dict = {}
        for bit, tr in zip(delta, trans):
            if bit:
                for x, val in tr.items():
                    kern[x] = kern.get(x, 0) + val
        _require(all(abs(x) <= 1 for x in kern.values()), f"sup norm of f_{name} exceeds 1")
        side = []
        for i in range(n):
            actual = sum((val * trans[i][x] for x, val in kern.items() if x in trans[i]), Fraction(0))
            try:
                claimed = to_fraction(row[i])
            except (TypeError, ValueError, ZeroDivisionError):
                _fail(f"P[{name}][{i + 1}] is not a rational")
            _require(claimed == actual == delta[i] * c,
                     f"P[{name}][{i + 1}] = {row[i]} but the pairing is {actual}, expected {delta[i] * c}")
            in0, in1 = abs(actual) < 2 * c / 3, abs(actual) > c / 3
            side.append(0 if in0 and not in1 else 1 if in1 and not in0 else None)
        sides.append(side)
    v.ok("pairing")
    for a, b in itertools.combinations(range(len(sides)), 2):
        _require(any(x is not None and y is not None and x != y for x, y in zip(sides[a], sides[b])),
                 f"functionals {a} and {b} are not forced apart")
    v.ok("dichotomy")


# -- entry point ---------------------------------------------------------------

def verify_report(report: Any) -> Verification:
    """Raise :class:`VerificationError` on the first failed invariant."""
    v = Verification()
    try:
        _verify(report, v)
    except VerificationError:
        raise
    except (CoverEntropyError, KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        raise VerificationError(f"malformed report: {type(exc).__name__}: {exc}") from None
    return v


def _verify(report: Any, v: Verification) -> None:
    _require(isinstance(report, dict), "report is not a JSON object")
    _require(report.get("format") == REPORT_FORMAT, "not a coverentropy report")
    _require(report.get("report_version") == REPORT_VERSION, "unsupported report version")
    try:
        spec = load_spec(report["spec"])
    except ValidationError as exc:
        _fail(f"embedded spec invalid: {exc}")
    _require(report["input_digest"] == digest(report["spec"]), "input_digest does not match the spec")
    v.ok("input_digest")
    cmd = report["command"]
    res = report["results"]
    name = cmd["name"]
    g = spec.group
    if name in ("complexity", "entropy", "mean"):
        _require(res["generators"] == [g.to_json(x) for x in g.generators], "generators differ from the spec")
        _require(res["symmetric_generators"] == (set(g.inverse_set()) == set(g.generators)),
                 "symmetric_generators flag wrong")
    if name in ("complexity", "entropy"):
        _require(len(res["levels"]) == cmd["nmax"], "number of levels differs from nmax")
        if res["model"] == "action":
            _require(spec.action is not None, "action results for a non-action spec")
            _verify_action_levels(spec, res, v)
        elif res["model"] == "subshift":
            _require(spec.subshift is not None, "subshift results for a non-subshift spec")
            _verify_subshift_levels(spec, res, v)
        else:
            _fail(f"unknown model {res['model']!r}")
        if name == "entropy":
            _verify_estimate(res, v)
    elif name == "mean":
        _require(res["model"] == "action", f"unexpected model {res['model']!r}")
        _require(spec.action is not None and "observables" in spec.raw, "mean report without action/observables")
        _require(to_fraction(cmd["epsilon"]) == to_fraction(res["epsilon"]), "epsilon differs from the command")
        _verify_mean(spec, res, v)
    elif name == "lowerbound":
        _require(res["model"] == "dual_ball", f"unexpected model {res['model']!r}")
        _require(res["n"] == cmd["n"], "n differs from the command")
        _verify_dual_ball(spec, res, v)
    else:
        _fail(f"unknown command {name!r}")
    body = {k: x for k, x in report.items() if k not in DIGEST_EXCLUDED}
    _require(report.get("content_digest") == digest(body), "content_digest does not match the report")
    v.ok("content_digest")
