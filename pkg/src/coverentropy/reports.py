"""Self-contained JSON run reports.

Every report embeds the spec it was computed from, the command parameters
that influence results, the results with their certificates, and two
SHA-256 digests: ``input_digest`` over the spec and ``content_digest`` over
everything except itself and the optional ``timing`` block.  Reports are
serialized with sorted keys, so identical inputs give identical bytes
regardless of thread count.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any

from coverentropy import __version__
from coverentropy.action import RefinementResult
from coverentropy.amenability import construct_mean
from coverentropy.dualball import LowerBoundReport, lower_bound_entropy
from coverentropy.errors import ValidationError
from coverentropy.estimates import EstimateReport, estimate_from_values
from coverentropy.exact import frac_str
from coverentropy.specfile import LoadedSpec, canonical_json, digest
from coverentropy.subshift import DEFAULT_PATTERN_CAP, Extension, SubshiftRefinement

REPORT_VERSION = 1
REPORT_FORMAT = "coverentropy-report"
DIGEST_EXCLUDED = ("content_digest", "timing")
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def encode_word(symbols, size: int):
    """Symbol-index word as a compact string when the alphabet allows it."""
    if size <= len(_DIGITS):
        return "".join(_DIGITS[s] for s in symbols)
    return list(symbols)


def decode_word(raw, size: int) -> tuple:
    if isinstance(raw, str):
        if size > len(_DIGITS):
            raise ValidationError("string-encoded word for a large alphabet")
        try:
            return tuple(_DIGITS.index(ch) for ch in raw)
        except ValueError:
            raise ValidationError(f"bad symbol in word {raw!r}") from None
    if isinstance(raw, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in raw):
        return tuple(raw)
    raise ValidationError(f"malformed word {raw!r}")


def _estimate_json(est: EstimateReport) -> dict:
    return {
        "values": list(est.values),
        "slopes": list(est.slopes),
        "tail_slope": est.tail_slope,
        "tail_max": est.tail_max,
        "tail_window": list(est.tail_window),
        "non_decreasing": est.non_decreasing,
        "stabilized_at": est.stabilized_at,
    }


# -- finite actions ------------------------------------------------------------

def _select_cover(spec: LoadedSpec, selector: str):
    space = spec.action.space
    if selector == "finest":
        return space.finest_cover(), "finest"
    if selector == "spec":
        if spec.cover is None:
            raise ValidationError("spec has no cover; use --cover finest")
        return spec.cover, "spec"
    if selector == "auto":
        return (spec.cover, "spec") if spec.cover is not None else (space.finest_cover(), "finest")
    raise ValidationError(f"unknown cover selector {selector!r}")


def _labels(space, mask: int) -> list:
    return list(space.labels(mask))


def _action_level(space, n: int, r: RefinementResult) -> dict:
    return {
        "n": n,
        "value": r.value,
        "lower_bound": r.lower_bound,
        "exact": r.exact,
        "certificate": {
            "kind": r.certificate,
            "optimal_cover": [_labels(space, m) for m in r.optimal_cover.sets],
            "separated": list(r.separated),
        },
    }


def _action_results(spec: LoadedSpec, n_max: int, selector: str, threads: int) -> tuple[dict, dict]:
    action = spec.action
    group = action.group
    cover, source = _select_cover(spec, selector)
    results = action.complexity_results(cover, n_max, threads)
    stab = action.map_stabilization_index()
    inv = set(group.inverse_set())
    res = {
        "model": "action",
        "cover": {"source": source, "members": [_labels(action.space, m) for m in cover.sets]},
        "generators": [group.to_json(g) for g in group.generators],
        "symmetric_generators": inv == set(group.generators),
        "levels": [_action_level(action.space, n, r) for n, r in enumerate(results, start=1)],
        "map_stabilization_index": stab,
    }
    diag = {
        "search_nodes": [r.nodes for r in results],
        "greedy_sizes": [r.greedy_size for r in results],
        "candidate_counts": [len(r.candidates) for r in results],
    }
    return res, diag


# -- subshifts -------------------------------------------------------------------

def _extension_json(ext: Extension, size: int) -> dict:
    return {k: encode_word(getattr(ext, k), size)
            for k in ("left_cycle", "left_tail", "core", "right_tail", "right_cycle")}


def _subshift_level(model, r: SubshiftRefinement) -> dict:
    size = len(model.alphabet)
    cert = None
    if r.certificate is not None:
        c = r.certificate
        cert = {
            "domain": [model.group.to_json(g) for g in c.domain],
            "patterns": [encode_word(p, size) for p in c.patterns],
            "extensions": None if c.extensions is None else [_extension_json(e, size) for e in c.extensions],
        }
    return {
        "n": r.n,
        "value": r.value,
        "method": r.method,
        "exact": r.exact,
        "lower_bound": r.lower_bound,
        "upper_bound": r.upper_bound,
        "certificate": cert,
    }


def _subshift_results(spec: LoadedSpec, n_max: int, cap: int | None) -> tuple[dict, dict]:
    model = spec.subshift
    pattern_cap = cap if cap is not None else DEFAULT_PATTERN_CAP
    levels = []
    for n in range(1, n_max + 1):
        pc = model.pattern_count(n)
        if pc.exact and pc.count <= pattern_cap:
            levels.append(_subshift_level(model, model.certified_complexity(n, pattern_cap)))
        else:
            # too many patterns to embed: the verifier recounts instead
            r = SubshiftRefinement(n, pc.count, pc.exact, pc.method,
                                   pc.count if pc.exact else (1 if model._has_constant_point() else 0),
                                   pc.count, None)
            levels.append(_subshift_level(model, r))
    group = model.group
    res = {
        "model": "subshift",
        "cover": {"source": "symbol", "members": len(model.alphabet)},
        "generators": [group.to_json(g) for g in group.generators],
        "symmetric_generators": set(group.inverse_set()) == set(group.generators),
        "levels": levels,
    }
    diag = {"ball_sizes": [len(group.ball(n)) for n in range(1, n_max + 1)]}
    return res, diag


# -- commands --------------------------------------------------------------------

def complexity_results(spec: LoadedSpec, n_max: int, cover: str = "auto", threads: int = 1,
                       cap: int | None = None) -> tuple[dict, dict]:
    if n_max < 1:
        raise ValidationError("--nmax must be at least 1")
    if spec.action is not None:
        return _action_results(spec, n_max, cover, threads)
    if spec.subshift is not None:
        return _subshift_results(spec, n_max, cap)
    raise ValidationError("complexity needs an action or subshift block")


def entropy_results(spec: LoadedSpec, n_max: int, cover: str = "auto", threads: int = 1,
                    cap: int | None = None) -> tuple[dict, dict]:
    if n_max < 2:
        raise ValidationError("--nmax must be at least 2 for slope estimates")
    res, diag = complexity_results(spec, n_max, cover, threads, cap)
    est = estimate_from_values([lv["value"] for lv in res["levels"]])
    res["estimate"] = _estimate_json(est)
    if spec.subshift is not None and spec.subshift.is_full:
        est_full = spec.subshift.entropy_estimate(n_max)
        diag["closed_form_slopes"] = list(est_full.closed_form_slopes)
    return res, diag


def mean_results(spec: LoadedSpec, epsilon: Fraction, n_cap: int = 32) -> tuple[dict, dict]:
    if spec.action is None:
        raise ValidationError("mean construction handles finite actions only")
    if spec.observables is None:
        raise ValidationError("mean construction needs an observables block")
    action, obs = spec.action, spec.observables
    space = action.space
    m = construct_mean(action, obs, epsilon, n_cap=n_cap)
    t = m.trace
    n = m.n_used
    r_v = action.refinement_at(t.refined_cover, n)
    r_w = action.refinement_at(t.refined_cover, n + 1)
    group = action.group
    res = {
        "model": "action",
        "epsilon": frac_str(m.epsilon),
        "theta": frac_str(m.theta),
        "generators": [group.to_json(g) for g in group.generators],
        "symmetric_generators": set(group.inverse_set()) == set(group.generators),
        "base_cover": [_labels(space, s) for s in t.base_cover.sets],
        "refined_cover": [_labels(space, s) for s in t.refined_cover.sets],
        "sequence": list(t.sequence),
        "n": n,
        "minimal_cover": [_labels(space, s) for s in t.minimal_cover.sets],
        "minimal_cover_separated": list(r_v.separated),
        "next_cover": [_labels(space, s) for s in t.next_cover.sets],
        "next_cover_separated": list(r_w.separated),
        "representatives": [space.points[i] for _, i in t.representatives],
        "phi": [[i, j] for i, j in t.phi],
        "support": list(m.support),
        "means": {name: frac_str(m.mean(obs, k)) for k, name in enumerate(obs.names)},
        "defect": frac_str(m.defect),
    }
    diag = {
        "max_sup_norm": frac_str(obs.max_sup_norm()),
        "cover_sizes": {"base": len(t.base_cover), "refined": len(t.refined_cover),
                        "minimal": len(t.minimal_cover), "next": len(t.next_cover)},
    }
    return res, diag


def lowerbound_results(spec: LoadedSpec, n: int, threads: int = 1) -> tuple[dict, dict]:
    rep: LowerBoundReport = lower_bound_entropy(spec.group, n, threads=threads)
    w = rep.witness
    g = w.group
    res = {
        "model": "dual_ball",
        "k": rep.k,
        "n": rep.n,
        "radius": rep.radius,
        "certified_count": rep.certified_count,
        "entropy_bound": frac_str(rep.entropy_bound),
        "witness": {
            "generators": [g.to_json(s) for s in g.generators],
            "escape_sequence": [g.to_json(s) for s in w.s_seq],
            "t": [g.to_json(t) for t in w.t_seq],
            "prefixes": [g.to_json(p) for p in w.prefixes],
            "f": [[g.to_json(x), frac_str(v)] for x, v in sorted(w.f.items(), key=lambda kv: g.sort_key(kv[0]))],
            "c": frac_str(w.c),
            "thresholds": [frac_str(x) for x in w.thresholds],
            "pairing": [[frac_str(v) for v in row] for row in w.pairing],
        },
    }
    diag = {"functionals": len(w.pairing), "support_sizes": [len(w.f)] * w.n}
    return res, diag


# -- assembly --------------------------------------------------------------------

def assemble(command: dict, raw_spec: dict, results: dict, diagnostics: dict,
             wall_time: float | None = None) -> dict:
    report = {
        "format": REPORT_FORMAT,
        "report_version": REPORT_VERSION,
        "tool_version": __version__,
        "command": command,
        "spec": raw_spec,
        "input_digest": digest(raw_spec),
        "results": results,
        "diagnostics": diagnostics,
    }
    report["content_digest"] = content_digest(report)
    if wall_time is not None:
        report["timing"] = {"wall_time_s": wall_time}
    return report


def content_digest(report: dict) -> str:
    return digest({k: v for k, v in report.items() if k not in DIGEST_EXCLUDED})


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def to_csv(report: dict) -> str:
    """Sequence data as CSV: ``n,value,slope`` rows (pairing rows for witnesses)."""
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    res = report["results"]
    if res["model"] == "dual_ball":
        out.writerow(["delta", "i", "pairing"])
        n = res["n"]
        for d, row in enumerate(res["witness"]["pairing"]):
            bits = format(d, f"0{n}b")
            for i, v in enumerate(row, start=1):
                out.writerow([bits, i, v])
        return buf.getvalue()
    if "levels" in res:
        values = [lv["value"] for lv in res["levels"]]
    else:
        values = res["sequence"]
    est = estimate_from_values(values)
    out.writerow(["n", "value", "slope"])
    for n, (v, s) in enumerate(zip(values, est.slopes), start=1):
        out.writerow([n, v, repr(s)])
    return buf.getvalue()


__all__ = [
    "assemble", "canonical_json", "complexity_results", "content_digest", "dumps",
    "entropy_results", "lowerbound_results", "mean_results", "to_csv",
]
