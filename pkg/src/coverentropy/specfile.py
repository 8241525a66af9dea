"""Spec files: JSON model descriptions validated against a versioned schema.

A spec names a group and then either a finite action (points, open basis,
generator maps, optional cover and observables) or a subshift (alphabet and
forbidden patterns).  Element encodings: lattice vectors are int lists, free
words are strings (``"aB"`` is ``a b^-1``, ``""`` the identity), cyclic
elements are ints, permutations are image lists.  Rationals are ``"a/b"``
strings or ints.

Example::

    {"version": 1,
     "group": {"family": "cyclic", "param": 4, "generators": [0, 1]},
     "action": {"points": [0, 1, 2, 3],
                "generator_maps": [{"element": 0, "map": [0, 1, 2, 3]},
                                   {"element": 1, "map": [1, 2, 3, 0]}]}}
"""

from __future__ import annotations

import copy
import functools
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema

from coverentropy.action import FiniteAction
from coverentropy.amenability import ObservableSet
from coverentropy.errors import ValidationError
from coverentropy.groups import Family, GroupModel
from coverentropy.subshift import SubshiftModel
from coverentropy.topology import Cover, FiniteSpace

SPEC_VERSION = 1

_label = {"type": ["string", "integer"]}
_element = {"type": ["string", "integer", "array"], "items": {"type": "integer"}}
_rational = {"anyOf": [{"type": "integer"},
                       {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}

SPEC_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "coverentropy spec",
    "type": "object",
    "additionalProperties": False,
    "required": ["version", "group"],
    "properties": {
        "version": {"const": SPEC_VERSION},
        "name": {"type": "string"},
        "group": {
            "type": "object",
            "additionalProperties": False,
            "required": ["family", "param"],
            "properties": {
                "family": {"enum": [f.value for f in Family]},
                "param": {"type": "integer", "minimum": 1},
                "generators": {"type": "array", "items": _element},
                "perms": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
            },
        },
        "action": {
            "type": "object",
            "additionalProperties": False,
            "required": ["points", "generator_maps"],
            "properties": {
                "points": {"type": "array", "items": _label, "minItems": 1},
                "open_basis": {"type": "array", "items": {"type": "array", "items": _label}},
                "generator_maps": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["element", "map"],
                        "properties": {"element": _element,
                                       "map": {"type": "array", "items": _label}},
                    },
                },
                "cover": {"type": "array", "items": {"type": "array", "items": _label}},
            },
        },
        "subshift": {
            "type": "object",
            "additionalProperties": False,
            "required": ["alphabet"],
            "properties": {
                "alphabet": {"type": "array", "items": _label, "minItems": 1},
                "forbidden": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["element", "symbol"],
                            "properties": {"element": _element, "symbol": _label},
                        },
                    },
                },
            },
        },
        "observables": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name", "values"],
                "properties": {"name": {"type": "string"},
                               "values": {"type": "array", "items": _rational}},
            },
        },
    },
    "oneOf": [
        {"required": ["action"], "not": {"required": ["subshift"]}},
        {"required": ["subshift"], "not": {"required": ["action"]}},
        {"not": {"anyOf": [{"required": ["action"]}, {"required": ["subshift"]}]}},
    ],
}


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


@functools.lru_cache(maxsize=None)
def _validator():
    cls = jsonschema.validators.validator_for(SPEC_SCHEMA)
    cls.check_schema(SPEC_SCHEMA)
    return cls(SPEC_SCHEMA)


def validate_spec(raw: Any) -> dict:
    try:
        err = jsonschema.exceptions.best_match(_validator().iter_errors(raw))
        if err is not None:
            raise err
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"spec schema error at {where}: {exc.message}") from None
    if "observables" in raw and "action" not in raw:
        raise ValidationError("observables need an action block")
    return raw


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"parse error in {path}: {exc.msg} at line {exc.lineno}") from None


@dataclass
class LoadedSpec:
    raw: dict
    group: GroupModel
    action: FiniteAction | None = None
    cover: Cover | None = None
    observables: ObservableSet | None = None
    subshift: SubshiftModel | None = None

    @property
    def kind(self) -> str:
        if self.action is not None:
            return "action"
        if self.subshift is not None:
            return "subshift"
        return "group"


def build_group(block: dict, cap: int | None = None) -> GroupModel:
    fam = Family(block["family"])
    param = block["param"]
    gens = block.get("generators")
    kw = {"ball_cap": cap} if cap is not None else {}
    if fam is Family.PERMUTATION:
        if "perms" not in block:
            raise ValidationError("permutation groups need a 'perms' list")
        group = GroupModel.permutation(param, block["perms"], **kw)
    else:
        if "perms" in block:
            raise ValidationError(f"'perms' is only meaningful for permutation groups")
        group = {Family.LATTICE: GroupModel.lattice, Family.FREE: GroupModel.free,
                 Family.CYCLIC: GroupModel.cyclic}[fam](param, **kw)
    if gens is not None:
        group = group.with_generators(group.element(g) for g in gens)
    return group


def load_spec(raw: Any, cap: int | None = None) -> LoadedSpec:
    """Validate and build every model the spec describes."""
    raw = validate_spec(copy.deepcopy(raw))
    group = build_group(raw["group"], cap)
    out = LoadedSpec(raw, group)
    if "action" in raw:
        blk = raw["action"]
        points = blk["points"]
        basis = blk.get("open_basis", [[p] for p in points])
        space = FiniteSpace(tuple(points), tuple(tuple(m) for m in basis))
        maps = {}
        for entry in blk["generator_maps"]:
            g = group.element(entry["element"])
            if g in maps:
                raise ValidationError(f"generator {entry['element']!r} mapped twice")
            maps[g] = entry["map"]
        out.action = FiniteAction.from_labels(group, space, maps)
        if "cover" in blk:
            out.cover = Cover.from_labels(space, blk["cover"])
        if "observables" in raw:
            tables = {}
            for ob in raw["observables"]:
                if ob["name"] in tables:
                    raise ValidationError(f"observable {ob['name']!r} given twice")
                if len(ob["values"]) != len(points):
                    raise ValidationError(
                        f"observable {ob['name']!r} has {len(ob['values'])} values for {len(points)} points")
                tables[ob["name"]] = dict(zip(points, ob["values"]))
            out.observables = ObservableSet.from_tables(space, tables)
    elif "subshift" in raw:
        blk = raw["subshift"]
        forbidden = []
        for pat in blk.get("forbidden", []):
            forbidden.append(tuple((group.element(c["element"]), c["symbol"]) for c in pat))
        out.subshift = SubshiftModel(tuple(blk["alphabet"]), group, tuple(forbidden))
    return out
