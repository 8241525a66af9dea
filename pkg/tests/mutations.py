"""Single-bit mutations of JSON report leaves."""

from __future__ import annotations

import copy
import re
import struct

_RATIONAL = re.compile(r"^(-?)(\d+)/(\d+)$")


def leaves(obj, path=()):
    """``(path, value)`` for every scalar leaf, depth first in key order."""
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from leaves(obj[k], path + (k,))
    elif isinstance(obj, list):
        for i, x in enumerate(obj):
            yield from leaves(x, path + (i,))
    else:
        yield path, obj


def flip(value):
    """Flip one bit of a scalar's natural encoding; None if not mutable."""
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return value ^ 1
    if isinstance(value, float):
        (bits,) = struct.unpack("<Q", struct.pack("<d", value))
        return struct.unpack("<d", struct.pack("<Q", bits ^ 1))[0]
    if isinstance(value, str):
        m = _RATIONAL.match(value)
        if m:
            return f"{m.group(1)}{int(m.group(2)) ^ 1}/{m.group(3)}"
        if value:
            return chr(ord(value[0]) ^ 1) + value[1:]
    return None


def mutate(report: dict, path: tuple) -> dict:
    out = copy.deepcopy(report)
    node = out
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = flip(node[path[-1]])
    return out


def certificate_paths(report: dict):
    """Leaves under ``results`` (values, covers, patterns, pairings, witnesses)."""
    return [p for p, v in leaves(report["results"], ("results",)) if flip(v) is not None]
