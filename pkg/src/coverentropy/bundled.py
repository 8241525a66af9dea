"""Bundled example specs.

Finite actions: rotation of four points by Z/4, a swap of two points by Z/2
and the trivial Z-action on three points.  Subshifts: the full 2-shift and
the golden-mean shift on Z.  Group-only specs for Z and F_2 feed the dual
ball lower bound.
"""

from __future__ import annotations

import copy

_EXAMPLES: dict[str, dict] = {
    "rotation4": {
        "version": 1,
        "name": "Z/4 rotating four discrete points",
        "group": {"family": "cyclic", "param": 4, "generators": [0, 1, 3]},
        "action": {
            "points": [0, 1, 2, 3],
            "generator_maps": [
                {"element": 0, "map": [0, 1, 2, 3]},
                {"element": 1, "map": [1, 2, 3, 0]},
                {"element": 3, "map": [3, 0, 1, 2]},
            ],
            "cover": [[0, 1], [1, 2], [2, 3], [3, 0]],
        },
        "observables": [
            {"name": "at0", "values": [1, 0, 0, 0]},
            {"name": "height", "values": ["1/2", 0, "-1/2", 0]},
        ],
    },
    "swap2": {
        "version": 1,
        "name": "Z/2 swapping two discrete points",
        "group": {"family": "cyclic", "param": 2, "generators": [0, 1]},
        "action": {
            "points": ["a", "b"],
            "generator_maps": [
                {"element": 0, "map": ["a", "b"]},
                {"element": 1, "map": ["b", "a"]},
            ],
        },
        "observables": [{"name": "at_a", "values": [1, 0]}],
    },
    "trivial_z": {
        "version": 1,
        "name": "trivial Z-action on a three-point Sierpinski-type space",
        "group": {"family": "integer_lattice", "param": 1, "generators": [[0], [1], [-1]]},
        "action": {
            "points": ["p", "q", "r"],
            "open_basis": [["p"], ["p", "q"], ["p", "q", "r"], ["r"]],
            "generator_maps": [
                {"element": [0], "map": ["p", "q", "r"]},
                {"element": [1], "map": ["p", "q", "r"]},
                {"element": [-1], "map": ["p", "q", "r"]},
            ],
        },
        "observables": [{"name": "at_r", "values": [0, 0, 1]}],
    },
    "full_shift": {
        "version": 1,
        "name": "full 2-shift on Z",
        "group": {"family": "integer_lattice", "param": 1},
        "subshift": {"alphabet": [0, 1]},
    },
    "golden_mean": {
        "version": 1,
        "name": "golden-mean shift on Z",
        "group": {"family": "integer_lattice", "param": 1},
        "subshift": {
            "alphabet": [0, 1],
            "forbidden": [[{"element": [0], "symbol": 1}, {"element": [1], "symbol": 1}]],
        },
    },
    "z_line": {
        "version": 1,
        "name": "Z with standard generators",
        "group": {"family": "integer_lattice", "param": 1},
    },
    "free2": {
        "version": 1,
        "name": "free group of rank 2 with standard generators",
        "group": {"family": "free_group", "param": 2},
    },
    "cyclic6": {
        "version": 1,
        "name": "Z/6 (finite, for error paths)",
        "group": {"family": "cyclic", "param": 6},
    },
}

FINITE_ACTIONS = ("rotation4", "swap2", "trivial_z")
SYMMETRIC_FINITE_ACTIONS = FINITE_ACTIONS


def names() -> list[str]:
    return sorted(_EXAMPLES)


def get(name: str) -> dict:
    """A deep copy of the named spec."""
    if name not in _EXAMPLES:
        raise KeyError(f"no bundled example {name!r}; choose from {names()}")
    return copy.deepcopy(_EXAMPLES[name])
