"""Built-in example transducers.

All read binary digits, least significant first. Final outputs not shown
in the source drawings are 0.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import BadParam, UnknownBuiltin
from .model import Transducer, parse_rational


def naf() -> Transducer:
    """Hamming weight of the non-adjacent form."""
    return Transducer.from_edges(
        3,
        [
            (1, 1, 0, 0),
            (1, 2, 1, 1),
            (2, 1, 0, 0),
            (2, 3, 1, 0),
            (3, 2, 0, 1),
            (3, 3, 1, 0),
        ],
        {1: 0, 2: 0, 3: 1},
    )


def wnaf(w: int = 2) -> Transducer:
    """Hamming weight of the width-``w`` non-adjacent form (``w+1`` states).

    State 1 idles on zeros; a 1 emits the digit and moves through the chain
    ``2 -> ... -> w``; state ``w+1`` absorbs a carry.
    """
    if not isinstance(w, int) or w < 2:
        raise BadParam(f"wnaf needs an integer w >= 2, got {w!r}")
    edges = [(1, 1, 0, 0), (1, 2, 1, 1)]
    for s in range(2, w):
        edges += [(s, s + 1, 0, 0), (s, s + 1, 1, 0)]
    edges += [
        (w, 1, 0, 0),
        (w, w + 1, 1, 0),
        (w + 1, w + 1, 1, 0),
        (w + 1, 2, 0, 1),
    ]
    finals = {s: 0 for s in range(1, w + 2)}
    finals[w + 1] = 1
    return Transducer.from_edges(w + 1, edges, finals)


def gray() -> Transducer:
    """Gray code; state 1 is transient and writes nothing."""
    return Transducer.from_edges(
        3,
        [
            (1, 2, 0, 0),
            (1, 3, 1, 0),
            (2, 2, 0, 0),
            (2, 3, 1, 1),
            (3, 3, 1, 0),
            (3, 2, 0, 1),
        ],
        {1: 0, 2: 0, 3: 1},
    )


def block01() -> Transducer:
    """Number of 01-blocks."""
    return Transducer.from_edges(
        2,
        [(1, 1, 0, 0), (1, 2, 1, 0), (2, 2, 1, 0), (2, 1, 0, 1)],
        {1: 0, 2: 0},
    )


def block11() -> Transducer:
    """Number of 11-blocks."""
    return Transducer.from_edges(
        2,
        [(1, 1, 0, 0), (1, 2, 1, 0), (2, 2, 1, 1), (2, 1, 0, 0)],
        {1: 0, 2: 0},
    )


def block10m01() -> Transducer:
    """Number of 10-blocks minus number of 01-blocks.

    State 2 remembers a 0 was read last, state 3 a 1.
    """
    return Transducer.from_edges(
        3,
        [
            (1, 2, 0, 0),
            (1, 3, 1, 0),
            (2, 2, 0, 0),
            (2, 3, 1, 1),
            (3, 3, 1, 0),
            (3, 2, 0, -1),
        ],
        {1: 0, 2: 0, 3: 0},
    )


def simple(a1=0, a2=0, a3=0, a4=0) -> Transducer:
    """Two states with symbolic outputs: loops 0|a1 at 1 and 1|a2 at 2,
    1|a3 from 1 to 2 and 0|a4 back."""
    return Transducer.from_edges(
        2,
        [(1, 1, 0, a1), (1, 2, 1, a3), (2, 2, 1, a2), (2, 1, 0, a4)],
        {1: 0, 2: 0},
    )


BUILTINS = {
    "naf": naf,
    "wnaf": wnaf,
    "gray": gray,
    "block01": block01,
    "block11": block11,
    "block10m01": block10m01,
    "simple": simple,
}


def _parse_tuple(text: str) -> list[Fraction]:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    return [parse_rational(p) for p in body.split(",") if p.strip()]


def parse_params(pairs) -> dict[str, str]:
    """``["w=4", "a=(1,0,0,0)"]`` -> ``{"w": "4", "a": "(1,0,0,0)"}``."""
    out = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise BadParam(f"expected key=value, got {pair!r}")
        out[key.strip()] = value.strip()
    return out


def builtin_generators(name: str, params=None) -> Transducer:
    """Instantiate a builtin by name with string-valued parameters."""
    params = dict(params or {})
    if name not in BUILTINS:
        raise UnknownBuiltin(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
    try:
        if name == "wnaf":
            raw = params.pop("w", "2")
            if not re.fullmatch(r"\s*\d+\s*", str(raw)):
                raise BadParam(f"w must be an integer, got {raw!r}")
            result = wnaf(int(raw))
        elif name == "simple":
            values = [Fraction(0)] * 4
            if "a" in params:
                values = _parse_tuple(params.pop("a"))
                if len(values) != 4:
                    raise BadParam(f"simple needs a=(a1,a2,a3,a4), got {len(values)} values")
            for i in range(4):
                key = f"a{i + 1}"
                if key in params:
                    values[i] = parse_rational(params.pop(key), key)
            result = simple(*values)
        else:
            result = BUILTINS[name]()
    except BadParam:
        raise
    except ValueError as exc:
        raise BadParam(str(exc)) from None
    if params:
        raise BadParam(f"unexpected parameter(s) for {name}: {', '.join(sorted(params))}")
    return result
