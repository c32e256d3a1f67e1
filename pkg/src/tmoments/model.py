"""Transducer data model, validation, final component, period and execution.

States are numbered ``1..S`` and state ``1`` is the initial state. Every
label is an exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import (
    AlphabetTooSmall,
    DuplicateTransition,
    Incomplete,
    NotFinallyAperiodic,
    NotFinallyConnected,
    SpecParseError,
    SymbolNotInAlphabet,
    UnknownState,
    ValidationError,
)


def parse_rational(value, location=None) -> Fraction:
    """Parse ``"p/q"``, an integer string, a decimal string or an int."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise SpecParseError(f"expected a rational, got {value!r}", location)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise SpecParseError(f"not a rational number: {value!r}", location) from None
    # floats are rejected: their binary value is rarely what was meant
    raise SpecParseError(
        f"expected a rational as int or string, got {type(value).__name__} {value!r}",
        location,
    )


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, order=True)
class Transition:
    source: int
    target: int
    input: Fraction
    output: Fraction

    def __repr__(self):
        return (
            f"Transition({self.source}->{self.target}, "
            f"{format_rational(self.input)}|{format_rational(self.output)})"
        )


@dataclass(frozen=True)
class Transducer:
    """A complete, deterministic, subsequential transducer.

    Use :func:`build_transducer` or :meth:`from_edges` rather than calling
    the constructor directly; those validate the input.
    """

    state_count: int
    transitions: tuple[Transition, ...]
    final_outputs: Mapping[int, Fraction]
    input_alphabet: tuple[Fraction, ...]
    initial: int = 1
    _delta: Mapping = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        delta = {(e.source, e.input): e for e in self.transitions}
        object.__setattr__(self, "_delta", delta)

    @classmethod
    def from_edges(cls, state_count, edges, final_outputs=None, input_alphabet=None):
        """Build from ``(source, target, input, output)`` tuples."""
        spec = {
            "states": state_count,
            "initial": 1,
            "transitions": [
                {"from": s, "to": t, "input": i, "output": o} for s, t, i, o in edges
            ],
            "final_outputs": dict(final_outputs or {}),
        }
        if input_alphabet is not None:
            spec["input_alphabet"] = list(input_alphabet)
        return build_transducer(spec)

    @property
    def states(self) -> range:
        return range(1, self.state_count + 1)

    @property
    def K(self) -> int:
        return len(self.input_alphabet)

    @property
    def alphabet_too_small(self) -> bool:
        return len(self.input_alphabet) < 2

    def require_moment_ready(self):
        if self.alphabet_too_small:
            raise AlphabetTooSmall(
                f"moment analysis needs at least 2 input symbols, got {self.K}"
            )

    def step(self, state: int, symbol: Fraction) -> Transition:
        try:
            return self._delta[(state, symbol)]
        except KeyError:
            raise SymbolNotInAlphabet(
                f"symbol {format_rational(Fraction(symbol))} not in input alphabet"
            ) from None

    def outgoing(self, state: int) -> list[Transition]:
        return [self._delta[(state, a)] for a in self.input_alphabet]

    def final_output(self, state: int) -> Fraction:
        return self.final_outputs.get(state, Fraction(0))

    def map_outputs(self, fn, final_fn=None) -> "Transducer":
        """Copy of this machine with each transition output replaced by ``fn(e)``."""
        final_fn = final_fn or (lambda s, a: a)
        return Transducer.from_edges(
            self.state_count,
            [(e.source, e.target, e.input, fn(e)) for e in self.transitions],
            {s: final_fn(s, self.final_output(s)) for s in self.states},
        )

    def to_dict(self) -> dict:
        return {
            "states": self.state_count,
            "initial": self.initial,
            "input_alphabet": [format_rational(a) for a in self.input_alphabet],
            "transitions": [
                {
                    "from": e.source,
                    "to": e.target,
                    "input": format_rational(e.input),
                    "output": format_rational(e.output),
                }
                for e in self.transitions
            ],
            "final_outputs": {
                str(s): format_rational(self.final_output(s)) for s in self.states
            },
        }


def build_transducer(spec: Mapping) -> Transducer:
    """Validate a JSON-compatible description and return a :class:`Transducer`.

    Determinism and completeness are enforced. An input alphabet with fewer
    than two symbols is accepted here and only rejected by moment analysis.
    """
    if not isinstance(spec, Mapping):
        raise SpecParseError("transducer description must be an object")
    for key in ("states", "transitions"):
        if key not in spec:
            raise SpecParseError(f"missing key {key!r}")
    S = spec["states"]
    if isinstance(S, bool) or not isinstance(S, int) or S < 1:
        raise SpecParseError(f"'states' must be a positive integer, got {S!r}", "states")
    if spec.get("initial", 1) != 1:
        raise SpecParseError("the initial state must be 1", "initial")

    transitions = []
    seen = {}
    for idx, raw in enumerate(spec["transitions"]):
        loc = f"transitions[{idx}]"
        if not isinstance(raw, Mapping):
            raise SpecParseError("transition must be an object", loc)
        missing = [k for k in ("from", "to", "input", "output") if k not in raw]
        if missing:
            raise SpecParseError(f"missing field(s) {', '.join(missing)}", loc)
        src, dst = raw["from"], raw["to"]
        for name, s in (("from", src), ("to", dst)):
            if isinstance(s, bool) or not isinstance(s, int) or not 1 <= s <= S:
                raise UnknownState(f"{name}={s!r} is not a state in 1..{S}", loc)
        e = Transition(
            src,
            dst,
            parse_rational(raw["input"], f"{loc}.input"),
            parse_rational(raw["output"], f"{loc}.output"),
        )
        key = (e.source, e.input)
        if key in seen:
            raise DuplicateTransition(
                f"state {e.source} already has a transition on input "
                f"{format_rational(e.input)} (see transitions[{seen[key]}])",
                loc,
            )
        seen[key] = idx
        transitions.append(e)

    derived = sorted({e.input for e in transitions})
    if "input_alphabet" in spec:
        declared = sorted(
            {
                parse_rational(a, f"input_alphabet[{i}]")
                for i, a in enumerate(spec["input_alphabet"])
            }
        )
        extra = set(derived) - set(declared)
        if extra:
            sym = format_rational(min(extra))
            raise SymbolNotInAlphabet(
                f"transition input {sym} is not in the declared alphabet", "input_alphabet"
            )
        alphabet = declared
    else:
        alphabet = derived

    for s in range(1, S + 1):
        for a in alphabet:
            if (s, a) not in seen:
                raise Incomplete(
                    f"state {s} has no transition on input {format_rational(a)}",
                    "transitions",
                )

    finals = {}
    for key, value in (spec.get("final_outputs") or {}).items():
        loc = f"final_outputs[{key!r}]"
        try:
            s = int(key)
        except (TypeError, ValueError):
            raise SpecParseError("final output key must be a state number", loc) from None
        if not 1 <= s <= S:
            raise UnknownState(f"{s} is not a state in 1..{S}", loc)
        finals[s] = parse_rational(value, loc)
    for s in range(1, S + 1):
        finals.setdefault(s, Fraction(0))

    transitions.sort(key=lambda e: (e.source, e.input))
    return Transducer(S, tuple(transitions), finals, tuple(alphabet))


def load_transducer(path) -> Transducer:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    try:
        return build_transducer(spec)
    except ValidationError as exc:
        raise type(exc)(str(exc), str(path)) from None
    except SpecParseError as exc:
        raise type(exc)(str(exc), str(path)) from None


def underlying_graph(states: Iterable[int], transitions: Iterable[Transition]) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(states)
    g.add_edges_from((e.source, e.target) for e in transitions)
    return g


@dataclass(frozen=True)
class FinalComponent:
    """The unique sink strongly connected component of a transducer."""

    states: tuple[int, ...]
    transitions: tuple[Transition, ...]
    input_alphabet: tuple[Fraction, ...]
    final_outputs: Mapping[int, Fraction] = field(default_factory=dict, compare=False)

    @property
    def N(self) -> int:
        return len(self.states)

    @property
    def K(self) -> int:
        return len(self.input_alphabet)

    def index(self) -> dict[int, int]:
        return {s: i for i, s in enumerate(self.states)}

    def outgoing(self) -> dict[int, list[Transition]]:
        out = {s: [] for s in self.states}
        for e in self.transitions:
            out[e.source].append(e)
        return out

    def as_transducer(self) -> Transducer:
        """The component as a stand-alone machine, states renumbered from 1."""
        new = {s: i + 1 for i, s in enumerate(self.states)}
        return Transducer.from_edges(
            self.N,
            [(new[e.source], new[e.target], e.input, e.output) for e in self.transitions],
            {new[s]: self.final_outputs.get(s, Fraction(0)) for s in self.states},
        )


def final_component(t: Transducer) -> FinalComponent:
    g = underlying_graph(t.states, t.transitions)
    cond = nx.condensation(g)
    sinks = [c for c in cond.nodes if cond.out_degree(c) == 0]
    if len(sinks) != 1:
        groups = sorted(sorted(cond.nodes[c]["members"]) for c in sinks)
        raise NotFinallyConnected(
            f"{len(sinks)} sink components {groups}; no state is reachable from all others"
        )
    members = tuple(sorted(cond.nodes[sinks[0]]["members"]))
    inside = set(members)
    edges = tuple(e for e in t.transitions if e.source in inside)
    return FinalComponent(
        members,
        edges,
        t.input_alphabet,
        {s: t.final_output(s) for s in members},
    )


def period(fc: FinalComponent) -> int:
    """gcd of closed-walk lengths, via BFS depth differences."""
    out = fc.outgoing()
    root = fc.states[0]
    depth = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for e in out[u]:
            if e.target not in depth:
                depth[e.target] = depth[u] + 1
                queue.append(e.target)
    p = 0
    for e in fc.transitions:
        p = gcd(p, abs(depth[e.source] + 1 - depth[e.target]))
    return p


def require_aperiodic(fc: FinalComponent) -> None:
    p = period(fc)
    if p != 1:
        raise NotFinallyAperiodic(f"final component {list(fc.states)} has period {p}")


def run(t: Transducer, word: Sequence) -> tuple[Fraction, list[int]]:
    """Feed ``word`` to ``t`` in the given order.

    Returns the output sum (including the final output of the last state)
    and the visited states, starting with the initial state.
    """
    state = t.initial
    path = [state]
    total = Fraction(0)
    for symbol in word:
        e = t.step(state, Fraction(symbol))
        total += e.output
        state = e.target
        path.append(state)
    return total + t.final_output(state), path
