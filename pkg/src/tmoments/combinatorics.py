"""Functional digraphs, simple cycles and cycle-based certificates.

Everything here works on transitions rather than successor states, so
parallel transitions with different labels are kept apart.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

import networkx as nx

from .errors import (
    BudgetExceeded,
    CycleBudgetExceeded,
    IdentityViolated,
    InternalMismatch,
    NotWeaklyConnected,
    PreconditionViolated,
)
from .model import FinalComponent, Transducer, Transition, underlying_graph
from .moments import Moments, characteristic_jet, moments_of

DEFAULT_DIGRAPH_BUDGET = 10**7
DEFAULT_CYCLE_BUDGET = 10**6

ZERO = Fraction(0)


@dataclass(frozen=True)
class Cycle:
    edges: tuple[Transition, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def input_sum(self) -> Fraction:
        return sum((e.input for e in self.edges), ZERO)

    @property
    def output_sum(self) -> Fraction:
        return sum((e.output for e in self.edges), ZERO)

    @property
    def states(self) -> tuple[int, ...]:
        return tuple(e.source for e in self.edges)

    def weight(self, g: Callable[[Transition], Fraction]) -> Fraction:
        return sum((g(e) for e in self.edges), ZERO)

    def to_dict(self) -> dict:
        from .model import format_rational

        return {
            "states": list(self.states),
            "length": self.length,
            "input_sum": format_rational(self.input_sum),
            "output_sum": format_rational(self.output_sum),
        }


@dataclass(frozen=True)
class FunctionalDigraph:
    choice: dict  # state -> chosen outgoing Transition
    cycles: tuple[Cycle, ...]

    @property
    def component_count(self) -> int:
        # every weak component of a functional digraph holds exactly one cycle
        return len(self.cycles)


@dataclass(frozen=True)
class Certificate:
    verdict: bool
    witness: Optional[tuple] = None
    counterexample: Optional[Cycle] = None
    reference: Optional[Cycle] = None


# edge-weight selectors
def ONE(e: Transition) -> Fraction:
    return Fraction(1)


def INPUT(e: Transition) -> Fraction:
    return e.input


def OUTPUT(e: Transition) -> Fraction:
    return e.output


def centered(g, mean):
    """Selector ``e -> g(e) - mean``."""
    mean = Fraction(mean)
    return lambda e: g(e) - mean


# --- functional digraphs -----------------------------------------------------


def _check_budget(fc: FinalComponent, budget: int) -> int:
    total = 1
    for edges in fc.outgoing().values():
        total *= len(edges)
    if total > budget:
        raise BudgetExceeded(
            f"{total} choice maps (K^N with K={fc.K}, N={fc.N}) exceed the budget of {budget}"
        )
    return total


def _cycles_of_choice(states: Sequence[int], choice: dict) -> tuple[Cycle, ...]:
    color = {}
    cycles = []
    for start in states:
        if start in color:
            continue
        walk = []
        s = start
        while s not in color:
            color[s] = start
            walk.append(s)
            s = choice[s].target
        if color[s] == start:
            # closed a new cycle inside this walk
            loop = walk[walk.index(s):]
            cycles.append(Cycle(tuple(choice[v] for v in loop)))
    return tuple(cycles)


def iter_functional_digraphs(fc: FinalComponent, start=0, stop=None):
    """Yield every spanning functional digraph, in a fixed order.

    ``start``/``stop`` select a slice of the enumeration by index.
    """
    out = fc.outgoing()
    states = fc.states
    options = [out[s] for s in states]
    for idx, picks in enumerate(product(*options)):
        if idx < start:
            continue
        if stop is not None and idx >= stop:
            break
        choice = dict(zip(states, picks))
        yield FunctionalDigraph(choice, _cycles_of_choice(states, choice))


def spanning_functional_digraphs(fc: FinalComponent, budget: int = DEFAULT_DIGRAPH_BUDGET):
    """Split the spanning functional digraphs into those with one and two components."""
    _check_budget(fc, budget)
    d1, d2 = [], []
    for d in iter_functional_digraphs(fc):
        if d.component_count == 1:
            d1.append(d)
        elif d.component_count == 2:
            d2.append(d)
    return d1, d2


def digraph_sums(D1, D2, g, h):
    """``(g(D1), gh(D1), gh(D2))``; the last runs over ordered pairs of distinct cycles."""
    g_d1 = ZERO
    gh_d1 = ZERO
    for d in D1:
        for c in d.cycles:
            gc = c.weight(g)
            g_d1 += gc
            gh_d1 += gc * c.weight(h)
    gh_d2 = ZERO
    for d in D2:
        for i, c1 in enumerate(d.cycles):
            for j, c2 in enumerate(d.cycles):
                if i != j:
                    gh_d2 += c1.weight(g) * c2.weight(h)
    return g_d1, gh_d1, gh_d2


# Streaming aggregates over the basis selectors (1, eps, delta); centred sums
# follow by bilinearity so a single enumeration pass suffices.
_BASIS = ("one", "eps", "delta")


def _zero_aggregate():
    return {
        "count1": 0,
        "count2": 0,
        "d1": [ZERO] * 3,
        "d1_pair": [[ZERO] * 3 for _ in range(3)],
        "d2_pair": [[ZERO] * 3 for _ in range(3)],
    }


def _aggregate_range(fc: FinalComponent, start: int, stop: Optional[int]):
    agg = _zero_aggregate()
    for d in iter_functional_digraphs(fc, start, stop):
        k = d.component_count
        if k > 2:
            continue
        vals = [(Fraction(c.length), c.input_sum, c.output_sum) for c in d.cycles]
        if k == 1:
            agg["count1"] += 1
            (v,) = vals
            for a in range(3):
                agg["d1"][a] += v[a]
                for b in range(3):
                    agg["d1_pair"][a][b] += v[a] * v[b]
        else:
            agg["count2"] += 1
            p, q = vals
            for a in range(3):
                for b in range(3):
                    agg["d2_pair"][a][b] += p[a] * q[b] + q[a] * p[b]
    return agg


def _merge(aggs):
    total = _zero_aggregate()
    for agg in aggs:
        total["count1"] += agg["count1"]
        total["count2"] += agg["count2"]
        for a in range(3):
            total["d1"][a] += agg["d1"][a]
            for b in range(3):
                total["d1_pair"][a][b] += agg["d1_pair"][a][b]
                total["d2_pair"][a][b] += agg["d2_pair"][a][b]
    return total


def _aggregate_range_star(args):
    return _aggregate_range(*args)


def digraph_aggregates(fc: FinalComponent, budget: int = DEFAULT_DIGRAPH_BUDGET, workers: int = 1):
    """Basis sums over D1 and D2, optionally split across processes.

    The result does not depend on ``workers``; the reduction is exact.
    """
    total = _check_budget(fc, budget)
    if workers <= 1 or total < 2 * workers:
        return _aggregate_range(fc, 0, None)
    step = -(-total // workers)
    jobs = [(fc, lo, min(lo + step, total)) for lo in range(0, total, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return _merge(pool.map(_aggregate_range_star, jobs))


def _bilinear(pair, wg, wh):
    return sum((wg[a] * wh[b] * pair[a][b] for a in range(3) for b in range(3)), ZERO)


def moments_combinatorial(
    fc: FinalComponent, budget: int = DEFAULT_DIGRAPH_BUDGET, workers: int = 1, aggregates=None
) -> Moments:
    """The five constants as weighted sums over spanning functional digraphs."""
    agg = aggregates or digraph_aggregates(fc, budget, workers)
    one_d1, eps_d1, delta_d1 = agg["d1"]
    e1 = eps_d1 / one_d1
    e2 = delta_d1 / one_d1
    # selector coefficients in the (1, eps, delta) basis
    eps_c = (-e1, Fraction(1), ZERO)
    delta_c = (-e2, ZERO, Fraction(1))

    def form(wg, wh):
        return (_bilinear(agg["d1_pair"], wg, wh) - _bilinear(agg["d2_pair"], wg, wh)) / one_d1

    return Moments(e1, e2, form(eps_c, eps_c), form(delta_c, delta_c), form(eps_c, delta_c))


IDENTITY_NAMES = ("fx", "fy", "fz", "fxy", "fxz", "fyz", "fxx+fx", "fyy+fy", "fzz+fz")


def verify_derivative_identities(
    fc: FinalComponent, budget: int = DEFAULT_DIGRAPH_BUDGET, strict: bool = True, aggregates=None
) -> dict:
    """Compare the jet partials of ``f`` with their functional-digraph expressions.

    Returns ``{name: (jet_value, digraph_value, equal)}``. With ``strict``,
    any inequality raises :class:`IdentityViolated`.
    """
    agg = aggregates or digraph_aggregates(fc, budget)
    d = characteristic_jet(fc).partials()
    scale = Fraction(1, fc.K**fc.N)
    one, eps, delta = 0, 1, 2
    p1, p2 = agg["d1_pair"], agg["d2_pair"]

    def second(a, b):
        return scale * (p2[a][b] - p1[a][b])

    expected = {
        "fx": -scale * agg["d1"][eps],
        "fy": -scale * agg["d1"][delta],
        "fz": -scale * agg["d1"][one],
        "fxy": second(eps, delta),
        "fxz": second(eps, one),
        "fyz": second(delta, one),
        "fxx+fx": second(eps, eps),
        "fyy+fy": second(delta, delta),
        "fzz+fz": second(one, one),
    }
    actual = {
        "fx": d["fx"],
        "fy": d["fy"],
        "fz": d["fz"],
        "fxy": d["fxy"],
        "fxz": d["fxz"],
        "fyz": d["fyz"],
        "fxx+fx": d["fxx"] + d["fx"],
        "fyy+fy": d["fyy"] + d["fy"],
        "fzz+fz": d["fzz"] + d["fz"],
    }
    report = {name: (actual[name], expected[name], actual[name] == expected[name]) for name in IDENTITY_NAMES}
    if strict:
        bad = [name for name, (_, _, ok) in report.items() if not ok]
        if bad:
            a, b, _ = report[bad[0]]
            raise IdentityViolated(f"identity {bad[0]} fails: jet {a} != digraph sum {b}")
    return report


# --- cycles ----------------------------------------------------------------


def _canonical(vertex_cycle):
    i = vertex_cycle.index(min(vertex_cycle))
    return tuple(vertex_cycle[i:] + vertex_cycle[:i])


def simple_cycles(graph, budget: int = DEFAULT_CYCLE_BUDGET) -> list[Cycle]:
    """All simple directed cycles of a final component or a whole transducer.

    Parallel transitions give distinct cycles. The order is deterministic:
    by length, then by state sequence starting at the smallest state, then
    by the inputs of the chosen transitions.
    """
    if isinstance(graph, Transducer):
        states, transitions = list(graph.states), graph.transitions
    else:
        states, transitions = list(graph.states), graph.transitions
    between = {}
    for e in transitions:
        between.setdefault((e.source, e.target), []).append(e)
    g = underlying_graph(states, transitions)

    vertex_cycles = sorted((_canonical(c) for c in nx.simple_cycles(g)), key=lambda c: (len(c), c))
    cycles = []
    for vc in vertex_cycles:
        hops = [between[(vc[i], vc[(i + 1) % len(vc)])] for i in range(len(vc))]
        for choice in product(*hops):
            cycles.append(Cycle(tuple(choice)))
            if len(cycles) > budget:
                raise CycleBudgetExceeded(f"more than {budget} simple cycles")
    return cycles


def _linear_certificate(cycles, predict) -> Certificate:
    for c in cycles:
        if c.output_sum != predict(c):
            return Certificate(False, counterexample=c)
    return Certificate(True)


def _proportional_certificate(cycles) -> Certificate:
    if not cycles:
        return Certificate(True, witness=(ZERO,))
    first = cycles[0]
    k = first.output_sum / first.length
    cert = _linear_certificate(cycles, lambda c: k * c.length)
    if cert.verdict:
        return Certificate(True, witness=(k,), reference=first)
    return Certificate(False, witness=None, counterexample=cert.counterexample, reference=first)


def bounded_variance_certificate(fc: FinalComponent, budget: int = DEFAULT_CYCLE_BUDGET) -> Certificate:
    """Does every cycle of the final component have output sum ``k * length``?"""
    return _proportional_certificate(simple_cycles(fc, budget))


def quasi_deterministic_certificate(t: Transducer, budget: int = DEFAULT_CYCLE_BUDGET) -> Certificate:
    """Same test over all cycles of the whole machine."""
    g = underlying_graph(t.states, t.transitions)
    if not nx.is_weakly_connected(g):
        raise NotWeaklyConnected("the underlying graph of the transducer is not weakly connected")
    return _proportional_certificate(simple_cycles(t, budget))


def rank1_certificate(fc: FinalComponent, m: Moments, budget: int = DEFAULT_CYCLE_BUDGET) -> Certificate:
    """Test ``output(C) = a*len(C) + b*input(C)`` on every cycle with
    ``b = c/v1`` and ``a = e2 - b*e1``; the witness ``(a, b)`` is always reported."""
    b = m.c / m.v1
    a = m.e2 - b * m.e1
    cert = _linear_certificate(simple_cycles(fc, budget), lambda c: a * c.length + b * c.input_sum)
    return Certificate(cert.verdict, witness=(a, b), counterexample=cert.counterexample)


def closed_walk_spot_check(fc: FinalComponent, s: int, L: int, k) -> bool:
    """Check ``output(W) = k * len(W)`` for closed walks through ``s`` of length
    at most ``L`` that visit ``s`` only at their ends."""
    if s not in fc.states:
        raise PreconditionViolated(f"state {s} is not in the final component")
    if L < 1:
        raise PreconditionViolated("L must be at least 1")
    k = Fraction(k)
    out = fc.outgoing()
    # state -> set of (output - k*length) offsets over walks from s avoiding s
    frontier = {s: {ZERO}}
    for _ in range(L):
        nxt = {}
        for state, offsets in frontier.items():
            for e in out[state]:
                shifted = {x + e.output - k for x in offsets}
                if e.target == s:
                    if shifted != {ZERO}:
                        return False
                else:
                    nxt.setdefault(e.target, set()).update(shifted)
        frontier = nxt
        if not frontier:
            break
    return True


def zero_one_output_check(fc: FinalComponent) -> bool:
    """For {0,1} outputs: is the output variance constant zero?

    Cross-checks the answer against "all outputs are equal".
    """
    outputs = {e.output for e in fc.transitions}
    if not outputs <= {ZERO, Fraction(1)}:
        raise PreconditionViolated("all final-component outputs must be 0 or 1")
    bounded = moments_of(fc).v2 == 0
    if bounded != (len(outputs) == 1):
        raise InternalMismatch("v2 = 0 disagrees with the all-outputs-equal criterion")
    return bounded
