"""Independent reference computations and random machine generators for tests."""

from fractions import Fraction
from itertools import permutations, product
from random import Random

import networkx as nx
import sympy

from tmoments.errors import StructureError
from tmoments.model import Transducer, final_component, period

INPUT_POOL = [Fraction(x) for x in (-2, -1, 0, 1, 2, 3)] + [Fraction(1, 2), Fraction(-3, 2)]
OUTPUT_POOL = [Fraction(x) for x in (-2, -1, 0, 1, 2)] + [Fraction(1, 2), Fraction(-1, 3)]


def is_valid(t):
    try:
        fc = final_component(t)
    except StructureError:
        return False
    return period(fc) == 1


def random_machine(rng: Random, max_states=5, max_K=3, mode="random", strongly_connected=False,
                   outputs=None):
    """A random finally connected, finally aperiodic machine.

    ``mode`` chooses the output labels:
      random      independent draws (from ``outputs`` if given)
      coboundary  k + phi(s) - phi(t): every cycle has output k*length
      rank1       a + b*eps + phi(s) - phi(t): Sigma is singular
    """
    while True:
        S = rng.randint(1, max_states)
        K = rng.randint(2, max_K)
        alphabet = rng.sample(INPUT_POOL, K)
        succ = {(s, a): rng.randint(1, S) for s in range(1, S + 1) for a in alphabet}
        phi = {s: rng.choice(OUTPUT_POOL) for s in range(1, S + 1)}
        k = rng.choice(OUTPUT_POOL)
        b = rng.choice([Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(2)])
        edges = []
        for (s, a), t in succ.items():
            if mode == "coboundary":
                out = k + phi[s] - phi[t]
            elif mode == "rank1":
                out = k + b * a + phi[s] - phi[t]
            else:
                out = rng.choice(outputs or OUTPUT_POOL)
            edges.append((s, t, a, out))
        finals = {s: rng.choice(OUTPUT_POOL) for s in range(1, S + 1)}
        m = Transducer.from_edges(S, edges, finals)
        if not is_valid(m):
            continue
        if strongly_connected and final_component(m).N != S:
            continue
        return m


def corpus(seed=2024, size=120, **kw):
    rng = Random(seed)
    modes = ("random", "coboundary", "rank1")
    return [random_machine(rng, mode=modes[i % 3], **kw) for i in range(size)]


def brute_force_cycles(states, transitions):
    """Vertex-disjoint closed walks found by trying every vertex ordering."""
    between = {}
    for e in transitions:
        between.setdefault((e.source, e.target), []).append(e)
    found = set()
    states = sorted(states)
    for r in range(1, len(states) + 1):
        for seq in permutations(states, r):
            if seq[0] != min(seq):
                continue
            hops = [(seq[i], seq[(i + 1) % r]) for i in range(r)]
            if all(h in between for h in hops):
                for pick in product(*(between[h] for h in hops)):
                    found.add(tuple(pick))
    return found


def brute_force_digraph_classes(fc):
    """Count spanning functional digraphs by weak-component count, via networkx."""
    out = fc.outgoing()
    counts = {}
    for picks in product(*(out[s] for s in fc.states)):
        g = nx.MultiDiGraph()
        g.add_nodes_from(fc.states)
        g.add_edges_from((e.source, e.target) for e in picks)
        c = nx.number_weakly_connected_components(g)
        counts[c] = counts.get(c, 0) + 1
    return counts


X, Y, Z = sympy.symbols("x y z")


def sympy_characteristic(fc):
    """Symbolic det(I - z/K * sum x^eps M_eps(y)) for the final component."""
    idx = fc.index()
    n = fc.N
    m = sympy.eye(n)
    for e in fc.transitions:
        w = Z / fc.K * X ** sympy.Rational(e.input.numerator, e.input.denominator) * Y ** sympy.Rational(
            e.output.numerator, e.output.denominator
        )
        m[idx[e.source], idx[e.target]] -= w
    return m.det(method="bareiss")


def sympy_partials(fc):
    f = sympy_characteristic(fc)
    at = {X: 1, Y: 1, Z: 1}

    def d(*vs):
        expr = f
        for v in vs:
            expr = sympy.diff(expr, v)
        val = sympy.nsimplify(sympy.simplify(expr.subs(at)))
        return Fraction(int(val.p), int(val.q))

    return {
        "f": d(),
        "fx": d(X), "fy": d(Y), "fz": d(Z),
        "fxx": d(X, X), "fxy": d(X, Y), "fxz": d(X, Z),
        "fyy": d(Y, Y), "fyz": d(Y, Z), "fzz": d(Z, Z),
    }


def running_max_argmax(values):
    """1-based index where the maximum of ``values`` is first attained."""
    best = max(values)
    return values.index(best) + 1
