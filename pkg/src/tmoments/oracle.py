"""Exact finite-length moments of (Input, Output) over all K**n input words."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import BudgetExceeded
from .model import Transducer, run
from .moments import Moments

DEFAULT_ENUMERATION_BUDGET = 10**6


@dataclass(frozen=True)
class ExactMoments:
    n: int
    E_in: Fraction
    E_out: Fraction
    V_in: Fraction
    V_out: Fraction
    Cov: Fraction


@dataclass
class StateAccumulator:
    """Sums over all words of the current length whose path ends here."""

    count: int = 0
    s_in: Fraction = Fraction(0)
    s_out: Fraction = Fraction(0)
    s_in2: Fraction = Fraction(0)
    s_io: Fraction = Fraction(0)
    s_out2: Fraction = Fraction(0)

    def absorb(self, src: "StateAccumulator", eps: Fraction, delta: Fraction) -> None:
        """Add the words of ``src`` extended by one transition labelled eps|delta."""
        n, i, o = src.count, src.s_in, src.s_out
        self.count += n
        self.s_in += i + eps * n
        self.s_out += o + delta * n
        self.s_in2 += src.s_in2 + 2 * eps * i + eps * eps * n
        self.s_io += src.s_io + eps * o + delta * i + eps * delta * n
        self.s_out2 += src.s_out2 + 2 * delta * o + delta * delta * n


def _from_totals(n, words, s_in, s_out, s_in2, s_io, s_out2) -> ExactMoments:
    w = Fraction(words)
    e_in, e_out = s_in / w, s_out / w
    return ExactMoments(
        n,
        e_in,
        e_out,
        s_in2 / w - e_in * e_in,
        s_out2 / w - e_out * e_out,
        s_io / w - e_in * e_out,
    )


def _accumulators(t: Transducer, n: int) -> dict[int, StateAccumulator]:
    acc = {t.initial: StateAccumulator(count=1)}
    for _ in range(n):
        nxt = {}
        for s, a in acc.items():
            for e in t.outgoing(s):
                nxt.setdefault(e.target, StateAccumulator()).absorb(a, e.input, e.output)
        acc = nxt
    return acc


def _finish(t: Transducer, n: int, acc) -> ExactMoments:
    tot = [0, Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(0)]
    for s, a in acc.items():
        f = t.final_output(s)
        tot[0] += a.count
        tot[1] += a.s_in
        tot[2] += a.s_out + f * a.count
        tot[3] += a.s_in2
        tot[4] += a.s_io + f * a.s_in
        tot[5] += a.s_out2 + 2 * f * a.s_out + f * f * a.count
    return _from_totals(n, *tot)


def exact_moments_dp(t: Transducer, n: int) -> ExactMoments:
    """Moments at length ``n`` in O(n*S*K) exact operations."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _finish(t, n, _accumulators(t, n))


def exact_moments_series(t: Transducer, n_max: int) -> list[ExactMoments]:
    """``exact_moments_dp`` for every length 0..n_max in one sweep."""
    acc = {t.initial: StateAccumulator(count=1)}
    out = [_finish(t, 0, acc)]
    for n in range(1, n_max + 1):
        nxt = {}
        for s, a in acc.items():
            for e in t.outgoing(s):
                nxt.setdefault(e.target, StateAccumulator()).absorb(a, e.input, e.output)
        acc = nxt
        out.append(_finish(t, n, acc))
    return out


def exact_moments_enumeration(
    t: Transducer, n: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> ExactMoments:
    """Same contract as :func:`exact_moments_dp`, by running every word."""
    words = t.K**n
    if words > budget:
        raise BudgetExceeded(f"{words} input words exceed the enumeration budget of {budget}")
    tot = [0, Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(0)]
    for word in product(t.input_alphabet, repeat=n):
        i = sum(word, Fraction(0))
        o, _ = run(t, word)
        tot[0] += 1
        tot[1] += i
        tot[2] += o
        tot[3] += i * i
        tot[4] += i * o
        tot[5] += o * o
    return _from_totals(n, *tot)


def slope_report(t: Transducer, n_range, moments: Moments) -> list[dict]:
    """First differences of E_out, V_out and Cov next to their limits."""
    ns = list(n_range)
    if not ns:
        return []
    series = exact_moments_series(t, max(ns) + 1)
    rows = []
    for n in ns:
        a, b = series[n], series[n + 1]
        rows.append(
            {
                "n": n,
                "dE_out": b.E_out - a.E_out,
                "dV_out": b.V_out - a.V_out,
                "dCov": b.Cov - a.Cov,
                "e2": moments.e2,
                "v2": moments.v2,
                "c": moments.c,
            }
        )
    return rows


def quasi_det_bound(t: Transducer, k, n: int) -> tuple[Fraction, Fraction]:
    """Extremes of ``Output(w) - k*n`` over all words ``w`` of length ``n``."""
    k = Fraction(k)
    band = {t.initial: (Fraction(0), Fraction(0))}
    for _ in range(n):
        nxt = {}
        for s, (lo, hi) in band.items():
            for e in t.outgoing(s):
                d = e.output - k
                cur = nxt.get(e.target)
                if cur is None:
                    nxt[e.target] = (lo + d, hi + d)
                else:
                    nxt[e.target] = (min(cur[0], lo + d), max(cur[1], hi + d))
        band = nxt
    lows = [lo + t.final_output(s) for s, (lo, _) in band.items()]
    highs = [hi + t.final_output(s) for s, (_, hi) in band.items()]
    return min(lows), max(highs)
