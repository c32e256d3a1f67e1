"""Asymptotic moment constants from the characteristic determinant jet."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DegenerateCharacteristic, InternalMismatch
from .jet import Jet2, jet_det, jet_from_edge
from .model import FinalComponent, format_rational

JOINT_NORMAL = "joint-normal"
NORMAL_X_DEGENERATE = "normal×degenerate"
LINEAR_RELATIONSHIP = "linear-relationship"
DEGENERATE_OUTPUT = "degenerate-output"


@dataclass(frozen=True)
class Moments:
    """Leading coefficients of mean, variance and covariance of (Input, Output)."""

    e1: Fraction
    e2: Fraction
    v1: Fraction
    v2: Fraction
    c: Fraction

    @property
    def sigma_det(self) -> Fraction:
        return self.v1 * self.v2 - self.c * self.c

    def as_strings(self) -> dict[str, str]:
        return {k: format_rational(v) for k, v in asdict(self).items()}


@dataclass(frozen=True)
class Classification:
    independent: bool
    bounded_variance: bool
    sigma_rank: int
    squared_correlation: Optional[Fraction]
    correlation_sign: int
    perfectly_correlated: bool
    limit_law: str


def characteristic_matrix(fc: FinalComponent) -> list[list[Jet2]]:
    """Jet matrix of ``I - (z/K) * sum_eps x**eps * M_eps(y)``."""
    idx = fc.index()
    n = fc.N
    m = [[Jet2.constant(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for e in fc.transitions:
        i, j = idx[e.source], idx[e.target]
        m[i][j] = m[i][j] - jet_from_edge(e.input, e.output, fc.K)
    return m


def characteristic_jet(fc: FinalComponent) -> Jet2:
    jet = jet_det(characteristic_matrix(fc))
    if jet.cw == 0:
        raise DegenerateCharacteristic(
            "f_z(1,1,1) = 0; the final component is periodic or not complete"
        )
    if jet.c0 != 0:
        raise InternalMismatch(f"f(1,1,1) = {jet.c0}, expected 0")
    return jet


def asymptotic_moments(jet: Jet2, input_alphabet: Sequence = None) -> Moments:
    """The five constants from the partial derivatives of ``f`` at (1,1,1).

    When ``input_alphabet`` is given, ``e1`` and ``v1`` are cross-checked
    against the mean and variance of a uniform input letter.
    """
    d = jet.partials()
    fx, fy, fz = d["fx"], d["fy"], d["fz"]
    if fz == 0:
        raise DegenerateCharacteristic("f_z(1,1,1) = 0")
    zz = d["fzz"] + fz
    fz3 = fz**3
    e1 = fx / fz
    e2 = fy / fz
    v1 = (fx * fx * zz + fz * fz * (d["fxx"] + fx) - 2 * fx * fz * d["fxz"]) / fz3
    v2 = (fy * fy * zz + fz * fz * (d["fyy"] + fy) - 2 * fy * fz * d["fyz"]) / fz3
    c = (fx * fy * zz + fz * fz * d["fxy"] - fy * fz * d["fxz"] - fx * fz * d["fyz"]) / fz3

    if input_alphabet is not None:
        K = len(input_alphabet)
        mean = sum(input_alphabet, Fraction(0)) / K
        var = sum((a * a for a in input_alphabet), Fraction(0)) / K - mean * mean
        if (e1, v1) != (mean, var):
            raise InternalMismatch(
                f"jet gives e1={e1}, v1={v1} but the alphabet gives e1={mean}, v1={var}"
            )
    return Moments(e1, e2, v1, v2, c)


def moments_of(fc: FinalComponent) -> Moments:
    return asymptotic_moments(characteristic_jet(fc), fc.input_alphabet)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def classify(m: Moments) -> Classification:
    det = m.sigma_det
    if det != 0:
        rank = 2
    elif m.v1 == 0 and m.v2 == 0 and m.c == 0:
        rank = 0
    else:
        rank = 1

    if rank == 2:
        law = JOINT_NORMAL
    elif m.v2 == 0:
        # covers rank 0 as well: output concentrates either way
        law = DEGENERATE_OUTPUT
    elif m.v1 == 0:
        law = NORMAL_X_DEGENERATE
    else:
        law = LINEAR_RELATIONSHIP

    squared = None
    if m.v1 != 0 and m.v2 != 0:
        squared = m.c * m.c / (m.v1 * m.v2)
    return Classification(
        independent=m.c == 0,
        bounded_variance=m.v2 == 0,
        sigma_rank=rank,
        squared_correlation=squared,
        correlation_sign=_sign(m.c),
        perfectly_correlated=rank == 1 and m.c != 0,
        limit_law=law,
    )
