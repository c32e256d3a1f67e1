"""Degree-2 truncated Taylor jets in three variables over the rationals.

A :class:`Jet2` stores the expansion of a function ``f(x, y, z)`` around
``(1, 1, 1)`` in the shifted variables ``u = x-1, v = y-1, w = z-1``,
keeping terms of total degree at most 2.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Sequence

# coefficient order: 1, u, v, w, uu, uv, uw, vv, vw, ww
NAMES = ("c0", "cu", "cv", "cw", "cuu", "cuv", "cuw", "cvv", "cvw", "cww")
_QUAD = {(0, 0): 4, (0, 1): 5, (0, 2): 6, (1, 1): 7, (1, 2): 8, (2, 2): 9}
_ZERO = Fraction(0)


class Jet2:
    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = (_ZERO,) * 10
        coeffs = tuple(Fraction(x) for x in coeffs)
        if len(coeffs) != 10:
            raise ValueError("a Jet2 has exactly 10 coefficients")
        self.c = coeffs

    @classmethod
    def constant(cls, value):
        return cls((value,) + (_ZERO,) * 9)

    @classmethod
    def from_terms(cls, **terms):
        """``Jet2.from_terms(c0=1, cu=2)`` with names from :data:`NAMES`."""
        unknown = set(terms) - set(NAMES)
        if unknown:
            raise TypeError(f"unknown jet terms: {sorted(unknown)}")
        return cls(tuple(terms.get(n, 0) for n in NAMES))

    def __getattr__(self, name):
        try:
            return self.c[NAMES.index(name)]
        except ValueError:
            raise AttributeError(name) from None

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Jet2.constant(other)
        if not isinstance(other, Jet2):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        parts = [f"{n}={x}" for n, x in zip(NAMES, self.c) if x]
        return f"Jet2({', '.join(parts) or '0'})"

    def _coerce(self, other):
        if isinstance(other, Jet2):
            return other
        if isinstance(other, (int, Fraction)):
            return Jet2.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet2(a + b for a, b in zip(self.c, other.c))

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-a for a in self.c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet2(a - b for a, b in zip(self.c, other.c))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k):
        k = Fraction(k)
        return Jet2(k * a for a in self.c)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Jet2):
            return NotImplemented
        a, b = self.c, other.c
        out = [a[0] * b[0]]
        for i in (1, 2, 3):
            out.append(a[0] * b[i] + a[i] * b[0])
        for (i, j), k in _QUAD.items():
            term = a[0] * b[k] + a[k] * b[0] + a[i + 1] * b[j + 1]
            if i != j:
                term += a[j + 1] * b[i + 1]
            out.append(term)
        return Jet2(out)

    __rmul__ = __mul__

    def partials(self) -> dict[str, Fraction]:
        """Partial derivatives of ``f`` at (1,1,1), keyed ``f``, ``fx``, ``fxy``..."""
        c = self.c
        return {
            "f": c[0],
            "fx": c[1],
            "fy": c[2],
            "fz": c[3],
            "fxx": 2 * c[4],
            "fxy": c[5],
            "fxz": c[6],
            "fyy": 2 * c[7],
            "fyz": c[8],
            "fzz": 2 * c[9],
        }


def jet_add(a: Jet2, b: Jet2) -> Jet2:
    return a + b


def jet_mul(a: Jet2, b: Jet2) -> Jet2:
    return a * b


def jet_neg(a: Jet2) -> Jet2:
    return -a


def jet_scale(a: Jet2, k) -> Jet2:
    return a.scale(k)


def binomial_jet(exponent, var: int) -> Jet2:
    """Truncated ``(1+t)**exponent`` where ``t`` is variable 0 (u), 1 (v) or 2 (w)."""
    e = Fraction(exponent)
    c = [_ZERO] * 10
    c[0] = Fraction(1)
    c[var + 1] = e
    c[_QUAD[(var, var)]] = e * (e - 1) / 2
    return Jet2(c)


def jet_from_edge(eps, delta, K: int) -> Jet2:
    """Jet of ``x**eps * y**delta * z / K``, the weight of one transition."""
    return (binomial_jet(eps, 0) * binomial_jet(delta, 1) * binomial_jet(1, 2)).scale(
        Fraction(1, K)
    )


def berkowitz_charpoly(m: Sequence[Sequence], one, zero) -> list:
    """Coefficients ``[1, p1, ..., pn]`` of ``det(t*I - m)``, without division.

    Works over any commutative ring given its ``one`` and ``zero``.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    poly = [one]
    # grow the trailing principal submatrix one row/column at a time
    for r in range(1, n + 1):
        k = n - r
        a = m[k][k]
        row = [m[k][j] for j in range(k + 1, n)]
        col = [m[i][k] for i in range(k + 1, n)]
        sub = [[m[i][j] for j in range(k + 1, n)] for i in range(k + 1, n)]
        # first column of the Toeplitz factor: 1, -a, -R C, -R M C, ...
        toeplitz = [one, zero - a]
        vec = col
        for _ in range(r - 1):
            dot = zero
            for x, y in zip(row, vec):
                dot = dot + x * y
            toeplitz.append(zero - dot)
            vec = [
                _dot(sub_row, vec, zero) for sub_row in sub
            ]
        new = []
        for i in range(r + 1):
            acc = zero
            for j in range(min(i + 1, r)):
                acc = acc + toeplitz[i - j] * poly[j]
            new.append(acc)
        poly = new
    return poly


def _dot(xs, ys, zero):
    acc = zero
    for x, y in zip(xs, ys):
        acc = acc + x * y
    return acc


def det(m: Sequence[Sequence], one=Fraction(1), zero=Fraction(0)):
    n = len(m)
    if n == 0:
        return one
    p = berkowitz_charpoly(m, one, zero)[n]
    return p if n % 2 == 0 else zero - p


def jet_det(m: Sequence[Sequence[Jet2]]) -> Jet2:
    return det(m, Jet2.constant(1), Jet2())


def leibniz_det(m: Sequence[Sequence], one=Fraction(1), zero=Fraction(0)):
    """Permutation-sum determinant. Exponential; a reference for small n."""
    n = len(m)
    total = zero
    for perm in permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        term = one
        for i, j in enumerate(perm):
            term = term * m[i][j]
        total = total - term if inversions % 2 else total + term
    return total


def identity_jet_matrix(n: int) -> list[list[Jet2]]:
    return [[Jet2.constant(1 if i == j else 0) for j in range(n)] for i in range(n)]
