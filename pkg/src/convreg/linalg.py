"""Exact linear algebra over the rationals.

Vectors are tuples of :class:`fractions.Fraction`; matrices are lists of
such tuples.  Integer-valued helpers (``primitive``, ``int_rank``) work on
Python ints, which is considerably faster than Fraction arithmetic and is
what the double description and simplex code lean on.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

Vec = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # exact binary value; callers that want decimals pass strings
        return Fraction(value)
    return Fraction(value)


def vec(values: Iterable) -> tuple:
    return tuple(as_fraction(v) for v in values)


def zeros(n: int) -> tuple:
    return (ZERO,) * n


def unit(n: int, i: int) -> tuple:
    return tuple(ONE if j == i else ZERO for j in range(n))


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), ZERO)


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> tuple:
    return tuple(c * a for a in u)


def neg(u: Sequence) -> tuple:
    return tuple(-a for a in u)


def is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else max(a, b)


def integer_scale(u: Sequence) -> list[int]:
    """Clear denominators of a rational vector (positive factor)."""
    den = reduce(lcm, (Fraction(a).denominator for a in u), 1)
    return [int(Fraction(a) * den) for a in u]


def primitive(u: Sequence) -> tuple:
    """Positive rescaling of ``u`` to a primitive integer vector.

    The zero vector is returned unchanged.
    """
    ints = integer_scale(u)
    g = reduce(gcd, (abs(a) for a in ints), 0)
    if g == 0:
        return tuple(Fraction(0) for _ in ints)
    return tuple(Fraction(a // g) for a in ints)


def primitive_int(u: Sequence[int]) -> tuple:
    g = reduce(gcd, (abs(a) for a in u), 0)
    if g <= 1:
        return tuple(u)
    return tuple(a // g for a in u)


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[tuple], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(as_fraction, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [a / p for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return int_rank([integer_scale(r) for r in rows])


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            mic = m[i][c]
            row_i = m[i]
            row_r = m[r]
            m[i] = [(p * row_i[j] - mic * row_r[j]) // prev for j in range(ncols)]
        prev = p
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of {x : rows @ x = 0} as primitive integer vectors."""
    if not rows:
        return [unit(ncols, i) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(primitive(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> tuple | None:
    """Solve a square system exactly; None when singular."""
    n = len(a)
    aug = [list(map(as_fraction, row)) + [as_fraction(bi)] for row, bi in zip(a, b)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        return None
    return tuple(red[i][n] for i in range(n))


def matvec(a: Sequence[Sequence], x: Sequence) -> tuple:
    return tuple(dot(row, x) for row in a)


def transpose(a: Sequence[Sequence]) -> list[tuple]:
    return [tuple(col) for col in zip(*a)] if a else []
