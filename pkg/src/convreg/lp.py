"""Exact linear programming with Bland's rule.

The tableau is kept in fraction-free (Bareiss) form: every entry is a
Python int and all rows share the denominator of the last pivot.  This is
an order of magnitude faster than pivoting on Fractions and keeps the
arithmetic exact.

Free variables are split as ``x = u - v``.  A basic optimal solution of the
split problem need not be a vertex of the original region, so the optimum
is moved along its optimal face until ``n`` independent rows are tight.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPOutcome:
    status: str
    value: Fraction | None = None
    point: tuple | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    def __init__(self, rows: list[list[int]], basis: list[int], ncols: int):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols  # rhs lives at index ncols
        self.den = 1
        self.objectives: list[list[int]] = []

    def pivot(self, r: int, c: int) -> None:
        row_r = self.rows[r]
        p = row_r[c]
        if p < 0:
            row_r = [-a for a in row_r]
            self.rows[r] = row_r
            p = -p
        den = self.den
        width = self.ncols + 1
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f == 0:
                if p != den:
                    self.rows[i] = [(p * a) // den for a in row]
                continue
            self.rows[i] = [(p * row[j] - f * row_r[j]) // den for j in range(width)]
        for k, row in enumerate(self.objectives):
            f = row[c]
            if f == 0:
                if p != den:
                    self.objectives[k] = [(p * a) // den for a in row]
                continue
            self.objectives[k] = [(p * row[j] - f * row_r[j]) // den for j in range(width)]
        self.den = p
        self.basis[r] = c

    def ratio_row(self, c: int) -> int | None:
        best = None
        rhs = self.ncols
        for i, row in enumerate(self.rows):
            a = row[c]
            if a <= 0:
                continue
            if best is None:
                best = i
                continue
            # row[rhs]/a  vs  best_rhs/best_a
            brow = self.rows[best]
            lhs = row[rhs] * brow[c]
            rgt = brow[rhs] * a
            if lhs < rgt or (lhs == rgt and self.basis[i] < self.basis[best]):
                best = i
        return best

    def run(self, obj_index: int, allowed: Sequence[bool]) -> str:
        """Maximise objective ``obj_index``; Bland's rule for entering."""
        while True:
            obj = self.objectives[obj_index]
            entering = None
            for j in range(self.ncols):
                if allowed[j] and obj[j] < 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            r = self.ratio_row(entering)
            if r is None:
                return UNBOUNDED
            self.pivot(r, entering)


def linprog(
    objective: Sequence,
    ineq: Sequence[tuple[Sequence, object]],
    eq: Sequence[tuple[Sequence, object]] = (),
    maximize: bool = True,
    dim: int | None = None,
) -> LPOutcome:
    """Optimise ``objective . x`` over ``{a.x <= b} ∩ {a.x = b}``, x free."""
    n = len(objective) if dim is None else dim
    c = la.vec(objective)
    if len(c) != n:
        raise ValueError("objective length does not match dimension")
    if not maximize:
        c = la.neg(c)
    ineq = [(la.vec(a), la.as_fraction(b)) for a, b in ineq]
    eq = [(la.vec(a), la.as_fraction(b)) for a, b in eq]
    for a, _ in list(ineq) + list(eq):
        if len(a) != n:
            raise ValueError("constraint row length does not match dimension")

    m_ub = len(ineq)
    n_split = 2 * n
    # columns: u (n), v (n), slacks (m_ub), artificials
    int_rows: list[tuple[list[int], int, bool]] = []  # (coeffs, rhs, is_eq)
    for a, b in ineq:
        ints = la.integer_scale(list(a) + [b])
        int_rows.append((ints[:n], ints[n], False))
    for a, b in eq:
        ints = la.integer_scale(list(a) + [b])
        int_rows.append((ints[:n], ints[n], True))

    art_rows = [i for i, (_, b, is_eq) in enumerate(int_rows) if is_eq or b < 0]
    n_art = len(art_rows)
    ncols = n_split + m_ub + n_art
    art_col = {row: n_split + m_ub + k for k, row in enumerate(art_rows)}

    rows: list[list[int]] = []
    basis: list[int] = []
    for i, (a, b, is_eq) in enumerate(int_rows):
        row = [0] * (ncols + 1)
        sign = -1 if b < 0 else 1
        for j in range(n):
            row[j] = sign * a[j]
            row[n + j] = -sign * a[j]
        if not is_eq:
            row[n_split + i] = sign
        if i in art_col:
            row[art_col[i]] = 1
            basis.append(art_col[i])
        else:
            basis.append(n_split + i)
        row[ncols] = sign * b
        rows.append(row)

    tab = _Tableau(rows, basis, ncols)
    c_int = la.integer_scale(c)
    z = [0] * (ncols + 1)
    for j in range(n):
        z[j] = -c_int[j]
        z[n + j] = c_int[j]
    tab.objectives.append(z)

    is_art = [j >= n_split + m_ub for j in range(ncols)]
    if n_art:
        w = [0] * (ncols + 1)
        for i in art_rows:
            for j in range(ncols + 1):
                if j == ncols or not is_art[j]:
                    w[j] -= rows[i][j]
        tab.objectives.append(w)
        tab.run(1, [True] * ncols)
        if tab.objectives[1][ncols] < 0:
            return LPOutcome(INFEASIBLE)
        # drive zero-level artificials out of the basis
        r = 0
        while r < len(tab.rows):
            if is_art[tab.basis[r]]:
                col = next((j for j in range(ncols) if not is_art[j] and tab.rows[r][j] != 0), None)
                if col is None:
                    del tab.rows[r]
                    del tab.basis[r]
                    continue
                tab.pivot(r, col)
            r += 1
        tab.objectives.pop()

    allowed = [not a for a in is_art]
    status = tab.run(0, allowed)
    if status == UNBOUNDED:
        return LPOutcome(UNBOUNDED)

    values = [Fraction(0)] * ncols
    for i, col in enumerate(tab.basis):
        values[col] = Fraction(tab.rows[i][ncols], tab.den)
    x = tuple(values[j] - values[n + j] for j in range(n))
    x = _slide_to_vertex(x, ineq, eq, n)
    value = la.dot(la.vec(objective), x)
    return LPOutcome(OPTIMAL, value, x)


def _slide_to_vertex(x: tuple, ineq, eq, n: int) -> tuple:
    """Move ``x`` within its optimal face until it is a vertex (if any)."""
    while True:
        tight = [a for a, _ in eq] + [a for a, b in ineq if la.dot(a, x) == b]
        if la.rank(tight) >= n:
            return x
        null = la.nullspace(tight, n)
        moved = False
        for d in null:
            for direction in (d, la.neg(d)):
                step = None
                for a, b in ineq:
                    ad = la.dot(a, direction)
                    if ad > 0:
                        t = (b - la.dot(a, x)) / ad
                        if step is None or t < step:
                            step = t
                if step is not None:
                    x = la.add(x, la.scale(step, direction))
                    moved = True
                    break
            if moved:
                break
        if not moved:
            # the optimal face contains a line
            return x


def solve_lp(objective: Sequence, sense: str, region) -> LPOutcome:
    """Exact optimum of a linear functional over an H-polyhedron.

    ``sense`` is ``"max"`` or ``"min"``.  Raises ``ValueError`` on a
    dimension mismatch.
    """
    if sense not in ("max", "min"):
        raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")
    if len(objective) != region.dim:
        raise ValueError(
            f"objective has length {len(objective)} but region has dimension {region.dim}"
        )
    ineq = [(r.a, r.b) for r in region.rows if not r.eq]
    eq = [(r.a, r.b) for r in region.rows if r.eq]
    return linprog(objective, ineq, eq, maximize=(sense == "max"), dim=region.dim)
