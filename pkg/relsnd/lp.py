"""Exact covering LPs over the unit box, solved to a vertex.

Programs have the form

    min  c·x   s.t.  Σ_{j∈S_i} x_j ≥ b_i  (covering rows),   0 ≤ x ≤ 1.

The solver substitutes y = 1 - x, which turns every row into a packing row
Σ y_j ≤ |S_i| - b_i with a nonnegative right-hand side whenever the program is
feasible. The slack basis is then feasible from the start and a single phase
of tableau simplex with Bland's rule finishes the job. Everything is
`Fraction`; there is no tolerance anywhere.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, replace
from fractions import Fraction

from relsnd.errors import InfeasibleError, InternalLogicError, InvalidArgumentError, ResourceLimitError

log = logging.getLogger(__name__)

DEFAULT_MAX_ROUNDS = 10_000


@dataclass(frozen=True)
class CoveringRow:
    variables: frozenset[int]
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "variables", frozenset(self.variables))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def lhs(self, values: Sequence[Fraction]) -> Fraction:
        return sum((values[j] for j in self.variables), Fraction(0))

    def violated_by(self, values: Sequence[Fraction]) -> bool:
        return self.lhs(values) < self.rhs


@dataclass(frozen=True)
class LinearProgram:
    variable_count: int
    objective: tuple[Fraction, ...]
    rows: tuple[CoveringRow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(Fraction(c) for c in self.objective))
        object.__setattr__(self, "rows", tuple(self.rows))
        if len(self.objective) != self.variable_count:
            raise InvalidArgumentError(
                f"objective has {len(self.objective)} coefficients for {self.variable_count} variables"
            )
        for i, row in enumerate(self.rows):
            bad = [j for j in row.variables if not 0 <= j < self.variable_count]
            if bad:
                raise InvalidArgumentError(f"row {i} references unknown variables {sorted(bad)}")


@dataclass(frozen=True, eq=False)
class VertexSolution:
    values: tuple[Fraction, ...]
    objective_value: Fraction
    tight_rows: tuple[int, ...]
    rows: tuple[CoveringRow, ...] = ()
    rounds: int = 0


def solve_vertex(lp: LinearProgram) -> VertexSolution:
    """Optimal vertex of `lp` in exact arithmetic.

    Rows with rhs ≤ 0 are vacuous and are left out of the tableau.
    Raises InfeasibleError carrying the first row that even x = 1 violates.
    """
    n = lp.variable_count
    active = [row for row in lp.rows if row.rhs > 0]
    for row in active:
        if len(row.variables) < row.rhs:
            raise InfeasibleError(
                f"row over {sorted(row.variables)} needs {row.rhs} but has only {len(row.variables)} variables",
                violated=row,
            )

    # Tableau over [y_0..y_{n-1}, slack_0..slack_{m-1}]; packing rows first, then y_j ≤ 1.
    m = len(active) + n
    width = n + m
    tableau: list[list] = []
    rhs: list[Fraction] = []
    for i, row in enumerate(active):
        line = [0] * width
        for j in row.variables:
            line[j] = 1
        line[n + i] = 1
        tableau.append(line)
        rhs.append(Fraction(len(row.variables)) - row.rhs)
    for j in range(n):
        line = [0] * width
        line[j] = 1
        line[n + len(active) + j] = 1
        tableau.append(line)
        rhs.append(Fraction(1))
    basis = list(range(n, n + m))
    # Reduced profits for max c·y.
    profit: list = list(lp.objective) + [0] * m

    pivots = 0
    while True:
        col = next((j for j in range(width) if profit[j] > 0), None)
        if col is None:
            break
        best = None
        for i in range(m):
            a = tableau[i][col]
            if a > 0:
                ratio = rhs[i] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise InternalLogicError("unbounded direction in a box-bounded program")
        _pivot(tableau, rhs, profit, best[1], col)
        basis[best[1]] = col
        pivots += 1

    y = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            y[var] = Fraction(rhs[i])
    values = tuple(1 - v for v in y)
    objective_value = sum((c * v for c, v in zip(lp.objective, values)), Fraction(0))
    tight = tuple(i for i, row in enumerate(lp.rows) if row.lhs(values) == row.rhs)
    log.debug("simplex: %d variables, %d rows, %d pivots, objective %s", n, len(active), pivots, objective_value)
    return VertexSolution(values, objective_value, tight, lp.rows)


def _pivot(tableau, rhs, profit, r, c):
    pivot_line = tableau[r]
    inv = Fraction(1) / pivot_line[c]
    if inv != 1:
        tableau[r] = pivot_line = [a * inv if a else 0 for a in pivot_line]
        rhs[r] = rhs[r] * inv
    nonzero = [j for j, a in enumerate(pivot_line) if a]
    for i, line in enumerate(tableau):
        if i == r:
            continue
        factor = line[c]
        if factor:
            for j in nonzero:
                line[j] = line[j] - factor * pivot_line[j]
            rhs[i] = rhs[i] - factor * rhs[r]
    factor = profit[c]
    if factor:
        for j in nonzero:
            profit[j] = profit[j] - factor * pivot_line[j]


def constraint_rank(vectors: Iterable[Sequence[Fraction]], width: int) -> int:
    """Rank of a family of vectors by exact Gaussian elimination."""
    rows = [list(map(Fraction, v)) for v in vectors]
    rank = 0
    for col in range(width):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / lead[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], lead)]
        rank += 1
    return rank


def is_vertex(lp: LinearProgram, solution: VertexSolution) -> bool:
    """Vertex certificate: tight rows and tight bounds span all variables."""
    n = lp.variable_count
    vectors = []
    for i in solution.tight_rows:
        row = lp.rows[i]
        vectors.append([1 if j in row.variables else 0 for j in range(n)])
    for j, v in enumerate(solution.values):
        if v == 0 or v == 1:
            vectors.append([1 if i == j else 0 for i in range(n)])
    return constraint_rank(vectors, n) == n


Separation = Callable[[tuple[Fraction, ...]], CoveringRow | None]


def cutting_plane_solve(
    variable_count: int,
    objective: Sequence[Fraction],
    separation: Separation,
    initial_rows: Iterable[CoveringRow] = (),
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> VertexSolution:
    """Solve an implicitly given covering LP by adding violated rows.

    Each round solves the working relaxation to a vertex and asks the oracle
    for a violated row. A vertex of the relaxation that the oracle accepts is
    a vertex of the full polytope.
    """
    rows = list(initial_rows)
    previous = None
    for rnd in range(1, max_rounds + 1):
        sol = solve_vertex(LinearProgram(variable_count, tuple(objective), tuple(rows)))
        if previous is not None and sol.objective_value < previous:
            raise InternalLogicError(
                f"objective dropped from {previous} to {sol.objective_value} after adding a row"
            )
        previous = sol.objective_value
        row = separation(sol.values)
        if row is None:
            log.debug("cutting plane: converged after %d rounds, objective %s", rnd, sol.objective_value)
            return replace(sol, rounds=rnd)
        if not row.violated_by(sol.values):
            raise InternalLogicError(
                f"separation returned a row over {sorted(row.variables)} that the query point satisfies"
            )
        rows.append(row)
    raise ResourceLimitError(f"cutting plane did not converge within {max_rounds} rounds")
