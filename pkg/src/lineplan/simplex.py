"""Self-contained simplex solver for small dense linear programs.

Solves  max (or min) c.x  subject to  A.x <= b,  x >= 0.

The implementation is a classic two-phase tableau simplex with Bland's
smallest-index pivot rule, which guarantees termination on degenerate
problems at the cost of speed (irrelevant at production-line scale: a
handful of variables and a couple of rows per workstation).

`enumerate_vertices` is a deliberately independent brute-force oracle: it
enumerates every basic solution of the slack-augmented system by solving
square subsystems, so solver results can be cross-checked without sharing
any pivoting code.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

# Feasibility / optimality tolerance on normalized data; the planning
# models here carry small integer coefficients, so optima land exactly.
EPS = 1e-9
# Coefficients below this are treated as zero during pivoting.
PIVOT_TOL = 1e-10

MAXIMIZE = "max"
MINIMIZE = "min"

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"

# enumerate_vertices is exponential in variables + constraints.
ORACLE_SIZE_LIMIT = 12


@dataclass(frozen=True)
class LpProblem:
    """A dense LP: objective coefficients, constraint rows, right-hand sides."""

    objective: tuple[float, ...]
    constraint_matrix: tuple[tuple[float, ...], ...]
    rhs: tuple[float, ...]
    sense: str = MAXIMIZE
    variable_names: tuple[str, ...] = ()
    constraint_names: tuple[str, ...] = ()

    def num_variables(self) -> int:
        return len(self.objective)

    def num_constraints(self) -> int:
        return len(self.rhs)

    def variable_label(self, j: int) -> str:
        return self.variable_names[j] if j < len(self.variable_names) else f"x{j + 1}"

    def constraint_label(self, i: int) -> str:
        return self.constraint_names[i] if i < len(self.constraint_names) else f"row{i + 1}"


@dataclass(frozen=True)
class LpSolution:
    """Solver outcome; x and z are meaningful only when status is optimal."""

    status: str
    x: tuple[float, ...] = ()
    z: float | None = None
    active_constraints: tuple[int, ...] = ()


def _validate(problem: LpProblem) -> None:
    n = problem.num_variables()
    m = problem.num_constraints()
    if len(problem.constraint_matrix) != m:
        raise ValueError(
            f"constraint matrix has {len(problem.constraint_matrix)} rows, rhs has {m}"
        )
    for i, row in enumerate(problem.constraint_matrix):
        if len(row) != n:
            raise ValueError(f"row {i} has {len(row)} coefficients, expected {n}")
        for value in row:
            if not math.isfinite(value):
                raise ValueError(f"non-finite coefficient in row {i}")
    for value in problem.objective:
        if not math.isfinite(value):
            raise ValueError("non-finite objective coefficient")
    for value in problem.rhs:
        if not math.isfinite(value):
            raise ValueError("non-finite right-hand side")
    if problem.sense not in (MAXIMIZE, MINIMIZE):
        raise ValueError(f"unknown sense {problem.sense!r}")


def _binding_rows(problem: LpProblem, x: tuple[float, ...]) -> tuple[int, ...]:
    """Rows where the constraint holds with equality at x (within EPS-scale)."""
    binding = []
    for i, row in enumerate(problem.constraint_matrix):
        lhs = sum(a * v for a, v in zip(row, x))
        scale = max(1.0, abs(problem.rhs[i]))
        if problem.rhs[i] - lhs <= 1e-7 * scale:
            binding.append(i)
    return tuple(binding)


def _pivot(tableau: list[list[float]], basis: list[int], row: int, col: int) -> None:
    """Gauss-Jordan pivot on tableau[row][col]; updates the basis in place."""
    pivot_value = tableau[row][col]
    inv = 1.0 / pivot_value
    tableau[row] = [v * inv for v in tableau[row]]
    pivot_row = tableau[row]
    for r, current in enumerate(tableau):
        if r == row:
            continue
        factor = current[col]
        if abs(factor) <= PIVOT_TOL:
            continue
        tableau[r] = [v - factor * p for v, p in zip(current, pivot_row)]
    basis[row] = col


def _run_simplex(
    tableau: list[list[float]],
    basis: list[int],
    objective: list[float],
    num_columns: int,
) -> str:
    """Maximize `objective` over the tableau's basic feasible region.

    The last tableau column is the RHS. Returns "optimal" or "unbounded".
    Bland's rule: enter the smallest-index improving column, leave by ratio
    test with ties broken toward the smallest basis variable index.
    """
    m = len(tableau)
    while True:
        # Reduced costs z_j - c_j for nonbasic columns.
        entering = -1
        for j in range(num_columns):
            if j in basis:
                continue
            z_j = sum(objective[basis[r]] * tableau[r][j] for r in range(m))
            if objective[j] - z_j > EPS:
                entering = j
                break
        if entering < 0:
            return STATUS_OPTIMAL

        leaving = -1
        best_ratio = math.inf
        for r in range(m):
            coeff = tableau[r][entering]
            if coeff > PIVOT_TOL:
                ratio = tableau[r][-1] / coeff
                if ratio < best_ratio - EPS or (
                    abs(ratio - best_ratio) <= EPS
                    and (leaving < 0 or basis[r] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = r
        if leaving < 0:
            return STATUS_UNBOUNDED

        _pivot(tableau, basis, leaving, entering)


def solve(problem: LpProblem) -> LpSolution:
    """Solve the LP; deterministic, returns a vertex solution when optimal.

    Phase 1 (run only when some b_i < 0) minimizes the sum of artificial
    variables to find a feasible start; a positive phase-1 optimum means
    infeasible. Phase 2 optimizes the real objective.
    """
    _validate(problem)
    n = problem.num_variables()
    m = problem.num_constraints()

    sign = 1.0 if problem.sense == MAXIMIZE else -1.0
    costs = [sign * c for c in problem.objective]

    if n == 0:
        if all(b >= -EPS for b in problem.rhs):
            return LpSolution(STATUS_OPTIMAL, (), 0.0, _binding_rows(problem, ()))
        return LpSolution(STATUS_INFEASIBLE)

    # Columns: n structural, m slack, then one artificial per negated row.
    negated = [i for i in range(m) if problem.rhs[i] < 0]
    num_artificial = len(negated)
    width = n + m + num_artificial

    tableau: list[list[float]] = []
    basis: list[int] = []
    artificial_of_row: dict[int, int] = {
        row: n + m + k for k, row in enumerate(negated)
    }
    for i in range(m):
        flip = -1.0 if i in artificial_of_row else 1.0
        row = [flip * a for a in problem.constraint_matrix[i]]
        row += [flip if j == i else 0.0 for j in range(m)]
        row += [1.0 if artificial_of_row.get(i) == n + m + k else 0.0 for k in range(num_artificial)]
        row.append(flip * problem.rhs[i])
        tableau.append(row)
        basis.append(artificial_of_row.get(i, n + i))

    if num_artificial:
        # Phase 1: maximize -(sum of artificials).
        phase1 = [0.0] * (n + m) + [-1.0] * num_artificial
        status = _run_simplex(tableau, basis, phase1, width)
        assert status == STATUS_OPTIMAL  # phase-1 objective is bounded above by 0
        infeasibility = -sum(
            phase1[basis[r]] * tableau[r][-1] for r in range(m)
        )
        scale = max(1.0, max(abs(b) for b in problem.rhs))
        if infeasibility > EPS * scale:
            return LpSolution(STATUS_INFEASIBLE)
        # Pivot any artificial still basic (degenerate) out on a structural
        # or slack column; a row with no eligible pivot is redundant.
        for r in range(m):
            if basis[r] >= n + m:
                for j in range(n + m):
                    if abs(tableau[r][j]) > PIVOT_TOL:
                        _pivot(tableau, basis, r, j)
                        break

    # Artificial columns are excluded from entering (column limit n + m); a
    # zero-valued artificial left basic in a redundant row costs nothing.
    phase2 = costs + [0.0] * (m + num_artificial)
    status = _run_simplex(tableau, basis, phase2, n + m)
    if status == STATUS_UNBOUNDED:
        return LpSolution(STATUS_UNBOUNDED)

    values = [0.0] * width
    for r in range(m):
        values[basis[r]] = tableau[r][-1]
    x = tuple(values[:n])
    z = sum(c * v for c, v in zip(problem.objective, x))
    return LpSolution(STATUS_OPTIMAL, x, z, _binding_rows(problem, x))


@dataclass(frozen=True)
class BasicSolution:
    """One basic solution of the slack-augmented system [A|I].y = b."""

    x: tuple[float, ...]
    z: float
    feasible: bool


def enumerate_vertices(problem: LpProblem) -> list[BasicSolution]:
    """Brute-force every basic solution of A.x + s = b; the test oracle.

    Exponential in (variables + constraints); refuses problems larger than
    ORACLE_SIZE_LIMIT. Feasible entries have x >= 0 and slack >= 0 within
    tolerance, so the best feasible z bounds the LP optimum from below and
    matches it whenever the optimum is attained (always, for bounded LPs).
    """
    _validate(problem)
    n = problem.num_variables()
    m = problem.num_constraints()
    if n + m > ORACLE_SIZE_LIMIT:
        raise ValueError(
            f"problem size {n}+{m} exceeds oracle limit {ORACLE_SIZE_LIMIT}"
        )

    if m == 0 or n == 0:
        # Only basic solution is the origin (all structural variables zero).
        feasible = all(b >= -EPS for b in problem.rhs)
        return [BasicSolution((0.0,) * n, 0.0, feasible)]

    augmented = np.hstack([np.array(problem.constraint_matrix, dtype=float), np.eye(m)])
    b = np.array(problem.rhs, dtype=float)
    solutions: list[BasicSolution] = []
    for columns in itertools.combinations(range(n + m), m):
        square = augmented[:, columns]
        try:
            y_basic = np.linalg.solve(square, b)
        except np.linalg.LinAlgError:
            continue
        residual = square @ y_basic - b
        if np.max(np.abs(residual)) > 1e-6 * max(1.0, float(np.max(np.abs(b)))):
            continue  # numerically singular basis
        y = np.zeros(n + m)
        y[list(columns)] = y_basic
        x = tuple(float(v) for v in y[:n])
        z = sum(c * v for c, v in zip(problem.objective, x))
        feasible = bool(np.min(y) >= -1e-7)
        solutions.append(BasicSolution(x, z, feasible))
    return solutions


def best_feasible_vertex(problem: LpProblem) -> BasicSolution | None:
    """Best basic feasible solution by objective, or None when infeasible."""
    feasible = [s for s in enumerate_vertices(problem) if s.feasible]
    if not feasible:
        return None
    if problem.sense == MINIMIZE:
        return min(feasible, key=lambda s: s.z)
    return max(feasible, key=lambda s: s.z)
