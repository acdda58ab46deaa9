"""Nearest-point quadratic programs over boxes and pairwise differences.

Problems here have an identity Hessian: find the Euclidean projection of a
center point onto a polyhedron cut out by per-variable bounds and two-sided
constraints on differences x_i - x_j.  Two independent solvers are provided:

* ``solve_active_set``: a dual active-set iteration.  Starting from the
  unconstrained optimum it adds the most violated constraint at a time,
  dropping blocking ones along the way; an unbounded dual step certifies
  infeasibility.
* ``solve_dykstra``: Dykstra's alternating projections onto the individual
  boxes and slabs.  Slower, but an entirely separate route to the same
  projection, kept for cross-validation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, MaxIterations

_DEP_TOL = 1e-11  # below this, a normal counts as dependent on the working set


@dataclass(frozen=True)
class QpProblem:
    """Projection target and constraints.

    ``bounds[k]`` is an optional (lo, hi) pair for variable k, either side
    may be None.  ``difference_constraints`` holds (i, j, lo, hi) meaning
    lo <= x_i - x_j <= hi.  lo == hi makes a constraint an equality.
    """

    center: tuple[float, ...]
    bounds: tuple[tuple[float | None, float | None], ...] = ()
    difference_constraints: tuple[tuple[int, int, float, float], ...] = ()

    def __post_init__(self):
        for lo, hi in self.bounds:
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"empty bound interval [{lo}, {hi}]")
        for i, j, lo, hi in self.difference_constraints:
            if i == j:
                raise ValueError("difference constraint needs two distinct variables")
            if lo > hi:
                raise ValueError(f"empty difference interval [{lo}, {hi}]")


@dataclass(frozen=True)
class QpSolution:
    point: tuple[float, ...]
    active_set: tuple[int, ...]  # indices into `constraint_rows(problem)`
    iterations: int
    multipliers: tuple[float, ...] = ()  # aligned with active_set


def constraint_rows(problem: QpProblem):
    """Flatten the problem into rows (normal, rhs, is_equality).

    Every row reads normal . x >= rhs.  A two-sided constraint with lo < hi
    yields two rows; lo == hi yields a single equality row.  Row order is
    the public indexing used in ``QpSolution.active_set``.
    """
    d = len(problem.center)
    rows: list[tuple[np.ndarray, float, bool]] = []

    def unit(k: int, sign: float) -> np.ndarray:
        a = np.zeros(d)
        a[k] = sign
        return a

    def diff(i: int, j: int, sign: float) -> np.ndarray:
        a = np.zeros(d)
        a[i] = sign
        a[j] = -sign
        return a

    for k, (lo, hi) in enumerate(problem.bounds):
        if lo is not None and hi is not None and lo == hi:
            rows.append((unit(k, 1.0), float(lo), True))
            continue
        if lo is not None:
            rows.append((unit(k, 1.0), float(lo), False))
        if hi is not None:
            rows.append((unit(k, -1.0), float(-hi), False))
    for i, j, lo, hi in problem.difference_constraints:
        if lo == hi:
            rows.append((diff(i, j, 1.0), float(lo), True))
            continue
        rows.append((diff(i, j, 1.0), float(lo), False))
        rows.append((diff(i, j, -1.0), float(-hi), False))
    return rows


def _slack(a: np.ndarray, b: float, x: np.ndarray) -> float:
    return float(a @ x - b)


def solve_active_set(
    problem: QpProblem, tol: float = 1e-10, max_iter: int | None = None
) -> QpSolution:
    """Project the center onto the polyhedron by dual active-set steps.

    Returns the unique minimizer with KKT multipliers nonnegative up to
    ``tol``.  Raises ``Infeasible`` when a violated constraint admits no
    bounded dual step, ``MaxIterations`` past the defensive iteration cap.
    """
    rows = constraint_rows(problem)
    x = np.asarray(problem.center, dtype=float).copy()
    if max_iter is None:
        max_iter = max(100, 10 * len(rows) ** 2)

    work: list[int] = []  # indices into rows
    normals: list[np.ndarray] = []  # working orientation (equalities may flip)
    mults: list[float] = []  # for the working orientation, all kept >= 0
    flipped: dict[int, bool] = {}
    is_eq = [eq for _, _, eq in rows]
    iterations = 0

    def steps_onto(target: int) -> None:
        # Bring row `target` to zero slack, dropping blocking inequality rows
        # along the way.  Equalities with positive slack are approached from
        # the other side by flipping the normal, so steps stay nonnegative.
        nonlocal iterations
        a, b, eq = rows[target]
        if eq and _slack(a, b, x) > 0:
            a, b = -a, -b
            flipped[target] = True
        accumulated = 0.0
        while True:
            iterations += 1
            if iterations > max_iter:
                raise MaxIterations(f"no convergence within {max_iter} active-set steps")
            if normals:
                N = np.stack(normals)
                r, *_ = np.linalg.lstsq(N.T, a, rcond=None)
                z = a - N.T @ r
            else:
                r = np.zeros(0)
                z = a.copy()
            znorm2 = float(z @ z)
            slack = _slack(a, b, x)
            if eq and znorm2 <= _DEP_TOL:
                # Dependent equality: consistent exactly when already tight.
                # Consistent ones can be skipped for good, because at this
                # stage the working set holds only equalities, which never
                # get dropped again.
                if abs(slack) <= max(tol, 1e-9):
                    return
                raise Infeasible("inconsistent equality constraints")

            # Longest step before some inequality multiplier turns negative.
            t_dual = math.inf
            drop = -1
            for pos, row_idx in enumerate(work):
                if is_eq[row_idx] or r[pos] <= tol:
                    continue
                ratio = mults[pos] / float(r[pos])
                if ratio < t_dual - 1e-15:
                    t_dual = ratio
                    drop = pos
            t_full = -slack / znorm2 if znorm2 > _DEP_TOL else math.inf
            step = min(t_dual, t_full)
            if step == math.inf:
                raise Infeasible("constraint cannot be reached: empty feasible set")
            if znorm2 > _DEP_TOL:
                x[:] = x + step * z
            for pos in range(len(mults)):
                mults[pos] -= step * float(r[pos])
            accumulated += step
            if t_full <= t_dual:
                work.append(target)
                normals.append(a)
                mults.append(accumulated)
                return
            del work[drop], normals[drop], mults[drop]

    # Install equality rows first.  Dual steps never drop them, so any
    # dependencies found later cannot disturb rows skipped here.
    for idx, (_, _, eq) in enumerate(rows):
        if eq:
            steps_onto(idx)

    while True:
        worst = -1
        worst_violation = -tol
        for idx, (a, b, eq) in enumerate(rows):
            if eq or idx in work:
                continue
            s = _slack(a, b, x)
            if s < worst_violation:
                worst_violation = s
                worst = idx
        if worst < 0:
            break
        steps_onto(worst)
        # A dropped row may have drifted back out; the loop re-checks all.

    order = np.argsort(work, kind="stable")
    return QpSolution(
        point=tuple(float(v) for v in x),
        active_set=tuple(int(work[i]) for i in order),
        iterations=iterations,
        multipliers=tuple(
            float(-mults[i] if flipped.get(work[i]) else mults[i]) for i in order
        ),
    )


def kkt_residual(problem: QpProblem, solution: QpSolution) -> float:
    """Worst violation among feasibility, stationarity and multiplier signs."""
    rows = constraint_rows(problem)
    x = np.asarray(solution.point)
    c = np.asarray(problem.center)
    worst = 0.0
    for a, b, eq in rows:
        s = _slack(a, b, x)
        worst = max(worst, -s if not eq else abs(s))
    grad = x - c
    for idx, mult in zip(solution.active_set, solution.multipliers):
        a, b, eq = rows[idx]
        grad -= mult * a
        if not eq:
            worst = max(worst, -mult)
    worst = max(worst, float(np.max(np.abs(grad))) if len(grad) else 0.0)
    return worst


def solve_dykstra(
    problem: QpProblem, tol: float = 1e-12, max_iter: int = 100_000
) -> QpSolution:
    """Dykstra's alternating projections onto the boxes and slabs.

    Used as an independent check of ``solve_active_set``; converges to the
    same projection but only asymptotically.
    """
    d = len(problem.center)
    x = np.asarray(problem.center, dtype=float).copy()

    sets: list[tuple] = []
    for k, (lo, hi) in enumerate(problem.bounds):
        if lo is not None or hi is not None:
            sets.append(("box", k, -math.inf if lo is None else lo, math.inf if hi is None else hi))
    for i, j, lo, hi in problem.difference_constraints:
        sets.append(("slab", i, j, lo, hi))
    if not sets:
        return QpSolution(tuple(x), (), 0)

    increments = [np.zeros(d) for _ in sets]
    sweeps = 0
    while True:
        sweeps += 1
        if sweeps > max_iter:
            raise MaxIterations(f"Dykstra did not converge in {max_iter} sweeps")
        delta = 0.0
        for si, spec in enumerate(sets):
            y = x + increments[si]
            z = y.copy()
            if spec[0] == "box":
                _, k, lo, hi = spec
                z[k] = min(max(y[k], lo), hi)
            else:
                _, i, j, lo, hi = spec
                gap = y[i] - y[j]
                shift = (gap - min(max(gap, lo), hi)) / 2.0
                z[i] -= shift
                z[j] += shift
            increments[si] = y - z
            delta = max(delta, float(np.max(np.abs(z - x))))
            x = z
        if delta < tol:
            break

    rows = constraint_rows(problem)
    active = tuple(
        idx
        for idx, (a, b, eq) in enumerate(rows)
        if eq or abs(_slack(a, b, x)) <= 1e-8
    )
    return QpSolution(tuple(float(v) for v in x), active, sweeps)


# --------------------------------------------------------------------------
# Debug dumps for failure triage.


def problem_to_json(problem: QpProblem) -> str:
    return json.dumps(
        {
            "center": list(problem.center),
            "bounds": [list(b) for b in problem.bounds],
            "difference_constraints": [list(c) for c in problem.difference_constraints],
        },
        sort_keys=True,
    )


def problem_from_json(text: str) -> QpProblem:
    data = json.loads(text)
    return QpProblem(
        center=tuple(data["center"]),
        bounds=tuple((b[0], b[1]) for b in data.get("bounds", [])),
        difference_constraints=tuple(
            (int(c[0]), int(c[1]), float(c[2]), float(c[3]))
            for c in data.get("difference_constraints", [])
        ),
    )


def solution_to_json(solution: QpSolution) -> str:
    return json.dumps(
        {
            "point": list(solution.point),
            "active_set": list(solution.active_set),
            "iterations": solution.iterations,
            "multipliers": list(solution.multipliers),
        },
        sort_keys=True,
    )
