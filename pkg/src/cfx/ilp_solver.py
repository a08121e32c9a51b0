"""Exact, deterministic branch-and-bound for 0/1 integer linear programs.

The search branches on variables in ascending id order, trying each
variable's preferred value (the factual indicator value, when the encoder
set one) first and keeping only strict objective improvements, which makes
the returned optimum the one whose diff-from-preferred vector is
lexicographically minimal.  Objective arithmetic is integer-scaled from the
problem's exact rational weights, so pruning decisions never depend on
floating point.

Propagation is bounds-based per constraint: residual minimum/maximum
activities are maintained incrementally and any variable whose alternative
value would overshoot a row's right-hand side is fixed, to fixpoint.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .encoder import IlpProblem, LinearConstraint
from .errors import CapExceeded, Infeasible

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
CAP_EXCEEDED = "cap_exceeded"


@dataclass(frozen=True)
class SolverConfig:
    node_cap: int = 10_000_000
    time_limit: float | None = None  # seconds of wall time


@dataclass
class Solution:
    status: str
    assignment: dict[int, int] | None
    objective_value: Fraction | None
    nodes: int
    elapsed: float

    @property
    def objective_float(self) -> float | None:
        return None if self.objective_value is None else float(self.objective_value)


class _Frame:
    __slots__ = ("var", "tried", "first", "trail_mark")

    def __init__(self, var: int, first: int, trail_mark: int):
        self.var = var
        self.tried = 0
        self.first = first
        self.trail_mark = trail_mark


class _Search:
    def __init__(self, problem: IlpProblem, config: SolverConfig):
        self.problem = problem
        self.config = config
        self.n = len(problem.variables)
        self.sense_sign = 1 if problem.sense == "min" else -1

        # integer-scale the objective
        denom = 1
        for c in problem.objective.values():
            denom = denom * c.denominator // gcd(denom, c.denominator)
        self.denom = denom
        self.obj = [0] * self.n
        for var, coef in problem.objective.items():
            self.obj[var] = self.sense_sign * int(coef * denom)

        # normalize constraints to <= rows
        self.row_items: list[list[tuple[int, int]]] = []
        self.rhs: list[int] = []
        for con in problem.constraints:
            if con.relation in ("<=", "=="):
                self.row_items.append(list(con.coeffs))
                self.rhs.append(con.rhs)
            if con.relation in (">=", "=="):
                self.row_items.append([(v, -c) for v, c in con.coeffs])
                self.rhs.append(-con.rhs)

        self.n_rows = len(self.rhs)
        self.min_act = [0] * self.n_rows
        self.max_act = [0] * self.n_rows
        self.max_abs = [0] * self.n_rows
        self.occurs: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for r, items in enumerate(self.row_items):
            lo = hi = 0
            biggest = 0
            for v, c in items:
                self.occurs[v].append((r, c))
                if c < 0:
                    lo += c
                else:
                    hi += c
                biggest = max(biggest, abs(c))
            self.min_act[r] = lo
            self.max_act[r] = hi
            self.max_abs[r] = biggest

        self.assignment = [-1] * self.n
        self.trail: list[int] = []
        self.committed = 0
        self.rest_min = sum(c for c in self.obj if c < 0)
        self.abs_obj = [abs(c) for c in self.obj]
        self.max_abs_obj = max(self.abs_obj, default=0)
        self.queue: list[tuple[int, int]] = []
        self.nodes = 0
        self.best: int | None = None
        self.best_assignment: list[int] | None = None

        self.preferred = [0] * self.n
        for v in range(self.n):
            hint = problem.preferred.get(v)
            if hint is not None:
                self.preferred[v] = hint
            else:
                self.preferred[v] = 1 if self.obj[v] < 0 else 0

    # -- incremental state ------------------------------------------------

    def _do_assign(self, var: int, val: int) -> bool:
        # every row update must be applied even on conflict: _undo_to
        # reverses the full occurrence list, so state stays symmetric
        assignment = self.assignment
        min_act, max_act, rhs, max_abs = self.min_act, self.max_act, self.rhs, self.max_abs
        row_items, queue = self.row_items, self.queue
        assignment[var] = val
        self.trail.append(var)
        c = self.obj[var]
        self.committed += c * val
        if c < 0:
            self.rest_min -= c
        ok = True
        for r, coef in self.occurs[var]:
            if val:
                lo = min_act[r] + coef - (coef if coef < 0 else 0)
                max_act[r] += coef - (coef if coef > 0 else 0)
            else:
                lo = min_act[r] - (coef if coef < 0 else 0)
                max_act[r] -= coef if coef > 0 else 0
            min_act[r] = lo
            if not ok:
                continue
            limit = rhs[r]
            if lo > limit:
                ok = False
                continue
            slack = limit - lo
            if max_act[r] > limit and slack < max_abs[r]:
                for v2, c2 in row_items[r]:
                    if assignment[v2] == -1 and (c2 if c2 > 0 else -c2) > slack:
                        queue.append((v2, 0 if c2 > 0 else 1))
        return ok

    def _propagate(self) -> bool:
        queue = self.queue
        assignment = self.assignment
        while queue:
            var, val = queue.pop()
            cur = assignment[var]
            if cur != -1:
                if cur != val:
                    queue.clear()
                    return False
                continue
            if not self._do_assign(var, val):
                queue.clear()
                return False
        return True

    def _propagate_with_budget(self) -> bool:
        """Propagation fixpoint plus objective-budget fixing.

        Once an incumbent exists, any unassigned variable whose expensive
        value alone would push the optimistic bound past it must take its
        cheap value; for uniform weights this collapses the final search
        layer into pure propagation.
        """
        while True:
            if not self._propagate():
                return False
            if self.best is None or self.max_abs_obj == 0:
                return True
            budget = self.best - 1 - (self.committed + self.rest_min)
            if budget >= self.max_abs_obj:
                return True
            assignment = self.assignment
            abs_obj = self.abs_obj
            queued = False
            for v in range(self.n):
                if assignment[v] == -1 and abs_obj[v] > budget:
                    self.queue.append((v, 1 if self.obj[v] < 0 else 0))
                    queued = True
            if not queued:
                return True

    def _undo_to(self, mark: int) -> None:
        trail = self.trail
        assignment = self.assignment
        min_act, max_act = self.min_act, self.max_act
        while len(trail) > mark:
            var = trail.pop()
            val = assignment[var]
            assignment[var] = -1
            c = self.obj[var]
            self.committed -= c * val
            if c < 0:
                self.rest_min += c
            if val:
                for r, coef in self.occurs[var]:
                    min_act[r] -= coef - (coef if coef < 0 else 0)
                    max_act[r] -= coef - (coef if coef > 0 else 0)
            else:
                for r, coef in self.occurs[var]:
                    min_act[r] += coef if coef < 0 else 0
                    max_act[r] += coef if coef > 0 else 0

    # -- search -------------------------------------------------------------

    def _try_next(self, frame: _Frame) -> bool:
        """Try the frame's next untried value; True when a child node stands."""
        self._undo_to(frame.trail_mark)
        while frame.tried < 2:
            val = frame.first if frame.tried == 0 else 1 - frame.first
            frame.tried += 1
            self.nodes += 1
            c = self.obj[frame.var]
            bound = self.committed + c * val + self.rest_min - (c if c < 0 else 0)
            if self.best is not None and bound >= self.best:
                continue
            self.queue.append((frame.var, val))
            if self._propagate_with_budget():
                if self.best is None or self.committed + self.rest_min < self.best:
                    return True
            self._undo_to(frame.trail_mark)
        return False

    def run(self) -> Solution:
        start = time.monotonic()
        deadline = None if self.config.time_limit is None else start + self.config.time_limit
        status = OPTIMAL

        for var, val in self.problem.fixed.items():
            self.queue.append((var, val))
        if not self._propagate():
            return Solution(INFEASIBLE, None, None, self.nodes, time.monotonic() - start)

        frames: list[_Frame] = []
        ptr = 0
        while True:
            if self.nodes > self.config.node_cap:
                status = CAP_EXCEEDED
                break
            if deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > deadline:
                status = CAP_EXCEEDED
                break

            while ptr < self.n and self.assignment[ptr] != -1:
                ptr += 1
            descended = False
            if ptr == self.n:
                if self.best is None or self.committed < self.best:
                    self.best = self.committed
                    self.best_assignment = list(self.assignment)
            else:
                frame = _Frame(ptr, self.preferred[ptr], len(self.trail))
                frames.append(frame)
                descended = self._try_next(frame)
                if not descended:
                    frames.pop()
            if descended:
                continue
            while frames:
                top = frames[-1]
                if self._try_next(top):
                    ptr = top.var
                    descended = True
                    break
                frames.pop()
                ptr = top.var
            if not descended:
                break

        elapsed = time.monotonic() - start
        if self.best_assignment is None:
            return Solution(INFEASIBLE if status == OPTIMAL else status, None, None, self.nodes, elapsed)
        value = Fraction(self.sense_sign * self.best, self.denom) + self.problem.objective_constant
        return Solution(status, dict(enumerate(self.best_assignment)), value, self.nodes, elapsed)


def solve(problem: IlpProblem, config: SolverConfig | None = None) -> Solution:
    """Minimize (or maximize) over all feasible 0/1 assignments, exactly."""
    return _Search(problem, config or SolverConfig()).run()


def enumerate_topk(
    problem: IlpProblem, k: int, config: SolverConfig | None = None
) -> tuple[list[Solution], str]:
    """The k best distinct decision-variable assignments, best first.

    After each solution a no-good cut excluding exactly that assignment
    (projected to indicator and one-hot variables) is added, so results are
    pairwise distinct and non-decreasing in objective.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    work = problem.clone()
    scope = problem.decision_ids()
    out: list[Solution] = []
    status = OPTIMAL
    for _ in range(k):
        sol = solve(work, config)
        if sol.status == CAP_EXCEEDED:
            status = CAP_EXCEEDED
            break
        if sol.status == INFEASIBLE:
            if not out:
                status = INFEASIBLE
            break
        out.append(sol)
        ones = [v for v in scope if sol.assignment[v] == 1]
        zeros = [v for v in scope if sol.assignment[v] == 0]
        coeffs = {v: 1 for v in ones}
        coeffs.update({v: -1 for v in zeros})
        work.constraints.append(
            LinearConstraint(tuple(coeffs.items()), "<=", len(ones) - 1, "nogood", f"cut{len(out)}")
        )
    return out, status


def require_optimal(solution: Solution) -> Solution:
    """Raise the matching error unless the solution is optimal."""
    if solution.status == INFEASIBLE:
        raise Infeasible("no feasible assignment satisfies the constraint system")
    if solution.status == CAP_EXCEEDED:
        raise CapExceeded("solver budget exhausted before proving optimality")
    return solution
