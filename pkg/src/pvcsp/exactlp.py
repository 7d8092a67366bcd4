"""Exact rational LP in standard equality form (min c.x, Ax = b, x >= 0).

Two-phase simplex with Bland's anti-cycling rule over Fractions.  Also
provides the relative-interior machinery: a support profile (which
coordinates can be positive over the feasible region) and a relative
interior point obtained by averaging coordinate-maximising witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DimensionMismatch, InfeasibleRegion, UnboundedObjective

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LinearProgram:
    n: int
    rows: list[list[Fraction]]
    rhs: list[Fraction]
    objective: list[Fraction]

    def __post_init__(self):
        if len(self.objective) != self.n:
            raise DimensionMismatch("objective length != n")
        if len(self.rows) != len(self.rhs):
            raise DimensionMismatch("row count != rhs count")
        for row in self.rows:
            if len(row) != self.n:
                raise DimensionMismatch("row length != n")

    def with_extra_row(self, row: list[Fraction], b: Fraction) -> "LinearProgram":
        return LinearProgram(
            self.n,
            [r[:] for r in self.rows] + [row[:]],
            self.rhs + [b],
            self.objective[:],
        )

    def with_objective(self, objective: list[Fraction]) -> "LinearProgram":
        return LinearProgram(self.n, self.rows, self.rhs, objective)


INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
OPTIMAL = "optimal"


@dataclass
class LPResult:
    status: str
    value: Optional[Fraction] = None
    point: Optional[list[Fraction]] = None
    ray: Optional[list[Fraction]] = None  # improving ray when unbounded


class _Tableau:
    """Simplex tableau with an explicit basis; columns beyond lp.n are
    phase-1 artificials."""

    def __init__(self, lp: LinearProgram):
        self.n = lp.n
        m = len(lp.rows)
        self.m = m
        # flip rows so rhs >= 0, then append the artificial identity
        self.rows: list[list[Fraction]] = []
        self.rhs: list[Fraction] = []
        for i in range(m):
            if lp.rhs[i] < 0:
                self.rows.append([-a for a in lp.rows[i]])
                self.rhs.append(-lp.rhs[i])
            else:
                self.rows.append(list(lp.rows[i]))
                self.rhs.append(lp.rhs[i])
        for i in range(m):
            art = [ZERO] * m
            art[i] = ONE
            self.rows[i] = self.rows[i] + art
        self.width = self.n + m
        self.basis = [self.n + i for i in range(m)]

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        p = prow[c]
        if p != ONE:
            inv = ONE / p
            self.rows[r] = prow = [a * inv for a in prow]
            self.rhs[r] = self.rhs[r] * inv
        nz = [j for j, v in enumerate(prow) if v != 0]
        prhs = self.rhs[r]
        for i in range(len(self.rows)):
            if i == r:
                continue
            row = self.rows[i]
            f = row[c]
            if f == 0:
                continue
            for j in nz:
                row[j] = row[j] - f * prow[j]
            self.rhs[i] = self.rhs[i] - f * prhs
        self.basis[r] = c

    def reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        red = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb == 0:
                continue
            row = self.rows[i]
            for j in range(self.width):
                if row[j] != 0:
                    red[j] -= cb * row[j]
        return red

    def _first_negative(self, cost: list[Fraction], allowed: int) -> int:
        """Lowest-index column with negative reduced cost, or -1.

        Computed column by column so the scan stops at the first hit
        instead of pricing the whole tableau."""
        priced = [
            (i, cost[b]) for i, b in enumerate(self.basis) if cost[b] != 0
        ]
        for j in range(allowed):
            red = cost[j]
            for i, cb in priced:
                a = self.rows[i][j]
                if a != 0:
                    red -= cb * a
            if red < 0:
                return j
        return -1

    def run(self, cost: list[Fraction], allowed: int) -> Optional[int]:
        """Minimise cost over columns [0, allowed) with Bland's rule.

        Returns None on optimality, or the entering column index on
        unboundedness (no positive pivot entry in that column).
        """
        while True:
            enter = self._first_negative(cost, allowed)
            if enter < 0:
                return None
            leave = -1
            best = None
            for i in range(len(self.rows)):
                a = self.rows[i][enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leave])
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return enter
            self.pivot(leave, enter)

    def solution(self) -> list[Fraction]:
        x = [ZERO] * self.n
        for i, b in enumerate(self.basis):
            if b < self.n:
                x[b] = self.rhs[i]
        return x

    def ray(self, enter: int) -> list[Fraction]:
        d = [ZERO] * self.n
        if enter < self.n:
            d[enter] = ONE
        for i, b in enumerate(self.basis):
            if b < self.n:
                d[b] = -self.rows[i][enter]
        return d


def _phase1(lp: LinearProgram) -> Optional[_Tableau]:
    """Find a basic feasible tableau, or None if the region is empty."""
    tab = _Tableau(lp)
    cost = [ZERO] * lp.n + [ONE] * tab.m
    unb = tab.run(cost, tab.width)
    assert unb is None, "phase-1 objective is bounded below by 0"
    value = sum(
        (tab.rhs[i] for i, b in enumerate(tab.basis) if b >= lp.n),
        ZERO,
    )
    if value != 0:
        return None
    # drive artificials out of the basis; drop rows that are redundant
    for i in range(len(tab.basis) - 1, -1, -1):
        if tab.basis[i] < lp.n:
            continue
        piv = -1
        for j in range(lp.n):
            if tab.rows[i][j] != 0:
                piv = j
                break
        if piv >= 0:
            tab.pivot(i, piv)
        else:
            del tab.rows[i]
            del tab.rhs[i]
            del tab.basis[i]
    return tab


def solve_lp(lp: LinearProgram) -> LPResult:
    """Exact classification; Optimal returns a minimising basic solution."""
    tab = _phase1(lp)
    if tab is None:
        return LPResult(INFEASIBLE)
    cost = list(lp.objective) + [ZERO] * (tab.width - lp.n)
    enter = tab.run(cost, lp.n)
    if enter is not None:
        return LPResult(UNBOUNDED, point=tab.solution(), ray=tab.ray(enter))
    point = tab.solution()
    value = sum((c * x for c, x in zip(lp.objective, point)), ZERO)
    return LPResult(OPTIMAL, value=value, point=point)


def _support_witnesses(lp: LinearProgram) -> tuple[list[bool], list[list[Fraction]]]:
    """Per-coordinate can-be-positive flags plus feasible witness points.

    Each flagged coordinate is positive in at least one returned witness.
    A coordinate already positive in a collected witness needs no extra LP
    solve, so the n auxiliary solves usually collapse to a handful.
    """
    tab = _phase1(lp)
    if tab is None:
        raise InfeasibleRegion("support profile of an empty region")
    base = tab.solution()
    flags = [False] * lp.n
    witnesses = [base]
    for i in range(lp.n):
        if any(w[i] > 0 for w in witnesses):
            flags[i] = True
            continue
        obj = [ZERO] * lp.n
        obj[i] = Fraction(-1)
        res = solve_lp(lp.with_objective(obj))
        if res.status == UNBOUNDED:
            # the improving ray has positive i-th component
            witness = [p + d for p, d in zip(res.point, res.ray)]
            flags[i] = True
            witnesses.append(witness)
        elif res.value < 0:
            flags[i] = True
            witnesses.append(res.point)
    return flags, witnesses


def support_profile(lp: LinearProgram) -> list[bool]:
    """flag_i is true iff x_i can be positive somewhere in the region."""
    flags, _ = _support_witnesses(lp)
    return flags


def relative_interior_point(lp: LinearProgram) -> list[Fraction]:
    """A feasible point positive exactly on the support profile.

    The uniform average of the witnesses: averaging preserves the equality
    constraints and strict positivity by convexity.
    """
    point, _ = relative_interior_point_with_flags(lp)
    return point


def relative_interior_point_with_flags(
    lp: LinearProgram,
) -> tuple[list[Fraction], list[bool]]:
    flags, witnesses = _support_witnesses(lp)
    k = Fraction(len(witnesses))
    point = [
        sum((w[i] for w in witnesses), ZERO) / k for i in range(lp.n)
    ]
    return point, flags


def restrict_to_optimal_face(lp: LinearProgram) -> LinearProgram:
    """Append the equality objective = optimal value."""
    res = solve_lp(lp)
    if res.status == INFEASIBLE:
        raise InfeasibleRegion("cannot restrict an empty region")
    if res.status == UNBOUNDED:
        raise UnboundedObjective("objective unbounded below on the region")
    return lp.with_extra_row(list(lp.objective), res.value)
