"""Independent oracles used by the tests: vertex enumeration for LPs and
box enumeration for integer systems.  These never share code with the
solver paths they check."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

ZERO = Fraction(0)


def solve_unique(rows, rhs):
    """Unique solution of a (possibly rectangular) system, or None when the
    system is inconsistent or underdetermined."""
    m = len(rows)
    k = len(rows[0]) if m else 0
    M = [list(map(Fraction, rows[i])) + [Fraction(rhs[i])] for i in range(m)]
    pivots = 0
    for col in range(k):
        piv = next((r for r in range(pivots, m) if M[r][col] != 0), None)
        if piv is None:
            return None  # free column: not unique
        M[pivots], M[piv] = M[piv], M[pivots]
        inv = Fraction(1) / M[pivots][col]
        M[pivots] = [a * inv for a in M[pivots]]
        for r in range(m):
            if r != pivots and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[pivots])]
        pivots += 1
    for r in range(pivots, m):
        if M[r][k] != 0:
            return None  # inconsistent
    return [M[r][k] for r in range(k)]


def enumerate_vertices(lp):
    """All basic feasible solutions of {Ax=b, x>=0}: supports of size at
    most m with independent columns and a nonnegative unique solution."""
    m = len(lp.rows)
    vertices = []
    for size in range(0, min(m, lp.n) + 1):
        for cols in itertools.combinations(range(lp.n), size):
            rows = [[lp.rows[i][j] for j in cols] for i in range(m)]
            if size == 0:
                sol = [] if all(b == 0 for b in lp.rhs) else None
            else:
                sol = solve_unique(rows, lp.rhs)
            if sol is None or any(v < 0 for v in sol):
                continue
            x = [ZERO] * lp.n
            for j, v in zip(cols, sol):
                x[j] = v
            if x not in vertices:
                vertices.append(x)
    return vertices


def vertex_minimum(lp):
    """Minimum objective over enumerated vertices; None if no vertex."""
    vertices = enumerate_vertices(lp)
    if not vertices:
        return None
    return min(
        sum((c * x for c, x in zip(lp.objective, v)), ZERO) for v in vertices
    )


def box_solutions(A, b, bound):
    """Integer points x with |x_i| <= bound and Ax = b, via numpy.

    Entries stay far inside int64, so the arithmetic is exact.  Chunked
    over the first coordinate to bound peak memory.
    """
    n = len(A[0])
    An = np.array(A, dtype=np.int64)
    bn = np.array(b, dtype=np.int64)
    axis = np.arange(-bound, bound + 1)
    if n == 1:
        X = axis[None, :]
        mask = np.all(An @ X == bn[:, None], axis=0)
        return X[:, mask].T
    chunks = []
    for x0 in axis:
        grids = np.meshgrid(*[axis] * (n - 1), indexing="ij")
        X = np.stack(
            [np.full(grids[0].size, x0)] + [g.ravel() for g in grids]
        )
        mask = np.all(An @ X == bn[:, None], axis=0)
        if mask.any():
            chunks.append(X[:, mask].T)
    if not chunks:
        return np.empty((0, n), dtype=np.int64)
    return np.concatenate(chunks)


def box_min_objective(A, b, c_num, c_den, bound):
    """Exact min of c.x over box solutions; c given as integer numerators
    over one common denominator.  Returns None if no solution."""
    rng = box_objective_range(A, b, c_num, c_den, bound)
    return None if rng is None else rng[0]


def box_objective_range(A, b, c_num, c_den, bound):
    """Exact (min, max) of c.x over box solutions, or None if empty.

    A strict spread certifies an unbounded objective on the full solution
    set: the difference of two solutions is an integer kernel direction
    the objective is not orthogonal to.
    """
    sols = box_solutions(A, b, bound)
    if sols.shape[0] == 0:
        return None
    vals = sols @ np.array(c_num, dtype=np.int64)
    return Fraction(int(vals.min()), c_den), Fraction(int(vals.max()), c_den)
