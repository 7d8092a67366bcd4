"""Integer linear algebra: column-style Hermite normal form, Diophantine
systems, and exact evaluation of affine integer program values.

A linear objective over an affine integer lattice is either constant or
unbounded below, so a program value is always one of {+inf, finite, -inf}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DimensionMismatch
from .values import MINUS_INF, PLUS_INF, ExtVal

IntMatrix = list[list[int]]


@dataclass
class AffineLattice:
    """All integer solutions of Ax = b: x0 plus integer combinations of the
    kernel basis (which generates the full integer kernel of A)."""

    x0: list[int]
    kernel_basis: list[list[int]]
    dimension: int


INFEASIBLE = "infeasible"


def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _swap_cols(M: IntMatrix, a: int, b: int) -> None:
    for row in M:
        row[a], row[b] = row[b], row[a]


def _addmul_col(M: IntMatrix, dst: int, src: int, k: int) -> None:
    for row in M:
        row[dst] += k * row[src]


def _negate_col(M: IntMatrix, c: int) -> None:
    for row in M:
        row[c] = -row[c]


def hermite_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column HNF: returns (H, U) with A*U = H, U unimodular, H in
    lower-triangular profile with positive pivots and reduced off-profile
    entries."""
    m = len(A)
    n = len(A[0]) if m else 0
    H = [list(row) for row in A]
    U = _identity(n)
    c = 0
    for r in range(m):
        if c >= n:
            break
        # gcd-reduce columns c..n-1 against each other on row r
        while True:
            nonzero = [j for j in range(c, n) if H[r][j] != 0]
            if not nonzero:
                break
            j = min(nonzero, key=lambda k: abs(H[r][k]))
            if j != c:
                _swap_cols(H, c, j)
                _swap_cols(U, c, j)
            done = True
            for k in range(c + 1, n):
                if H[r][k] != 0:
                    q = H[r][k] // H[r][c]
                    _addmul_col(H, k, c, -q)
                    _addmul_col(U, k, c, -q)
                    if H[r][k] != 0:
                        done = False
            if done:
                break
        if H[r][c] != 0:
            if H[r][c] < 0:
                _negate_col(H, c)
                _negate_col(U, c)
            for k in range(c):
                q = H[r][k] // H[r][c]
                if q != 0:
                    _addmul_col(H, k, c, -q)
                    _addmul_col(U, k, c, -q)
            c += 1
    return H, U


def solve_integer_system(
    A: IntMatrix, b: Sequence[int], ncols: Optional[int] = None
) -> Union[AffineLattice, str]:
    """All integer solutions of Ax = b, or INFEASIBLE.

    ncols disambiguates the dimension when A has no rows.  The particular
    solution comes from forward substitution on the HNF; the kernel basis is
    the trailing unimodular columns past the rank profile.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    if ncols is not None and ncols != n:
        raise DimensionMismatch("ncols disagrees with matrix width")
    if len(b) != m:
        raise DimensionMismatch("rhs length != row count")
    for row in A:
        if len(row) != n:
            raise DimensionMismatch("ragged matrix")
    if m == 0:
        return AffineLattice([0] * n, _identity(n), n)
    if n == 0:
        if any(v != 0 for v in b):
            return INFEASIBLE
        return AffineLattice([], [], 0)
    H, U = hermite_normal_form(A)
    y = [0] * n
    c = 0
    for r in range(m):
        if c < n and H[r][c] != 0:
            residual = b[r] - sum(H[r][j] * y[j] for j in range(c))
            if residual % H[r][c] != 0:
                return INFEASIBLE
            y[c] = residual // H[r][c]
            c += 1
        else:
            residual = b[r] - sum(H[r][j] * y[j] for j in range(c))
            if residual != 0:
                return INFEASIBLE
    rank = c
    x0 = [sum(U[i][j] * y[j] for j in range(rank)) for i in range(n)]
    kernel = [[U[i][j] for i in range(n)] for j in range(rank, n)]
    return AffineLattice(x0, kernel, n)


def evaluate_affine_min(
    c: Sequence[Fraction], lattice: Union[AffineLattice, str]
) -> ExtVal:
    """Value of min c.x over the lattice: +inf, -inf, or the constant."""
    if lattice == INFEASIBLE:
        return PLUS_INF
    if len(c) != lattice.dimension:
        raise DimensionMismatch("objective length != lattice dimension")
    for v in lattice.kernel_basis:
        if sum((ci * vi for ci, vi in zip(c, v)), Fraction(0)) != 0:
            return MINUS_INF
    return sum((ci * xi for ci, xi in zip(c, lattice.x0)), Fraction(0))


def check_threshold(value: ExtVal, u: Fraction) -> bool:
    """value <= u in the extended order."""
    return value <= u
