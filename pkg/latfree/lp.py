"""Exact two-phase simplex over Fraction / QuadExt scalars, Bland's rule throughout."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence

from .core_num import Scalar, as_scalar

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    value: Optional[Scalar] = None
    x: Optional[tuple[Scalar, ...]] = None

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


def _pivot(T: List[List[Scalar]], row: int, col: int) -> None:
    p = T[row][col]
    T[row] = [v / p for v in T[row]]
    pivot_row = T[row]
    for i, r in enumerate(T):
        if i == row:
            continue
        f = r[col]
        if f != 0:
            T[i] = [v - f * w for v, w in zip(r, pivot_row)]


def _run(T: List[List[Scalar]], basis: List[int], cost: Sequence[Scalar], allowed: Sequence[bool]) -> bool:
    """Maximize cost·y from the feasible basis. Returns False if unbounded."""
    n_cols = len(cost)
    while True:
        entering = -1
        for j in range(n_cols):
            if not allowed[j] or j in basis:
                continue
            z = ZERO
            for i, bi in enumerate(basis):
                c = cost[bi]
                if c != 0:
                    z = z + c * T[i][j]
            if cost[j] - z > 0:
                entering = j
                break
        if entering < 0:
            return True
        leaving = -1
        best = None
        for i, row in enumerate(T):
            coef = row[entering]
            if coef > 0:
                ratio = row[-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving < 0:
            return False
        _pivot(T, leaving, entering)
        basis[leaving] = entering


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Maximize ⟨c, x⟩ subject to A x ≤ b with x free."""
    n = len(c)
    m = len(A)
    c = [as_scalar(v) for v in c]
    A = [[as_scalar(v) for v in row] for row in A]
    b = [as_scalar(v) for v in b]
    if m == 0:
        if any(v != 0 for v in c):
            return LPResult(LPStatus.UNBOUNDED)
        return LPResult(LPStatus.OPTIMAL, ZERO, tuple(ZERO for _ in range(n)))

    # columns: x+ (n) | x- (n) | slack (m) | artificial (m) | rhs
    n_struct = 2 * n + m
    n_cols = n_struct + m
    T: List[List[Scalar]] = []
    basis: List[int] = []
    for i in range(m):
        row = [ZERO] * (n_cols + 1)
        flip = b[i] < 0
        s = -1 if flip else 1
        for j in range(n):
            row[j] = s * A[i][j]
            row[n + j] = -s * A[i][j]
        row[2 * n + i] = Fraction(s)
        row[-1] = s * b[i]
        if flip:
            row[n_struct + i] = ONE
            basis.append(n_struct + i)
        else:
            basis.append(2 * n + i)
        T.append(row)

    artificial = [j >= n_struct for j in range(n_cols)]
    if any(basis[i] >= n_struct for i in range(m)):
        phase1_cost = [-ONE if artificial[j] else ZERO for j in range(n_cols)]
        _run(T, basis, phase1_cost, [True] * n_cols)
        infeasibility = sum((T[i][-1] for i in range(m) if basis[i] >= n_struct), ZERO)
        if infeasibility > 0:
            return LPResult(LPStatus.INFEASIBLE)
        # drive zero-level artificials out of the basis
        i = 0
        while i < len(T):
            if basis[i] >= n_struct:
                col = next((j for j in range(n_struct) if T[i][j] != 0), None)
                if col is None:
                    del T[i]
                    del basis[i]
                    continue
                _pivot(T, i, col)
                basis[i] = col
            i += 1

    cost = [ZERO] * n_cols
    for j in range(n):
        cost[j] = c[j]
        cost[n + j] = -c[j]
    if not _run(T, basis, cost, [not a for a in artificial]):
        return LPResult(LPStatus.UNBOUNDED)

    values = [ZERO] * n_cols
    for i, bi in enumerate(basis):
        values[bi] = T[i][-1]
    x = tuple(values[j] - values[n + j] for j in range(n))
    value = sum((c[j] * x[j] for j in range(n)), ZERO)
    return LPResult(LPStatus.OPTIMAL, value, x)


def minimize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    res = maximize([-as_scalar(v) for v in c], A, b)
    if res.optimal:
        return LPResult(res.status, -res.value, res.x)
    return res


def feasible_point(A: Sequence[Sequence], b: Sequence, n: int) -> Optional[tuple[Scalar, ...]]:
    res = maximize([ZERO] * n, A, b)
    return res.x if res.optimal else None
