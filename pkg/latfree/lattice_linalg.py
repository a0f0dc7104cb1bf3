"""Linear algebra over exact fields and over the integer lattice Z^d.

The field routines (rref, nullspace, solve, determinant) accept Fraction or QuadExt
entries. The lattice routines work on plain Python ints.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple

from .core_num import QuadExt, Scalar, as_scalar, quad_is_rational
from .errors import DimensionError, NonPrimitiveError, ScalarError

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


# --- Field linear algebra ---

def rref(rows: Sequence[Sequence]) -> Tuple[List[List[Scalar]], List[int]]:
    """Reduced row echelon form and pivot columns. Zero rows are dropped."""
    M = [[as_scalar(v) for v in row] for row in rows]
    if not M:
        return [], []
    n_cols = len(M[0])
    pivots: List[int] = []
    r = 0
    for j in range(n_cols):
        p = next((i for i in range(r, len(M)) if M[i][j] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][j]
        M[r] = [v / pv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][j] != 0:
                f = M[i][j]
                M[i] = [v - f * w for v, w in zip(M[i], M[r])]
        pivots.append(j)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], n_cols: int) -> List[List[Scalar]]:
    """Basis of {x : rows·x = 0}, one vector per free column."""
    R, pivots = rref(rows)
    free = [j for j in range(n_cols) if j not in pivots]
    basis = []
    for f in free:
        v: List[Scalar] = [ZERO] * n_cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> Optional[List[Scalar]]:
    """Unique solution of the square system A x = b, or None if A is singular."""
    n = len(A)
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [R[i][n] for i in range(n)]


def solve_combination(vectors: Sequence[Sequence], target: Sequence) -> Optional[List[Scalar]]:
    """Coefficients λ with Σ λ_i vectors[i] = target, assuming independent vectors."""
    r = len(vectors)
    d = len(target)
    aug = [[vectors[i][c] for i in range(r)] + [target[c]] for c in range(d)]
    R, pivots = rref(aug)
    if r in pivots or pivots != list(range(r)):
        return None
    return [R[i][r] for i in range(r)]


def determinant(rows: Sequence[Sequence]) -> Scalar:
    M = [[as_scalar(v) for v in row] for row in rows]
    n = len(M)
    det: Scalar = Fraction(1)
    for j in range(n):
        p = next((i for i in range(j, n) if M[i][j] != 0), None)
        if p is None:
            return ZERO
        if p != j:
            M[j], M[p] = M[p], M[j]
            det = -det
        pv = M[j][j]
        det = det * pv
        for i in range(j + 1, n):
            if M[i][j] != 0:
                f = M[i][j] / pv
                M[i] = [v - f * w for v, w in zip(M[i], M[j])]
    return det


def is_rational_subspace(vectors: Sequence[Sequence]) -> bool:
    """True iff span(vectors) = lin(span ∩ Z^d). The RREF basis of a subspace is canonical."""
    R, _ = rref(vectors)
    return all(not isinstance(v, QuadExt) for row in R for v in row)


# --- Integer matrices ---

@dataclass(frozen=True)
class IntMatrix:
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise DimensionError("IntMatrix needs rows·cols > 0")
        width = len(self.entries[0])
        if any(len(r) != width for r in self.entries):
            raise DimensionError("ragged IntMatrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntMatrix:
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def transpose(self) -> IntMatrix:
        return IntMatrix(tuple(zip(*self.entries)))

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = list(zip(*other.entries))
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                               for row in self.entries))

    def apply(self, v: Sequence) -> Tuple:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for a {self.rows}x{self.cols} matrix")
        return tuple(sum((a * x for a, x in zip(row, v)), 0) for row in self.entries)

    def det(self) -> int:
        value = determinant(self.entries)
        return int(value)

    def to_lists(self) -> List[List[int]]:
        return [list(r) for r in self.entries]


def integer_inverse(M: IntMatrix) -> IntMatrix:
    n = M.rows
    aug = [list(M.entries[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise DimensionError("matrix is singular")
    inv = [[R[i][n + j] for j in range(n)] for i in range(n)]
    if any(v.denominator != 1 for row in inv for v in row):
        raise DimensionError("matrix is not unimodular")
    return IntMatrix.from_rows([[int(v) for v in row] for row in inv])


@dataclass(frozen=True)
class UnimodularMap:
    forward: IntMatrix
    inverse: IntMatrix

    def __post_init__(self) -> None:
        n = self.forward.rows
        if self.forward.cols != n or self.inverse.rows != n or self.inverse.cols != n:
            raise DimensionError("unimodular map needs square matrices of one size")
        if self.forward @ self.inverse != IntMatrix.identity(n):
            raise DimensionError("forward·inverse is not the identity")

    @classmethod
    def from_matrix(cls, M: IntMatrix) -> UnimodularMap:
        return cls(M, integer_inverse(M))

    @classmethod
    def identity(cls, n: int) -> UnimodularMap:
        eye = IntMatrix.identity(n)
        return cls(eye, eye)

    @property
    def dim(self) -> int:
        return self.forward.rows

    def apply(self, v: Sequence) -> Tuple:
        return self.forward.apply(v)

    def apply_inverse(self, v: Sequence) -> Tuple:
        return self.inverse.apply(v)

    def inverted(self) -> UnimodularMap:
        return UnimodularMap(self.inverse, self.forward)


@dataclass(frozen=True)
class LatticeBasis:
    vectors: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        d = len(self.vectors)
        if d == 0 or any(len(v) != d for v in self.vectors):
            raise DimensionError("a lattice basis needs d vectors of length d")
        if abs(IntMatrix(self.vectors).det()) != 1:
            raise DimensionError("basis vectors do not have determinant ±1")

    @property
    def dim(self) -> int:
        return len(self.vectors)


def primitive_integer_vector(v: Sequence, positive_leading: bool = True) -> Tuple[int, ...]:
    """Smallest integer vector positively proportional to the rational vector v."""
    fr = []
    for x in v:
        q = quad_is_rational(as_scalar(x))
        if q is None:
            raise ScalarError(f"vector entry {x} is irrational")
        fr.append(q)
    lcm = reduce(lambda acc, f: acc * f.denominator // math.gcd(acc, f.denominator), fr, 1)
    ints = [int(f * lcm) for f in fr]
    g = reduce(math.gcd, (abs(x) for x in ints), 0)
    if g == 0:
        raise ScalarError("zero vector has no primitive form")
    ints = [x // g for x in ints]
    if positive_leading:
        lead = next(x for x in ints if x != 0)
        if lead < 0:
            ints = [-x for x in ints]
    return tuple(ints)


def hnf(M: IntMatrix) -> Tuple[IntMatrix, UnimodularMap]:
    """Row-style Hermite normal form: U·M = H.

    H is in row echelon form, pivots positive, entries above each pivot reduced into
    [0, pivot). Pivot search goes column by column; Euclid picks the smallest nonzero
    entry, ties by row index.
    """
    A = [list(r) for r in M.entries]
    m, n = M.rows, M.cols
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap(i: int, k: int) -> None:
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def sub(i: int, k: int, q: int) -> None:
        A[i] = [x - q * y for x, y in zip(A[i], A[k])]
        U[i] = [x - q * y for x, y in zip(U[i], U[k])]

    r = 0
    for j in range(n):
        if r == m:
            break
        found = False
        while True:
            nz = [i for i in range(r, m) if A[i][j] != 0]
            if not nz:
                break
            found = True
            p = min(nz, key=lambda i: (abs(A[i][j]), i))
            swap(p, r)
            clean = True
            for i in range(r + 1, m):
                if A[i][j] != 0:
                    sub(i, r, A[i][j] // A[r][j])
                    clean = clean and A[i][j] == 0
            if clean:
                break
        if not found:
            continue
        if A[r][j] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = A[i][j] // A[r][j]
            if q:
                sub(i, r, q)
        r += 1

    U_mat = IntMatrix.from_rows(U)
    return IntMatrix.from_rows(A), UnimodularMap.from_matrix(U_mat)


def _check_int_vectors(vectors: Sequence[Sequence], d: int) -> List[List[int]]:
    out = []
    for v in vectors:
        if len(v) != d:
            raise DimensionError(f"vector {tuple(v)} is not in dimension {d}")
        row = []
        for x in v:
            q = quad_is_rational(as_scalar(x))
            if q is None or q.denominator != 1:
                raise ScalarError(f"vector {tuple(v)} is not integral")
            row.append(int(q))
        out.append(row)
    return out


def _saturation(rows: List[List[int]], d: int) -> Tuple[List[Tuple[int, ...]], List[Tuple[int, ...]], int]:
    """For independent integer rows V: (basis of lin(V) ∩ Z^d, complement rows, index)."""
    r = len(rows)
    H, U = hnf(IntMatrix.from_rows(rows).transpose())
    if any(H.entries[i][i] == 0 for i in range(r)) or any(any(H.entries[i]) for i in range(r, d)):
        raise DimensionError("vectors are linearly dependent")
    index = math.prod(H.entries[i][i] for i in range(r))
    # V·Uᵀ = [Hᵀ | 0], so the rows of (U⁻¹)ᵀ are a lattice basis whose first r span lin(V)
    B = [U.inverse.column(j) for j in range(d)]
    return B[:r], B[r:], index


def extend_to_basis(primitive: Sequence[Sequence[int]], dim: Optional[int] = None) -> LatticeBasis:
    """Complete a primitive set u_1..u_r to a basis u_1..u_d of Z^d."""
    if not primitive:
        if dim is None:
            raise DimensionError("dimension is required for an empty set")
        return LatticeBasis(IntMatrix.identity(dim).entries)
    d = dim if dim is not None else len(primitive[0])
    V = _check_int_vectors(primitive, d)
    saturated, complement, index = _saturation(V, d)
    if index != 1:
        for b in saturated:
            coeffs = solve_combination(V, b)
            if coeffs is None or any(c.denominator != 1 for c in coeffs):
                witness = primitive_integer_vector(b)
                raise NonPrimitiveError(
                    f"vectors are not primitive (index {index}); {witness} lies in their span but not in their integer span",
                    witness,
                )
        raise NonPrimitiveError(f"vectors are not primitive (index {index})", saturated[0])
    basis = LatticeBasis(tuple(tuple(v) for v in V) + tuple(complement))
    logger.debug(f"LINALG: extended {len(V)} vectors to basis {basis.vectors}")
    return basis


def sublattice_of_subspace(spanning: Sequence[Sequence], dim: Optional[int] = None) -> List[Tuple[int, ...]]:
    """HNF basis of L ∩ Z^d for the rational subspace L = span(spanning)."""
    nonzero = [v for v in spanning if any(as_scalar(x) != 0 for x in v)]
    if not nonzero:
        return []
    d = dim if dim is not None else len(nonzero[0])
    ints = [list(primitive_integer_vector(v, positive_leading=False)) for v in nonzero]
    H, _ = hnf(IntMatrix.from_rows(ints))
    independent = [list(r) for r in H.entries if any(r)]
    saturated, _, _ = _saturation(independent, d)
    H2, _ = hnf(IntMatrix.from_rows(saturated))
    return [r for r in H2.entries if any(r)]


def is_rational_direction(v: Sequence) -> Optional[Tuple[int, ...]]:
    """Primitive integer vector proportional to v, or None if v spans an irrational line.

    With v_i = a_i + b_i√k, v is proportional to a rational vector iff every minor
    a_i b_j − a_j b_i vanishes.
    """
    vals = [as_scalar(x) for x in v]
    if all(x == 0 for x in vals):
        raise ScalarError("zero vector has no direction")
    a = [x.a if isinstance(x, QuadExt) else x for x in vals]
    b = [x.b if isinstance(x, QuadExt) else ZERO for x in vals]
    n = len(vals)
    for i in range(n):
        for j in range(i + 1, n):
            if a[i] * b[j] - a[j] * b[i] != 0:
                return None
    w = a if any(x != 0 for x in a) else b
    return primitive_integer_vector(w)


def unimodular_from_basis(B: LatticeBasis) -> UnimodularMap:
    """The map A with A(u_i) = e_i; its inverse has the u_i as columns."""
    M = IntMatrix(B.vectors).transpose()
    return UnimodularMap(integer_inverse(M), M)
