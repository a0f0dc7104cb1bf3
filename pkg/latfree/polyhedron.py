"""Exact H-representation polyhedra {x : ⟨a_i, x⟩ ≤ b_i}."""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import config
from .core_num import QuadExt, Scalar, as_scalar, field_of
from .errors import (
    DimensionError,
    EmptyPolyhedronError,
    InvariantViolation,
    NotFullDimensionalError,
    UnboundedError,
)
from .lattice_linalg import UnimodularMap, determinant, nullspace, rank, solve
from .lp import LPResult, maximize

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)

Vector = Tuple[Scalar, ...]


def dot(a: Sequence, x: Sequence) -> Scalar:
    return sum((p * q for p, q in zip(a, x)), ZERO)


@dataclass(frozen=True)
class Inequality:
    """⟨a, x⟩ ≤ b."""
    a: Vector
    b: Scalar

    @classmethod
    def of(cls, a: Sequence, b) -> Inequality:
        return cls(tuple(as_scalar(v) for v in a), as_scalar(b))

    def value(self, x: Sequence) -> Scalar:
        return dot(self.a, x)

    def slack(self, x: Sequence) -> Scalar:
        return self.b - self.value(x)

    def is_rational(self) -> bool:
        return not any(isinstance(v, QuadExt) for v in self.a + (self.b,))

    def normalized(self) -> Inequality:
        """Positive rescaling to a canonical form; rational rows get a primitive integer a."""
        if self.is_rational():
            lcm = reduce(lambda acc, f: acc * f.denominator // math.gcd(acc, f.denominator), self.a, 1)
            ints = [int(v * lcm) for v in self.a]
            g = reduce(math.gcd, (abs(v) for v in ints), 0)
            scale = Fraction(lcm, g)
        else:
            lead = next(v for v in self.a if v != 0)
            scale = 1 / abs(lead)
        return Inequality(tuple(as_scalar(v * scale) for v in self.a), as_scalar(self.b * scale))

    def relaxed(self, new_b) -> Inequality:
        return Inequality(self.a, as_scalar(new_b))

    def key(self) -> tuple:
        return self.a + (self.b,)


@dataclass(frozen=True)
class Polyhedron:
    d: int
    ineqs: Tuple[Inequality, ...]

    def __post_init__(self) -> None:
        if self.d < 0:
            raise DimensionError("dimension must be nonnegative")
        if self.d > config.MAX_DIMENSION:
            raise DimensionError(f"d={self.d} exceeds the supported maximum {config.MAX_DIMENSION}")
        for ineq in self.ineqs:
            if len(ineq.a) != self.d:
                raise DimensionError(f"inequality {ineq} does not live in dimension {self.d}")
            if all(v == 0 for v in ineq.a):
                raise DimensionError("inequality normal must be nonzero")
        field_of(v for ineq in self.ineqs for v in ineq.key())

    @classmethod
    def from_rows(cls, d: int, rows: Iterable[Tuple[Sequence, object]]) -> Polyhedron:
        return cls(d, tuple(Inequality.of(a, b) for a, b in rows))

    @property
    def m(self) -> int:
        return len(self.ineqs)

    @property
    def k(self) -> Optional[int]:
        return field_of(v for ineq in self.ineqs for v in ineq.key())

    def is_rational(self) -> bool:
        return all(ineq.is_rational() for ineq in self.ineqs)

    def matrix(self) -> Tuple[List[Vector], List[Scalar]]:
        return [i.a for i in self.ineqs], [i.b for i in self.ineqs]

    def contains(self, x: Sequence) -> bool:
        return all(ineq.value(x) <= ineq.b for ineq in self.ineqs)

    def in_interior(self, x: Sequence) -> bool:
        return all(ineq.value(x) < ineq.b for ineq in self.ineqs)

    def with_ineqs(self, ineqs: Iterable[Inequality]) -> Polyhedron:
        return Polyhedron(self.d, tuple(ineqs))

    def without(self, index: int) -> Polyhedron:
        return self.with_ineqs(q for j, q in enumerate(self.ineqs) if j != index)

    def replaced(self, index: int, ineq: Inequality) -> Polyhedron:
        return self.with_ineqs(ineq if j == index else q for j, q in enumerate(self.ineqs))

    def maximize(self, c: Sequence) -> LPResult:
        A, b = self.matrix()
        return maximize(c, A, b)


@dataclass(frozen=True)
class Cone:
    """{u : ⟨a_i, u⟩ ≤ 0}."""
    d: int
    normals: Tuple[Vector, ...]

    def contains(self, u: Sequence) -> bool:
        return all(dot(a, u) <= 0 for a in self.normals)


@dataclass(frozen=True)
class AffineSubspace:
    base: Vector
    directions: Tuple[Vector, ...]

    def __post_init__(self) -> None:
        if any(len(v) != len(self.base) for v in self.directions):
            raise DimensionError("directions and base point differ in dimension")
        if self.directions and rank(self.directions) != len(self.directions):
            raise DimensionError("direction vectors must be linearly independent")

    @classmethod
    def of(cls, base: Sequence, directions: Sequence[Sequence]) -> AffineSubspace:
        return cls(tuple(as_scalar(v) for v in base),
                   tuple(tuple(as_scalar(v) for v in u) for u in directions))

    @property
    def d(self) -> int:
        return len(self.base)

    @property
    def dim(self) -> int:
        return len(self.directions)


@dataclass(frozen=True)
class Box:
    """Axis-parallel window lo_i ≤ x_i ≤ hi_i."""
    lo: Vector
    hi: Vector

    @classmethod
    def cube(cls, d: int, n) -> Box:
        n = as_scalar(n)
        return cls(tuple(-n for _ in range(d)), tuple(n for _ in range(d)))

    @property
    def d(self) -> int:
        return len(self.lo)

    def contains(self, x: Sequence) -> bool:
        return all(l <= v <= h for l, v, h in zip(self.lo, x, self.hi))

    def inequalities(self) -> List[Inequality]:
        out = []
        for j in range(self.d):
            e = [ZERO] * self.d
            e[j] = ONE
            out.append(Inequality(tuple(e), self.hi[j]))
            out.append(Inequality(tuple(-v for v in e), -self.lo[j]))
        return out


def box_polyhedron(box: Box) -> Polyhedron:
    return Polyhedron(box.d, tuple(box.inequalities()))


def intersect(P: Polyhedron, *others: Polyhedron) -> Polyhedron:
    ineqs = list(P.ineqs)
    for Q in others:
        if Q.d != P.d:
            raise DimensionError(f"cannot intersect dimension {P.d} with {Q.d}")
        ineqs.extend(Q.ineqs)
    return P.with_ineqs(ineqs)


# --- Feasibility and dimension ---

def feasible_point(P: Polyhedron) -> Optional[Vector]:
    res = P.maximize([ZERO] * P.d)
    return res.x if res.optimal else None


def is_empty(P: Polyhedron) -> bool:
    return feasible_point(P) is None


def _require_nonempty(P: Polyhedron) -> None:
    if is_empty(P):
        raise EmptyPolyhedronError("polyhedron is empty")


def interior_point(P: Polyhedron) -> Optional[Vector]:
    """A point strictly inside every inequality, or None if int(P) is empty."""
    if not P.ineqs:
        return tuple(ZERO for _ in range(P.d))
    A = [ineq.a + (ONE,) for ineq in P.ineqs]
    b = [ineq.b for ineq in P.ineqs]
    A.append(tuple(ZERO for _ in range(P.d)) + (ONE,))
    b.append(ONE)
    res = maximize([ZERO] * P.d + [ONE], A, b)
    if not res.optimal or res.value <= 0:
        return None
    return res.x[:P.d]


def is_full_dimensional(P: Polyhedron) -> bool:
    return interior_point(P) is not None


def implicit_equalities(P: Polyhedron) -> List[int]:
    """Indices of inequalities that hold with equality on all of P."""
    _require_nonempty(P)
    if interior_point(P) is not None:
        return []
    out = []
    for i, ineq in enumerate(P.ineqs):
        res = P.maximize([-v for v in ineq.a])
        if res.optimal and -res.value == ineq.b:
            out.append(i)
    return out


def dimension(P: Polyhedron) -> int:
    eq = implicit_equalities(P)
    if not eq:
        return P.d
    return P.d - rank([P.ineqs[i].a for i in eq])


def _require_full_dimensional(P: Polyhedron) -> None:
    if not is_full_dimensional(P):
        raise NotFullDimensionalError(f"polyhedron is not {P.d}-dimensional")


# --- Canonical form ---

def canonicalize(P: Polyhedron) -> Polyhedron:
    """Drop duplicate (up to positive scaling) and redundant inequalities, keeping order."""
    _require_nonempty(P)
    seen = set()
    kept: List[Inequality] = []
    for ineq in P.ineqs:
        n = ineq.normalized()
        if n.key() in seen:
            continue
        seen.add(n.key())
        kept.append(n)
    i = 0
    while i < len(kept):
        rest = kept[:i] + kept[i + 1:]
        res = maximize(kept[i].a, [q.a for q in rest], [q.b for q in rest])
        if res.optimal and res.value <= kept[i].b:
            logger.debug(f"POLYHEDRON: dropping redundant inequality {kept[i]}")
            del kept[i]
        else:
            i += 1
    return P.with_ineqs(kept)


# --- Recession cone and sums with linear spaces ---

def recession_cone(P: Polyhedron) -> Cone:
    _require_nonempty(P)
    return Cone(P.d, tuple(ineq.a for ineq in P.ineqs))


def _cone_escapes(C: Cone, a: Vector) -> bool:
    """True iff some u ∈ C has ⟨a, u⟩ < 0."""
    A = list(C.normals) + [tuple(-v for v in a)]
    b = [ZERO] * len(C.normals) + [ONE]
    res = maximize([-v for v in a], A, b)
    return res.optimal and res.value > 0


def _standard_basis(d: int) -> List[List[Scalar]]:
    return [[ONE if i == j else ZERO for j in range(d)] for i in range(d)]


def is_linear_space(C: Cone) -> Optional[List[List[Scalar]]]:
    """Basis of C when C = −C, else None."""
    if not C.normals:
        return _standard_basis(C.d)
    if any(_cone_escapes(C, a) for a in C.normals):
        return None
    return nullspace(C.normals, C.d)


def linear_hull(C: Cone) -> List[List[Scalar]]:
    """Basis of lin(C): the kernel of the inequalities that are tight on all of C."""
    if not C.normals:
        return _standard_basis(C.d)
    tight = [a for a in C.normals if not _cone_escapes(C, a)]
    if not tight:
        return _standard_basis(C.d)
    return nullspace(tight, C.d)


def _normalize_row(coeffs: Sequence[Scalar], b: Scalar) -> Tuple[Tuple[Scalar, ...], Scalar]:
    lead = next((v for v in coeffs if v != 0), None)
    if lead is None:
        return tuple(coeffs), b
    s = 1 / abs(lead)
    return tuple(as_scalar(v * s) for v in coeffs), as_scalar(b * s)


def sum_with_space(P: Polyhedron, L: Sequence[Sequence]) -> Polyhedron:
    """H-representation of P + span(L) by Fourier–Motzkin elimination of the span weights."""
    _require_nonempty(P)
    basis = [tuple(as_scalar(v) for v in u) for u in L if any(as_scalar(v) != 0 for v in u)]
    if not basis:
        return P
    r = len(basis)
    # rows over (x, λ): ⟨a, x⟩ − Σ_j ⟨a, l_j⟩ λ_j ≤ b
    rows = {_normalize_row(ineq.a + tuple(-dot(ineq.a, l) for l in basis), ineq.b) for ineq in P.ineqs}
    for j in range(P.d, P.d + r):
        pos = [row for row in rows if row[0][j] > 0]
        neg = [row for row in rows if row[0][j] < 0]
        nxt = {row for row in rows if row[0][j] == 0}
        for (cp, bp), (cn, bn) in itertools.product(pos, neg):
            fp, fn = -cn[j], cp[j]
            coeffs = tuple(fp * x + fn * y for x, y in zip(cp, cn))
            nxt.add(_normalize_row(coeffs, fp * bp + fn * bn))
        rows = nxt
    ineqs = []
    for coeffs, b in sorted(rows, key=lambda row: row[0] + (row[1],)):
        a = coeffs[:P.d]
        if all(v == 0 for v in a):
            if b < 0:
                raise InvariantViolation("projection of a nonempty polyhedron came out empty")
            continue
        ineqs.append(Inequality(a, b))
    for ineq in ineqs:
        if any(dot(ineq.a, l) != 0 for l in basis):
            raise InvariantViolation("P + L has an inequality that is not orthogonal to L")
    return canonicalize(P.with_ineqs(ineqs))


# --- Bounded polyhedra ---

def bounding_box(P: Polyhedron) -> List[Tuple[Scalar, Scalar]]:
    _require_nonempty(P)
    out = []
    for j in range(P.d):
        e = [ZERO] * P.d
        e[j] = ONE
        hi = P.maximize(e)
        lo = P.maximize([-v for v in e])
        if not (hi.optimal and lo.optimal):
            raise UnboundedError(f"polyhedron is unbounded along coordinate {j + 1}")
        out.append((-lo.value, hi.value))
    return out


def is_bounded(P: Polyhedron) -> bool:
    try:
        bounding_box(P)
    except UnboundedError:
        return False
    return True


def vertices(P: Polyhedron) -> List[Vector]:
    """All vertices of a bounded P, sorted lexicographically."""
    bounding_box(P)
    found = set()
    for combo in itertools.combinations(P.ineqs, P.d):
        x = solve([q.a for q in combo], [q.b for q in combo])
        if x is None:
            continue
        x = tuple(as_scalar(v) for v in x)
        if P.contains(x):
            found.add(x)
    return sorted(found)


def _affine_rank(points: Sequence[Vector]) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([tuple(a - b for a, b in zip(p, p0)) for p in points[1:]])


def triangulate(P: Polyhedron) -> List[Tuple[Vector, ...]]:
    """Boundary triangulation coned from the lexicographically smallest vertex, recursively."""
    _require_full_dimensional(P)
    P = canonicalize(P)
    V = vertices(P)
    tight = [frozenset(i for i, v in enumerate(V) if q.value(v) == q.b) for q in P.ineqs]
    dims: Dict[FrozenSet[int], int] = {}

    def face_dim(face: FrozenSet[int]) -> int:
        if face not in dims:
            dims[face] = _affine_rank([V[i] for i in sorted(face)])
        return dims[face]

    def recurse(face: FrozenSet[int], dim: int) -> List[Tuple[int, ...]]:
        if dim == 0:
            return [(min(face),)]
        apex = min(face)
        out: List[Tuple[int, ...]] = []
        seen = set()
        for T in tight:
            sub = face & T
            if sub == face or apex in sub or sub in seen or not sub:
                continue
            if face_dim(sub) != dim - 1:
                continue
            seen.add(sub)
            out.extend((apex,) + s for s in recurse(sub, dim - 1))
        return out

    simplices = recurse(frozenset(range(len(V))), P.d)
    return [tuple(V[i] for i in s) for s in simplices]


def volume(P: Polyhedron) -> Scalar:
    if P.d == 0:
        return ONE
    total: Scalar = ZERO
    for simplex in triangulate(P):
        v0 = simplex[0]
        det = determinant([tuple(a - b for a, b in zip(v, v0)) for v in simplex[1:]])
        total = total + abs(det)
    return as_scalar(total / math.factorial(P.d))


def _face_of(P: Polyhedron, index: int) -> Polyhedron:
    ineq = P.ineqs[index]
    return P.with_ineqs(P.ineqs + (Inequality(tuple(-v for v in ineq.a), -ineq.b),))


def facets(P: Polyhedron) -> List[Tuple[int, Polyhedron]]:
    """(index, P ∩ {⟨a_i, x⟩ = b_i}) for every inequality of a full-dimensional P."""
    _require_full_dimensional(P)
    return [(i, _face_of(P, i)) for i in range(P.m)]


def in_facet_relint(P: Polyhedron, index: int, x: Sequence) -> bool:
    """x lies on facet `index` and strictly inside every other inequality."""
    for j, ineq in enumerate(P.ineqs):
        v = ineq.value(x)
        if j == index:
            if v != ineq.b:
                return False
        elif not v < ineq.b:
            return False
    return True


def apply_unimodular(P: Polyhedron, A: UnimodularMap) -> Polyhedron:
    """Image A(P): ⟨a, x⟩ ≤ b becomes ⟨a·A⁻¹, y⟩ ≤ b."""
    if A.dim != P.d:
        raise DimensionError(f"map of dimension {A.dim} applied to a polyhedron in dimension {P.d}")
    inv = A.inverse.entries
    ineqs = []
    for ineq in P.ineqs:
        a = tuple(as_scalar(sum((ineq.a[r] * inv[r][c] for r in range(P.d)), ZERO)) for c in range(P.d))
        ineqs.append(Inequality(a, ineq.b))
    return P.with_ineqs(ineqs)


def symmetry_violation(P: Polyhedron) -> Optional[Tuple[int, Vector]]:
    """(index, x) with x ∈ P and −x violating inequality `index`, or None when P = −P."""
    for i, ineq in enumerate(P.ineqs):
        res = P.maximize([-v for v in ineq.a])
        if not res.optimal:
            return i, tuple()
        if res.value > ineq.b:
            return i, res.x
    return None
