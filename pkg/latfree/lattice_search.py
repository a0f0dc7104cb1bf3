"""Lattice point searches: enumeration, interior points, Minkowski, line approximation, parity."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import config
from .core_num import Scalar, as_scalar, ceil_scalar, floor_scalar
from .errors import (
    DimensionError,
    InvariantViolation,
    PreconditionError,
    SearchExhaustedError,
    UnboundedError,
    UndecidedError,
)
from .lattice_linalg import is_rational_direction, is_rational_subspace
from .lp import LPStatus, maximize
from .polyhedron import (
    Box,
    Inequality,
    Polyhedron,
    bounding_box,
    box_polyhedron,
    dot,
    facets,
    in_facet_relint,
    interior_point,
    intersect,
    is_bounded,
    is_empty,
    is_linear_space,
    linear_hull,
    recession_cone,
    sum_with_space,
    symmetry_violation,
    volume,
)
from .workers import parallel_map

logger = logging.getLogger(__name__)

IntVector = Tuple[int, ...]
Rows = List[Tuple[Tuple[Scalar, ...], Scalar]]


class Location(str, Enum):
    INTERIOR = "interior"
    FACET = "facet"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class Witness:
    """A lattice point together with where it sits in a polyhedron."""
    z: IntVector
    location: Location
    facet: Optional[int] = None

    def describe(self) -> str:
        if self.location is Location.FACET:
            return f"relative-interior-of-facet {self.facet}"
        return self.location.value

    def verify(self, P: Polyhedron) -> bool:
        if self.location is Location.INTERIOR:
            return P.in_interior(self.z)
        if self.location is Location.FACET:
            return self.facet is not None and in_facet_relint(P, self.facet, self.z)
        return P.contains(self.z) and not P.in_interior(self.z)


@dataclass(frozen=True)
class ApproxResult:
    z: IntVector
    x: Tuple[Scalar, ...]
    t: int
    residual: Scalar
    n: int

    def verify(self) -> bool:
        res = max(abs(a - b) for a, b in zip(self.z, self.x))
        return res == self.residual and 0 < res < Fraction(1, self.t)


# --- Enumeration ---

def _fix_first(rows: Rows, value: int) -> Optional[Rows]:
    """Substitute x_1 = value; None if a constant row is violated."""
    out: Rows = []
    for a, b in rows:
        rest = a[1:]
        nb = b - a[0] * value
        if all(v == 0 for v in rest):
            if nb < 0:
                return None
            continue
        out.append((rest, nb))
    return out


def _coordinate_range(rows: Rows, n: int) -> Optional[Tuple[int, int]]:
    """Integer range of the first of n remaining coordinates; None if infeasible."""
    e = [Fraction(0)] * n
    e[0] = Fraction(1)
    A = [a for a, _ in rows]
    b = [v for _, v in rows]
    hi = maximize(e, A, b)
    if hi.status is LPStatus.INFEASIBLE:
        return None
    lo = maximize([-v for v in e], A, b)
    if not (hi.optimal and lo.optimal):
        raise UnboundedError("lattice enumeration over an unbounded region")
    return ceil_scalar(-lo.value), floor_scalar(hi.value)


def _enumerate_rows(rows: Rows, n_int: int, n_cont: int, prefix: IntVector) -> List[IntVector]:
    if n_int == 0:
        if n_cont == 0 or not rows:
            return [prefix]
        A = [a for a, _ in rows]
        res = maximize([Fraction(0)] * n_cont, A, [v for _, v in rows])
        return [prefix] if res.optimal else []
    if not rows:
        raise UnboundedError("lattice enumeration over an unbounded region")
    bounds = _coordinate_range(rows, n_int + n_cont)
    if bounds is None:
        return []
    out: List[IntVector] = []
    for value in range(bounds[0], bounds[1] + 1):
        sub = _fix_first(rows, value)
        if sub is not None:
            out.extend(_enumerate_rows(sub, n_int - 1, n_cont, prefix + (value,)))
    return out


def _enumerate_slab(job: Tuple[Rows, int, int, int]) -> List[IntVector]:
    rows, n_int, n_cont, value = job
    sub = _fix_first(rows, value)
    if sub is None:
        return []
    return _enumerate_rows(sub, n_int - 1, n_cont, (value,))


def enumerate_lattice_points(P: Polyhedron, continuous: int = 0) -> List[IntVector]:
    """All z ∈ Z^{d−c} with (z, y) ∈ P for some real y ∈ R^c, in lexicographic order.

    With continuous=0 this is P ∩ Z^d. The trailing continuous coordinates are
    projected out, which is how cylinders around a line are searched.
    """
    n_int = P.d - continuous
    if n_int < 0:
        raise DimensionError(f"{continuous} continuous coordinates in dimension {P.d}")
    if continuous == 0:
        if is_empty(P):
            return []
        bounding_box(P)
    rows: Rows = [(q.a, q.b) for q in P.ineqs]
    if n_int == 0:
        return _enumerate_rows(rows, 0, continuous, ())
    if not rows:
        raise UnboundedError("lattice enumeration over an unbounded region")
    bounds = _coordinate_range(rows, P.d)
    if bounds is None:
        return []
    slabs = [(rows, n_int, continuous, v) for v in range(bounds[0], bounds[1] + 1)]
    found: List[IntVector] = []
    for chunk in parallel_map(_enumerate_slab, slabs):
        found.extend(chunk)
    logger.debug(f"SEARCH: {len(found)} lattice points over {len(slabs)} slabs")
    return found


def window_search(P: Polyhedron, cap: int, strict: bool = True) -> Optional[IntVector]:
    """Search P ∩ [−N,N]^d for N = 1, 2, 4, … ≤ cap; first hit in lexicographic order."""
    n = 1
    while True:
        window = box_polyhedron(Box.cube(P.d, min(n, cap)))
        for z in enumerate_lattice_points(intersect(P, window)):
            if (P.in_interior(z) if strict else P.contains(z)):
                return z
        if n >= cap:
            return None
        n *= 2


# --- Interior lattice points ---

def _first_interior_bounded(P: Polyhedron) -> Optional[IntVector]:
    return next((z for z in enumerate_lattice_points(P) if P.in_interior(z)), None)


def relint_lattice_point(P: Polyhedron, index: int) -> Optional[IntVector]:
    """First lattice point on facet `index` strictly inside every other inequality."""
    face = facets(P)[index][1]
    return next((z for z in enumerate_lattice_points(face) if in_facet_relint(P, index, z)), None)


def interior_lattice_point(P: Polyhedron, cap: Optional[int] = None) -> Optional[Witness]:
    """A lattice point in int(P), None when int(P) ∩ Z^d is certainly empty.

    Bounded P is decided by enumeration. Unbounded P is reduced to
    Q = P + lin(rec P), which has the same interior lattice points up to
    existence; when lin(rec P) is rational, Q splits as R^r × K′ with K′ bounded,
    a lattice point of int(K′) lifts to int(Q) and is then walked into int(P) along
    an integer recession direction. Irrational recession data falls back to a
    window search up to cap.
    """
    cap = config.DEFAULT_CAP if cap is None else cap
    if not P.ineqs:
        return Witness(tuple(0 for _ in range(P.d)), Location.INTERIOR)
    if interior_point(P) is None:
        return None
    if is_bounded(P):
        z = _first_interior_bounded(P)
        return Witness(z, Location.INTERIOR) if z is not None else None

    span = linear_hull(recession_cone(P))
    if not is_rational_subspace(span):
        logger.info(f"SEARCH: irrational recession directions, window search up to {cap}")
        z = window_search(P, cap)
        if z is None:
            raise UndecidedError(f"no interior lattice point within [-{cap},{cap}]^{P.d} and no exact reduction applies")
        return Witness(z, Location.INTERIOR)

    from .maximalize import normalize_split

    linear = is_linear_space(recession_cone(P)) is not None
    Q = P if linear else sum_with_space(P, span)
    split = normalize_split(Q)
    K = split.K_prime
    logger.debug(f"SEARCH: reduced to dimension {K.d} after splitting off r={split.r}")
    zp = _first_interior_bounded(K) if K.ineqs else tuple(0 for _ in range(K.d))
    if zp is None:
        return None
    y = tuple(int(v) for v in split.A.apply_inverse((0,) * split.r + tuple(zp)))
    z = y if linear else _walk_into(P, y, span, cap)
    if not P.in_interior(z):
        raise InvariantViolation(f"lifted lattice point {z} is not interior")
    return Witness(z, Location.INTERIOR)


def _walk_into(P: Polyhedron, y: IntVector, span: Sequence[Sequence[Scalar]], cap: int) -> IntVector:
    """Move y ∈ int(P + lin(rec P)) ∩ Z^d along an integer recession direction into int(P).

    Inequalities orthogonal to lin(rec P) already hold strictly at y; every other one
    decreases strictly along g, so a large enough integer multiple of g suffices.
    """
    moving = [q for q in P.ineqs if any(dot(q.a, l) != 0 for l in span)]
    directions = P.with_ineqs([Inequality.of(q.a, 0) for q in P.ineqs] + [Inequality.of(q.a, -1) for q in moving])
    g = window_search(directions, cap, strict=False)
    if g is None:
        raise UndecidedError(f"no integer recession direction within [-{cap},{cap}]^{P.d}; raise the cap")
    steps = 0
    for q in moving:
        steps = max(steps, floor_scalar((q.value(y) - q.b) / -dot(q.a, g)) + 1)
    logger.debug(f"SEARCH: walked {y} by {steps}·{g} into the interior")
    return tuple(a + steps * b for a, b in zip(y, g))


# --- Minkowski's first theorem ---

def _scaled(P: Polyhedron, t: int) -> Polyhedron:
    return P.with_ineqs(Inequality(q.a, as_scalar(q.b / t)) for q in P.ineqs)


def minkowski_find(P: Polyhedron, t: int = 1) -> IntVector:
    """A nonzero point of tZ^d in a symmetric convex body of volume at least (2t)^d.

    Among candidates the one with smallest ℓ1 norm wins, ties going to the
    lexicographically largest.
    """
    if t < 1:
        raise PreconditionError("t must be a positive integer", {"violation": "t", "t": t})
    try:
        bounding_box(P)
    except UnboundedError as e:
        raise PreconditionError("polyhedron is unbounded", {"violation": "unbounded"}) from e
    if interior_point(P) is None:
        raise PreconditionError("polyhedron is not full-dimensional", {"violation": "not-full-dimensional"})
    asym = symmetry_violation(P)
    if asym is not None:
        index, x = asym
        raise PreconditionError(
            f"polyhedron is not centrally symmetric: −x violates inequality {index}",
            {"violation": "asymmetric", "inequality": index, "witness": list(x)},
        )
    vol = volume(P)
    required = Fraction(2 * t) ** P.d
    if vol < required:
        raise PreconditionError(
            f"volume {vol} is below (2t)^d = {required}",
            {"violation": "volume", "volume": vol, "required": required, "shortfall": required - vol},
        )
    candidates = [y for y in enumerate_lattice_points(_scaled(P, t)) if any(y)]
    if not candidates:
        raise SearchExhaustedError("no nonzero lattice point found despite satisfied preconditions")
    best = min(candidates, key=lambda y: (sum(abs(v) for v in y), tuple(-v for v in y)))
    return tuple(t * v for v in best)


# --- Approximating an irrational line ---

def _residual(z: IntVector, u: Sequence[Scalar], uu: Scalar) -> Tuple[Tuple[Scalar, ...], Scalar]:
    lam = dot(z, u) / uu
    x = tuple(as_scalar(lam * v) for v in u)
    return x, max(abs(a - b) for a, b in zip(z, x))


def _cylinder(u: Sequence[Scalar], t: int, n: int) -> Polyhedron:
    """{(x, λ) : |λ| ≤ n, ‖x − λu‖∞ ≤ 1/t} ⊂ R^{d+1}."""
    d = len(u)
    eps = Fraction(1, t)
    ineqs = []
    for j in range(d):
        e = [Fraction(0)] * (d + 1)
        e[j] = Fraction(1)
        e[d] = -u[j]
        ineqs.append(Inequality(tuple(as_scalar(v) for v in e), eps))
        ineqs.append(Inequality(tuple(as_scalar(-v) for v in e), eps))
    lam = [Fraction(0)] * d + [Fraction(1)]
    ineqs.append(Inequality(tuple(lam), Fraction(n)))
    ineqs.append(Inequality(tuple(-v for v in lam), Fraction(n)))
    return Polyhedron(d + 1, tuple(ineqs))


def approximate_line(u: Sequence, t: int, n_cap: Optional[int] = None) -> ApproxResult:
    """z ∈ Z^d ∖ {0} with 0 < ‖z − x‖∞ < 1/t, x the orthogonal projection of z onto span(u).

    Cylinders [−N,N]u + (1/t)B∞ are searched for N = t^(d−1), doubled up to
    n_cap; within the first productive cylinder the smallest residual wins.
    """
    u = tuple(as_scalar(v) for v in u)
    n_cap = config.APPROX_N_CAP if n_cap is None else n_cap
    if t < 1 or n_cap < 1:
        raise PreconditionError("t and N_cap must be positive integers", {"violation": "parameters"})
    if is_rational_direction(u) is not None:
        raise PreconditionError(
            "span(u) contains nonzero lattice points; the residual would vanish",
            {"violation": "rational-direction", "direction": list(is_rational_direction(u))},
        )
    uu = dot(u, u)
    bound = Fraction(1, t)
    n = min(t ** (len(u) - 1), n_cap)
    while True:
        best = None
        for z in enumerate_lattice_points(_cylinder(u, t, n), continuous=1):
            if not any(z):
                continue
            x, res = _residual(z, u, uu)
            if not 0 < res < bound:
                continue
            leading_positive = next(v for v in z if v != 0) > 0
            key = (res, not leading_positive, z)
            if best is None or key < best[0]:
                best = (key, z, x, res)
        if best is not None:
            logger.debug(f"SEARCH: t={t} N={n} found {best[1]} with residual {float(best[3]):.3g}")
            return ApproxResult(best[1], best[2], t, best[3], n)
        if n >= n_cap:
            raise SearchExhaustedError(f"no approximation for t={t} within N_cap={n_cap}")
        n = min(2 * n, n_cap)


# --- Parity pigeonhole ---

def parity_pair(w: Sequence[Sequence[int]]) -> Tuple[int, int, IntVector]:
    """Lexicographically first 1-based (i, j), i < j, with w_i ≡ w_j mod 2, and their midpoint."""
    vectors = [tuple(int(v) for v in vec) for vec in w]
    if vectors and len({len(v) for v in vectors}) != 1:
        raise DimensionError("vectors differ in length")
    for i, wi in enumerate(vectors):
        for j in range(i + 1, len(vectors)):
            wj = vectors[j]
            if all((a - b) % 2 == 0 for a, b in zip(wi, wj)):
                mid = tuple((a + b) // 2 for a, b in zip(wi, wj))
                return i + 1, j + 1, mid
    d = len(vectors[0]) if vectors else 0
    raise SearchExhaustedError(f"all {len(vectors)} vectors lie in distinct parity classes (2^{d} exist)")
