"""Growing a lattice-free polytope to a maximal one, and the R^r × K′ split."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import config
from .core_num import Scalar, ceil_scalar
from .errors import (
    BoxTooSmallError,
    DimensionError,
    InvariantViolation,
    NotFullDimensionalError,
    NotSplittableError,
    PreconditionError,
    UnboundedError,
)
from .lattice_linalg import (
    UnimodularMap,
    extend_to_basis,
    is_rational_subspace,
    sublattice_of_subspace,
    unimodular_from_basis,
)
from .lattice_search import enumerate_lattice_points, interior_lattice_point, relint_lattice_point
from .polyhedron import (
    Box,
    Inequality,
    Polyhedron,
    apply_unimodular,
    box_polyhedron,
    canonicalize,
    interior_point,
    intersect,
    is_bounded,
    is_linear_space,
    recession_cone,
    vertices,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitForm:
    """A(P) = R^r × K_prime for the unimodular map A."""
    A: UnimodularMap
    r: int
    K_prime: Polyhedron

    @property
    def d(self) -> int:
        return self.A.dim


@dataclass(frozen=True)
class PushStep:
    a: Tuple[Scalar, ...]
    old_b: Scalar
    new_b: Optional[Scalar]  # None: the inequality was dropped


@dataclass(frozen=True)
class Enlargement:
    polyhedron: Polyhedron
    certificate: object
    pushes: Tuple[PushStep, ...]
    released: Tuple[Inequality, ...]
    box_n: int


def normalize_split(P: Polyhedron) -> SplitForm:
    basis = is_linear_space(recession_cone(P))
    if basis is None:
        raise NotSplittableError("recession cone is not a linear space")
    d = P.d
    if not basis:
        return SplitForm(UnimodularMap.identity(d), 0, P)
    if not is_rational_subspace(basis):
        raise NotSplittableError("recession space is irrational; not unimodularly splittable")
    lattice = sublattice_of_subspace(basis, d)
    A = unimodular_from_basis(extend_to_basis(lattice, d))
    image = apply_unimodular(P, A)
    r = len(lattice)
    for q in image.ineqs:
        if any(v != 0 for v in q.a[:r]):
            raise InvariantViolation(f"A(P) inequality {q} depends on the first {r} coordinates")
    K = Polyhedron(d - r, tuple(Inequality(q.a[r:], q.b) for q in image.ineqs))
    logger.debug(f"MAXIMALIZE: split off r={r} with map {A.forward.to_lists()}")
    return SplitForm(A, r, K)


def lift_back(S: SplitForm, Q_prime: Polyhedron) -> Polyhedron:
    """A⁻¹(R^r × Q′)."""
    if Q_prime.d != S.d - S.r:
        raise DimensionError(f"expected a polyhedron in dimension {S.d - S.r}, got {Q_prime.d}")
    padded = Polyhedron(S.d, tuple(Inequality((0,) * S.r + q.a, q.b) for q in Q_prime.ineqs))
    return apply_unimodular(padded, S.A.inverted())


def push_facet(Q: Polyhedron, index: int, box: Box) -> Polyhedron:
    """Relax inequality `index` up to the nearest lattice point beyond it.

    Candidates are lattice points of (Q without `index`) ∩ box lying strictly inside
    every other inequality and the box. Without candidates the inequality is dropped.
    """
    target = Q.ineqs[index]
    others = Q.without(index)
    bounds = box_polyhedron(box)
    best: Optional[Scalar] = None
    for z in enumerate_lattice_points(intersect(others, bounds)):
        v = target.value(z)
        if v <= target.b or not (others.in_interior(z) and bounds.in_interior(z)):
            continue
        if best is None or v < best:
            best = v
    if best is None:
        logger.debug(f"MAXIMALIZE: no lattice point beyond {target} in the box; dropping it")
        return others
    logger.debug(f"MAXIMALIZE: pushed {target} to b={best}")
    return Q.replaced(index, target.relaxed(best))


def default_box(P: Polyhedron) -> int:
    """2·max|vertex coordinate| + 2."""
    V = vertices(P)
    largest = max((abs(v) for x in V for v in x), default=0)
    return ceil_scalar(2 * largest) + 2


def enlarge_to_maximal(P: Polyhedron, box_n: Optional[int] = None, cap: Optional[int] = None) -> Enlargement:
    """A certified maximal lattice-free polyhedron containing the lattice-free polytope P."""
    from .maximality import Refutation, certify_maximal_fulldim

    cap = config.DEFAULT_CAP if cap is None else cap
    if interior_point(P) is None:
        raise NotFullDimensionalError("enlargement needs a full-dimensional polytope")
    if not is_bounded(P):
        raise UnboundedError("enlargement needs a bounded polytope")
    inside = interior_lattice_point(P, cap)
    if inside is not None:
        raise PreconditionError(
            f"polytope is not lattice-free: {inside.z} is interior",
            {"violation": "not-lattice-free", "witness": list(inside.z)},
        )
    box_n = default_box(P) if box_n is None else box_n
    box = Box.cube(P.d, box_n)
    if not all(box.contains(v) for v in vertices(P)):
        raise PreconditionError(f"polytope does not fit in [-{box_n},{box_n}]^{P.d}", {"violation": "box", "box": box_n})
    box_ineqs = box.inequalities()
    box_keys = {q.normalized().key() for q in box_ineqs}
    bounds = box_polyhedron(box)

    Q = canonicalize(intersect(P, bounds))
    pushes: List[PushStep] = []
    while True:
        order = sorted((i for i, q in enumerate(Q.ineqs) if q.key() not in box_keys), key=lambda i: Q.ineqs[i].key())
        target = next((i for i in order if relint_lattice_point(Q, i) is None), None)
        if target is None:
            break
        old = Q.ineqs[target]
        pushed = push_facet(Q, target, box)
        new_b = pushed.ineqs[target].b if pushed.m == Q.m else None
        pushes.append(PushStep(old.a, old.b, new_b))
        Q = canonicalize(intersect(pushed, bounds))
        if interior_lattice_point(Q, cap) is not None:
            raise InvariantViolation(f"push of {old} produced a polytope with an interior lattice point")
    logger.info(f"MAXIMALIZE: fixpoint after {len(pushes)} pushes with {Q.m} inequalities")

    released: List[Inequality] = []
    for q in reversed(box_ineqs):
        idx = next((i for i, c in enumerate(Q.ineqs) if c.key() == q.normalized().key()), None)
        if idx is None:
            continue
        relaxed = Q.without(idx)
        if interior_lattice_point(relaxed, cap) is None:
            Q = canonicalize(relaxed) if relaxed.ineqs else relaxed
            released.append(q)
            logger.debug(f"MAXIMALIZE: released box constraint {q}")

    verdict = certify_maximal_fulldim(Q, cap)
    if isinstance(verdict, Refutation):
        raise BoxTooSmallError(
            f"result is not maximal ({verdict.reason or verdict.kind.value}); retry with a box larger than {box_n}"
        )
    return Enlargement(Q, verdict, tuple(pushes), tuple(released), box_n)
