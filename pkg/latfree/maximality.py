"""Decision procedures: lattice-freeness, maximality certificates and the lemma checkers."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from . import config
from .core_num import Scalar, as_scalar, floor_scalar
from .errors import (
    InvariantViolation,
    LemmaHypothesisError,
    NotFullDimensionalError,
    PreconditionError,
)
from .lattice_linalg import (
    is_rational_direction,
    nullspace,
    rank,
    sublattice_of_subspace,
)
from .lattice_search import (
    ApproxResult,
    IntVector,
    Witness,
    enumerate_lattice_points,
    interior_lattice_point,
    relint_lattice_point,
)
from .lp import feasible_point
from .maximalize import lift_back, normalize_split, push_facet
from .polyhedron import (
    AffineSubspace,
    Box,
    Polyhedron,
    box_polyhedron,
    canonicalize,
    dot,
    in_facet_relint,
    interior_point,
    intersect,
    is_linear_space,
    linear_hull,
    recession_cone,
    sum_with_space,
    vertices,
)
from .workers import parallel_map

logger = logging.getLogger(__name__)


class RefutationKind(str, Enum):
    NOT_LATTICE_FREE = "not-lattice-free"
    NOT_MAXIMAL = "not-maximal"
    NOT_FULL_DIMENSIONAL = "not-full-dimensional"


@dataclass(frozen=True)
class Refutation:
    """Constructive negative answer: an interior lattice point or a larger lattice-free set."""
    kind: RefutationKind
    witness: Optional[Witness] = None
    enlargement: Optional[Polyhedron] = None
    reason: str = ""


@dataclass(frozen=True)
class MaximalityCertificate:
    facet_witnesses: Tuple[Tuple[int, IntVector], ...]
    rec_basis: Tuple[IntVector, ...]
    facet_count: int
    r: int
    d: int


@dataclass(frozen=True)
class LatticeFreeness:
    lattice_free: bool
    witness: Optional[Witness] = None


@dataclass(frozen=True)
class HyperplaneVerdict:
    maximal: bool
    reason: str = ""
    normal: Optional[Tuple[Scalar, ...]] = None
    split: Optional[Polyhedron] = None


def is_lattice_free(P: Polyhedron, cap: Optional[int] = None) -> LatticeFreeness:
    w = interior_lattice_point(P, cap)
    return LatticeFreeness(w is None, w)


# --- Full-dimensional polyhedra ---

def _facet_job(job: Tuple[Polyhedron, int]) -> Optional[IntVector]:
    K, index = job
    return relint_lattice_point(K, index)


def _refuting_push(split, index: int) -> Polyhedron:
    K = split.K_prime
    reach = max((abs(v) for x in vertices(K) for v in x), default=0)
    box = Box.cube(K.d, floor_scalar(reach) + 2)
    pushed = push_facet(intersect(K, box_polyhedron(box)), index, box)
    return lift_back(split, canonicalize(pushed))


def certify_maximal_fulldim(P: Polyhedron, cap: Optional[int] = None) -> Union[MaximalityCertificate, Refutation]:
    """Certificate that P is maximal lattice-free, or a constructive refutation.

    Maximality follows once P is lattice-free, rec(P) is a rational linear space and
    the relative interior of every facet holds a lattice point.
    """
    if interior_point(P) is None:
        raise NotFullDimensionalError(f"polyhedron is not {P.d}-dimensional")
    P = canonicalize(P)
    d = P.d
    w = interior_lattice_point(P, cap)
    if w is not None:
        return Refutation(RefutationKind.NOT_LATTICE_FREE, witness=w, reason=f"{w.z} lies in the interior")

    cone = recession_cone(P)
    space = is_linear_space(cone)
    if space is None:
        return Refutation(
            RefutationKind.NOT_MAXIMAL,
            enlargement=sum_with_space(P, linear_hull(cone)),
            reason="recession cone is not a linear space",
        )

    split = normalize_split(P)
    found = parallel_map(_facet_job, [(split.K_prime, i) for i in range(split.K_prime.m)])
    witnesses: List[Tuple[int, IntVector]] = []
    for i, zp in enumerate(found):
        if zp is None:
            logger.info(f"MAXIMALITY: facet {i} has no lattice point in its relative interior")
            return Refutation(
                RefutationKind.NOT_MAXIMAL,
                enlargement=_refuting_push(split, i),
                reason=f"facet {i} has an empty relative interior lattice set",
            )
        z = tuple(int(v) for v in split.A.apply_inverse((0,) * split.r + zp))
        if not in_facet_relint(P, i, z):
            raise InvariantViolation(f"lifted witness {z} is not in the relative interior of facet {i}")
        witnesses.append((i, z))

    m, r = P.m, split.r
    if m > 2 ** (d - r):
        raise InvariantViolation(f"certified polyhedron has {m} facets, above 2^(d-r) = {2 ** (d - r)}")
    basis = tuple(tuple(v) for v in sublattice_of_subspace(space, d))
    logger.info(f"MAXIMALITY: certified m={m}, r={r}, d={d}")
    return MaximalityCertificate(tuple(witnesses), basis, m, r, d)


def certificate_problems(P: Polyhedron, cert: MaximalityCertificate) -> List[str]:
    """Every claim of cert that fails against canonicalize(P); empty when valid."""
    P = canonicalize(P)
    problems = []
    if cert.d != P.d:
        problems.append(f"certificate is for dimension {cert.d}, polyhedron has {P.d}")
    if cert.facet_count != P.m:
        problems.append(f"facet count {cert.facet_count} differs from {P.m}")
    if sorted(i for i, _ in cert.facet_witnesses) != list(range(P.m)):
        problems.append("facets and witnesses are not in one-to-one correspondence")
    for i, z in cert.facet_witnesses:
        if 0 <= i < P.m and not in_facet_relint(P, i, z):
            problems.append(f"witness {z} is not in the relative interior of facet {i}")
    for u in cert.rec_basis:
        if any(dot(q.a, u) != 0 for q in P.ineqs):
            problems.append(f"{u} is not in the lineality of rec(P)")
    if len(cert.rec_basis) != cert.r or (cert.rec_basis and rank(cert.rec_basis) != cert.r):
        problems.append(f"rec_basis does not have rank r={cert.r}")
    space = is_linear_space(recession_cone(P))
    if space is None or len(space) != cert.r:
        problems.append("rec_basis does not span rec(P)")
    if cert.facet_count > 2 ** (cert.d - cert.r):
        problems.append("facet count exceeds 2^(d-r)")
    return problems


def validate_certificate(P: Polyhedron, cert: MaximalityCertificate) -> bool:
    problems = certificate_problems(P, cert)
    for p in problems:
        logger.warning(f"MAXIMALITY: invalid certificate: {p}")
    return not problems


# --- Affine hyperplanes ---

def certify_maximal_lowdim(H: AffineSubspace) -> HyperplaneVerdict:
    d = H.d
    if H.dim == d:
        return HyperplaneVerdict(False, "not lattice-free: the whole space")
    if H.dim < d - 1:
        return HyperplaneVerdict(False, "dimension < d-1")
    normal = tuple(as_scalar(v) for v in nullspace(H.directions, d)[0])
    w = is_rational_direction(normal)
    if w is None:
        return HyperplaneVerdict(True, "normal direction is irrational", normal)
    c = floor_scalar(dot(w, H.base))
    split = Polyhedron.from_rows(d, [(w, c + 1), ([-v for v in w], -c)])
    return HyperplaneVerdict(False, f"contained in the split {c} <= <{list(w)}, x> <= {c + 1}", normal, split)


# --- Lemma checkers ---

@dataclass(frozen=True)
class Lemma1Report:
    Q: Polyhedron
    interior_points: Tuple[IntVector, ...]
    samples: int
    mismatches: Tuple[Tuple[Scalar, ...], ...]

    @property
    def holds(self) -> bool:
        return not self.interior_points and not self.mismatches


@dataclass(frozen=True)
class InSpaceCertificate:
    """m = z + l with z ∈ L ∩ Z^d and l ∈ L."""
    z: IntVector
    l: Tuple[Scalar, ...]


@dataclass(frozen=True)
class ApproximationCertificate:
    """Successive line approximations with shrinking residuals."""
    approximations: Tuple[ApproxResult, ...]


ClosureCertificate = Union[InSpaceCertificate, ApproximationCertificate]


@dataclass(frozen=True)
class Lemma2Report:
    sum_polyhedron: Polyhedron
    interior_points: Tuple[IntVector, ...]
    certified: Tuple[bool, ...] = field(default_factory=tuple)

    @property
    def lattice_free_in_window(self) -> bool:
        return not self.interior_points


def _interior_points_in(Q: Polyhedron, window: Box) -> Tuple[IntVector, ...]:
    region = intersect(Q, box_polyhedron(window)) if Q.ineqs else box_polyhedron(window)
    return tuple(z for z in enumerate_lattice_points(region) if Q.in_interior(z))


def _in_difference(P: Polyhedron, x: Sequence[Scalar]) -> bool:
    """x ∈ P − rec(P): some y ∈ P with y − x ∈ rec(P)."""
    A = [q.a for q in P.ineqs] * 2
    b = [q.b for q in P.ineqs] + [q.value(x) for q in P.ineqs]
    return feasible_point(A, b, P.d) is not None


def _require_lattice_free(P: Polyhedron, cap: Optional[int]) -> None:
    w = interior_lattice_point(P, cap)
    if w is not None:
        raise LemmaHypothesisError(f"polyhedron is not lattice-free: {w.z} is interior", w.z)


def check_lemma1(P: Polyhedron, window: Optional[Box] = None, cap: Optional[int] = None,
                 samples: Optional[int] = None) -> Lemma1Report:
    """P − rec(P) = P + lin(rec P), and that set has no interior lattice point in the window."""
    window = window or Box.cube(P.d, 10)
    samples = config.LEMMA_SAMPLES if samples is None else samples
    _require_lattice_free(P, cap)
    Q = sum_with_space(P, linear_hull(recession_cone(P)))
    found = _interior_points_in(Q, window)

    rng = random.Random(config.SAMPLE_SEED)
    mismatches = []
    for _ in range(samples):
        x = tuple(Fraction(rng.randint(int(lo * 4), int(hi * 4)), 4) for lo, hi in zip(window.lo, window.hi))
        if Q.contains(x) != _in_difference(P, x):
            mismatches.append(x)
    if found or mismatches:
        logger.warning(f"LEMMA1: {len(found)} interior lattice points, {len(mismatches)} membership mismatches")
    return Lemma1Report(Q, found, samples, tuple(mismatches))


def _in_span(vectors: Sequence[Sequence[Scalar]], x: Sequence[Scalar]) -> bool:
    if not any(v != 0 for v in x):
        return True
    if not vectors:
        return False
    return rank(list(vectors) + [list(x)]) == rank(vectors)


def _check_closure(m: Sequence[Scalar], L: List[List[Scalar]], cert: ClosureCertificate) -> bool:
    if isinstance(cert, InSpaceCertificate):
        total = tuple(as_scalar(z + l) for z, l in zip(cert.z, cert.l))
        return total == tuple(as_scalar(v) for v in m) and _in_span(L, cert.l) and _in_span(L, cert.z)
    steps = cert.approximations
    if len(steps) < 3:
        return False
    if any(not s.verify() for s in steps):
        return False
    if any(a.t >= b.t or a.residual <= b.residual for a, b in zip(steps, steps[1:])):
        return False
    if any(not _in_span(L, s.x) for s in steps):
        return False
    last = steps[-1]
    direction = [as_scalar(a - b) for a, b in zip(last.z, last.x)]
    return _in_span(list(L) + [direction], m)


def check_lemma2(P: Polyhedron, M: Sequence[Sequence], certificates: Sequence[ClosureCertificate],
                 window: Optional[Box] = None, cap: Optional[int] = None) -> Lemma2Report:
    """Sum P with a certified M ⊆ cl(Z^d + L) and enumerate interior lattice points in the window."""
    window = window or Box.cube(P.d, 10)
    _require_lattice_free(P, cap)
    L = is_linear_space(recession_cone(P))
    if L is None:
        raise LemmaHypothesisError("recession cone is not a linear space")
    M = [tuple(as_scalar(v) for v in m) for m in M if any(as_scalar(v) != 0 for v in m)]
    if len(certificates) < len(M):
        raise PreconditionError("every vector of M needs a closure certificate", {"violation": "uncertified"})
    certified = tuple(_check_closure(m, L, c) for m, c in zip(M, certificates))
    if not all(certified):
        bad = [i for i, ok in enumerate(certified) if not ok]
        raise PreconditionError(f"closure certificates for M vectors {bad} do not check", {"violation": "uncertified", "vectors": bad})
    S = sum_with_space(P, M) if M else P
    found = _interior_points_in(S, window)
    logger.info(f"LEMMA2: {len(found)} interior lattice points of P + M in the window")
    return Lemma2Report(S, found, certified)
