from typing import List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field, StrictInt, model_validator

from .core_num import Scalar, format_scalar, parse_scalar
from .lattice_search import ApproxResult, Witness
from .maximality import HyperplaneVerdict, Lemma1Report, Lemma2Report, MaximalityCertificate, Refutation
from .maximalize import Enlargement, SplitForm
from .polyhedron import AffineSubspace, Inequality, Polyhedron

ScalarDoc = Union[StrictInt, str, List[Union[StrictInt, str]]]
ScalarOut = Union[str, List[str]]


def _scalars(raw: Sequence[ScalarDoc], k: Optional[int]) -> Tuple[Scalar, ...]:
    return tuple(parse_scalar(v, k) for v in raw)


def _out(values: Sequence[Scalar]) -> List[ScalarOut]:
    return [format_scalar(v) for v in values]


# --- Input documents ---

class InequalityDoc(BaseModel):
    a: List[ScalarDoc]
    b: ScalarDoc


class PolyhedronDoc(BaseModel):
    d: int = Field(..., ge=0)
    k: Optional[int] = Field(None, ge=2, description="Squarefree k when any scalar uses a √k part.")
    ineqs: List[InequalityDoc] = Field(default_factory=list)

    @model_validator(mode="after")
    def _parse(self) -> "PolyhedronDoc":
        for i, q in enumerate(self.ineqs):
            if len(q.a) != self.d:
                raise ValueError(f"ineqs[{i}].a has {len(q.a)} entries, expected d={self.d}")
        self.to_polyhedron()
        return self

    def to_polyhedron(self) -> Polyhedron:
        rows = [Inequality(_scalars(q.a, self.k), parse_scalar(q.b, self.k)) for q in self.ineqs]
        return Polyhedron(self.d, tuple(rows))

    @classmethod
    def from_polyhedron(cls, P: Polyhedron) -> "PolyhedronDoc":
        return cls(
            d=P.d,
            k=P.k,
            ineqs=[InequalityDoc(a=_out(q.a), b=format_scalar(q.b)) for q in P.ineqs],
        )


class VectorListDoc(BaseModel):
    d: int = Field(..., ge=1)
    vectors: List[List[StrictInt]]

    @model_validator(mode="after")
    def _check_lengths(self) -> "VectorListDoc":
        for i, v in enumerate(self.vectors):
            if len(v) != self.d:
                raise ValueError(f"vectors[{i}] has {len(v)} entries, expected d={self.d}")
        return self


class HyperplaneDoc(BaseModel):
    d: int = Field(..., ge=1)
    k: Optional[int] = Field(None, ge=2)
    base: List[ScalarDoc]
    directions: List[List[ScalarDoc]] = Field(default_factory=list)

    def to_subspace(self) -> AffineSubspace:
        if len(self.base) != self.d or any(len(v) != self.d for v in self.directions):
            raise ValueError(f"base and directions must have d={self.d} entries")
        return AffineSubspace(_scalars(self.base, self.k), tuple(_scalars(v, self.k) for v in self.directions))


class DirectionDoc(BaseModel):
    d: int = Field(..., ge=1)
    k: Optional[int] = Field(None, ge=2)
    u: List[ScalarDoc]

    def to_vector(self) -> Tuple[Scalar, ...]:
        if len(self.u) != self.d:
            raise ValueError(f"u has {len(self.u)} entries, expected d={self.d}")
        return _scalars(self.u, self.k)


class ClosureCertificateDoc(BaseModel):
    kind: Literal["in_space", "approximation"]
    z: Optional[List[StrictInt]] = None
    l: Optional[List[ScalarDoc]] = None
    u: Optional[List[ScalarDoc]] = None
    t: List[StrictInt] = Field(default_factory=list)


class Lemma2Doc(BaseModel):
    polyhedron: PolyhedronDoc
    M: List[List[ScalarDoc]] = Field(default_factory=list)
    certificates: List[ClosureCertificateDoc] = Field(default_factory=list)


# --- Results ---

class WitnessOut(BaseModel):
    z: List[int]
    location: str
    facet: Optional[int] = None

    @classmethod
    def from_witness(cls, w: Witness) -> "WitnessOut":
        return cls(z=list(w.z), location=w.describe(), facet=w.facet)


class LatticeFreeOut(BaseModel):
    lattice_free: bool
    witness: Optional[WitnessOut] = None


class FacetWitnessOut(BaseModel):
    facet: int
    z: List[int]


class CertificateOut(BaseModel):
    facet_witnesses: List[FacetWitnessOut]
    rec_basis: List[List[int]]
    facet_count: int
    r: int
    d: int

    @classmethod
    def from_certificate(cls, c: MaximalityCertificate) -> "CertificateOut":
        return cls(
            facet_witnesses=[FacetWitnessOut(facet=i, z=list(z)) for i, z in c.facet_witnesses],
            rec_basis=[list(u) for u in c.rec_basis],
            facet_count=c.facet_count,
            r=c.r,
            d=c.d,
        )


class RefutationOut(BaseModel):
    kind: str
    reason: str
    witness: Optional[WitnessOut] = None
    enlargement: Optional[PolyhedronDoc] = None

    @classmethod
    def from_refutation(cls, ref: Refutation) -> "RefutationOut":
        return cls(
            kind=ref.kind.value,
            reason=ref.reason,
            witness=WitnessOut.from_witness(ref.witness) if ref.witness else None,
            enlargement=PolyhedronDoc.from_polyhedron(ref.enlargement) if ref.enlargement else None,
        )


class CertifyOut(BaseModel):
    status: Literal["maximal", "refuted"]
    polyhedron: PolyhedronDoc
    certificate: Optional[CertificateOut] = None
    refutation: Optional[RefutationOut] = None


class HyperplaneOut(BaseModel):
    maximal: bool
    reason: str
    normal: Optional[List[ScalarOut]] = None
    split: Optional[PolyhedronDoc] = None

    @classmethod
    def from_verdict(cls, v: HyperplaneVerdict) -> "HyperplaneOut":
        return cls(
            maximal=v.maximal,
            reason=v.reason,
            normal=_out(v.normal) if v.normal else None,
            split=PolyhedronDoc.from_polyhedron(v.split) if v.split else None,
        )


class PushOut(BaseModel):
    a: List[ScalarOut]
    old_b: ScalarOut
    new_b: Optional[ScalarOut] = None


class MaximalizeOut(BaseModel):
    polyhedron: PolyhedronDoc
    certificate: CertificateOut
    pushes: List[PushOut]
    released: List[InequalityDoc]
    box: int

    @classmethod
    def from_enlargement(cls, e: Enlargement) -> "MaximalizeOut":
        return cls(
            polyhedron=PolyhedronDoc.from_polyhedron(e.polyhedron),
            certificate=CertificateOut.from_certificate(e.certificate),
            pushes=[
                PushOut(a=_out(p.a), old_b=format_scalar(p.old_b),
                        new_b=format_scalar(p.new_b) if p.new_b is not None else None)
                for p in e.pushes
            ],
            released=[InequalityDoc(a=_out(q.a), b=format_scalar(q.b)) for q in e.released],
            box=e.box_n,
        )


class SplitOut(BaseModel):
    r: int
    forward: List[List[str]]
    inverse: List[List[str]]
    K_prime: PolyhedronDoc

    @classmethod
    def from_split(cls, s: SplitForm) -> "SplitOut":
        return cls(
            r=s.r,
            forward=[[str(v) for v in row] for row in s.A.forward.to_lists()],
            inverse=[[str(v) for v in row] for row in s.A.inverse.to_lists()],
            K_prime=PolyhedronDoc.from_polyhedron(s.K_prime),
        )


class MinkowskiOut(BaseModel):
    z: List[int]


class ParityOut(BaseModel):
    i: int
    j: int
    mid: List[int]


class ApproxOut(BaseModel):
    z: List[int]
    x: List[ScalarOut]
    t: int
    residual: ScalarOut
    n: int

    @classmethod
    def from_result(cls, a: ApproxResult) -> "ApproxOut":
        return cls(z=list(a.z), x=_out(a.x), t=a.t, residual=format_scalar(a.residual), n=a.n)


class VolumeOut(BaseModel):
    volume: ScalarOut


class EnumerateOut(BaseModel):
    count: int
    points: List[List[int]]


class Lemma1Out(BaseModel):
    holds: bool
    Q: PolyhedronDoc
    interior_points: List[List[int]]
    samples: int
    mismatches: List[List[ScalarOut]]

    @classmethod
    def from_report(cls, r: Lemma1Report) -> "Lemma1Out":
        return cls(
            holds=r.holds,
            Q=PolyhedronDoc.from_polyhedron(r.Q),
            interior_points=[list(z) for z in r.interior_points],
            samples=r.samples,
            mismatches=[_out(x) for x in r.mismatches],
        )


class Lemma2Out(BaseModel):
    lattice_free_in_window: bool
    sum_polyhedron: PolyhedronDoc
    interior_points: List[List[int]]

    @classmethod
    def from_report(cls, r: Lemma2Report) -> "Lemma2Out":
        return cls(
            lattice_free_in_window=r.lattice_free_in_window,
            sum_polyhedron=PolyhedronDoc.from_polyhedron(r.sum_polyhedron),
            interior_points=[list(z) for z in r.interior_points],
        )
