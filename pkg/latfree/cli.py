import functools
import json
import logging
from typing import Any, Callable, Optional, Type, TypeVar

import click
from pydantic import BaseModel, ValidationError

from . import config
from .core_num import ceil_scalar, floor_scalar, format_scalar, parse_scalar
from .errors import LatfreeError, PreconditionError, UndecidedError
from .lattice_search import approximate_line, enumerate_lattice_points, minkowski_find, parity_pair
from .maximality import (
    ApproximationCertificate,
    InSpaceCertificate,
    MaximalityCertificate,
    certify_maximal_fulldim,
    check_lemma1,
    check_lemma2,
    certify_maximal_lowdim,
    is_lattice_free,
)
from .maximalize import enlarge_to_maximal, normalize_split
from .models import (
    ApproxOut,
    CertificateOut,
    CertifyOut,
    DirectionDoc,
    EnumerateOut,
    HyperplaneDoc,
    HyperplaneOut,
    LatticeFreeOut,
    Lemma1Out,
    Lemma2Doc,
    Lemma2Out,
    MaximalizeOut,
    MinkowskiOut,
    ParityOut,
    PolyhedronDoc,
    RefutationOut,
    SplitOut,
    VectorListDoc,
    VolumeOut,
    WitnessOut,
)
from .plotting import plot2d
from .polyhedron import Box, Polyhedron, bounding_box, canonicalize, is_bounded, volume

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)

EXIT_ERROR = 1
EXIT_UNDECIDED = 2


def _load(model: Type[M], source, k: Optional[int] = None) -> M:
    data = json.load(source)
    if k is not None and isinstance(data, dict):
        target = data.get("polyhedron", data) if model is Lemma2Doc else data
        if isinstance(target, dict):
            target.setdefault("k", k)
    return model.model_validate(data)


def _emit(model: BaseModel) -> None:
    click.echo(model.model_dump_json(exclude_none=True))


def _summary(passed: bool) -> None:
    click.echo("PASS" if passed else "FAIL", err=True)


def _handled(func: Callable[..., Any]) -> Callable[..., Any]:
    """Map library exceptions onto the exit-code convention."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except UndecidedError as e:
            click.echo(f"UNDECIDED: {e}", err=True)
            raise click.exceptions.Exit(EXIT_UNDECIDED)
        except ValidationError as e:
            for err in e.errors():
                loc = ".".join(str(p) for p in err["loc"]) or "<document>"
                click.echo(f"SCHEMA: {loc}: {err['msg']}", err=True)
            raise click.exceptions.Exit(EXIT_ERROR)
        except json.JSONDecodeError as e:
            click.echo(f"SCHEMA: line {e.lineno} column {e.colno}: {e.msg}", err=True)
            raise click.exceptions.Exit(EXIT_ERROR)
        except PreconditionError as e:
            detail = {k: _jsonable(v) for k, v in e.detail.items()}
            click.echo(f"ERROR: {e} {json.dumps(detail, sort_keys=True)}", err=True)
            raise click.exceptions.Exit(EXIT_ERROR)
        except (LatfreeError, ValueError) as e:
            click.echo(f"ERROR: {type(e).__name__}: {e}", err=True)
            raise click.exceptions.Exit(EXIT_ERROR)
    return wrapper


def _jsonable(v: Any) -> Any:
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, str, type(None))):
        return v
    if isinstance(v, int):
        return v
    return format_scalar(v)


def _parse_window(raw: Optional[str], P: Polyhedron, default: int = 10) -> Box:
    if raw:
        values = [parse_scalar(v.strip()) for v in raw.split(",")]
        if len(values) != 2 * P.d:
            raise ValueError(f"--window expects {2 * P.d} comma-separated bounds, got {len(values)}")
        return Box(tuple(values[0::2]), tuple(values[1::2]))
    return Box.cube(P.d, default)


def _plot_window(raw: Optional[str], P: Polyhedron) -> Box:
    if raw or not is_bounded(P):
        return _parse_window(raw, P, default=5)
    bounds = bounding_box(P)
    return Box(tuple(floor_scalar(lo) - 2 for lo, _ in bounds), tuple(ceil_scalar(hi) + 2 for _, hi in bounds))


input_arg = click.argument("source", type=click.File("r"), default="-")
cap_opt = click.option("--cap", type=click.IntRange(min=1), default=None, help="Search cap (default LATFREE_DEFAULT_CAP).")
k_opt = click.option("--k", "k", type=click.IntRange(min=2), default=None, help="Squarefree k for √k scalars.")
window_opt = click.option("--window", default=None, help='Window bounds "x0,x1,y0,y1,..." per coordinate.')


@click.group()
@click.option("--log-level", default=None, help="Overrides LATFREE_LOG_LEVEL.")
def cli(log_level: Optional[str]) -> None:
    """Exact lattice-free polyhedra: decide, certify and enlarge."""
    config.configure_logging(log_level)


@cli.command("check-free")
@input_arg
@cap_opt
@k_opt
@_handled
def check_free(source, cap, k):
    """Decide whether the interior of a polyhedron avoids Z^d."""
    P = _load(PolyhedronDoc, source, k).to_polyhedron()
    verdict = is_lattice_free(P, cap)
    _emit(LatticeFreeOut(
        lattice_free=verdict.lattice_free,
        witness=WitnessOut.from_witness(verdict.witness) if verdict.witness else None,
    ))
    _summary(verdict.lattice_free)


@cli.command()
@input_arg
@cap_opt
@k_opt
@_handled
def certify(source, cap, k):
    """Certify maximality of a full-dimensional lattice-free polyhedron."""
    P = canonicalize(_load(PolyhedronDoc, source, k).to_polyhedron())
    verdict = certify_maximal_fulldim(P, cap)
    doc = PolyhedronDoc.from_polyhedron(P)
    if isinstance(verdict, MaximalityCertificate):
        _emit(CertifyOut(status="maximal", polyhedron=doc, certificate=CertificateOut.from_certificate(verdict)))
        _summary(True)
    else:
        _emit(CertifyOut(status="refuted", polyhedron=doc, refutation=RefutationOut.from_refutation(verdict)))
        _summary(False)


@cli.command("certify-hyperplane")
@input_arg
@k_opt
@_handled
def certify_hyperplane(source, k):
    """Decide maximality of an affine subspace {base + span(directions)}."""
    H = _load(HyperplaneDoc, source, k).to_subspace()
    verdict = certify_maximal_lowdim(H)
    _emit(HyperplaneOut.from_verdict(verdict))
    _summary(verdict.maximal)


@cli.command()
@input_arg
@click.option("--box", "box_n", type=click.IntRange(min=1), default=None, help="Half-width N of [-N,N]^d.")
@cap_opt
@_handled
def maximalize(source, box_n, cap):
    """Enlarge a lattice-free polytope to a certified maximal one."""
    P = _load(PolyhedronDoc, source).to_polyhedron()
    result = enlarge_to_maximal(P, box_n, cap)
    _emit(MaximalizeOut.from_enlargement(result))
    _summary(True)


@cli.command()
@input_arg
@_handled
def normalize(source):
    """Split a polyhedron with rational lineality as R^r × K′."""
    P = _load(PolyhedronDoc, source).to_polyhedron()
    _emit(SplitOut.from_split(normalize_split(P)))


@cli.command()
@input_arg
@click.option("--t", "t", type=click.IntRange(min=1), default=1, help="Search the lattice tZ^d.")
@k_opt
@_handled
def minkowski(source, t, k):
    """Find a nonzero point of tZ^d in a symmetric body of volume ≥ (2t)^d."""
    P = _load(PolyhedronDoc, source, k).to_polyhedron()
    _emit(MinkowskiOut(z=list(minkowski_find(P, t))))


@cli.command()
@input_arg
@_handled
def parity(source):
    """Two vectors in the same class mod 2Z^d and their integral midpoint."""
    doc = _load(VectorListDoc, source)
    i, j, mid = parity_pair(doc.vectors)
    _emit(ParityOut(i=i, j=j, mid=list(mid)))


@cli.command("approx-line")
@input_arg
@click.option("--t", "t", type=click.IntRange(min=1), required=True, help="Residual bound 1/t.")
@click.option("--cap", "n_cap", type=click.IntRange(min=1), default=None, help="N_cap (default LATFREE_APPROX_N_CAP).")
@k_opt
@_handled
def approx_line(source, t, n_cap, k):
    """Lattice point within ∞-distance 1/t of an irrational line through 0."""
    u = _load(DirectionDoc, source, k).to_vector()
    result = approximate_line(u, t, n_cap)
    _emit(ApproxOut.from_result(result))
    _summary(result.verify())


@cli.command("volume")
@input_arg
@k_opt
@_handled
def volume_cmd(source, k):
    """Exact volume of a full-dimensional polytope."""
    P = _load(PolyhedronDoc, source, k).to_polyhedron()
    _emit(VolumeOut(volume=format_scalar(volume(P))))


@cli.command("enumerate")
@input_arg
@k_opt
@_handled
def enumerate_cmd(source, k):
    """All lattice points of a polytope in lexicographic order."""
    P = _load(PolyhedronDoc, source, k).to_polyhedron()
    points = enumerate_lattice_points(P)
    _emit(EnumerateOut(count=len(points), points=[list(z) for z in points]))


@cli.command()
@input_arg
@window_opt
@cap_opt
@k_opt
@_handled
def lemma1(source, window, cap, k):
    """Check that P + lin(rec P) = P − rec P stays lattice-free in a window."""
    P = _load(PolyhedronDoc, source, k).to_polyhedron()
    report = check_lemma1(P, _parse_window(window, P), cap)
    _emit(Lemma1Out.from_report(report))
    _summary(report.holds)


@cli.command()
@input_arg
@window_opt
@cap_opt
@k_opt
@_handled
def lemma2(source, window, cap, k):
    """Check that P + M stays lattice-free for certified M ⊆ cl(Z^d + rec P)."""
    doc = _load(Lemma2Doc, source, k)
    P = doc.polyhedron.to_polyhedron()
    kk = doc.polyhedron.k
    certificates = []
    for c in doc.certificates:
        if c.kind == "in_space":
            if c.z is None or c.l is None:
                raise ValueError("in_space certificates need z and l")
            certificates.append(InSpaceCertificate(tuple(c.z), tuple(parse_scalar(v, kk) for v in c.l)))
        else:
            if c.u is None or not c.t:
                raise ValueError("approximation certificates need u and t")
            u = tuple(parse_scalar(v, kk) for v in c.u)
            certificates.append(ApproximationCertificate(tuple(approximate_line(u, t) for t in c.t)))
    M = [tuple(parse_scalar(v, kk) for v in m) for m in doc.M]
    report = check_lemma2(P, M, certificates, _parse_window(window, P), cap)
    _emit(Lemma2Out.from_report(report))
    _summary(report.lattice_free_in_window)


@cli.command()
@input_arg
@window_opt
@click.option("--out", "out", type=click.Path(dir_okay=False, writable=True), default=None, help="SVG path (default stdout).")
@cap_opt
@k_opt
@_handled
def plot(source, window, out, cap, k):
    """Render a planar polyhedron and its lattice points as SVG."""
    P = _load(PolyhedronDoc, source, k).to_polyhedron()
    svg = plot2d(P, _plot_window(window, P), cap)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(svg)
        logger.info(f"PLOT: wrote {out}")
    else:
        click.echo(svg)


if __name__ == "__main__":
    cli()
