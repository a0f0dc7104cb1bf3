"""SVG rendering of planar polyhedra with their lattice points."""
import logging
import math
import xml.etree.ElementTree as ET
from typing import List, Optional, Sequence, Tuple

from . import config
from .errors import DimensionError, NotFullDimensionalError
from .lattice_search import enumerate_lattice_points
from .maximality import MaximalityCertificate, certify_maximal_fulldim
from .polyhedron import Box, Polyhedron, box_polyhedron, intersect, is_empty, vertices

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"
MARGIN = 10


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def _ordered(points: Sequence[Tuple[float, float]]) -> List[Tuple[float, float]]:
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def plot2d(P: Polyhedron, window: Box, cap: Optional[int] = None, scale: Optional[int] = None) -> str:
    """SVG of P clipped to window: class="region" polygon, circles of class lattice/interior/witness."""
    if P.d != 2 or window.d != 2:
        raise DimensionError("plotting needs a polyhedron and window in dimension 2")
    scale = config.PLOT_SCALE if scale is None else scale
    x0, y0 = float(window.lo[0]), float(window.lo[1])
    x1, y1 = float(window.hi[0]), float(window.hi[1])
    width = (x1 - x0) * scale + 2 * MARGIN
    height = (y1 - y0) * scale + 2 * MARGIN

    def px(x: float, y: float) -> Tuple[str, str]:
        return _fmt(MARGIN + (x - x0) * scale), _fmt(MARGIN + (y1 - y) * scale)

    ET.register_namespace("", SVG_NS)
    root = ET.Element(f"{{{SVG_NS}}}svg", {
        "width": _fmt(width), "height": _fmt(height), "viewBox": f"0 0 {_fmt(width)} {_fmt(height)}",
    })
    ET.SubElement(root, f"{{{SVG_NS}}}rect", {
        "class": "window", "x": "0", "y": "0", "width": _fmt(width), "height": _fmt(height), "fill": "white",
    })

    clipped = intersect(P, box_polyhedron(window))
    if not is_empty(clipped):
        corners = [(float(v[0]), float(v[1])) for v in vertices(clipped)]
        if corners:
            pts = " ".join(",".join(px(x, y)) for x, y in _ordered(corners))
            ET.SubElement(root, f"{{{SVG_NS}}}polygon", {
                "class": "region", "points": pts, "fill": "#cfe3f7", "stroke": "#1f5f99", "stroke-width": "1.5",
            })

    interior = []
    for z in enumerate_lattice_points(box_polyhedron(window)):
        cx, cy = px(*z)
        ET.SubElement(root, f"{{{SVG_NS}}}circle", {"class": "lattice", "cx": cx, "cy": cy, "r": "2", "fill": "#888"})
        if P.in_interior(z):
            interior.append(z)
    for z in interior:
        cx, cy = px(*z)
        ET.SubElement(root, f"{{{SVG_NS}}}circle", {"class": "interior", "cx": cx, "cy": cy, "r": "5", "fill": "#d62728"})

    witnesses: List[Tuple[int, ...]] = []
    if not interior:
        try:
            verdict = certify_maximal_fulldim(P, cap)
        except NotFullDimensionalError:
            verdict = None
        if isinstance(verdict, MaximalityCertificate):
            witnesses = [z for _, z in verdict.facet_witnesses if window.contains(z)]
    for z in witnesses:
        cx, cy = px(*z)
        ET.SubElement(root, f"{{{SVG_NS}}}circle", {
            "class": "witness", "cx": cx, "cy": cy, "r": "5", "fill": "none", "stroke": "#2ca02c", "stroke-width": "2",
        })
    logger.debug(f"PLOT: {len(interior)} interior points, {len(witnesses)} facet witnesses")
    return ET.tostring(root, encoding="unicode")
