"""Builders and brute-force oracles shared by the test modules."""
import itertools
import random
from fractions import Fraction
from typing import List, Sequence, Tuple

from latfree.core_num import QuadExt
from latfree.polyhedron import Polyhedron

ROOT2 = QuadExt(0, 1, 2)


def poly(d: int, rows) -> Polyhedron:
    return Polyhedron.from_rows(d, [(a, Fraction(b) if isinstance(b, str) else b) for a, b in rows])


def box(lo: Sequence, hi: Sequence) -> Polyhedron:
    rows = []
    for j, (l, h) in enumerate(zip(lo, hi)):
        e = [0] * len(lo)
        e[j] = 1
        rows.append((e, Fraction(h)))
        rows.append(([-v for v in e], -Fraction(l)))
    return Polyhedron.from_rows(len(lo), rows)


def cube(d: int, lo, hi) -> Polyhedron:
    return box([lo] * d, [hi] * d)


def split(d: int = 2, axis: int = 0) -> Polyhedron:
    """{0 <= x_axis <= 1}."""
    e = [0] * d
    e[axis] = 1
    return Polyhedron.from_rows(d, [(e, 1), ([-v for v in e], 0)])


def hull(points: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Counter-clockwise convex hull without collinear points (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_from_vertices(points: Sequence[Tuple[int, int]]) -> Polyhedron:
    """H-representation of conv(points); needs three non-collinear points."""
    h = hull(points)
    if len(h) < 3:
        raise ValueError("points are collinear")
    rows = []
    for p, q in zip(h, h[1:] + h[:1]):
        a = (q[1] - p[1], p[0] - q[0])
        rows.append((a, a[0] * p[0] + a[1] * p[1]))
    return Polyhedron.from_rows(2, rows)


def brute_force_points(P: Polyhedron, lo: int, hi: int) -> List[Tuple[int, ...]]:
    return [z for z in itertools.product(range(lo, hi + 1), repeat=P.d) if P.contains(z)]


def brute_force_interior(P: Polyhedron, lo: int, hi: int) -> List[Tuple[int, ...]]:
    return [z for z in itertools.product(range(lo, hi + 1), repeat=P.d) if P.in_interior(z)]


def random_polygon(rng: random.Random, lo: int = -4, hi: int = 4, n: int = 4) -> Polyhedron:
    while True:
        pts = [(rng.randint(lo, hi), rng.randint(lo, hi)) for _ in range(n)]
        if len(hull(pts)) >= 3:
            return polygon_from_vertices(pts)


def random_lattice_free_polygons(seed: int, count: int, lo: int = -3, hi: int = 3) -> List[Polyhedron]:
    """Integer-vertex polygons with no interior lattice point."""
    rng = random.Random(seed)
    found = []
    for _ in range(2000):
        if len(found) == count:
            break
        P = random_polygon(rng, lo, hi, n=rng.choice([3, 3, 4]))
        if not brute_force_interior(P, lo, hi):
            found.append(P)
    return found


def random_symmetric_polygon(rng: random.Random, reach: int = 4) -> Polyhedron:
    while True:
        pts = [(rng.randint(-reach, reach), rng.randint(-reach, reach)) for _ in range(3)]
        pts += [(-x, -y) for x, y in pts]
        if len(hull(pts)) >= 3:
            return polygon_from_vertices(pts)


def random_symmetric_polytope(rng: random.Random, d: int = 3, reach: int = 3, cuts: int = 2) -> Polyhedron:
    """|x_i| <= reach cut by random pairs |<a, x>| <= c."""
    rows = []
    for j in range(d):
        e = [0] * d
        e[j] = 1
        rows.append((e, reach))
        rows.append(([-v for v in e], reach))
    for _ in range(cuts):
        a = [rng.randint(-2, 2) for _ in range(d)]
        if not any(a):
            continue
        c = rng.randint(1, 2 * reach)
        rows.append((a, c))
        rows.append(([-v for v in a], c))
    return Polyhedron.from_rows(d, rows)
