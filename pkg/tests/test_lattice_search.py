import random
from fractions import Fraction

import pytest

from helpers import (
    ROOT2,
    box,
    brute_force_interior,
    brute_force_points,
    cube,
    poly,
    polygon_from_vertices,
    random_polygon,
    random_symmetric_polygon,
    random_symmetric_polytope,
    split,
)
from latfree import config
from latfree.errors import (
    DimensionError,
    NotFullDimensionalError,
    PreconditionError,
    SearchExhaustedError,
    UnboundedError,
    UndecidedError,
)
from latfree.lattice_search import (
    Location,
    Witness,
    approximate_line,
    enumerate_lattice_points,
    interior_lattice_point,
    minkowski_find,
    parity_pair,
    relint_lattice_point,
    window_search,
)
from latfree.polyhedron import facets, volume
from latfree.workers import parallel_map

THICK_IRRATIONAL = poly(2, [((1, ROOT2), Fraction(1, 10)), ((-1, -ROOT2), 0)])
HEXAGON = poly(2, [((1, 0), 3), ((0, 1), 3), ((1, -1), 3), ((-1, 0), 3), ((0, -1), 3), ((-1, 1), 3)])


# --- Enumeration ---

def test_enumerate_unit_square():
    assert enumerate_lattice_points(cube(2, 0, 1)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_enumerate_triangle():
    T = polygon_from_vertices([(0, 0), (2, 0), (0, 2)])
    assert enumerate_lattice_points(T) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]


def test_enumerate_sliver_is_empty():
    sliver = box([0, Fraction(1, 3)], [1, Fraction(2, 3)])
    assert enumerate_lattice_points(sliver) == []


def test_enumerate_empty_region():
    assert enumerate_lattice_points(poly(1, [((1,), 0), ((-1,), -1)])) == []


def test_enumerate_rejects_unbounded():
    with pytest.raises(UnboundedError):
        enumerate_lattice_points(split())


def test_enumerate_irrational_region():
    # 0 <= x1 + √2 x2 <= 3 inside [-3, 3]^2
    P = poly(2, [((1, ROOT2), 3), ((-1, -ROOT2), 0)] + [(q, 3) for q in [(1, 0), (-1, 0), (0, 1), (0, -1)]])
    assert enumerate_lattice_points(P) == brute_force_points(P, -3, 3)


def test_enumerate_matches_brute_force_in_the_plane():
    rng = random.Random(41)
    for _ in range(30):
        P = random_polygon(rng, -6, 6, n=5)
        assert enumerate_lattice_points(P) == brute_force_points(P, -6, 6)


def test_enumerate_matches_brute_force_in_three_dimensions():
    rng = random.Random(43)
    for _ in range(10):
        lo = [Fraction(rng.randint(-12, 0), 4) for _ in range(3)]
        hi = [Fraction(rng.randint(1, 12), 4) for _ in range(3)]
        cut = ((rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(1, 2)), Fraction(rng.randint(0, 8), 3))
        P = poly(3, [(q.a, q.b) for q in box(lo, hi).ineqs] + [cut])
        assert enumerate_lattice_points(P) == brute_force_points(P, -3, 3)


def test_enumerate_with_worker_pool(monkeypatch):
    monkeypatch.setattr(config, "WORKERS", 2)
    T = polygon_from_vertices([(-3, -2), (4, 0), (0, 5)])
    assert enumerate_lattice_points(T) == brute_force_points(T, -3, 5)


def test_parallel_map_keeps_order():
    items = list(range(-10, 10))
    assert parallel_map(abs, items, workers=2) == [abs(v) for v in items]
    assert parallel_map(abs, items, workers=1) == [abs(v) for v in items]


def test_window_search():
    P = poly(2, [((0, -1), -Fraction(1, 2))])  # x2 >= 1/2
    assert window_search(P, 4) == (-1, 1)
    far = poly(2, [((-1, 0), -100)])  # x1 >= 100
    assert window_search(far, 8) is None


# --- Interior lattice points ---

@pytest.mark.parametrize("P", [
    cube(2, 0, 1),
    split(),
    box([Fraction(1, 4), Fraction(1, 4)], [Fraction(3, 4), Fraction(3, 4)]),
    poly(2, [((1, ROOT2), 0), ((-1, -ROOT2), 0)]),
    poly(2, [((1, 1), 1), ((-1, -1), 0)]),
    poly(3, [((0, 0, 1), 1), ((0, 0, -1), 0)]),
])
def test_interior_lattice_point_absent(P):
    assert interior_lattice_point(P) is None


@pytest.mark.parametrize("P, expected", [
    (cube(2, -1, 1), (0, 0)),
    (polygon_from_vertices([(0, 0), (3, 0), (0, 3)]), (1, 1)),
    (poly(2, []), (0, 0)),
])
def test_interior_lattice_point_present(P, expected):
    w = interior_lattice_point(P)
    assert w is not None and w.z == expected
    assert w.location is Location.INTERIOR
    assert w.verify(P)


def test_interior_lattice_point_half_plane():
    P = poly(2, [((0, -1), -Fraction(1, 2))])
    w = interior_lattice_point(P)
    assert w is not None and P.in_interior(w.z)


def test_interior_lattice_point_rational_strip_with_room():
    # 0 <= x1 - 2 x2 <= 3/2 contains x1 - 2 x2 = 1
    P = poly(2, [((1, -2), Fraction(3, 2)), ((-1, 2), 0)])
    w = interior_lattice_point(P)
    assert w is not None and P.in_interior(w.z)


def test_interior_lattice_point_far_rational_strip():
    # 1000 <= x1 <= 1002 lies far outside any default search window
    P = poly(2, [((1, 0), 1002), ((-1, 0), -1000)])
    w = interior_lattice_point(P)
    assert w is not None and w.z[0] == 1001
    assert w.verify(P)


def test_interior_lattice_point_far_quadrant():
    # x1 >= 1000, x2 >= 0 is reached by walking from the origin along (1, 1)
    P = poly(2, [((-1, 0), -1000), ((0, -1), 0)])
    w = interior_lattice_point(P)
    assert w is not None and w.z == (1001, 1001)
    assert w.verify(P)


def test_interior_lattice_point_far_cone_in_three_dimensions():
    # x3 >= 500, x1 + x2 <= x3 - 500, x1 >= 0, x2 >= 0
    P = poly(3, [((0, 0, -1), -500), ((1, 1, -1), -500), ((-1, 0, 0), 0), ((0, -1, 0), 0)])
    w = interior_lattice_point(P, cap=4)
    assert w is not None
    assert w.verify(P)


def test_interior_lattice_point_far_half_strip_is_lattice_free():
    # 1000 <= x1 <= 1001, x2 >= 0
    P = poly(2, [((1, 0), 1001), ((-1, 0), -1000), ((0, -1), 0)])
    assert interior_lattice_point(P) is None


def test_interior_lattice_point_thick_irrational_strip():
    w = interior_lattice_point(THICK_IRRATIONAL)
    assert w is not None
    assert w.z == (-7, 5)
    assert THICK_IRRATIONAL.in_interior(w.z)


def test_interior_lattice_point_undecided_below_cap():
    P = poly(2, [((1, ROOT2), Fraction(1, 1000)), ((-1, -ROOT2), 0)])
    with pytest.raises(UndecidedError):
        interior_lattice_point(P, cap=2)


def test_interior_lattice_point_matches_brute_force():
    rng = random.Random(47)
    for _ in range(25):
        P = random_polygon(rng, -4, 4, n=rng.choice([3, 4]))
        w = interior_lattice_point(P)
        expected = brute_force_interior(P, -4, 4)
        if expected:
            assert w is not None and w.z == expected[0]
        else:
            assert w is None


def test_relint_lattice_point():
    T = poly(2, [((-1, 0), 0), ((0, -1), 0), ((1, 1), 2)])
    assert [relint_lattice_point(T, i) for i in range(3)] == [(0, 1), (1, 0), (1, 1)]
    assert relint_lattice_point(cube(2, 0, 1), 0) is None


def test_relint_lattice_point_matches_facets():
    T = poly(2, [((-1, 0), 0), ((0, -1), 0), ((1, 1), 2)])
    for i, face in facets(T):
        z = relint_lattice_point(T, i)
        assert face.contains(z)
    with pytest.raises(NotFullDimensionalError):
        relint_lattice_point(poly(2, [((1, 0), 0), ((-1, 0), 0)]), 0)


def test_witness_describe():
    assert Witness((0, 1), Location.FACET, 2).describe() == "relative-interior-of-facet 2"
    assert Witness((0, 0), Location.INTERIOR).describe() == "interior"


# --- Minkowski ---

@pytest.mark.parametrize("P, t, expected", [
    (cube(2, -1, 1), 1, (1, 0)),
    (cube(2, -2, 2), 2, (2, 0)),
    (HEXAGON, 1, (1, 0)),
    (cube(3, -1, 1), 1, (1, 0, 0)),
    (cube(3, -3, 3), 3, (3, 0, 0)),
])
def test_minkowski_examples(P, t, expected):
    assert minkowski_find(P, t) == expected


def test_hexagon_volume():
    assert volume(HEXAGON) == 27


def test_minkowski_thin_irrational_body():
    # |x1 + √2 x2| <= 1/2, |x2| <= 4: area 8
    P = poly(2, [((1, ROOT2), Fraction(1, 2)), ((-1, -ROOT2), Fraction(1, 2)), ((0, 1), 4), ((0, -1), 4)])
    assert volume(P) == 8
    z = minkowski_find(P)
    assert any(z) and P.contains(z)


@pytest.mark.parametrize("P, violation", [
    (cube(2, 0, 2), "asymmetric"),
    (split(), "unbounded"),
    (poly(2, [((1, 0), 0), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 1)]), "not-full-dimensional"),
    (cube(2, -Fraction(1, 2), Fraction(1, 2)), "volume"),
])
def test_minkowski_preconditions(P, violation):
    with pytest.raises(PreconditionError) as info:
        minkowski_find(P)
    assert info.value.detail["violation"] == violation


def test_minkowski_reports_volume_shortfall():
    with pytest.raises(PreconditionError) as info:
        minkowski_find(cube(2, -Fraction(1, 2), Fraction(1, 2)))
    assert info.value.detail["shortfall"] == 3
    with pytest.raises(PreconditionError) as info:
        minkowski_find(cube(2, -1, 1), t=2)
    assert info.value.detail["required"] == 16


def test_minkowski_random_symmetric_bodies():
    rng = random.Random(53)
    checked = 0
    for _ in range(40):
        P = random_symmetric_polygon(rng)
        t = rng.choice([1, 2])
        if volume(P) < (2 * t) ** 2:
            continue
        z = minkowski_find(P, t)
        assert any(z)
        assert all(v % t == 0 for v in z)
        assert P.contains(z)
        checked += 1
    assert checked > 5


def test_minkowski_random_symmetric_polytopes_in_three_dimensions():
    rng = random.Random(59)
    checked = 0
    for _ in range(20):
        P = random_symmetric_polytope(rng)
        t = rng.choice([1, 2, 3])
        if volume(P) < (2 * t) ** 3:
            continue
        z = minkowski_find(P, t)
        assert any(z)
        assert all(v % t == 0 for v in z)
        assert P.contains(z)
        checked += 1
    assert checked > 3


# --- Line approximation ---

@pytest.mark.parametrize("t, expected", [(5, (5, 7)), (12, (12, 17)), (29, (29, 41)), (70, (70, 99))])
def test_approximate_sqrt2_line(t, expected):
    result = approximate_line((1, ROOT2), t)
    assert result.z == expected
    assert result.verify()
    assert 0 < result.residual < Fraction(1, t)


def test_approximate_line_in_three_dimensions():
    result = approximate_line((1, ROOT2, 2 * ROOT2), 3)
    assert result.verify()


def test_approximate_line_residuals_shrink():
    residuals = [approximate_line((-ROOT2, 1), t).residual for t in (5, 12, 29)]
    assert residuals[0] > residuals[1] > residuals[2]


def test_approximate_line_rejects_rational_direction():
    with pytest.raises(PreconditionError) as info:
        approximate_line((1, 0), 5)
    assert info.value.detail["violation"] == "rational-direction"
    with pytest.raises(PreconditionError):
        approximate_line((ROOT2, 2 * ROOT2), 5)


def test_approximate_line_exhausts_cap():
    with pytest.raises(SearchExhaustedError):
        approximate_line((1, ROOT2), 100, n_cap=2)


# --- Parity ---

@pytest.mark.parametrize("w, expected", [
    ([(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)], (1, 5, (1, 0))),
    ([(0, 0), (0, 0)], (1, 2, (0, 0))),
    ([(1, 3, 5), (2, 2, 2), (3, 5, 7)], (1, 3, (2, 4, 6))),
    ([(-1, 1), (1, -1)], (1, 2, (0, 0))),
])
def test_parity_pair(w, expected):
    assert parity_pair(w) == expected


def test_parity_pair_needs_a_collision():
    with pytest.raises(SearchExhaustedError):
        parity_pair([(0, 0), (1, 0), (0, 1), (1, 1)])


def test_parity_pair_rejects_ragged_input():
    with pytest.raises(DimensionError):
        parity_pair([(0, 0), (1, 0, 1)])


def test_parity_pair_pigeonhole_property():
    rng = random.Random(59)
    for _ in range(200):
        d = rng.randint(1, 6)
        w = [tuple(rng.randint(-9, 9) for _ in range(d)) for _ in range(2 ** d + 1)]
        i, j, mid = parity_pair(w)
        assert 1 <= i < j <= len(w)
        assert all(2 * m == a + b for m, a, b in zip(mid, w[i - 1], w[j - 1]))
