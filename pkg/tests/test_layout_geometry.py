"""Placement geometry: polygon moments, region points and relation solvers."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.citymodel import extract_geometry_index, parse_citygml
from src.citymodel.geometry_index import CityObjectEntry, Surface
from src.errors import LayoutError
from src.layout.geometry import (
    Point3,
    facing_rotation,
    object_anchor,
    polygon_moments,
    region_to_point,
    relation_endpoints,
    rotation_facing,
    solve_above,
    solve_inside,
    solve_near,
    surfaces_centroid,
)
from src.rdf import viz

from tests.conftest import box_building, city_xml

L_SHAPE = [(0, 0, 0), (2, 0, 0), (2, 1, 0), (1, 1, 0), (1, 2, 0), (0, 2, 0)]


def entry(*surfaces):
    node = viz("mark")
    return CityObjectEntry(
        node=node,
        kind="Building",
        surfaces=[Surface(role, (tuple(ring),), node) for role, ring in surfaces],
    )


# ============================================================================
# Moments and region points
# ============================================================================


def test_non_convex_polygon_centroid():
    center, area = polygon_moments(L_SHAPE)
    assert area == pytest.approx(3.0)
    assert center == pytest.approx([2.5 / 3, 2.5 / 3, 0.0])


def test_orientation_does_not_change_the_moments():
    forward = polygon_moments(L_SHAPE)
    backward = polygon_moments(list(reversed(L_SHAPE)))
    assert backward[1] == pytest.approx(forward[1])
    assert backward[0] == pytest.approx(forward[0])


offsets = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


@given(offsets, offsets, offsets)
def test_centroid_moves_with_the_polygon(dx, dy, dz):
    moved = [(x + dx, y + dy, z + dz) for x, y, z in L_SHAPE]
    center, area = polygon_moments(moved)
    assert area == pytest.approx(3.0, abs=1e-6)
    assert center == pytest.approx([2.5 / 3 + dx, 2.5 / 3 + dy, dz], abs=1e-6)


def test_vertical_polygon_centroid():
    wall = [(0, 0, 0), (4, 0, 0), (4, 0, 2), (0, 0, 2)]
    center, area = polygon_moments(wall)
    assert area == pytest.approx(8.0)
    assert center == pytest.approx([2.0, 0.0, 1.0])


def test_degenerate_ring_falls_back_to_vertex_mean():
    center, area = polygon_moments([(0, 0, 0), (1, 1, 1), (3, 3, 3)])
    assert area == 0.0
    assert center == pytest.approx([4 / 3, 4 / 3, 4 / 3])


def test_region_to_point_modes():
    assert region_to_point(L_SHAPE) == pytest.approx((2.5 / 3, 2.5 / 3, 0.0))
    assert region_to_point(L_SHAPE, "vertex-mean") == pytest.approx((1.0, 1.0, 0.0))


def test_region_to_point_accepts_surfaces():
    surface = Surface("ground", (tuple(L_SHAPE),), viz("s"))
    assert region_to_point(surface) == region_to_point(L_SHAPE)


def test_empty_region_is_rejected():
    with pytest.raises(LayoutError, match="empty region"):
        region_to_point([])


def test_points_must_be_finite():
    with pytest.raises(LayoutError, match="non-finite"):
        Point3.of([0.0, math.inf, 1.0])


def test_surfaces_centroid_weights_by_area():
    small = ("ground", [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)])
    large = ("ground", [(10, 0, 0), (13, 0, 0), (13, 3, 0), (10, 3, 0)])
    point = surfaces_centroid(entry(small, large).surfaces)
    # areas 1 and 9, centres 0.5 and 11.5
    assert point.x == pytest.approx((0.5 + 9 * 11.5) / 10)
    assert point.y == pytest.approx((0.5 + 9 * 1.5) / 10)


# ============================================================================
# Relation solvers
# ============================================================================


def test_above_uses_ground_centre_and_highest_roof(box_index):
    assert solve_above(box_index["box"]) == pytest.approx((5.0, 5.0, 12.0))
    assert solve_above(box_index["tower"], clearance=0.5) == pytest.approx((23.0, 3.0, 20.5))


def test_above_needs_roof_and_ground():
    walls_only = entry(("wall", [(0, 0, 0), (1, 0, 0), (1, 0, 1), (0, 0, 1)]))
    with pytest.raises(LayoutError, match="no roof surfaces") as info:
        solve_above(walls_only)
    assert info.value.node == "mark"


def test_near_stands_in_front_of_the_largest_wall():
    index = extract_geometry_index(parse_citygml(city_xml([box_building("slab", 0, 0, 20, 4, 6)])))
    point, facing = solve_near(index["slab"], footprint=(4.0, 2.0), distance=2.0)
    # the two long walls tie; either way the point is 2 m off its centre
    assert point.x == pytest.approx(10.0)
    assert point.z == pytest.approx(3.0)
    assert abs(point.y - 2.0) == pytest.approx(4.0)
    assert facing[2] == 0.0
    assert facing[1] * (2.0 - point.y) > 0


def test_near_lifts_tall_objects_above_the_ground():
    index = extract_geometry_index(parse_citygml(city_xml([box_building("slab", 0, 0, 20, 4, 6)])))
    point, _ = solve_near(index["slab"], footprint=(4.0, 10.0))
    assert point.z == pytest.approx(5.0)


def test_near_needs_walls():
    roof_only = entry(("roof", [(0, 0, 3), (1, 0, 3), (1, 1, 3)]))
    with pytest.raises(LayoutError, match="no wall surfaces"):
        solve_near(roof_only)


def test_inside_is_the_vertex_mean():
    cube_faces = entry(
        ("ground", [(0, 0, 0), (0, 2, 0), (2, 2, 0), (2, 0, 0)]),
        ("roof", [(0, 0, 4), (2, 0, 4), (2, 2, 4), (0, 2, 4)]),
    )
    assert solve_inside(cube_faces) == pytest.approx((1.0, 1.0, 2.0))


def test_inside_of_an_empty_object_fails():
    with pytest.raises(LayoutError, match="no surfaces"):
        solve_inside(entry())


def test_window_anchors_and_relation_endpoints(box_index):
    assert object_anchor(box_index["box-win-1"]) == pytest.approx((3.0, -0.05, 3.0))
    p1, p2 = relation_endpoints(box_index["box-win-2"], box_index["tower-win-1"])
    assert p1 == pytest.approx((7.0, -0.05, 3.0))
    assert p2 == pytest.approx((23.0, -0.05, 3.0))


# ============================================================================
# Panel orientation
# ============================================================================


def test_unoriented_panels_keep_the_identity_rotation():
    assert facing_rotation(None) == (0.0, 0.0, 1.0, 0.0)
    assert facing_rotation((0.0, -1.0, 0.0)) == (0.0, 0.0, 1.0, 0.0)


@pytest.mark.parametrize("facing", [(0, 1, 0), (1, 0, 0), (-1, 0, 0), (0.6, -0.8, 0.0)])
def test_rotation_facing_inverts_facing_rotation(facing):
    rotation = facing_rotation(facing)
    assert rotation[:3] == (0.0, 0.0, 1.0)
    assert rotation_facing(rotation) == pytest.approx(np.asarray(facing, dtype=float), abs=1e-12)
