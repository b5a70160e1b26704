import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from app.core.errors import DegenerateShapeError
from app.geometry import polygon
from app.geometry.shapes import (
    make_arc,
    make_box,
    make_disc,
    make_regular_polygon,
    mass_properties,
    sdf_eval,
    sdf_gradient,
)
from app.models.shape import Shape


def test_box_sdf_examples(unit_box):
    assert float(sdf_eval(unit_box, [0.0, 0.0])) == pytest.approx(-0.5)
    assert float(sdf_eval(unit_box, [1.0, 0.0])) == pytest.approx(0.5)
    assert float(sdf_eval(unit_box, [1.0, 1.0])) == pytest.approx(math.hypot(0.5, 0.5))
    assert float(sdf_eval(unit_box, [0.5, 0.2])) == pytest.approx(0.0, abs=1e-12)


def test_sdf_gradient_is_face_normal(unit_box):
    np.testing.assert_allclose(sdf_gradient(unit_box, [0.8, 0.1], 1e-4), [1.0, 0.0], atol=1e-6)
    np.testing.assert_allclose(sdf_gradient(unit_box, [0.1, -0.3], 1e-4), [0.0, -1.0], atol=1e-6)


def test_sdf_is_vectorized(unit_box):
    grid = np.zeros((4, 5, 2))
    assert sdf_eval(unit_box, grid).shape == (4, 5)


@hyp_settings(max_examples=30)
@given(st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=5, max_size=40))
def test_sdf_sign_agrees_with_containment(points):
    shape = Shape("U", [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [0.3, 0.5], [0.3, -0.3], [-0.3, -0.3], [-0.3, 0.5], [-0.5, 0.5]])
    pts = np.array(points)
    d = sdf_eval(shape, pts)
    inside = polygon.contains(shape.vertices, pts)
    clear = np.abs(d) > 1e-9
    assert np.all((d[clear] < 0) == inside[clear])


def test_clockwise_input_is_reoriented():
    shape = Shape("cw", [[0, 0], [0, 1], [1, 1], [1, 0]])
    assert polygon.signed_area(shape.vertices) > 0


def test_shape_is_recentred():
    shape = Shape("offset", [[10, 10], [12, 10], [12, 11], [10, 11]])
    np.testing.assert_allclose(polygon.centroid(shape.vertices), [0.0, 0.0], atol=1e-12)
    assert shape.bounding_radius == pytest.approx(math.hypot(1.0, 0.5))


@pytest.mark.parametrize("vertices", [
    [[0, 0], [1, 1], [1, 0], [0, 1]],
    [[0, 0], [1, 0], [2, 0]],
    [[0, 0], [1, 0]],
])
def test_degenerate_polygons_rejected(vertices):
    with pytest.raises(DegenerateShapeError):
        Shape("bad", vertices)


def test_collinear_disjoint_edges_are_simple(library):
    for name in ("U", "N", "hashtag", "O", "D"):
        assert library[name].area > 0


def test_box_mass_properties():
    props = mass_properties(make_box(2.0, 1.0, density=3.0))
    assert props.mass == pytest.approx(6.0)
    assert props.inertia == pytest.approx(6.0 * (4.0 + 1.0) / 12.0)
    np.testing.assert_allclose(props.com, [0.0, 0.0], atol=1e-12)


def test_disc_mass_properties_converge():
    props = mass_properties(make_disc(0.5, 256))
    assert props.mass == pytest.approx(math.pi * 0.25, rel=1e-3)
    assert props.inertia == pytest.approx(0.5 * props.mass * 0.25, rel=1e-3)


def test_disc_has_minimum_segments():
    assert len(make_disc(1.0, 8).vertices) == 64


def test_regular_polygon_radius():
    hexagon = make_regular_polygon(6, 0.5)
    assert hexagon.bounding_radius == pytest.approx(0.5)
    assert len(hexagon.vertices) == 6


def test_arc_area_and_full_circle():
    quarter = make_arc(0.7, 0.1, 0.25)
    assert quarter.area == pytest.approx(0.25 * 2 * math.pi * 0.7 * 0.1, rel=2e-3)
    full = make_arc(0.7, 0.1, 1.0)
    assert full.bounding_radius == pytest.approx(0.75)


def test_arc_rejects_bad_parameters():
    with pytest.raises(DegenerateShapeError):
        make_arc(0.7, 0.1, 0.0)
    with pytest.raises(DegenerateShapeError):
        make_arc(0.1, 0.3, 0.5)


def test_scaled_shape():
    box = make_box(1.0, 2.0, name="b")
    big = box.scaled(2.0)
    assert big.area == pytest.approx(4.0 * box.area)
    assert big.name == "b"


def test_library_shapes_load(library):
    for name in ("hashtag", "U", "N", "D", "O", "octagon", "arc25", "arc100", "incline_block", "prop_block", "lean_block"):
        assert name in library
    assert mass_properties(library["prop_block"]).mass == pytest.approx(1.0)
    assert mass_properties(library["lean_block"]).mass == pytest.approx(0.95)
    assert mass_properties(library["incline_block"]).mass == pytest.approx(0.5)


HALF_ARC = make_arc(0.7, 0.1, 0.5)
plane_points = st.tuples(st.floats(-2, 2), st.floats(-2, 2))


@hyp_settings(max_examples=200)
@given(plane_points, plane_points)
def test_sdf_is_one_lipschitz(p, q):
    d = sdf_eval(HALF_ARC, np.array([p, q]))
    assert abs(d[0] - d[1]) <= math.dist(p, q) + 1e-12


@hyp_settings(max_examples=200)
@given(st.floats(0.0, 2.0 * math.pi), st.floats(1e-6, 3.0))
def test_points_beyond_bounding_radius_are_outside(phi, extra):
    radius = HALF_ARC.bounding_radius
    p = (radius + extra) * np.array([math.cos(phi), math.sin(phi)])
    assert float(sdf_eval(HALF_ARC, p)) >= extra - 1e-12


def test_bounding_radius_is_reached_by_a_vertex(library):
    for shape in library.values():
        assert np.linalg.norm(shape.vertices, axis=1).max() == pytest.approx(shape.bounding_radius, rel=1e-12)


@pytest.mark.parametrize("name", ["hashtag", "U", "octagon", "arc50"])
def test_mass_properties_match_monte_carlo(library, rng, name):
    shape = library[name]
    radius = shape.bounding_radius
    points = rng.uniform(-radius, radius, size=(400_000, 2))
    inside = polygon.contains(shape.vertices, points)
    box_area = (2.0 * radius) ** 2
    props = mass_properties(shape)
    assert props.mass == pytest.approx(shape.density * box_area * inside.mean(), rel=1e-2)
    second = shape.density * box_area * np.mean(np.where(inside, np.sum(points ** 2, axis=1), 0.0))
    assert props.inertia == pytest.approx(second, rel=2e-2)


def test_half_arc_is_centred_and_ordered():
    np.testing.assert_allclose(mass_properties(HALF_ARC).com, [0.0, 0.0], atol=1e-9)
    assert make_arc(0.7, 0.1, 0.25).bounding_radius < HALF_ARC.bounding_radius
