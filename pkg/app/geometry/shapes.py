"""
Grain shapes: distance queries, mass properties and polygon generators.
"""
import math
from typing import Sequence

import numpy as np

from app.core.errors import DegenerateShapeError
from app.geometry import polygon
from app.models.shape import MassProperties, Shape

MIN_CURVE_SEGMENTS = 64


def sdf_eval(shape: Shape, p: Sequence[float]) -> np.ndarray:
    """Signed distance to the shape boundary (body frame), negative inside."""
    return polygon.sdf(shape.vertices, np.asarray(p, dtype=float))


def sdf_gradient(shape: Shape, p: Sequence[float], step: float) -> np.ndarray:
    return polygon.sdf_gradient(shape.vertices, np.asarray(p, dtype=float), step)


def bounding_radius(shape: Shape) -> float:
    return shape.bounding_radius


def mass_properties(shape: Shape) -> MassProperties:
    """
    Mass, inertia about the centre of mass, and the centre of mass itself.

    Raises:
        DegenerateShapeError: if the polygon has no area
    """
    area = polygon.signed_area(shape.vertices)
    if area <= 0.0:
        raise DegenerateShapeError(f"Shape '{shape.name}' has zero area")
    com = polygon.centroid(shape.vertices)
    mass = shape.density * area
    inertia = shape.density * polygon.polar_second_moment(shape.vertices) - mass * float(com @ com)
    return MassProperties(mass=mass, inertia=inertia, com=com)


def make_box(width: float, height: float, name: str = "box", density: float = 1.0) -> Shape:
    if width <= 0.0 or height <= 0.0:
        raise DegenerateShapeError(f"Box dimensions must be positive, got {width}x{height}")
    hw, hh = 0.5 * width, 0.5 * height
    return Shape(name, [[-hw, -hh], [hw, -hh], [hw, hh], [-hw, hh]], density)


def make_regular_polygon(n: int, circumradius: float, name: str = "ngon", density: float = 1.0) -> Shape:
    if n < 3 or circumradius <= 0.0:
        raise DegenerateShapeError(f"Regular polygon needs n >= 3 and a positive radius, got n={n}, r={circumradius}")
    angles = 2.0 * np.pi * np.arange(n) / n
    return Shape(name, np.stack([circumradius * np.cos(angles), circumradius * np.sin(angles)], axis=1), density)


def make_disc(radius: float, segments: int = MIN_CURVE_SEGMENTS, name: str = "disc", density: float = 1.0) -> Shape:
    return make_regular_polygon(max(segments, MIN_CURVE_SEGMENTS), radius, name=name, density=density)


def make_arc(
    radius: float,
    thickness: float,
    fraction: float,
    segments: int = MIN_CURVE_SEGMENTS,
    name: str = "arc",
    density: float = 1.0,
) -> Shape:
    """
    Annular sector sampled from a circle of centreline ``radius``.

    Args:
        radius: Centreline radius of the source circle
        thickness: Radial thickness of the band
        fraction: Share of the full circle covered, in (0, 1]; 1 gives a solid disc
        segments: Segments used along each curved side

    Returns:
        Shape re-centred on its centre of mass
    """
    if radius <= 0.0 or thickness <= 0.0 or thickness >= 2.0 * radius:
        raise DegenerateShapeError(f"Arc needs 0 < thickness < 2*radius, got radius={radius}, thickness={thickness}")
    if not 0.0 < fraction <= 1.0:
        raise DegenerateShapeError(f"Arc fraction must lie in (0, 1], got {fraction}")

    outer = radius + 0.5 * thickness
    if fraction >= 1.0:
        return make_disc(outer, segments, name=name, density=density)

    inner = radius - 0.5 * thickness
    segments = max(segments, MIN_CURVE_SEGMENTS)
    half = math.pi * fraction
    # symmetric about the +y axis
    angles = math.pi / 2.0 + np.linspace(-half, half, segments + 1)
    outer_pts = np.stack([outer * np.cos(angles), outer * np.sin(angles)], axis=1)
    inner_pts = np.stack([inner * np.cos(angles[::-1]), inner * np.sin(angles[::-1])], axis=1)
    return Shape(name, np.vstack([outer_pts, inner_pts]), density)
