import logging
from dataclasses import dataclass, field

import numpy as np

from app.core.errors import DegenerateShapeError
from app.geometry import polygon

logger = logging.getLogger(__name__)

AREA_EPS = 1e-12


@dataclass(frozen=True)
class MassProperties:
    mass: float
    inertia: float
    com: np.ndarray


@dataclass(frozen=True, eq=False)
class Shape:
    """
    Simple CCW polygon in its body frame, re-centred so the centre of mass
    sits at the origin. Construction validates and normalizes the input.
    """
    name: str
    vertices: np.ndarray
    density: float = 1.0
    _radius: float = field(init=False, repr=False, default=0.0)

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=float).reshape(-1, 2)
        # drop repeated consecutive vertices and an explicit closing vertex
        keep = np.any(np.abs(verts - np.roll(verts, 1, axis=0)) > 0.0, axis=1)
        verts = verts[keep]
        if len(verts) < 3:
            raise DegenerateShapeError(f"Shape '{self.name}' needs at least 3 distinct vertices")
        if not np.all(np.isfinite(verts)):
            raise DegenerateShapeError(f"Shape '{self.name}' has non-finite vertices")
        if self.density <= 0.0:
            raise DegenerateShapeError(f"Shape '{self.name}' density must be positive, got {self.density}")

        area = polygon.signed_area(verts)
        if abs(area) < AREA_EPS:
            raise DegenerateShapeError(f"Shape '{self.name}' has zero area")
        if area < 0.0:
            logger.debug(f"Re-orienting clockwise polygon '{self.name}' to counterclockwise")
            verts = verts[::-1].copy()
        if not polygon.is_simple(verts):
            raise DegenerateShapeError(f"Shape '{self.name}' is self-intersecting")

        verts = verts - polygon.centroid(verts)
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "_radius", float(np.max(np.linalg.norm(verts, axis=1))))

    @property
    def bounding_radius(self) -> float:
        return self._radius

    @property
    def area(self) -> float:
        return polygon.signed_area(self.vertices)

    def scaled(self, factor: float) -> "Shape":
        return Shape(self.name, self.vertices * factor, self.density)

    def renamed(self, name: str) -> "Shape":
        return Shape(name, self.vertices, self.density)
