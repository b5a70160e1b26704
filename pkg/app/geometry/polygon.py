"""
Exact polygon geometry: signed area, mass moments, simplicity checks and the
signed distance function used by the oracle.
"""
import numpy as np

SIMPLE_TOL = 1e-12


def signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def centroid(vertices: np.ndarray) -> np.ndarray:
    x, y = vertices[:, 0], vertices[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = 0.5 * np.sum(cross)
    cx = np.sum((x + xn) * cross) / (6.0 * area)
    cy = np.sum((y + yn) * cross) / (6.0 * area)
    return np.array([cx, cy])


def polar_second_moment(vertices: np.ndarray) -> float:
    """Area polar moment about the origin (unit density) for a CCW polygon."""
    x, y = vertices[:, 0], vertices[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    terms = x * x + x * xn + xn * xn + y * y + y * yn + yn * yn
    return float(np.sum(cross * terms) / 12.0)


def _orient(a, b, c):
    return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])


def _within(a, b, c):
    """c lies inside the bounding box of segment ab."""
    return ((np.minimum(a[..., 0], b[..., 0]) <= c[..., 0]) & (c[..., 0] <= np.maximum(a[..., 0], b[..., 0]))
            & (np.minimum(a[..., 1], b[..., 1]) <= c[..., 1]) & (c[..., 1] <= np.maximum(a[..., 1], b[..., 1])))


def _segments_intersect(p1, p2, q1, q2, tol: float = 0.0) -> np.ndarray:
    """Proper or touching intersection test between segment stacks."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    z1, z2, z3, z4 = (np.abs(d) <= tol for d in (d1, d2, d3, d4))
    proper = (d1 * d2 < 0.0) & (d3 * d4 < 0.0) & ~(z1 | z2 | z3 | z4)
    # collinear edges only count when they overlap
    touching = ((z1 & _within(q1, q2, p1)) | (z2 & _within(q1, q2, p2))
                | (z3 & _within(p1, p2, q1)) | (z4 & _within(p1, p2, q2)))
    return proper | touching


def is_simple(vertices: np.ndarray) -> bool:
    """True when no two non-adjacent edges touch."""
    n = len(vertices)
    if n < 3:
        return False
    starts = vertices
    ends = np.roll(vertices, -1, axis=0)
    i, j = np.triu_indices(n, k=2)
    # first and last edge share a vertex
    keep = ~((i == 0) & (j == n - 1))
    i, j = i[keep], j[keep]
    if len(i) == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(vertices))))
    hits = _segments_intersect(starts[i], ends[i], starts[j], ends[j], SIMPLE_TOL * scale * scale)
    return not bool(np.any(hits))


def sdf(vertices: np.ndarray, points: np.ndarray) -> np.ndarray:
    """
    Exact signed distance from ``points`` (..., 2) to the polygon boundary,
    negative inside. The sign comes from a crossing-number test.
    """
    p = np.asarray(points, dtype=float)
    px, py = p[..., 0], p[..., 1]
    v = vertices
    dist2 = (px - v[0, 0]) ** 2 + (py - v[0, 1]) ** 2
    sign = np.ones_like(px)
    n = len(v)
    for k in range(n):
        ax, ay = v[k]
        bx, by = v[(k + 1) % n]
        ex, ey = bx - ax, by - ay
        wx, wy = px - ax, py - ay
        h = np.clip((wx * ex + wy * ey) / (ex * ex + ey * ey), 0.0, 1.0)
        dx, dy = wx - ex * h, wy - ey * h
        dist2 = np.minimum(dist2, dx * dx + dy * dy)
        c1 = py >= ay
        c2 = py < by
        c3 = ex * wy > ey * wx
        flip = (c1 & c2 & c3) | (~c1 & ~c2 & ~c3)
        sign = np.where(flip, -sign, sign)
    return sign * np.sqrt(dist2)


def sdf_gradient(vertices: np.ndarray, points: np.ndarray, step: float) -> np.ndarray:
    """Central-difference gradient of the polygon SDF, shape (..., 2)."""
    p = np.asarray(points, dtype=float)
    ex = np.array([step, 0.0])
    ey = np.array([0.0, step])
    gx = (sdf(vertices, p + ex) - sdf(vertices, p - ex)) / (2.0 * step)
    gy = (sdf(vertices, p + ey) - sdf(vertices, p - ey)) / (2.0 * step)
    return np.stack([gx, gy], axis=-1)


def contains(vertices: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Even-odd point-in-polygon test, independent of the distance loop."""
    p = np.asarray(points, dtype=float)
    px, py = p[..., 0], p[..., 1]
    inside = np.zeros(px.shape, dtype=bool)
    n = len(vertices)
    for k in range(n):
        ax, ay = vertices[k]
        bx, by = vertices[(k + 1) % n]
        crosses = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_at = ax + (py - ay) * (bx - ax) / (by - ay)
        inside ^= crosses & (px < x_at)
    return inside
