"""
Ground-truth configuration-space contact queries.

Two object-space SDFs are overlaid on a regular grid covering both bounding
discs; the grid minimizer of the overlay objective is the virtual contact
point, from which distance, normal, configuration gradient and the
normal-projected moment arms follow.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.core.config import settings
from app.core.errors import OracleDomainError
from app.geometry import polygon
from app.geometry.se2 import PERP, apply, apply_inverse, relative, rotation
from app.models.contact import ContactQuery, HalfPlane
from app.models.shape import Shape
from app.models.state import Se2State

logger = logging.getLogger(__name__)

MIN_NORMAL = 1e-9
TIE_TOLERANCE = 1e-12
# normal difference step as a share of the grid cell
NORMAL_STEP_RATIO = 1e-3


@dataclass(frozen=True)
class RelativeContact:
    """Oracle answer expressed in A's body frame (A at the identity)."""
    d: float
    x_star: np.ndarray
    normal: np.ndarray
    grad_cfg: np.ndarray
    proj_rA: float
    proj_rB: float
    cell: float


def overlay_objective(shapeA: Shape, shapeB: Shape, q_AB: Se2State, x) -> np.ndarray:
    """phi_A(x) + phi_qB(x) + |phi_A(x) - phi_qB(x)| for points x in A's frame."""
    points = np.asarray(x, dtype=float)
    phi_a = polygon.sdf(shapeA.vertices, points)
    phi_b = polygon.sdf(shapeB.vertices, apply_inverse(q_AB, points))
    return phi_a + phi_b + np.abs(phi_a - phi_b)


def _grid_minimizer(shapeA: Shape, shapeB: Shape, q_AB: Se2State, xs: np.ndarray, ys: np.ndarray):
    gx, gy = np.meshgrid(xs, ys)
    points = np.stack([gx.ravel(), gy.ravel()], axis=1)
    phi_a = polygon.sdf(shapeA.vertices, points)
    phi_b = polygon.sdf(shapeB.vertices, apply_inverse(q_AB, points))
    objective = phi_a + phi_b + np.abs(phi_a - phi_b)
    tied = np.flatnonzero(objective <= objective.min() + TIE_TOLERANCE)
    if tied.size == 1:
        k = int(tied[0])
    else:
        # flat valleys (face on face) tie along the whole face: take the tied point
        # nearest the middle of the tie set, lowest row-major index among equals
        centre = points[tied].mean(axis=0)
        k = int(tied[np.argmin(np.linalg.norm(points[tied] - centre, axis=1))])
    return points[k], float(phi_a[k]), float(phi_b[k])


def _contact_normal(shapeA: Shape, shapeB: Shape, q_AB: Se2State, x_star: np.ndarray, step: float) -> np.ndarray:
    grad = polygon.sdf_gradient(shapeA.vertices, x_star, step)
    norm = float(np.linalg.norm(grad))
    if norm > MIN_NORMAL:
        return grad / norm

    # B's outward normal, pulled back into A's frame and flipped
    local = apply_inverse(q_AB, x_star)
    grad_b = polygon.sdf_gradient(shapeB.vertices, local, step)
    grad = -(rotation(q_AB.theta) @ grad_b)
    norm = float(np.linalg.norm(grad))
    if norm > MIN_NORMAL:
        return grad / norm

    t = q_AB.translation
    norm = float(np.linalg.norm(t))
    if norm > MIN_NORMAL:
        return t / norm
    return np.array([1.0, 0.0])


def query_relative(
    shapeA: Shape,
    shapeB: Shape,
    q_AB: Se2State,
    resolution: Optional[int] = None,
    refine: Optional[int] = None,
) -> RelativeContact:
    """
    Grid oracle in A's body frame.

    Args:
        shapeA: Shape of body A (placed at the identity)
        shapeB: Shape of body B (placed at q_AB)
        q_AB: Relative configuration of B with respect to A
        resolution: Samples per axis of the coarse grid
        refine: Samples per axis of the sub-grid over the winning cell (0 or 1 disables)

    Returns:
        RelativeContact with all quantities in A's frame
    """
    resolution = resolution or settings.ORACLE_GRID_RESOLUTION
    refine = settings.ORACLE_REFINE_RESOLUTION if refine is None else refine

    t = q_AB.translation
    ra, rb = shapeA.bounding_radius, shapeB.bounding_radius
    lo = np.minimum(np.array([-ra, -ra]), t - rb)
    hi = np.maximum(np.array([ra, ra]), t + rb)
    xs = np.linspace(lo[0], hi[0], resolution)
    ys = np.linspace(lo[1], hi[1], resolution)
    hx = (hi[0] - lo[0]) / (resolution - 1)
    hy = (hi[1] - lo[1]) / (resolution - 1)
    cell = max(hx, hy)

    x_star, phi_a, phi_b = _grid_minimizer(shapeA, shapeB, q_AB, xs, ys)
    if refine and refine > 1:
        sub_x = x_star[0] + np.linspace(-hx, hx, refine)
        sub_y = x_star[1] + np.linspace(-hy, hy, refine)
        x_star, phi_a, phi_b = _grid_minimizer(shapeA, shapeB, q_AB, sub_x, sub_y)

    d = phi_a + phi_b
    normal = _contact_normal(shapeA, shapeB, q_AB, x_star, cell * NORMAL_STEP_RATIO)
    tangent = PERP @ normal
    grad_cfg = np.array([-float((x_star - t) @ tangent), normal[0], normal[1]])
    proj_ra = -float(x_star @ normal)
    proj_rb = float((x_star - t) @ normal)
    return RelativeContact(d, x_star, normal, grad_cfg, proj_ra, proj_rb, cell)


def query(
    shapeA: Shape,
    shapeB: Shape,
    qA: Se2State,
    qB: Se2State,
    resolution: Optional[int] = None,
    refine: Optional[int] = None,
    margin: Optional[float] = None,
) -> ContactQuery:
    """
    Signed distance, virtual contact point, normal, configuration gradient and
    projected moment arms for one pair.

    Raises:
        OracleDomainError: if the bodies are further apart than the broad-phase radius
    """
    margin = settings.ORACLE_QUERY_MARGIN if margin is None else margin
    q_ab = relative(qA, qB)
    separation = float(np.linalg.norm(q_ab.translation))
    reach = shapeA.bounding_radius + shapeB.bounding_radius + margin
    if separation > reach:
        raise OracleDomainError(
            f"Pair {shapeA.name}/{shapeB.name} is {separation:.4f} apart, beyond the broad-phase radius {reach:.4f}"
        )

    rel = query_relative(shapeA, shapeB, q_ab, resolution=resolution, refine=refine)
    deep = rel.d < -settings.DEEP_PENETRATION_RATIO * min(shapeA.bounding_radius, shapeB.bounding_radius)
    if deep:
        logger.warning(f"Deep penetration between {shapeA.name} and {shapeB.name}: d={rel.d:.4f}")

    return ContactQuery(
        d=rel.d,
        x_star=apply(qA, rel.x_star),
        n_world=rotation(qA.theta) @ rel.normal,
        grad_cfg=rel.grad_cfg,
        proj_rA=rel.proj_rA,
        proj_rB=rel.proj_rB,
        deep=bool(deep),
    )


def query_halfplane(
    shape: Shape,
    q: Se2State,
    h: HalfPlane,
    smoothing: Optional[float] = None,
) -> ContactQuery:
    """
    Analytic shape-versus-halfplane query. The halfplane plays body A at the
    identity, the shape plays body B.

    The distance is the exact minimum over the transformed vertices. The
    rotation gradient blends per-vertex gradients with soft-min weights so a
    flat face resting on the plane produces no spurious torque.
    """
    eps = settings.HALFPLANE_SMOOTHING if smoothing is None else smoothing
    verts = apply(q, shape.vertices)
    dist = h.distance(verts)
    k = int(np.argmin(dist))
    d = float(dist[k])

    normal = h.normal
    tangent = PERP @ normal
    rot_grads = -((verts - q.translation) @ tangent)
    weights = np.exp(-(dist - d) / eps) if eps > 0.0 else (dist == d).astype(float)
    rot_grad = float(np.sum(weights * rot_grads) / np.sum(weights))

    return ContactQuery(
        d=d,
        x_star=verts[k].copy(),
        n_world=normal.copy(),
        grad_cfg=np.array([rot_grad, normal[0], normal[1]]),
        # both arms measured at the plane point under the deepest vertex
        proj_rA=-h.offset,
        proj_rB=float(h.offset - q.translation @ normal),
        deep=False,
    )


def grad_fd_check(
    shapeA: Shape,
    shapeB: Shape,
    qA: Se2State,
    qB: Se2State,
    step: float = 1e-2,
    **query_kwargs,
) -> np.ndarray:
    """Central finite differences of the oracle distance with respect to q_B."""
    base = qB.as_array()
    grad = np.zeros(3)
    for i in range(3):
        offset = np.zeros(3)
        offset[i] = step
        plus = query(shapeA, shapeB, qA, Se2State.from_array(base + offset), **query_kwargs).d
        minus = query(shapeA, shapeB, qA, Se2State.from_array(base - offset), **query_kwargs).d
        grad[i] = (plus - minus) / (2.0 * step)
    return grad


def halfplane_grad_fd(shape: Shape, q: Se2State, h: HalfPlane, step: float = 1e-7) -> np.ndarray:
    """Central finite differences of the halfplane distance with respect to q."""
    base = q.as_array()
    grad = np.zeros(3)
    for i in range(3):
        offset = np.zeros(3)
        offset[i] = step
        plus = query_halfplane(shape, Se2State.from_array(base + offset), h).d
        minus = query_halfplane(shape, Se2State.from_array(base - offset), h).d
        grad[i] = (plus - minus) / (2.0 * step)
    return grad
