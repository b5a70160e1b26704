"""
SE(2) group operations on (theta, x, y) poses.

Scalar operations take and return Se2State values. The ``*_batch`` variants
work on arrays of shape (N, 3) laid out as (theta, x, y) and are what the
engine uses inside the contact loop.
"""
from typing import Sequence, Tuple

import numpy as np

from app.models.state import Se2State, Se2Velocity, wrap_angle

# R(pi/2)
PERP = np.array([[0.0, -1.0], [1.0, 0.0]])


def wrap_angles(theta: np.ndarray) -> np.ndarray:
    """Vectorized wrap into (-pi, pi]."""
    wrapped = np.pi - np.mod(np.pi - theta, 2.0 * np.pi)
    return np.where(wrapped <= -np.pi, wrapped + 2.0 * np.pi, wrapped)


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotations(theta: np.ndarray) -> np.ndarray:
    """Stack of rotation matrices, shape (N, 2, 2)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)


def rotate_batch(theta: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Rotate each row of ``vectors`` (N, 2) by the matching angle."""
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([c * vectors[:, 0] - s * vectors[:, 1],
                     s * vectors[:, 0] + c * vectors[:, 1]], axis=-1)


def apply(q: Se2State, p: Sequence[float]) -> np.ndarray:
    """Group action q(p) = R(theta) p + x. Accepts a point or an (M, 2) array."""
    points = np.asarray(p, dtype=float)
    return points @ rotation(q.theta).T + q.translation


def apply_inverse(q: Se2State, p: Sequence[float]) -> np.ndarray:
    """q^-1(p) = R(-theta) (p - x)."""
    points = np.asarray(p, dtype=float)
    return (points - q.translation) @ rotation(q.theta)


def compose(q1: Se2State, q2: Se2State) -> Se2State:
    """q1 q2: apply q2 first, then q1."""
    t = rotation(q1.theta) @ q2.translation + q1.translation
    return Se2State(q1.theta + q2.theta, t[0], t[1])


def inverse(q: Se2State) -> Se2State:
    t = -(rotation(-q.theta) @ q.translation)
    return Se2State(-q.theta, t[0], t[1])


def relative_batch(qa: np.ndarray, qb: np.ndarray) -> np.ndarray:
    """q_AB = q_A^-1 q_B for stacks of states."""
    qa = np.atleast_2d(qa)
    qb = np.atleast_2d(qb)
    out = np.empty(np.broadcast_shapes(qa.shape, qb.shape))
    out[:, 0] = wrap_angles(qb[:, 0] - qa[:, 0])
    out[:, 1:] = rotate_batch(-qa[:, 0], qb[:, 1:] - qa[:, 1:])
    return out


def relative(qa: Se2State, qb: Se2State) -> Se2State:
    return Se2State.from_array(relative_batch(qa.as_array(), qb.as_array())[0])


def rel_jacobians_batch(qa: np.ndarray, qb: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Analytic Jacobians of the relative map.

    Returns:
        (J_A, J_B), each of shape (N, 3, 3); rows index (theta_AB, x_AB, y_AB),
        columns index the differentiated body's (theta, x, y).
    """
    qa = np.atleast_2d(qa)
    qb = np.atleast_2d(qb)
    n = max(qa.shape[0], qb.shape[0])
    r_t = rotations(-np.broadcast_to(qa[:, 0], (n,)))
    t_ab = np.einsum("nij,nj->ni", r_t, np.broadcast_to(qb[:, 1:] - qa[:, 1:], (n, 2)))

    jb = np.zeros((n, 3, 3))
    jb[:, 0, 0] = 1.0
    jb[:, 1:, 1:] = r_t

    ja = np.zeros((n, 3, 3))
    ja[:, 0, 0] = -1.0
    # d t_AB / d theta_A = -R(pi/2) t_AB
    ja[:, 1, 0] = t_ab[:, 1]
    ja[:, 2, 0] = -t_ab[:, 0]
    ja[:, 1:, 1:] = -r_t
    return ja, jb


def rel_jacobians(qa: Se2State, qb: Se2State) -> Tuple[np.ndarray, np.ndarray]:
    ja, jb = rel_jacobians_batch(qa.as_array(), qb.as_array())
    return ja[0], jb[0]


def point_velocity(q: Se2State, qdot: Se2Velocity, p_world: Sequence[float]) -> np.ndarray:
    """Velocity of a world point rigidly attached to the body: v + omega R(pi/2)(p - x)."""
    arm = np.asarray(p_world, dtype=float) - q.translation
    return qdot.linear + qdot.omega * (arm @ PERP.T)


def integrate(q: Se2State, qdot: Se2Velocity, dt: float) -> Se2State:
    return Se2State(wrap_angle(q.theta + dt * qdot.omega), q.x + dt * qdot.vx, q.y + dt * qdot.vy)
