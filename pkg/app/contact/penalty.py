"""
Penalty normal force with viscous damping and a spring-dashpot tangential
friction model with stick/slip projection onto the Coulomb cone.

``contact_forces`` works on P contacts at once; ``contact_force`` is the
single-pair convenience wrapper.
"""
import logging
import math
from typing import Tuple

import numpy as np

from app.core.config import settings
from app.core.errors import NumericalError
from app.geometry.se2 import rel_jacobians_batch, rotate_batch
from app.models.contact import ContactDiagnostics, ContactPairState, GeneralizedForce
from app.models.state import Se2State, Se2Velocity
from app.schemas.contact import ContactParams

logger = logging.getLogger(__name__)

CRITICAL_DAMPING_RATIO = 0.1
STIFFNESS_SCALE = 1.0e4


def project_factor(s, v_t, k_t: float, gamma_t: float, mu: float, f_n_tot):
    """
    Spring shortening factor that puts the tangential force on the cone boundary.

    Solves |-k_t (lambda s) - 0.5 gamma_t v_t| = mu |f_n_tot| for lambda and
    clamps the result to [0, 1]. Accepts scalars or equally shaped arrays.
    """
    s_arr = np.asarray(s, dtype=float)
    a = k_t * s_arr
    b = 0.5 * gamma_t * np.asarray(v_t, dtype=float)
    f_max = mu * np.abs(np.asarray(f_n_tot, dtype=float))
    if np.any(a == 0.0):
        raise NumericalError("Cone projection requested with a zero-length tangential spring")

    lam = np.clip((np.sign(a + b) * f_max - b) / a, 0.0, 1.0)
    if lam.ndim == 0:
        return float(lam)
    return lam


def contact_forces(
    d: np.ndarray,
    qA: np.ndarray,
    qB: np.ndarray,
    vA: np.ndarray,
    vB: np.ndarray,
    grad_cfg: np.ndarray,
    proj_rA: np.ndarray,
    proj_rB: np.ndarray,
    params: ContactParams,
    springs: np.ndarray,
    dt: float,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, ContactDiagnostics]:
    """
    Generalized contact forces for P interpenetrating pairs.

    Args:
        d: Signed distances, shape (P,); callers only pass d < 0
        qA, qB: Poses (theta, x, y), shape (P, 3)
        vA, vB: Velocities (omega, vx, vy), shape (P, 3)
        grad_cfg: Distance gradient with respect to q_AB, shape (P, 3)
        proj_rA, proj_rB: Normal-projected moment arms, shape (P,)
        params: Stiffness, damping and friction
        springs: Tangential spring lengths, shape (P,)
        dt: Time step

    Returns:
        (forces on A, forces on B, updated spring lengths, diagnostics)
    """
    d = np.asarray(d, dtype=float)
    qA = np.atleast_2d(np.asarray(qA, dtype=float))
    qB = np.atleast_2d(np.asarray(qB, dtype=float))
    vA = np.atleast_2d(np.asarray(vA, dtype=float))
    vB = np.atleast_2d(np.asarray(vB, dtype=float))
    grad_cfg = np.atleast_2d(np.asarray(grad_cfg, dtype=float))
    proj_rA = np.asarray(proj_rA, dtype=float)
    proj_rB = np.asarray(proj_rB, dtype=float)
    s = np.array(springs, dtype=float)

    inputs = (d, qA, qB, vA, vB, grad_cfg, proj_rA, proj_rB, s)
    if not all(np.all(np.isfinite(arr)) for arr in inputs):
        raise NumericalError("Non-finite input reached the contact force law")

    # frames
    trans_norm = np.linalg.norm(grad_cfg[:, 1:], axis=1)
    if np.any(trans_norm == 0.0):
        raise NumericalError("Contact gradient has a zero translation part")
    n_cfg = grad_cfg / trans_norm[:, None]
    n_w = rotate_batch(qA[:, 0], n_cfg[:, 1:])
    t_w = np.stack([-n_w[:, 1], n_w[:, 0]], axis=1)

    ja, jb = rel_jacobians_batch(qA, qB)
    g_a = np.einsum("nji,nj->ni", ja, n_cfg)
    g_b = np.einsum("nji,nj->ni", jb, n_cfg)

    # normal
    v_n = np.einsum("ni,ni->n", g_a, vA) + np.einsum("ni,ni->n", g_b, vB)
    f_n_tot = params.k_n * np.abs(d) - 0.5 * params.gamma_n * v_n

    # tangential
    v_t = (np.einsum("ni,ni->n", t_w, vB[:, 1:] - vA[:, 1:])
           + proj_rB * vB[:, 0] + proj_rA * vA[:, 0])
    s = s + v_t * dt
    viscous = 0.5 * params.gamma_t * v_t
    trial = -params.k_t * s - viscous
    f_max = params.mu * np.abs(f_n_tot)

    slip = np.abs(viscous) > f_max
    over = ~slip & (np.abs(trial) > f_max)
    f_t = trial.copy()

    s[slip] = 0.0
    f_t[slip] = np.sign(-v_t[slip]) * f_max[slip]

    if np.any(over):
        lam = project_factor(s[over], v_t[over], params.k_t, params.gamma_t, params.mu, f_n_tot[over])
        s[over] = lam * s[over]
        f_t[over] = -params.k_t * s[over] - viscous[over]

    forces_a = f_n_tot[:, None] * g_a
    forces_b = f_n_tot[:, None] * g_b
    forces_a[:, 0] += proj_rA * f_t
    forces_b[:, 0] += proj_rB * f_t
    forces_a[:, 1:] -= f_t[:, None] * t_w
    forces_b[:, 1:] += f_t[:, None] * t_w

    diagnostics = ContactDiagnostics(f_n_tot=f_n_tot, f_t=f_t, f_max=f_max, slipped=slip | over)
    return forces_a, forces_b, s, diagnostics


def contact_force(
    d: float,
    qA: Se2State,
    qB: Se2State,
    vA: Se2Velocity,
    vB: Se2Velocity,
    grad_cfg,
    proj_rA: float,
    proj_rB: float,
    params: ContactParams,
    state: ContactPairState,
    dt: float,
) -> Tuple[GeneralizedForce, GeneralizedForce, ContactPairState]:
    forces_a, forces_b, springs, _ = contact_forces(
        np.array([d]),
        qA.as_array()[None, :],
        qB.as_array()[None, :],
        vA.as_array()[None, :],
        vB.as_array()[None, :],
        np.asarray(grad_cfg, dtype=float)[None, :],
        np.array([proj_rA]),
        np.array([proj_rB]),
        params,
        np.array([state.spring_length]),
        dt,
    )
    updated = ContactPairState(spring_length=float(springs[0]), age=state.age + 1)
    return GeneralizedForce.from_array(forces_a[0]), GeneralizedForce.from_array(forces_b[0]), updated


def default_contact_params(
    m_min: float,
    m_scale: float = 1.0,
    gravity: float = 9.8,
    mu: float = 0.5,
    length_scale: float = 1.0,
) -> ContactParams:
    """
    Stiffness and damping heuristics.

    k_n scales with the weight of a typical grain per unit length, k_t is half
    of it, and both dampers sit at a fixed fraction of critical damping for the
    lightest grain.
    """
    k_n = STIFFNESS_SCALE * m_scale * gravity / length_scale
    k_t = 0.5 * k_n
    gamma = 2.0 * math.sqrt(k_n * m_min) * CRITICAL_DAMPING_RATIO
    return ContactParams(k_n=k_n, k_t=k_t, gamma_n=gamma, gamma_t=gamma, mu=mu)


def stable_time_step(params: ContactParams, m_min: float) -> float:
    return settings.STABILITY_FACTOR * math.sqrt(m_min / params.k_n)
