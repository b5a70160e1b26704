"""
Learned distance and projected-moment-arm maps for one ordered shape pair.
"""
from dataclasses import dataclass

import numpy as np

from app.core.errors import OracleDomainError
from app.geometry.se2 import relative, rotation
from app.models.contact import ContactQuery
from app.models.mlp import Mlp
from app.models.state import Se2State
from app.neural.mlp import mlp_forward, mlp_input_gradient

DOMAIN_TOLERANCE = 1e-9


def map_features(q_rel: np.ndarray, radius_sum: float) -> np.ndarray:
    """Network inputs (theta / pi, x / R, y / R) from relative poses (M, 3)."""
    q_rel = np.atleast_2d(np.asarray(q_rel, dtype=float))
    return np.stack([q_rel[:, 0] / np.pi, q_rel[:, 1] / radius_sum, q_rel[:, 2] / radius_sum], axis=1)


@dataclass(frozen=True)
class NeuralEvaluation:
    d: np.ndarray
    grad_cfg: np.ndarray
    proj_rA: np.ndarray
    proj_rB: np.ndarray


@dataclass(frozen=True, eq=False)
class NeuralContactMap:
    dist_net: Mlp
    arm_net: Mlp
    shapeA_name: str
    shapeB_name: str
    radius_sum: float

    def __post_init__(self):
        if self.dist_net.input_dim != 3 or self.arm_net.input_dim != 3:
            raise ValueError("Contact map networks take 3 inputs")
        if self.dist_net.output_dim != 1:
            raise ValueError(f"Distance net must have 1 output, has {self.dist_net.output_dim}")
        if self.arm_net.output_dim != 2:
            raise ValueError(f"Moment-arm net must have 2 outputs, has {self.arm_net.output_dim}")
        if not self.radius_sum > 0.0:
            raise ValueError(f"radius_sum must be positive, got {self.radius_sum}")

    @property
    def key(self) -> tuple:
        return self.shapeA_name, self.shapeB_name

    def evaluate(self, q_rel: np.ndarray) -> NeuralEvaluation:
        """
        Distance, configuration gradient and projected arms for relative poses (M, 3).

        Raises:
            OracleDomainError: if any pose lies outside ||t|| <= R_A + R_B
        """
        q_rel = np.atleast_2d(np.asarray(q_rel, dtype=float))
        reach = np.linalg.norm(q_rel[:, 1:], axis=1)
        if np.any(reach > self.radius_sum * (1.0 + DOMAIN_TOLERANCE)):
            raise OracleDomainError(
                f"Map {self.shapeA_name}/{self.shapeB_name} evaluated at ||t||={reach.max():.4f} "
                f"beyond its domain {self.radius_sum:.4f}"
            )
        features = map_features(q_rel, self.radius_sum)
        r = self.radius_sum
        d = r * mlp_forward(self.dist_net, features)[:, 0]
        grad = mlp_input_gradient(self.dist_net, features)
        grad_cfg = np.stack([grad[:, 0] * r / np.pi, grad[:, 1], grad[:, 2]], axis=1)
        arms = r * mlp_forward(self.arm_net, features)
        return NeuralEvaluation(d=d, grad_cfg=grad_cfg, proj_rA=arms[:, 0], proj_rB=arms[:, 1])

    def query(self, qA: Se2State, qB: Se2State) -> ContactQuery:
        """Single-pair answer shaped like the oracle's; x_star is the arm-based estimate along the normal."""
        q_rel = relative(qA, qB)
        result = self.evaluate(q_rel.as_array())
        grad_cfg = result.grad_cfg[0]
        n_rel = grad_cfg[1:]
        norm = float(np.linalg.norm(n_rel))
        n_rel = n_rel / norm if norm > 0.0 else n_rel
        n_world = rotation(qA.theta) @ n_rel
        x_star = qB.translation + float(result.proj_rB[0]) * n_world
        return ContactQuery(
            d=float(result.d[0]),
            x_star=x_star,
            n_world=n_world,
            grad_cfg=grad_cfg,
            proj_rA=float(result.proj_rA[0]),
            proj_rB=float(result.proj_rB[0]),
        )
