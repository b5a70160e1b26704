import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class HalfPlane:
    """Boundary {p : normal . p = offset}; material lies where normal . p < offset."""
    normal: np.ndarray
    offset: float
    name: str = ""

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        length = float(np.linalg.norm(n))
        if length == 0.0 or not math.isfinite(length):
            raise ValueError(f"HalfPlane normal must be a non-zero finite vector, got {self.normal}")
        object.__setattr__(self, "normal", n / length)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def through_point(cls, point: Sequence[float], normal: Sequence[float], name: str = "") -> "HalfPlane":
        n = np.asarray(normal, dtype=float)
        n = n / np.linalg.norm(n)
        return cls(n, float(n @ np.asarray(point, dtype=float)), name)

    def distance(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.normal - self.offset


@dataclass(frozen=True)
class ContactQuery:
    """
    Narrow-phase answer for one body pair at one relative pose.

    ``grad_cfg`` is the gradient of d with respect to q_AB, ordered
    (theta, x, y) with the translation part expressed in A's frame.
    """
    d: float
    x_star: np.ndarray
    n_world: np.ndarray
    grad_cfg: np.ndarray
    proj_rA: float
    proj_rB: float
    deep: bool = False


@dataclass
class ContactPairState:
    """Persistent tangential spring of one contacting pair."""
    spring_length: float = 0.0
    age: int = 0

    def __post_init__(self):
        if not math.isfinite(self.spring_length):
            raise ValueError(f"Spring length must be finite, got {self.spring_length}")


@dataclass(frozen=True)
class GeneralizedForce:
    """Force on one body ordered like its state: (torque, fx, fy)."""
    torque: float = 0.0
    fx: float = 0.0
    fy: float = 0.0

    @property
    def linear(self) -> np.ndarray:
        return np.array([self.fx, self.fy])

    def as_array(self) -> np.ndarray:
        return np.array([self.torque, self.fx, self.fy])

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "GeneralizedForce":
        torque, fx, fy = values
        return cls(float(torque), float(fx), float(fy))


@dataclass
class ContactDiagnostics:
    """Per-contact force magnitudes produced alongside the generalized forces."""
    f_n_tot: np.ndarray
    f_t: np.ndarray
    f_max: np.ndarray
    slipped: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @property
    def cone_excess(self) -> np.ndarray:
        return np.abs(self.f_t) - self.f_max
