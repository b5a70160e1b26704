import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np


def wrap_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    wrapped = math.pi - math.fmod(math.pi - theta, 2.0 * math.pi)
    if wrapped > math.pi:
        wrapped -= 2.0 * math.pi
    elif wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


@dataclass(frozen=True, slots=True)
class Se2State:
    """Rigid pose of one body: rotation theta followed by translation (x, y)."""
    theta: float = 0.0
    x: float = 0.0
    y: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    @property
    def translation(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def as_array(self) -> np.ndarray:
        return np.array([self.theta, self.x, self.y])

    @classmethod
    def from_array(cls, values: Iterable[float]) -> "Se2State":
        theta, x, y = values
        return cls(theta, x, y)

    @classmethod
    def identity(cls) -> "Se2State":
        return cls(0.0, 0.0, 0.0)


@dataclass(frozen=True, slots=True)
class Se2Velocity:
    """World-frame body velocity (omega, vx, vy)."""
    omega: float = 0.0
    vx: float = 0.0
    vy: float = 0.0

    def __post_init__(self):
        for name in ("omega", "vx", "vy"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"Se2Velocity.{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @property
    def linear(self) -> np.ndarray:
        return np.array([self.vx, self.vy])

    def as_array(self) -> np.ndarray:
        return np.array([self.omega, self.vx, self.vy])

    @classmethod
    def from_array(cls, values: Iterable[float]) -> "Se2Velocity":
        omega, vx, vy = values
        return cls(omega, vx, vy)
