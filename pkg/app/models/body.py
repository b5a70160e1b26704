import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from app.geometry.se2 import PERP, rotation
from app.models.shape import MassProperties, Shape
from app.models.state import Se2State, Se2Velocity, wrap_angle


class BodyKind(str, enum.Enum):
    DYNAMIC = "dynamic"
    STATIC = "static"
    KINEMATIC = "kinematic"


class ScriptKind(str, enum.Enum):
    ROTATE = "rotate"
    TRANSLATE = "translate"


@dataclass(frozen=True)
class KinematicScript:
    """
    Closed-form motion of a kinematic body, active over [t0, t1].

    ``rotate`` spins the body about a fixed world pivot at ``omega``;
    ``translate`` moves it at constant ``velocity``. Outside the window the
    body rests at the pose reached at the nearest end.
    """
    kind: ScriptKind
    omega: float = 0.0
    pivot: Tuple[float, float] = (0.0, 0.0)
    velocity: Tuple[float, float] = (0.0, 0.0)
    t0: float = 0.0
    t1: float = math.inf

    def _elapsed(self, t: float) -> float:
        return min(max(t, self.t0), self.t1) - self.t0

    def active(self, t: float) -> bool:
        return self.t0 <= t < self.t1

    def pose_at(self, q0: Se2State, t: float) -> Se2State:
        tau = self._elapsed(t)
        if self.kind == ScriptKind.ROTATE:
            angle = self.omega * tau
            pivot = np.asarray(self.pivot, dtype=float)
            x = pivot + rotation(angle) @ (q0.translation - pivot)
            return Se2State(wrap_angle(q0.theta + angle), x[0], x[1])
        vx, vy = self.velocity
        return Se2State(q0.theta, q0.x + vx * tau, q0.y + vy * tau)

    def velocity_at(self, q: Se2State, t: float) -> Se2Velocity:
        if not self.active(t):
            return Se2Velocity()
        if self.kind == ScriptKind.ROTATE:
            linear = self.omega * (PERP @ (q.translation - np.asarray(self.pivot, dtype=float)))
            return Se2Velocity(self.omega, linear[0], linear[1])
        return Se2Velocity(0.0, self.velocity[0], self.velocity[1])


@dataclass
class Body:
    """A grain or boundary piece placed in the world."""
    shape: Shape
    q: Se2State
    mass_props: MassProperties
    v: Se2Velocity = field(default_factory=Se2Velocity)
    kind: BodyKind = BodyKind.DYNAMIC
    script: Optional[KinematicScript] = None
    tags: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind == BodyKind.KINEMATIC and self.script is None:
            raise ValueError(f"Kinematic body of shape '{self.shape.name}' needs a script")
        if self.kind == BodyKind.STATIC:
            self.v = Se2Velocity()

    @property
    def is_dynamic(self) -> bool:
        return self.kind == BodyKind.DYNAMIC
