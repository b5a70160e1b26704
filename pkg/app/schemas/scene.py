from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.contact import ContactParamsOverride
from app.schemas.shape_library import ShapeSpec


class PoseIn(BaseModel):
    theta: float = 0.0
    x: float = 0.0
    y: float = 0.0


class VelocityIn(BaseModel):
    omega: float = 0.0
    vx: float = 0.0
    vy: float = 0.0


class ScriptIn(BaseModel):
    kind: Literal["rotate", "translate"]
    omega: float = 0.0
    pivot: Tuple[float, float] = (0.0, 0.0)
    velocity: Tuple[float, float] = (0.0, 0.0)
    t0: float = 0.0
    t1: Optional[float] = None


class BodyIn(BaseModel):
    shape: str
    pose: PoseIn = PoseIn()
    velocity: VelocityIn = VelocityIn()
    kind: Literal["dynamic", "static", "kinematic"] = "dynamic"
    script: Optional[ScriptIn] = None
    tags: List[str] = []

    @model_validator(mode="after")
    def check_script(self):
        if self.kind == "kinematic" and self.script is None:
            raise ValueError("kinematic bodies need a script")
        return self


class HalfPlaneIn(BaseModel):
    """Boundary through ``point`` (or at ``offset``) with outward ``normal``; material on the far side."""
    normal: Tuple[float, float]
    offset: float = 0.0
    point: Optional[Tuple[float, float]] = None
    name: str = ""
    tags: List[str] = []


class FillIn(BaseModel):
    """Grid-with-jitter placement of ``count`` grains inside ``region`` (xmin, ymin, xmax, ymax)."""
    shape: str
    count: int = Field(ge=0)
    region: Tuple[float, float, float, float]
    spacing: Optional[float] = Field(default=None, gt=0.0)
    jitter: float = Field(default=0.1, ge=0.0, lt=0.5)
    random_orientation: bool = True
    velocity: VelocityIn = VelocityIn()
    tags: List[str] = []


class WallIn(BaseModel):
    """Row of grains from ``start`` to ``end``, ``count`` of them evenly spaced."""
    shape: str
    start: Tuple[float, float]
    end: Tuple[float, float]
    count: int = Field(ge=1)
    theta: float = 0.0
    align: bool = False
    kind: Literal["static", "kinematic"] = "static"
    script: Optional[ScriptIn] = None
    tags: List[str] = []


class RingIn(BaseModel):
    """``count`` grains evenly spaced on a circle, optionally spun about its centre."""
    shape: str
    center: Tuple[float, float] = (0.0, 0.0)
    radius: float = Field(gt=0.0)
    count: int = Field(ge=3)
    align: bool = True
    kind: Literal["static", "kinematic"] = "static"
    omega: float = 0.0
    t0: float = 0.0
    t1: Optional[float] = None
    tags: List[str] = []


class EventIn(BaseModel):
    t: float = Field(ge=0.0)
    remove_tags: List[str]


class WorldIn(BaseModel):
    dt: float = Field(gt=0.0)
    gravity: Tuple[float, float] = (0.0, -9.8)
    gravity_ramp: float = Field(default=0.0, ge=0.0)
    contact: ContactParamsOverride = ContactParamsOverride()
    broadphase_margin: Optional[float] = Field(default=None, ge=0.0)
    scale: float = Field(default=1.0, gt=0.0)


class BackendIn(BaseModel):
    kind: Literal["oracle", "neural"] = "oracle"
    maps: List[str] = []
    map_dir: Optional[str] = None


class MetricsOptions(BaseModel):
    discharge_level: Optional[float] = None
    pile_window: Optional[Tuple[float, float]] = None
    track_tags: List[str] = []


class SceneConfig(BaseModel):
    name: str
    description: str = ""
    shape_library: Optional[str] = "shapes.json"
    shapes: List[ShapeSpec] = []
    bodies: List[BodyIn] = []
    halfplanes: List[HalfPlaneIn] = []
    fills: List[FillIn] = []
    walls: List[WallIn] = []
    rings: List[RingIn] = []
    events: List[EventIn] = []
    world: WorldIn
    backend: BackendIn = BackendIn()
    duration: float = Field(gt=0.0)
    output_stride: int = Field(default=100, ge=1)
    record_velocities: bool = False
    metrics: MetricsOptions = MetricsOptions()
    seed: int = 0

    model_config = ConfigDict(extra="forbid")
