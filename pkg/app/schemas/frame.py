from typing import List, Optional, Tuple

from pydantic import BaseModel


class FrameRecord(BaseModel):
    """Body poses at one output time, in scene order."""
    t: float
    step: int
    q: List[Tuple[float, float, float]]
    v: Optional[List[Tuple[float, float, float]]] = None


class MetricsRow(BaseModel):
    t: float
    max_displacement: float
    kinetic_energy: float
    max_penetration: float
    pile_height: float
    discharged_count: int
    contact_count: int
    max_cone_excess: float


class ContactQueryRead(BaseModel):
    d: float
    x_star: Tuple[float, float]
    n_world: Tuple[float, float]
    grad_cfg: Tuple[float, float, float]
    proj_rA: float
    proj_rB: float
    deep: bool = False


class ValidationResult(BaseModel):
    suite: str
    mu: float
    backend: str = "oracle"
    displacement: float
    expected: str
    observed: str
    passed: bool
    seconds: float


class ColumnSummary(BaseModel):
    column: str
    final: float
    minimum: float
    maximum: float
    settled: bool


class MetricsSummary(BaseModel):
    rows: int
    columns: List[ColumnSummary]
    angle_of_repose_deg: Optional[float] = None
    surface_profile: Optional[List[Tuple[float, float]]] = None
