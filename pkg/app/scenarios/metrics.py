"""
Scalar observables of a running or recorded scene.
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.schemas.frame import ColumnSummary, FrameRecord, MetricsRow

SETTLE_TAIL = 0.1
SETTLE_TOLERANCE = 0.01


def pile_height(y: np.ndarray, radii: np.ndarray, mask: Optional[np.ndarray] = None) -> float:
    """Highest bounding-disc top among the selected grains."""
    if mask is not None:
        y, radii = y[mask], radii[mask]
    if len(y) == 0:
        return 0.0
    return float(np.max(y + radii))


def metric_pile_height(frames: Sequence[FrameRecord], radii: np.ndarray, mask: Optional[np.ndarray] = None) -> np.ndarray:
    """Pile height per frame."""
    return np.array([pile_height(np.array([q[2] for q in frame.q]), radii, mask) for frame in frames])


def discharged_count(y: np.ndarray, level: Optional[float], mask: np.ndarray) -> int:
    if level is None:
        return 0
    return int(np.count_nonzero(mask & (y < level)))


def is_settled(series: Sequence[float], tail: float = SETTLE_TAIL, tolerance: float = SETTLE_TOLERANCE) -> bool:
    """Std of the trailing share of the series is below ``tolerance`` of its mean."""
    values = np.asarray(series, dtype=float)
    if len(values) < 2:
        return False
    window = values[-max(2, int(math.ceil(tail * len(values)))):]
    mean = abs(float(np.mean(window)))
    return float(np.std(window)) <= tolerance * max(mean, 1e-12)


def surface_profile(x: np.ndarray, top: np.ndarray, window: Optional[Tuple[float, float]] = None, bins: int = 20) -> List[Tuple[float, float]]:
    """Upper envelope of grain tops, binned along x."""
    if len(x) == 0:
        return []
    lo, hi = window if window else (float(np.min(x)), float(np.max(x)))
    if hi <= lo:
        return [(lo, float(np.max(top)))]
    edges = np.linspace(lo, hi, bins + 1)
    profile = []
    for k in range(bins):
        inside = (x >= edges[k]) & (x <= edges[k + 1])
        if np.any(inside):
            profile.append((0.5 * (edges[k] + edges[k + 1]), float(np.max(top[inside]))))
    return profile


def angle_of_repose(profile: Sequence[Tuple[float, float]]) -> Optional[float]:
    """
    Best-effort slope angle of a pile in degrees: linear fits to the envelope
    on either side of its peak, averaged by magnitude.
    """
    if len(profile) < 4:
        return None
    xs = np.array([p[0] for p in profile])
    hs = np.array([p[1] for p in profile])
    peak = int(np.argmax(hs))
    slopes = []
    for side in (slice(0, peak + 1), slice(peak, len(xs))):
        if len(xs[side]) >= 3:
            slope = np.polyfit(xs[side], hs[side], 1)[0]
            slopes.append(abs(float(slope)))
    if not slopes:
        return None
    return math.degrees(math.atan(float(np.mean(slopes))))


def summarize(rows: Sequence[MetricsRow]) -> List[ColumnSummary]:
    summary = []
    for column in MetricsRow.model_fields:
        if column == "t":
            continue
        values = np.array([getattr(r, column) for r in rows], dtype=float)
        if len(values) == 0:
            continue
        summary.append(ColumnSummary(
            column=column,
            final=float(values[-1]),
            minimum=float(np.min(values)),
            maximum=float(np.max(values)),
            settled=is_settled(values),
        ))
    return summary
