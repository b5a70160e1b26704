import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from app.scenarios.loader import LoadedScene
from app.scenarios.metrics import discharged_count, pile_height
from app.schemas.frame import FrameRecord, MetricsRow
from app.storage.frames import FrameWriter, MetricsWriter

logger = logging.getLogger(__name__)

PROGRESS_FRAMES = 10


@dataclass
class RunSummary:
    steps: int
    frames: int
    final_t: float
    max_displacement: float
    max_cone_excess: float
    max_penetration: float
    pile_height: float
    discharged: int
    seconds: float


def frame_record(loaded: LoadedScene) -> FrameRecord:
    world = loaded.world
    return FrameRecord(
        t=world.t,
        step=world.step_count,
        q=[tuple(float(c) for c in row) for row in world.q],
        v=[tuple(float(c) for c in row) for row in world.v] if loaded.config.record_velocities else None,
    )


def metrics_row(loaded: LoadedScene) -> MetricsRow:
    world = loaded.world
    options = loaded.config.metrics
    grains = world.dynamic & world.active
    if options.pile_window is not None:
        lo, hi = options.pile_window
        grains = grains & (world.q[:, 1] >= lo) & (world.q[:, 1] <= hi)
    displacement = world.displacements()[loaded.tracked]
    diag = world.last_diagnostics
    return MetricsRow(
        t=world.t,
        max_displacement=float(np.max(displacement)) if len(displacement) else 0.0,
        kinetic_energy=world.kinetic_energy(),
        max_penetration=diag.max_penetration if diag else 0.0,
        pile_height=pile_height(world.q[:, 2], world.radius, grains),
        discharged_count=discharged_count(world.q[:, 2], options.discharge_level, world.dynamic),
        contact_count=diag.contact_count if diag else 0,
        max_cone_excess=diag.max_cone_excess if diag else 0.0,
    )


def run_scene(
    loaded: LoadedScene,
    frames_path: Optional[Union[str, Path]] = None,
    metrics_path: Optional[Union[str, Path]] = None,
    duration: Optional[float] = None,
) -> RunSummary:
    """
    Step a loaded scene for its duration, writing a frame and a metrics row
    at t = 0 and every ``output_stride`` steps.
    """
    config = loaded.config
    world = loaded.world
    duration = config.duration if duration is None else duration
    steps = int(round(duration / world.params.dt))
    stride = config.output_stride
    frames = FrameWriter(frames_path) if frames_path else None
    metrics = MetricsWriter(metrics_path) if metrics_path else None
    started = time.perf_counter()
    max_pen = 0.0
    last_row = metrics_row(loaded)
    written = 0

    try:
        def emit():
            nonlocal last_row, written
            last_row = metrics_row(loaded)
            if frames:
                frames.write(frame_record(loaded))
            if metrics:
                metrics.write(last_row)
            written += 1

        emit()
        progress_every = max(1, steps // PROGRESS_FRAMES)
        for k in range(1, steps + 1):
            diag = world.step()
            max_pen = max(max_pen, diag.max_penetration)
            if k % stride == 0 or k == steps:
                emit()
            if k % progress_every == 0:
                logger.info(
                    f"'{config.name}' t={world.t:.3f}/{duration:.3f}: {diag.contact_count} contacts, "
                    f"KE {diag.kinetic_energy:.3e}, max penetration {diag.max_penetration:.2e}"
                )
    finally:
        if frames:
            frames.close()
        if metrics:
            metrics.close()
        world.close()

    return RunSummary(
        steps=steps,
        frames=written,
        final_t=world.t,
        max_displacement=last_row.max_displacement,
        max_cone_excess=world.max_cone_excess_seen,
        max_penetration=max_pen,
        pile_height=last_row.pile_height,
        discharged=last_row.discharged_count,
        seconds=time.perf_counter() - started,
    )
