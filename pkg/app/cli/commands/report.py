import logging
from pathlib import Path

import numpy as np

from app.cli import options
from app.core.errors import ConfigError
from app.scenarios.loader import load_scene
from app.scenarios.metrics import angle_of_repose, summarize, surface_profile
from app.schemas.frame import MetricsSummary
from app.storage.frames import read_frames, read_metrics

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("report", help="Summarize a metrics table, optionally with pile shape from frames")
    parser.add_argument("--metrics", required=True, help="metrics.csv written by simulate")
    parser.add_argument("--frames", default=None, help="frames.jsonl; with --scene adds angle of repose")
    parser.add_argument("--scene", default=None, help="Scene the frames came from")
    parser.add_argument("--out", default=None, help="Write the summary JSON here")
    parser.set_defaults(func=run)


def pile_shape(frames_path: str, scene: str):
    frames = read_frames(frames_path)
    if not frames:
        raise ConfigError(f"{frames_path} holds no frames")
    loaded = load_scene(options.scene_path(scene))
    world = loaded.world
    last = np.asarray(frames[-1].q, dtype=float).reshape(-1, 3)
    if len(last) != len(world.radius):
        raise ConfigError(f"Frames hold {len(last)} bodies, scene '{loaded.config.name}' has {len(world.radius)}")
    grains = world.dynamic.copy()
    window = loaded.config.metrics.pile_window
    if window is not None:
        grains &= (last[:, 1] >= window[0]) & (last[:, 1] <= window[1])
    profile = surface_profile(last[grains, 1], last[grains, 2] + world.radius[grains], window)
    return angle_of_repose(profile), profile


def run(args) -> int:
    rows = read_metrics(args.metrics)
    summary = MetricsSummary(rows=len(rows), columns=summarize(rows))
    if args.frames:
        if not args.scene:
            raise ConfigError("--frames needs --scene for grain radii")
        angle, profile = pile_shape(args.frames, args.scene)
        summary = summary.model_copy(update={"angle_of_repose_deg": angle, "surface_profile": profile})
    text = summary.model_dump_json(indent=2)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return 0
