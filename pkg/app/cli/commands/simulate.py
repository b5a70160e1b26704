import json
import logging
from dataclasses import asdict
from pathlib import Path

from app.cli import options
from app.scenarios.loader import load_scene
from app.scenarios.runner import run_scene

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("simulate", help="Run a scene and write frames and metrics")
    parser.add_argument("--scene", required=True, help="Scene file, or the name of a shipped scene")
    parser.add_argument("--mu", type=float, default=None, help="Override the friction coefficient")
    parser.add_argument("--duration", type=float, default=None, help="Override the simulated time")
    parser.add_argument("--map-dir", default=None, help="Directory of neural maps (*.cem)")
    options.add_backend(parser)
    options.add_seed(parser)
    options.add_threads(parser)
    options.add_out_dir(parser)
    parser.set_defaults(func=run)


def run(args) -> int:
    loaded = load_scene(
        options.scene_path(args.scene),
        backend=args.backend,
        mu=args.mu,
        threads=args.threads,
        seed=args.seed,
        map_dir=args.map_dir,
    )
    out_dir = Path(args.out_dir) / loaded.config.name
    summary = run_scene(loaded, out_dir / "frames.jsonl", out_dir / "metrics.csv", duration=args.duration)
    (out_dir / "summary.json").write_text(json.dumps(asdict(summary), indent=2))
    logger.info(f"Scene '{loaded.config.name}' finished: {summary.steps} steps in {summary.seconds:.1f} s")
    print(json.dumps(asdict(summary), indent=2))
    return 0
