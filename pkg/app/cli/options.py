"""
Argument helpers shared by the subcommands.
"""
from pathlib import Path
from typing import Dict, Optional

from app.core.config import settings
from app.core.errors import ConfigError
from app.models.shape import Shape
from app.models.state import Se2State
from app.scenarios.loader import load_shape_library

DEFAULT_OUT_DIR = "out"
MAP_SUFFIX = ".cem"
DATASET_SUFFIX = ".ced"


def add_seed(parser):
    parser.add_argument("--seed", type=int, default=None, help=f"Random seed (default {settings.DEFAULT_SEED})")


def add_threads(parser):
    parser.add_argument("--threads", type=int, default=None, help=f"Worker count (default {settings.THREADS})")


def add_out_dir(parser):
    parser.add_argument("--out-dir", default=DEFAULT_OUT_DIR, help="Directory for output files")


def add_backend(parser):
    parser.add_argument("--backend", choices=["oracle", "neural"], default=None, help="Narrow-phase backend")


def add_library(parser):
    parser.add_argument("--library", default=None, help="Shape library JSON (default scenes/shapes.json)")


def library_path(value: Optional[str]) -> Path:
    return Path(value) if value else Path(settings.SCENES_DIR) / "shapes.json"


def pick_shape(shapes: Dict[str, Shape], name: str) -> Shape:
    if name not in shapes:
        raise ConfigError(f"Shape '{name}' is not in the library (have: {', '.join(sorted(shapes))})")
    return shapes[name]


def library_shapes(value: Optional[str]) -> Dict[str, Shape]:
    return load_shape_library(library_path(value))


def pair_stem(name_a: str, name_b: str) -> str:
    return f"{name_a}__{name_b}"


def scene_path(value: str) -> Path:
    """A scene given as a path, or by name from the shipped scenes directory."""
    path = Path(value)
    if path.exists():
        return path
    shipped = Path(settings.SCENES_DIR) / (value if value.endswith(".json") else f"{value}.json")
    if shipped.exists():
        return shipped
    raise ConfigError(f"Scene not found: {value}")


def pose(values) -> Se2State:
    theta, x, y = values
    return Se2State(theta, x, y)
