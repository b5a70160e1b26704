"""
Scene files to worlds: shape library, builders (fills, walls, rings),
contact-parameter defaults and neural map loading.
"""
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Set, Union

import numpy as np
from pydantic import ValidationError

from app.contact.penalty import default_contact_params
from app.core.config import settings
from app.core.errors import ConfigError
from app.engine.narrow_phase import Backend, MapRegistry
from app.engine.world import TimedEvent, World, WorldParams
from app.geometry import shapes as shape_ops
from app.models.body import Body, BodyKind, KinematicScript, ScriptKind
from app.models.contact import HalfPlane
from app.models.shape import MassProperties, Shape
from app.models.state import Se2State, Se2Velocity
from app.neural.dataset import derive_seed
from app.schemas.contact import ContactParams
from app.schemas.scene import BodyIn, FillIn, RingIn, SceneConfig, ScriptIn, WallIn
from app.schemas.shape_library import (
    ArcShapeSpec,
    BoxShapeSpec,
    DiscShapeSpec,
    PolygonShapeSpec,
    RegularShapeSpec,
    ShapeLibraryFile,
)

logger = logging.getLogger(__name__)

RADIUS_SUM_TOLERANCE = 1e-6
FILL_CLEARANCE = 1.02
MAX_AUTHORED_RADIUS = 1.0


@dataclass
class LoadedScene:
    config: SceneConfig
    world: World
    shapes: Dict[str, Shape]
    tracked: np.ndarray
    source: Optional[Path] = None
    extra: dict = field(default_factory=dict)


def _read_json(path: Path, what: str) -> dict:
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"{what} not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{what} {path} is not valid JSON: {e}")


def build_shape(spec) -> Shape:
    if isinstance(spec, PolygonShapeSpec):
        return Shape(spec.name, spec.vertices, spec.density)
    if isinstance(spec, BoxShapeSpec):
        return shape_ops.make_box(spec.width, spec.height, name=spec.name, density=spec.density)
    if isinstance(spec, RegularShapeSpec):
        return shape_ops.make_regular_polygon(spec.n, spec.circumradius, name=spec.name, density=spec.density)
    if isinstance(spec, DiscShapeSpec):
        return shape_ops.make_disc(spec.radius, spec.segments, name=spec.name, density=spec.density)
    if isinstance(spec, ArcShapeSpec):
        return shape_ops.make_arc(spec.radius, spec.thickness, spec.fraction, spec.segments, name=spec.name, density=spec.density)
    raise ConfigError(f"Unknown shape kind for '{spec.name}'")


def build_shapes(specs) -> Dict[str, Shape]:
    shapes: Dict[str, Shape] = {}
    for spec in specs:
        if spec.name in shapes:
            raise ConfigError(f"Shape '{spec.name}' is defined twice")
        shapes[spec.name] = build_shape(spec)
    return shapes


def load_shape_library(path: Union[str, Path]) -> Dict[str, Shape]:
    path = Path(path)
    try:
        library = ShapeLibraryFile.model_validate(_read_json(path, "Shape library"))
    except ValidationError as e:
        raise ConfigError(f"Shape library {path} is invalid: {e}")
    return build_shapes(library.shapes)


def load_scene_config(path: Union[str, Path]) -> SceneConfig:
    path = Path(path)
    try:
        return SceneConfig.model_validate(_read_json(path, "Scene file"))
    except ValidationError as e:
        raise ConfigError(f"Scene file {path} is invalid: {e}")


def _script(spec: Optional[ScriptIn]) -> Optional[KinematicScript]:
    if spec is None:
        return None
    return KinematicScript(
        kind=ScriptKind(spec.kind),
        omega=spec.omega,
        pivot=tuple(spec.pivot),
        velocity=tuple(spec.velocity),
        t0=spec.t0,
        t1=math.inf if spec.t1 is None else spec.t1,
    )


class _BodyFactory:
    def __init__(self, shapes: Dict[str, Shape]):
        self.shapes = shapes
        self._mass: Dict[str, MassProperties] = {}

    def shape(self, name: str) -> Shape:
        if name not in self.shapes:
            raise ConfigError(f"Scene references unknown shape '{name}'")
        return self.shapes[name]

    def make(self, name: str, q: Se2State, v: Se2Velocity = Se2Velocity(), kind: str = "dynamic",
             script: Optional[KinematicScript] = None, tags=()) -> Body:
        shape = self.shape(name)
        if name not in self._mass:
            self._mass[name] = shape_ops.mass_properties(shape)
        try:
            return Body(shape, q, self._mass[name], v, BodyKind(kind), script, tuple(tags))
        except ValueError as e:
            raise ConfigError(str(e))


def _explicit_body(factory: _BodyFactory, spec: BodyIn) -> Body:
    q = Se2State(spec.pose.theta, spec.pose.x, spec.pose.y)
    v = Se2Velocity(spec.velocity.omega, spec.velocity.vx, spec.velocity.vy)
    return factory.make(spec.shape, q, v, spec.kind, _script(spec.script), spec.tags)


def fill_positions(spec: FillIn, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Row-major grid from the bottom of the region, jittered, with random orientations."""
    xmin, ymin, xmax, ymax = spec.region
    spacing = spec.spacing or FILL_CLEARANCE * 2.0 * radius / (1.0 - 2.0 * spec.jitter)
    columns = max(1, int(math.floor((xmax - xmin) / spacing)))
    rows = int(math.ceil(spec.count / columns)) if spec.count else 0
    if rows and ymin + rows * spacing > ymax + 1e-9:
        raise ConfigError(
            f"Fill of {spec.count} '{spec.shape}' grains needs {rows} rows of {spacing:.4f}; region {spec.region} is too small"
        )
    out = np.zeros((spec.count, 3))
    for k in range(spec.count):
        r, c = divmod(k, columns)
        jitter = spec.jitter * spacing * rng.uniform(-1.0, 1.0, size=2)
        theta = math.pi - rng.uniform(0.0, 2.0 * math.pi) if spec.random_orientation else 0.0
        out[k] = (theta, xmin + (c + 0.5) * spacing + jitter[0], ymin + (r + 0.5) * spacing + jitter[1])
    return out


def _wall_bodies(factory: _BodyFactory, spec: WallIn) -> List[Body]:
    start, end = np.asarray(spec.start, dtype=float), np.asarray(spec.end, dtype=float)
    points = [start] if spec.count == 1 else list(np.linspace(start, end, spec.count))
    direction = end - start
    theta = spec.theta + (math.atan2(direction[1], direction[0]) if spec.align else 0.0)
    return [factory.make(spec.shape, Se2State(theta, p[0], p[1]), kind=spec.kind, script=_script(spec.script), tags=spec.tags)
            for p in points]


def _ring_bodies(factory: _BodyFactory, spec: RingIn) -> List[Body]:
    script = None
    if spec.kind == "kinematic":
        script = KinematicScript(ScriptKind.ROTATE, omega=spec.omega, pivot=tuple(spec.center),
                                 t0=spec.t0, t1=math.inf if spec.t1 is None else spec.t1)
    bodies = []
    for k in range(spec.count):
        phi = 2.0 * math.pi * k / spec.count
        x = spec.center[0] + spec.radius * math.cos(phi)
        y = spec.center[1] + spec.radius * math.sin(phi)
        theta = phi + 0.5 * math.pi if spec.align else 0.0
        bodies.append(factory.make(spec.shape, Se2State(theta, x, y), kind=spec.kind, script=script, tags=spec.tags))
    return bodies


def _check_authored_radius(bodies: List[Body], oversized: Set[str]):
    # larger shapes are only allowed as static boundary pieces
    moving = sorted({b.shape.name for b in bodies if b.kind != BodyKind.STATIC and b.shape.name in oversized})
    if moving:
        raise ConfigError(
            f"Shapes with bounding radius above {MAX_AUTHORED_RADIUS} can only be static bodies: {', '.join(moving)}"
        )


def _contact_params(config: SceneConfig, bodies: List[Body], mu: Optional[float]) -> ContactParams:
    override = config.world.contact
    dynamic = [b for b in bodies if b.kind == BodyKind.DYNAMIC]
    masses = [b.mass_props.mass for b in dynamic] or [1.0]
    radii = [b.shape.bounding_radius for b in dynamic] or [1.0]
    gravity = float(np.linalg.norm(config.world.gravity)) or 9.8
    defaults = default_contact_params(min(masses), float(np.mean(masses)), gravity, override.mu, float(np.mean(radii)))
    values = defaults.model_dump()
    values.update({k: v for k, v in override.model_dump().items() if v is not None})
    if mu is not None:
        values["mu"] = mu
    return ContactParams(**values)


def _registry(config: SceneConfig, base: Path, map_dir: Optional[Union[str, Path]]) -> MapRegistry:
    paths = [base / p for p in config.backend.maps]
    directories = [Path(map_dir)] if map_dir else []
    if config.backend.map_dir:
        directories.append(base / config.backend.map_dir)
    for directory in directories:
        paths.extend(sorted(directory.glob("*.cem")))
    return MapRegistry.from_files(paths)


def _check_map_domains(registry: MapRegistry, shapes: Dict[str, Shape]):
    for name_a, name_b in registry.keys():
        if name_a not in shapes or name_b not in shapes:
            continue
        expected = shapes[name_a].bounding_radius + shapes[name_b].bounding_radius
        contact_map, _ = registry.lookup(name_a, name_b)
        if abs(contact_map.radius_sum - expected) > RADIUS_SUM_TOLERANCE * max(1.0, expected):
            raise ConfigError(
                f"Map {name_a}/{name_b} was trained for radius sum {contact_map.radius_sum:.6f}, "
                f"the scene's shapes give {expected:.6f}"
            )


def build_world(
    config: SceneConfig,
    base_dir: Union[str, Path] = ".",
    backend: Optional[str] = None,
    mu: Optional[float] = None,
    threads: Optional[int] = None,
    seed: Optional[int] = None,
    map_dir: Optional[Union[str, Path]] = None,
) -> LoadedScene:
    """
    Instantiate a scene.

    Args:
        config: Validated scene
        base_dir: Directory the scene's relative paths resolve against
        backend: Overrides the scene's backend ('oracle' or 'neural')
        mu: Overrides the friction coefficient
        threads: Worker threads for oracle queries
        seed: Overrides the scene seed used by fills
        map_dir: Extra directory of neural maps
    """
    base = Path(base_dir)
    specs = []
    if config.shape_library:
        library_path = base / config.shape_library
        try:
            library = ShapeLibraryFile.model_validate(_read_json(library_path, "Shape library"))
        except ValidationError as e:
            raise ConfigError(f"Shape library {library_path} is invalid: {e}")
        specs.extend(library.shapes)
    specs.extend(config.shapes)
    shapes = build_shapes(specs)
    oversized = {name for name, s in shapes.items() if s.bounding_radius > MAX_AUTHORED_RADIUS + 1e-9}
    if config.world.scale != 1.0:
        shapes = {name: s.scaled(config.world.scale) for name, s in shapes.items()}

    factory = _BodyFactory(shapes)
    bodies = [_explicit_body(factory, spec) for spec in config.bodies]
    scene_seed = config.seed if seed is None else seed
    for k, fill in enumerate(config.fills):
        rng = np.random.default_rng(derive_seed(scene_seed, "fill", k))
        v = Se2Velocity(fill.velocity.omega, fill.velocity.vx, fill.velocity.vy)
        for pose in fill_positions(fill, factory.shape(fill.shape).bounding_radius, rng):
            bodies.append(factory.make(fill.shape, Se2State.from_array(pose), v, tags=fill.tags))
    for wall in config.walls:
        bodies.extend(_wall_bodies(factory, wall))
    for ring in config.rings:
        bodies.extend(_ring_bodies(factory, ring))
    _check_authored_radius(bodies, oversized)

    halfplanes, halfplane_tags = [], []
    for spec in config.halfplanes:
        try:
            if spec.point is not None:
                plane = HalfPlane.through_point(spec.point, spec.normal, spec.name)
            else:
                plane = HalfPlane(np.asarray(spec.normal, dtype=float), spec.offset, spec.name)
        except ValueError as e:
            raise ConfigError(f"Halfplane '{spec.name}': {e}")
        halfplanes.append(plane)
        halfplane_tags.append(tuple(spec.tags))

    chosen = Backend(backend or config.backend.kind)
    registry = _registry(config, base, map_dir) if chosen == Backend.NEURAL else MapRegistry()
    _check_map_domains(registry, shapes)

    params = WorldParams(
        dt=config.world.dt,
        contact=_contact_params(config, bodies, mu),
        gravity=tuple(config.world.gravity),
        backend=chosen,
        broadphase_margin=settings.BROADPHASE_MARGIN if config.world.broadphase_margin is None else config.world.broadphase_margin,
        gravity_ramp=config.world.gravity_ramp,
        threads=threads or settings.THREADS,
    )
    events = [TimedEvent(e.t, tuple(e.remove_tags)) for e in config.events]
    world = World(bodies, params, halfplanes, registry, events, halfplane_tags)
    world.check_time_step()

    track = set(config.metrics.track_tags)
    if track:
        tracked = np.array([bool(track.intersection(b.tags)) for b in bodies], dtype=bool)
    else:
        tracked = world.dynamic.copy()

    logger.info(
        f"Scene '{config.name}': {len(bodies)} bodies ({int(world.dynamic.sum())} dynamic), "
        f"{len(halfplanes)} halfplanes, backend {chosen.value}, mu {params.contact.mu}"
    )
    return LoadedScene(config=config, world=world, shapes=shapes, tracked=tracked)


def load_scene(path: Union[str, Path], **overrides) -> LoadedScene:
    path = Path(path)
    loaded = build_world(load_scene_config(path), path.parent, **overrides)
    loaded.source = path
    return loaded
