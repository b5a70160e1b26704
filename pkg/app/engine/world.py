"""
Time-stepping world: body arrays, pair cache, contact collection, force
accumulation and semi-implicit Euler integration.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.contact import oracle
from app.contact.penalty import contact_forces, stable_time_step
from app.core.config import settings
from app.core.errors import ConfigError, NumericalError
from app.engine.broad_phase import broad_phase
from app.engine.narrow_phase import Backend, MapRegistry
from app.geometry.se2 import relative_batch, wrap_angles
from app.models.body import Body, BodyKind
from app.models.contact import ContactPairState, HalfPlane
from app.models.state import Se2State, Se2Velocity
from app.schemas.contact import ContactParams

logger = logging.getLogger(__name__)

PairKey = Tuple[int, int]


@dataclass
class WorldParams:
    dt: float
    contact: ContactParams
    gravity: Tuple[float, float] = (0.0, -9.8)
    backend: Backend = Backend.ORACLE
    broadphase_margin: float = field(default_factory=lambda: settings.BROADPHASE_MARGIN)
    eviction_margin: float = field(default_factory=lambda: settings.PAIR_EVICTION_MARGIN)
    gravity_ramp: float = 0.0
    threads: int = 1

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ConfigError(f"Time step must be positive, got {self.dt}")
        self.backend = Backend(self.backend)


@dataclass(frozen=True)
class TimedEvent:
    t: float
    remove_tags: Tuple[str, ...]


@dataclass(frozen=True)
class StepDiagnostics:
    step: int
    t: float
    contact_count: int
    max_penetration: float
    max_cone_excess: float
    kinetic_energy: float
    deep_count: int = 0
    gradient_fallbacks: int = 0


def halfplane_key(k: int, i: int) -> PairKey:
    return -(k + 1), i


@dataclass
class _Contacts:
    """Narrow-phase answers in role order; a = -1 marks a halfplane as body A."""
    keys: List[PairKey] = field(default_factory=list)
    a: List[int] = field(default_factory=list)
    b: List[int] = field(default_factory=list)
    d: List[float] = field(default_factory=list)
    grad: List[np.ndarray] = field(default_factory=list)
    proj_a: List[float] = field(default_factory=list)
    proj_b: List[float] = field(default_factory=list)
    deep: int = 0
    gradient_fallbacks: int = 0

    def add(self, key, a, b, d, grad, proj_a, proj_b):
        self.keys.append(key)
        self.a.append(a)
        self.b.append(b)
        self.d.append(float(d))
        self.grad.append(np.asarray(grad, dtype=float))
        self.proj_a.append(float(proj_a))
        self.proj_b.append(float(proj_b))


def map_pairs(bodies: Sequence[Body], boundary: bool = False) -> List[Tuple[str, str]]:
    """
    Shape-name pairs that can meet in a scene, sorted. Dynamic-dynamic pairs
    always; with ``boundary`` also dynamic against static or kinematic shapes.
    A shape meets itself only when two bodies of it can collide.
    """
    dynamic: Dict[str, int] = {}
    fixed = set()
    for b in bodies:
        if b.kind == BodyKind.DYNAMIC:
            dynamic[b.shape.name] = dynamic.get(b.shape.name, 0) + 1
        else:
            fixed.add(b.shape.name)
    pairs = set()
    names = sorted(dynamic)
    for i, name_a in enumerate(names):
        for name_b in names[i:]:
            if name_a != name_b or dynamic[name_a] > 1:
                pairs.add((name_a, name_b))
        if boundary:
            for name_b in fixed:
                pairs.add(tuple(sorted((name_a, name_b))))
    return sorted(pairs)


class World:
    """
    Single-writer simulation state.

    Bodies keep their slot for the whole run; deactivated bodies stop
    interacting and stop moving. Halfplanes are infinite static boundaries.
    """

    def __init__(
        self,
        bodies: Sequence[Body],
        params: WorldParams,
        halfplanes: Sequence[HalfPlane] = (),
        registry: Optional[MapRegistry] = None,
        events: Sequence[TimedEvent] = (),
        halfplane_tags: Optional[Sequence[Sequence[str]]] = None,
    ):
        self.bodies = list(bodies)
        self.params = params
        self.halfplanes = list(halfplanes)
        self.halfplane_tags = [tuple(tags) for tags in (halfplane_tags or [() for _ in self.halfplanes])]
        self.registry = registry or MapRegistry()
        self.events = sorted(events, key=lambda e: e.t)
        self._next_event = 0

        n = len(self.bodies)
        self.q = np.array([b.q.as_array() for b in self.bodies]).reshape(n, 3)
        self.v = np.array([b.v.as_array() for b in self.bodies]).reshape(n, 3)
        self.q0 = self.q.copy()
        self.mass = np.array([b.mass_props.mass for b in self.bodies]).reshape(n)
        self.inertia = np.array([b.mass_props.inertia for b in self.bodies]).reshape(n)
        self.radius = np.array([b.shape.bounding_radius for b in self.bodies]).reshape(n)
        self.dynamic = np.array([b.kind == BodyKind.DYNAMIC for b in self.bodies], dtype=bool).reshape(n)
        self.kinematic = np.flatnonzero([b.kind == BodyKind.KINEMATIC for b in self.bodies])
        self.active = np.ones(n, dtype=bool)
        self.halfplane_active = np.ones(len(self.halfplanes), dtype=bool)
        self.v[~self.dynamic & ~np.isin(np.arange(n), self.kinematic)] = 0.0

        self.t = 0.0
        self.step_count = 0
        self.pairs: Dict[PairKey, ContactPairState] = {}
        self.last_diagnostics: Optional[StepDiagnostics] = None
        self.max_cone_excess_seen = -math.inf
        self._fallback_warned = set()
        self._pool = ThreadPoolExecutor(max_workers=params.threads) if params.threads > 1 else None

        self._pose_kinematic(0.0)
        if params.backend == Backend.NEURAL:
            self.check_registry()

    # setup checks

    def check_registry(self):
        """Every dynamic-dynamic shape pair needs a map when the neural backend is selected."""
        missing = [f"{a}/{b}" for a, b in map_pairs(self.bodies) if self.registry.lookup(a, b) is None]
        if missing:
            raise ConfigError(f"Neural backend is missing contact maps for: {', '.join(missing)}")

    def check_time_step(self) -> bool:
        dynamic_mass = self.mass[self.dynamic]
        if len(dynamic_mass) == 0:
            return True
        limit = stable_time_step(self.params.contact, float(np.min(dynamic_mass)))
        if self.params.dt >= limit:
            logger.warning(f"Time step {self.params.dt:g} exceeds the contact stability bound {limit:.3g}")
            return False
        logger.info(f"Time step {self.params.dt:g} is within the contact stability bound {limit:.3g}")
        return True

    # state access

    def state(self, i: int) -> Se2State:
        return Se2State.from_array(self.q[i])

    def velocity(self, i: int) -> Se2Velocity:
        return Se2Velocity.from_array(self.v[i])

    def displacements(self) -> np.ndarray:
        return np.linalg.norm(self.q[:, 1:] - self.q0[:, 1:], axis=1)

    def linear_momentum(self) -> np.ndarray:
        return np.sum(self.mass[self.dynamic, None] * self.v[self.dynamic, 1:], axis=0)

    def kinetic_energy(self) -> float:
        v = self.v[self.dynamic]
        return float(0.5 * np.sum(self.mass[self.dynamic] * np.sum(v[:, 1:] ** 2, axis=1))
                     + 0.5 * np.sum(self.inertia[self.dynamic] * v[:, 0] ** 2))

    def gravity_now(self) -> np.ndarray:
        g = np.asarray(self.params.gravity, dtype=float)
        ramp = self.params.gravity_ramp
        if ramp > 0.0:
            g = g * min(1.0, self.t / ramp)
        return g

    # events and scripts

    def remove_tagged(self, tags: Sequence[str]):
        tags = set(tags)
        for i, body in enumerate(self.bodies):
            if self.active[i] and tags.intersection(body.tags):
                self.active[i] = False
                self.v[i] = 0.0
        for k, plane_tags in enumerate(self.halfplane_tags):
            if self.halfplane_active[k] and tags.intersection(plane_tags):
                self.halfplane_active[k] = False
        self.pairs = {key: s for key, s in self.pairs.items() if self._key_alive(key)}
        logger.info(f"t={self.t:.4f}: removed bodies and boundaries tagged {sorted(tags)}")

    def _key_alive(self, key: PairKey) -> bool:
        a, b = key
        if a < 0:
            return bool(self.halfplane_active[-a - 1] and self.active[b])
        return bool(self.active[a] and self.active[b])

    def _apply_events(self):
        while self._next_event < len(self.events) and self.events[self._next_event].t <= self.t + 1e-12:
            self.remove_tagged(self.events[self._next_event].remove_tags)
            self._next_event += 1

    def _pose_kinematic(self, t: float):
        for i in self.kinematic:
            script = self.bodies[i].script
            q = script.pose_at(Se2State.from_array(self.q0[i]), t)
            self.q[i] = q.as_array()
            self.v[i] = script.velocity_at(q, t).as_array() if self.active[i] else 0.0

    # contacts

    def _oracle_pair(self, pair: Tuple[int, int]):
        a, b = pair
        q_ab = Se2State.from_array(relative_batch(self.q[a], self.q[b])[0])
        return oracle.query_relative(self.bodies[a].shape, self.bodies[b].shape, q_ab)

    def _route(self, i: int, j: int) -> Tuple[Optional[object], int, int]:
        """Map (or None for the oracle) and the role order for a body pair."""
        if self.params.backend != Backend.NEURAL:
            return None, i, j
        name_i, name_j = self.bodies[i].shape.name, self.bodies[j].shape.name
        found = self.registry.lookup(name_i, name_j)
        if found is None:
            if self.dynamic[i] and self.dynamic[j]:
                raise ConfigError(f"No neural map for dynamic pair {name_i}/{name_j}")
            key = tuple(sorted((name_i, name_j)))
            if key not in self._fallback_warned:
                self._fallback_warned.add(key)
                logger.warning(f"No neural map for boundary pair {name_i}/{name_j}; falling back to the oracle")
            return None, i, j
        contact_map, swapped = found
        return (contact_map, j, i) if swapped else (contact_map, i, j)

    def _collect(self) -> Tuple[_Contacts, set]:
        contacts = _Contacts()
        seen = set()
        margin = self.params.broadphase_margin
        evict = self.params.eviction_margin

        live = np.flatnonzero(self.active)
        local = broad_phase(self.q[live, 1:], self.radius[live], ~self.dynamic[live], margin)
        oracle_pairs: List[Tuple[PairKey, int, int]] = []
        neural_groups: Dict[Tuple[str, str], Tuple[object, List[Tuple[PairKey, int, int]]]] = {}

        for li, lj in local:
            i, j = int(live[li]), int(live[lj])
            key = (i, j)
            gap = float(np.linalg.norm(self.q[j, 1:] - self.q[i, 1:])) - self.radius[i] - self.radius[j]
            if gap > 0.0:
                # outside the radius sum d is positive; only the spring may survive
                if key in self.pairs and gap <= evict:
                    seen.add(key)
                continue
            contact_map, a, b = self._route(i, j)
            if contact_map is None:
                oracle_pairs.append((key, a, b))
            else:
                neural_groups.setdefault(contact_map.key, (contact_map, []))[1].append((key, a, b))

        results = []
        if oracle_pairs:
            jobs = [(a, b) for _, a, b in oracle_pairs]
            answers = list(self._pool.map(self._oracle_pair, jobs)) if self._pool else [self._oracle_pair(p) for p in jobs]
            for (key, a, b), rel in zip(oracle_pairs, answers):
                deep = rel.d < -settings.DEEP_PENETRATION_RATIO * min(self.radius[a], self.radius[b])
                results.append((key, a, b, rel.d, rel.grad_cfg, rel.proj_rA, rel.proj_rB, deep))

        for contact_map, members in neural_groups.values():
            a_idx = np.array([a for _, a, _ in members])
            b_idx = np.array([b for _, _, b in members])
            evaluation = contact_map.evaluate(relative_batch(self.q[a_idx], self.q[b_idx]))
            # a dead rectifier region gives no normal; those pairs go to the oracle
            flat = np.linalg.norm(evaluation.grad_cfg[:, 1:], axis=1) < settings.MIN_GRADIENT_NORM
            for k, (key, a, b) in enumerate(members):
                if flat[k]:
                    rel = self._oracle_pair((a, b))
                    deep = rel.d < -settings.DEEP_PENETRATION_RATIO * min(self.radius[a], self.radius[b])
                    results.append((key, a, b, rel.d, rel.grad_cfg, rel.proj_rA, rel.proj_rB, deep))
                    contacts.gradient_fallbacks += 1
                    continue
                results.append((key, a, b, evaluation.d[k], evaluation.grad_cfg[k],
                                evaluation.proj_rA[k], evaluation.proj_rB[k], False))
            if flat.any():
                logger.debug(f"Map {contact_map.shapeA_name}/{contact_map.shapeB_name}: {int(flat.sum())} pairs with a flat gradient sent to the oracle")

        for k, plane in enumerate(self.halfplanes):
            if not self.halfplane_active[k]:
                continue
            near = live[(plane.distance(self.q[live, 1:]) - self.radius[live] <= margin) & self.dynamic[live]]
            for i in near:
                query = oracle.query_halfplane(self.bodies[i].shape, self.state(i), plane)
                results.append((halfplane_key(k, int(i)), -1, int(i), query.d, query.grad_cfg,
                                query.proj_rA, query.proj_rB, False))

        results.sort(key=lambda r: r[0])
        for key, a, b, d, grad, proj_a, proj_b, deep in results:
            if d < 0.0:
                contacts.add(key, a, b, d, grad, proj_a, proj_b)
                contacts.deep += int(deep)
                seen.add(key)
            elif d <= evict and key in self.pairs:
                seen.add(key)
        if contacts.deep:
            logger.warning(f"t={self.t:.4f}: {contacts.deep} deeply penetrating pairs")
        return contacts, seen

    def _contact_forces(self, contacts: _Contacts, forces: np.ndarray) -> Tuple[float, float]:
        if not contacts.keys:
            return 0.0, -math.inf
        a = np.array(contacts.a)
        b = np.array(contacts.b)
        is_plane = a < 0
        a_safe = np.where(is_plane, 0, a)

        qA = np.where(is_plane[:, None], 0.0, self.q[a_safe])
        vA = np.where(is_plane[:, None], 0.0, self.v[a_safe])
        springs = np.array([self.pairs[k].spring_length if k in self.pairs else 0.0 for k in contacts.keys])

        forces_a, forces_b, springs, diag = contact_forces(
            np.array(contacts.d), qA, self.q[b], vA, self.v[b], np.array(contacts.grad),
            np.array(contacts.proj_a), np.array(contacts.proj_b), self.params.contact, springs, self.params.dt,
        )
        for k, key in enumerate(contacts.keys):
            state = self.pairs.get(key)
            self.pairs[key] = ContactPairState(float(springs[k]), state.age + 1 if state else 0)

        apply_a = ~is_plane
        np.add.at(forces, a[apply_a], forces_a[apply_a])
        np.add.at(forces, b, forces_b)
        return float(np.max(-np.array(contacts.d))), float(np.max(diag.cone_excess))

    # stepping

    def step(self) -> StepDiagnostics:
        dt = self.params.dt
        self._apply_events()

        forces = np.zeros_like(self.q)
        contacts, seen = self._collect()
        max_pen, cone_excess = self._contact_forces(contacts, forces)
        self.pairs = {key: s for key, s in self.pairs.items() if key in seen}
        self.max_cone_excess_seen = max(self.max_cone_excess_seen, cone_excess)

        moving = self.dynamic & self.active
        forces[moving, 1:] += self.mass[moving, None] * self.gravity_now()
        self.v[moving, 0] += dt * forces[moving, 0] / self.inertia[moving]
        self.v[moving, 1:] += dt * forces[moving, 1:] / self.mass[moving, None]
        self.q[moving] += dt * self.v[moving]
        self.q[moving, 0] = wrap_angles(self.q[moving, 0])

        self.step_count += 1
        self.t = self.step_count * dt
        self._pose_kinematic(self.t)

        diagnostics = StepDiagnostics(
            step=self.step_count,
            t=self.t,
            contact_count=len(contacts.keys),
            max_penetration=max_pen,
            max_cone_excess=cone_excess if contacts.keys else 0.0,
            kinetic_energy=self.kinetic_energy(),
            deep_count=contacts.deep,
            gradient_fallbacks=contacts.gradient_fallbacks,
        )
        self.last_diagnostics = diagnostics
        if not (np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.v))):
            raise NumericalError(f"Non-finite body state after step {self.step_count}: {diagnostics}")
        logger.debug(f"step {self.step_count}: {diagnostics.contact_count} contacts, max penetration {max_pen:.3e}")
        return diagnostics

    def run(self, steps: int) -> StepDiagnostics:
        diagnostics = self.last_diagnostics
        for _ in range(steps):
            diagnostics = self.step()
        return diagnostics

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None
