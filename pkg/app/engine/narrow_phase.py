"""
Backend dispatch for per-pair contact queries and the neural map registry.
"""
import enum
import logging
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple, Union

import numpy as np

from app.contact import oracle
from app.core.config import settings
from app.geometry.se2 import rotation
from app.models.contact import ContactQuery, HalfPlane
from app.models.shape import Shape
from app.models.state import Se2State
from app.neural.contact_map import NeuralContactMap
from app.storage.model_file import load_map

logger = logging.getLogger(__name__)


class Backend(str, enum.Enum):
    ORACLE = "oracle"
    NEURAL = "neural"


class MapRegistry:
    """Neural maps keyed by ordered shape-name pair."""

    def __init__(self, maps: Iterable[NeuralContactMap] = ()):
        self._maps: Dict[Tuple[str, str], NeuralContactMap] = {}
        for contact_map in maps:
            self.add(contact_map)

    def add(self, contact_map: NeuralContactMap):
        self._maps[contact_map.key] = contact_map

    def __len__(self) -> int:
        return len(self._maps)

    def keys(self):
        return list(self._maps)

    def lookup(self, nameA: str, nameB: str) -> Optional[Tuple[NeuralContactMap, bool]]:
        """The map for (A, B) and whether it is stored as (B, A)."""
        found = self._maps.get((nameA, nameB))
        if found is not None:
            return found, False
        found = self._maps.get((nameB, nameA))
        if found is not None:
            return found, True
        return None

    @classmethod
    def from_files(cls, paths: Iterable[Union[str, Path]]) -> "MapRegistry":
        registry = cls()
        for path in paths:
            registry.add(load_map(path))
        logger.info(f"Loaded {len(registry)} neural contact maps")
        return registry


def swap_query(query_ba: ContactQuery, qA: Se2State, qB: Se2State) -> ContactQuery:
    """Re-express a query computed with the bodies swapped for the (A, B) order."""
    n_world = -query_ba.n_world
    g = rotation(-qA.theta) @ n_world
    t = rotation(-qA.theta) @ (qB.translation - qA.translation)
    rot = -query_ba.grad_cfg[0] + t[1] * g[0] - t[0] * g[1]
    return ContactQuery(
        d=query_ba.d,
        x_star=query_ba.x_star,
        n_world=n_world,
        grad_cfg=np.array([rot, g[0], g[1]]),
        proj_rA=query_ba.proj_rB,
        proj_rB=query_ba.proj_rA,
        deep=query_ba.deep,
    )


def narrow_phase(
    shapeA: Union[Shape, HalfPlane],
    shapeB: Shape,
    qA: Se2State,
    qB: Se2State,
    backend: Backend = Backend.ORACLE,
    registry: Optional[MapRegistry] = None,
) -> ContactQuery:
    """
    Contact query for one broad-phase pair. A halfplane as body A always
    takes the analytic path; otherwise ``backend`` decides.
    """
    if isinstance(shapeA, HalfPlane):
        return oracle.query_halfplane(shapeB, qB, shapeA)
    if backend == Backend.NEURAL:
        found = registry.lookup(shapeA.name, shapeB.name) if registry is not None else None
        if found is not None:
            contact_map, swapped = found
            answer = swap_query(contact_map.query(qB, qA), qA, qB) if swapped else contact_map.query(qA, qB)
            if np.linalg.norm(answer.grad_cfg[1:]) >= settings.MIN_GRADIENT_NORM:
                return answer
            logger.debug(f"Map {contact_map.shapeA_name}/{contact_map.shapeB_name} has a flat gradient here; using the oracle")
            return oracle.query(shapeA, shapeB, qA, qB)
        logger.warning(f"No neural map for {shapeA.name}/{shapeB.name}; using the oracle")
    return oracle.query(shapeA, shapeB, qA, qB)
