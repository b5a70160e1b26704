from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from app.models.state import Se2State


@dataclass(frozen=True)
class TrainingSample:
    """One oracle-labelled relative configuration. Vectors are in A's frame."""
    q_rel: Se2State
    d: float
    x_star: np.ndarray
    r_A: np.ndarray
    r_B: np.ndarray


@dataclass(eq=False)
class ContactDataset:
    """
    Columnar store of training samples for one ordered shape pair.

    Columns: q_rel (N, 3), d (N,), x_star (N, 2), r_a (N, 2), r_b (N, 2).
    """
    shapeA_name: str
    shapeB_name: str
    radius_sum: float
    q_rel: np.ndarray
    d: np.ndarray
    x_star: np.ndarray
    r_a: np.ndarray
    r_b: np.ndarray
    band: float = 0.1
    near_fraction: float = 0.9
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.q_rel = np.asarray(self.q_rel, dtype=float).reshape(-1, 3)
        n = len(self.q_rel)
        self.d = np.asarray(self.d, dtype=float).reshape(n)
        self.x_star = np.asarray(self.x_star, dtype=float).reshape(n, 2)
        self.r_a = np.asarray(self.r_a, dtype=float).reshape(n, 2)
        self.r_b = np.asarray(self.r_b, dtype=float).reshape(n, 2)

    def __len__(self) -> int:
        return len(self.d)

    def __getitem__(self, i: int) -> TrainingSample:
        return TrainingSample(
            q_rel=Se2State.from_array(self.q_rel[i]),
            d=float(self.d[i]),
            x_star=self.x_star[i].copy(),
            r_A=self.r_a[i].copy(),
            r_B=self.r_b[i].copy(),
        )

    def subset(self, index: np.ndarray) -> "ContactDataset":
        return ContactDataset(
            self.shapeA_name, self.shapeB_name, self.radius_sum,
            self.q_rel[index], self.d[index], self.x_star[index], self.r_a[index], self.r_b[index],
            band=self.band, near_fraction=self.near_fraction, seed=self.seed,
        )

    def split(self, holdout_fraction: float, seed: int) -> Tuple["ContactDataset", "ContactDataset"]:
        """Seeded shuffle into (train, holdout)."""
        order = np.random.default_rng(seed).permutation(len(self))
        n_holdout = int(round(holdout_fraction * len(self)))
        return self.subset(np.sort(order[n_holdout:])), self.subset(np.sort(order[:n_holdout]))

    @property
    def near_mask(self) -> np.ndarray:
        return np.abs(self.d) <= self.band
