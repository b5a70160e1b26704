"""
Bounding-disc culling: every pair whose centre distance is within
R_A + R_B + margin, never two fixed bodies.
"""
from collections import defaultdict
from typing import Dict, List, Tuple

import numpy as np

# this cell and the four neighbours that follow it, so each cell pair is visited once
HALF_NEIGHBOURS = ((0, 0), (1, -1), (1, 0), (1, 1), (0, 1))


def _filter(positions: np.ndarray, radii: np.ndarray, fixed: np.ndarray, i: np.ndarray, j: np.ndarray, margin: float) -> np.ndarray:
    delta = positions[j] - positions[i]
    dist = np.sqrt(delta[:, 0] * delta[:, 0] + delta[:, 1] * delta[:, 1])
    keep = (dist <= radii[i] + radii[j] + margin) & ~(fixed[i] & fixed[j])
    pairs = np.stack([i[keep], j[keep]], axis=1)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return pairs[order]


def brute_force_pairs(positions: np.ndarray, radii: np.ndarray, fixed: np.ndarray, margin: float) -> np.ndarray:
    """O(n^2) reference. Returns (P, 2) index pairs with i < j, sorted."""
    n = len(positions)
    i, j = np.triu_indices(n, k=1)
    return _filter(np.asarray(positions, dtype=float), np.asarray(radii, dtype=float), np.asarray(fixed, dtype=bool), i, j, margin)


class SpatialHash:
    def __init__(self, cell_size: float):
        self.cell_size = cell_size
        self.hash_table: Dict[Tuple[int, int], List[int]] = defaultdict(list)

    def _get_cell_coords(self, x: float, y: float) -> Tuple[int, int]:
        return int(np.floor(x / self.cell_size)), int(np.floor(y / self.cell_size))

    def insert(self, key: int, x: float, y: float):
        self.hash_table[self._get_cell_coords(x, y)].append(key)

    def candidate_pairs(self) -> Tuple[np.ndarray, np.ndarray]:
        firsts, seconds = [], []
        for (cx, cy), members in self.hash_table.items():
            here = np.asarray(members)
            for dx, dy in HALF_NEIGHBOURS:
                if dx == 0 and dy == 0:
                    a, b = np.triu_indices(len(here), k=1)
                    firsts.append(here[a])
                    seconds.append(here[b])
                    continue
                other = self.hash_table.get((cx + dx, cy + dy))
                if not other:
                    continue
                there = np.asarray(other)
                firsts.append(np.repeat(here, len(there)))
                seconds.append(np.tile(there, len(here)))
        if not firsts:
            return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
        first = np.concatenate(firsts).astype(int)
        second = np.concatenate(seconds).astype(int)
        return np.minimum(first, second), np.maximum(first, second)

    def clear(self):
        self.hash_table.clear()


def spatial_hash_pairs(positions: np.ndarray, radii: np.ndarray, fixed: np.ndarray, margin: float) -> np.ndarray:
    """Same result as ``brute_force_pairs`` using a uniform grid of cell 2 R_max + margin."""
    positions = np.asarray(positions, dtype=float)
    radii = np.asarray(radii, dtype=float)
    fixed = np.asarray(fixed, dtype=bool)
    if len(positions) < 2:
        return np.zeros((0, 2), dtype=int)

    grid = SpatialHash(2.0 * float(np.max(radii)) + margin)
    for k, (x, y) in enumerate(positions):
        grid.insert(k, x, y)
    i, j = grid.candidate_pairs()
    return _filter(positions, radii, fixed, i, j, margin)


def broad_phase(positions: np.ndarray, radii: np.ndarray, fixed: np.ndarray, margin: float) -> np.ndarray:
    return spatial_hash_pairs(positions, radii, fixed, margin)
