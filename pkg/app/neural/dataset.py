"""
Oracle-labelled training data near the contact manifold.

Samples are produced in fixed-size chunks, each with its own seed, so the
result does not depend on how many workers generated it.
"""
import logging
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

import numpy as np

from app.contact import oracle
from app.core.config import settings
from app.core.errors import ConfigError, RejectionBudgetExceeded
from app.models.dataset import ContactDataset
from app.models.shape import Shape
from app.models.state import Se2State

logger = logging.getLogger(__name__)


def derive_seed(*parts) -> int:
    """Stable 32-bit seed from names and integers."""
    return zlib.crc32("|".join(str(p) for p in parts).encode("utf-8"))


def sample_uniform_poses(rng: np.random.Generator, count: int, radius_sum: float) -> np.ndarray:
    """Relative poses uniform in angle and uniform over the disc ||t|| <= radius_sum."""
    theta = np.pi - rng.uniform(0.0, 2.0 * np.pi, size=count)
    r = radius_sum * np.sqrt(rng.uniform(0.0, 1.0, size=count))
    phi = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return np.stack([theta, r * np.cos(phi), r * np.sin(phi)], axis=1)


def _label(shapeA: Shape, shapeB: Shape, pose: np.ndarray, resolution: Optional[int]) -> tuple:
    rel = oracle.query_relative(shapeA, shapeB, Se2State.from_array(pose), resolution=resolution)
    t = pose[1:]
    return rel.d, rel.x_star, rel.x_star.copy(), rel.x_star - t


def _sample_chunk(args) -> dict:
    shapeA, shapeB, chunk_seed, n_near, n_uniform, band, resolution = args
    rng = np.random.default_rng(chunk_seed)
    radius_sum = shapeA.bounding_radius + shapeB.bounding_radius
    coarse = settings.PRESCREEN_RESOLUTION
    budget = settings.REJECTION_BUDGET * max(n_near, 1)

    poses, rows = [], []
    attempts = 0
    while len(poses) < n_near:
        if attempts >= budget:
            raise RejectionBudgetExceeded(
                f"Only {len(poses)}/{n_near} near-contact samples for {shapeA.name}/{shapeB.name} "
                f"after {attempts} proposals; do the shapes touch inside the sampling domain?"
            )
        pose = sample_uniform_poses(rng, 1, radius_sum)[0]
        attempts += 1
        screen = oracle.query_relative(shapeA, shapeB, Se2State.from_array(pose), resolution=coarse, refine=0)
        if abs(screen.d) > band + 2.0 * screen.cell:
            continue
        row = _label(shapeA, shapeB, pose, resolution)
        if abs(row[0]) <= band:
            poses.append(pose)
            rows.append(row)

    for pose in sample_uniform_poses(rng, n_uniform, radius_sum):
        poses.append(pose)
        rows.append(_label(shapeA, shapeB, pose, resolution))

    if not rows:
        return {"q_rel": np.zeros((0, 3)), "d": np.zeros(0), "x_star": np.zeros((0, 2)),
                "r_a": np.zeros((0, 2)), "r_b": np.zeros((0, 2)), "attempts": attempts}
    d, x_star, r_a, r_b = (np.array(col) for col in zip(*rows))
    return {"q_rel": np.array(poses), "d": d, "x_star": x_star, "r_a": r_a, "r_b": r_b, "attempts": attempts}


def sample_dataset(
    shapeA: Shape,
    shapeB: Shape,
    count: int,
    near_frac: Optional[float] = None,
    band: Optional[float] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    resolution: Optional[int] = None,
) -> ContactDataset:
    """
    Draw ``count`` labelled relative configurations for the ordered pair (A, B).

    The first ``near_frac * count`` samples are rejection-sampled so that
    |d| <= band; the rest are uniform over ||t|| <= R_A + R_B.

    Raises:
        RejectionBudgetExceeded: if near-contact proposals are almost never accepted
    """
    if count <= 0:
        raise ConfigError(f"Dataset size must be positive, got {count}")
    near_frac = settings.NEAR_FRACTION if near_frac is None else near_frac
    band = settings.NEAR_BAND if band is None else band
    seed = settings.DEFAULT_SEED if seed is None else seed
    workers = workers or settings.THREADS

    n_near = int(round(near_frac * count))
    chunk = settings.DATASET_CHUNK
    jobs = []
    for k, start in enumerate(range(0, count, chunk)):
        stop = min(start + chunk, count)
        near_k = max(0, min(stop, n_near) - start)
        chunk_seed = derive_seed(shapeA.name, shapeB.name, seed, "chunk", k)
        jobs.append((shapeA, shapeB, chunk_seed, near_k, (stop - start) - near_k, band, resolution))

    logger.info(f"Sampling {count} configurations for {shapeA.name}/{shapeB.name} in {len(jobs)} chunks on {workers} workers")
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts: List[dict] = list(pool.map(_sample_chunk, jobs))
    else:
        parts = [_sample_chunk(job) for job in jobs]

    attempts = sum(p["attempts"] for p in parts)
    if n_near:
        logger.info(f"Near-band acceptance rate {n_near / max(attempts, 1):.3f} over {attempts} proposals")

    return ContactDataset(
        shapeA_name=shapeA.name,
        shapeB_name=shapeB.name,
        radius_sum=shapeA.bounding_radius + shapeB.bounding_radius,
        q_rel=np.concatenate([p["q_rel"] for p in parts]),
        d=np.concatenate([p["d"] for p in parts]),
        x_star=np.concatenate([p["x_star"] for p in parts]),
        r_a=np.concatenate([p["r_a"] for p in parts]),
        r_b=np.concatenate([p["r_b"] for p in parts]),
        band=band,
        near_fraction=near_frac,
        seed=seed,
    )


def near_band_fraction(dataset: ContactDataset) -> float:
    if len(dataset) == 0:
        return math.nan
    return float(np.mean(dataset.near_mask))
