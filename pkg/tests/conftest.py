from pathlib import Path

import numpy as np
import pytest

from app.core.config import settings
from app.geometry.shapes import make_box, make_disc, make_regular_polygon
from app.models.dataset import ContactDataset
from app.neural.dataset import sample_uniform_poses
from app.scenarios.loader import load_shape_library
from seed_maps import seed_maps


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow physics tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def unit_box():
    return make_box(1.0, 1.0, name="box")


@pytest.fixture
def disc():
    return make_disc(0.5, 64, name="disc")


@pytest.fixture
def hexagon():
    return make_regular_polygon(6, 0.5, name="hexagon")


@pytest.fixture(scope="session")
def library():
    """Shapes shipped in scenes/shapes.json."""
    return load_shape_library(f"{settings.SCENES_DIR}/shapes.json")


@pytest.fixture
def coarse_oracle(monkeypatch):
    """Lower the oracle grid for tests whose tolerances are stated in grid cells."""
    monkeypatch.setattr(settings, "ORACLE_GRID_RESOLUTION", 81)
    monkeypatch.setattr(settings, "ORACLE_REFINE_RESOLUTION", 11)
    return settings


def disc_pair_dataset(count: int, radius: float = 0.5, seed: int = 7) -> ContactDataset:
    """Closed-form labels for two discs: d = |t| - 2r, contact point midway along the gap."""
    rng = np.random.default_rng(seed)
    radius_sum = 2.0 * radius
    q_rel = sample_uniform_poses(rng, count, radius_sum)
    t = q_rel[:, 1:]
    dist = np.linalg.norm(t, axis=1)
    u = t / np.maximum(dist, 1e-12)[:, None]
    d = dist - radius_sum
    x_star = u * (radius + 0.5 * d)[:, None]
    return ContactDataset("disc", "disc", radius_sum, q_rel, d, x_star, x_star.copy(), x_star - t)


@pytest.fixture
def disc_dataset():
    return disc_pair_dataset(2000)


@pytest.fixture(scope="session")
def seeded_maps():
    """Repo map directory holding every map the shipped scenes need; missing maps are trained once."""
    scenes_dir = Path(settings.SCENES_DIR)
    map_dir = scenes_dir.parent / "maps"
    seed_maps(sorted(p.stem for p in scenes_dir.glob("*.json") if p.name != "shapes.json"), map_dir)
    return map_dir
