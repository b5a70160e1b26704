import numpy as np
import pytest

from app.core.errors import ConfigError, RejectionBudgetExceeded
from app.neural import dataset as sampling


@pytest.fixture
def small_chunks(monkeypatch):
    monkeypatch.setattr(sampling.settings, "DATASET_CHUNK", 40)


def test_disc_pair_near_fraction(disc):
    data = sampling.sample_dataset(disc, disc, 200, seed=3, resolution=61)
    assert len(data) == 200
    assert sampling.near_band_fraction(data) >= 0.88
    assert np.all(np.abs(data.d[:180]) <= 0.1)


def test_samples_stay_in_reduced_domain(unit_box):
    data = sampling.sample_dataset(unit_box, unit_box, 100, near_frac=0.5, seed=4, resolution=61)
    reach = np.linalg.norm(data.q_rel[:, 1:], axis=1)
    assert np.all(reach <= data.radius_sum + 1e-12)
    assert np.all(np.abs(data.q_rel[:, 0]) <= np.pi)
    uniform = data.d[50:]
    assert uniform.min() < 0.0 < uniform.max()


def test_arms_are_relative_to_each_centre(unit_box):
    data = sampling.sample_dataset(unit_box, unit_box, 10, near_frac=0.0, seed=2, resolution=41)
    np.testing.assert_allclose(data.r_a, data.x_star)
    np.testing.assert_allclose(data.r_b, data.x_star - data.q_rel[:, 1:])


def test_result_does_not_depend_on_workers(hexagon, small_chunks):
    serial = sampling.sample_dataset(hexagon, hexagon, 100, seed=9, workers=1, resolution=41)
    parallel = sampling.sample_dataset(hexagon, hexagon, 100, seed=9, workers=2, resolution=41)
    np.testing.assert_array_equal(serial.q_rel, parallel.q_rel)
    np.testing.assert_array_equal(serial.d, parallel.d)


def test_seed_changes_samples(hexagon):
    first = sampling.sample_dataset(hexagon, hexagon, 20, seed=1, resolution=41)
    second = sampling.sample_dataset(hexagon, hexagon, 20, seed=2, resolution=41)
    assert not np.array_equal(first.q_rel, second.q_rel)


def test_rejection_budget(disc, monkeypatch):
    monkeypatch.setattr(sampling.settings, "REJECTION_BUDGET", 2)
    with pytest.raises(RejectionBudgetExceeded):
        sampling.sample_dataset(disc, disc, 2, near_frac=1.0, band=-1.0)


def test_count_must_be_positive(disc):
    with pytest.raises(ConfigError):
        sampling.sample_dataset(disc, disc, 0)


def test_uniform_poses_cover_disc(rng):
    poses = sampling.sample_uniform_poses(rng, 5000, 2.0)
    radius = np.linalg.norm(poses[:, 1:], axis=1)
    assert radius.max() <= 2.0
    # half the area lies outside radius sqrt(2)
    assert np.mean(radius > np.sqrt(2.0)) == pytest.approx(0.5, abs=0.03)
    assert -np.pi < poses[:, 0].min() and poses[:, 0].max() <= np.pi


def test_derive_seed_is_stable():
    assert sampling.derive_seed("a", "b", 1) == sampling.derive_seed("a", "b", 1)
    assert sampling.derive_seed("a", "b", 1) != sampling.derive_seed("b", "a", 1)
