import numpy as np
import pytest

from app.engine.broad_phase import broad_phase, brute_force_pairs, spatial_hash_pairs


def test_close_discs_are_paired():
    pairs = broad_phase(np.array([[0.0, 0.0], [1.0, 0.0]]), np.array([0.4, 0.4]), np.zeros(2, dtype=bool), 0.3)
    np.testing.assert_array_equal(pairs, [[0, 1]])


def test_distant_discs_are_not_paired():
    pairs = broad_phase(np.array([[0.0, 0.0], [2.0, 0.0]]), np.array([0.4, 0.4]), np.zeros(2, dtype=bool), 0.3)
    assert pairs.shape == (0, 2)


def test_fixed_pairs_are_skipped():
    positions = np.array([[0.0, 0.0], [0.5, 0.0], [1.0, 0.0]])
    fixed = np.array([True, True, False])
    pairs = broad_phase(positions, np.full(3, 0.4), fixed, 0.0)
    np.testing.assert_array_equal(pairs, [[1, 2]])


def test_fewer_than_two_bodies():
    assert spatial_hash_pairs(np.zeros((1, 2)), np.ones(1), np.zeros(1, dtype=bool), 0.1).shape == (0, 2)
    assert brute_force_pairs(np.zeros((0, 2)), np.zeros(0), np.zeros(0, dtype=bool), 0.1).shape == (0, 2)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_spatial_hash_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    positions = rng.uniform(-10.0, 10.0, size=(200, 2))
    radii = rng.uniform(0.2, 1.0, size=200)
    fixed = rng.uniform(size=200) < 0.2
    expected = brute_force_pairs(positions, radii, fixed, 0.05)
    found = spatial_hash_pairs(positions, radii, fixed, 0.05)
    assert len(expected) > 0
    np.testing.assert_array_equal(found, expected)


def test_negative_coordinates_share_cells_correctly():
    # straddles the origin where floor division matters
    positions = np.array([[-0.01, -0.01], [0.01, 0.01], [-0.6, 0.0]])
    pairs = spatial_hash_pairs(positions, np.full(3, 0.3), np.zeros(3, dtype=bool), 0.0)
    np.testing.assert_array_equal(pairs, brute_force_pairs(positions, np.full(3, 0.3), np.zeros(3, dtype=bool), 0.0))
