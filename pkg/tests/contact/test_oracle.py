import math

import numpy as np
import pytest

from app.contact import oracle
from app.core.errors import OracleDomainError
from app.geometry.shapes import make_box, make_disc
from app.models.contact import HalfPlane
from app.models.state import Se2State


def _cell(shape_a, shape_b, q_b, resolution):
    """Grid spacing the oracle uses for this pair, A at the identity."""
    ra, rb = shape_a.bounding_radius, shape_b.bounding_radius
    t = np.array([q_b.x, q_b.y])
    lo = np.minimum([-ra, -ra], t - rb)
    hi = np.maximum([ra, ra], t + rb)
    return float(np.max(hi - lo)) / (resolution - 1)


@pytest.fixture
def small_disc():
    return make_disc(0.4, 64, name="small_disc")


def test_separated_discs(coarse_oracle, small_disc):
    q_b = Se2State(0.0, 1.8, 0.0)
    result = oracle.query(small_disc, small_disc, Se2State.identity(), q_b)
    cell = _cell(small_disc, small_disc, q_b, coarse_oracle.ORACLE_GRID_RESOLUTION)
    assert result.d == pytest.approx(1.0, abs=2 * cell)
    np.testing.assert_allclose(result.x_star, [0.9, 0.0], atol=2 * cell)
    np.testing.assert_allclose(result.n_world, [1.0, 0.0], atol=1e-6)


def test_penetrating_discs(coarse_oracle, small_disc):
    q_b = Se2State(0.0, 0.6, 0.0)
    result = oracle.query(small_disc, small_disc, Se2State.identity(), q_b)
    cell = _cell(small_disc, small_disc, q_b, coarse_oracle.ORACLE_GRID_RESOLUTION)
    assert result.d == pytest.approx(-0.2, abs=2 * cell)
    np.testing.assert_allclose(result.n_world, [1.0, 0.0], atol=1e-6)


@pytest.mark.parametrize("gap", [0.5, 0.1, -0.05])
def test_disc_pair_distance_within_two_cells(coarse_oracle, disc, gap):
    q_b = Se2State(0.3, 1.0 + gap, 0.0)
    result = oracle.query(disc, disc, Se2State.identity(), q_b)
    cell = _cell(disc, disc, q_b, coarse_oracle.ORACLE_GRID_RESOLUTION)
    assert result.d == pytest.approx(gap, abs=2 * cell)


def test_distance_is_symmetric(coarse_oracle, unit_box, hexagon):
    q_a = Se2State(0.2, 0.0, 0.0)
    q_b = Se2State(-0.4, 0.9, 0.3)
    ab = oracle.query(unit_box, hexagon, q_a, q_b)
    ba = oracle.query(hexagon, unit_box, q_b, q_a)
    cell = _cell(unit_box, hexagon, q_b, coarse_oracle.ORACLE_GRID_RESOLUTION)
    assert ab.d == pytest.approx(ba.d, abs=2 * cell)


def test_stacked_boxes_face_contact(coarse_oracle):
    box = make_box(0.8, 0.8, name="box08")
    q_b = Se2State(0.0, 0.0, 0.79)
    result = oracle.query(box, box, Se2State.identity(), q_b)
    assert result.d == pytest.approx(-0.01, abs=1e-3)
    np.testing.assert_allclose(result.n_world, [0.0, 1.0], atol=1e-6)
    # the shared face is at height 0.4 in A's frame
    assert result.proj_rB == pytest.approx(0.4 - 0.79, abs=0.01)


def test_translation_gradient_is_unit(coarse_oracle, unit_box, hexagon):
    result = oracle.query(unit_box, hexagon, Se2State(0.5, 0.1, 0.0), Se2State(1.0, 0.8, 0.5))
    assert float(np.linalg.norm(result.grad_cfg[1:])) == pytest.approx(1.0)
    assert float(np.linalg.norm(result.n_world)) == pytest.approx(1.0)


def test_gradient_matches_finite_differences(small_disc):
    q_b = Se2State(0.0, 1.8, 0.0)
    result = oracle.query(small_disc, small_disc, Se2State.identity(), q_b)
    fd = oracle.grad_fd_check(small_disc, small_disc, Se2State.identity(), q_b, step=0.2)
    np.testing.assert_allclose(fd[1:], [1.0, 0.0], atol=0.05)
    np.testing.assert_allclose(result.grad_cfg, fd, atol=0.05)


def test_projected_arms_are_bounded(coarse_oracle, small_disc):
    q_b = Se2State(0.0, 0.7, 0.0)
    result = oracle.query(small_disc, small_disc, Se2State.identity(), q_b)
    cell = _cell(small_disc, small_disc, q_b, coarse_oracle.ORACLE_GRID_RESOLUTION)
    assert result.proj_rA == pytest.approx(-0.35, abs=2 * cell)
    assert result.proj_rB == pytest.approx(-0.35, abs=2 * cell)
    assert abs(result.proj_rA) <= 0.4 + 2 * cell


def test_far_pair_raises(disc):
    with pytest.raises(OracleDomainError):
        oracle.query(disc, disc, Se2State.identity(), Se2State(0.0, 5.0, 0.0))


def test_deep_penetration_flagged(coarse_oracle, disc):
    assert oracle.query(disc, disc, Se2State.identity(), Se2State(0.0, 0.5, 0.0)).deep
    assert not oracle.query(disc, disc, Se2State.identity(), Se2State(0.0, 0.98, 0.0)).deep


def test_tie_break_is_deterministic(coarse_oracle, unit_box):
    q_b = Se2State(0.0, 0.0, 1.1)
    first = oracle.query(unit_box, unit_box, Se2State.identity(), q_b)
    second = oracle.query(unit_box, unit_box, Se2State.identity(), q_b)
    np.testing.assert_array_equal(first.x_star, second.x_star)
    assert first.d == second.d


@pytest.mark.slow
def test_disc_pair_distance_over_many_poses(coarse_oracle, disc, rng):
    for _ in range(1000):
        gap, phi, theta = rng.uniform(-0.1, 0.5), rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi)
        q_b = Se2State(theta, (1.0 + gap) * math.cos(phi), (1.0 + gap) * math.sin(phi))
        result = oracle.query(disc, disc, Se2State.identity(), q_b)
        cell = _cell(disc, disc, q_b, coarse_oracle.ORACLE_GRID_RESOLUTION)
        assert result.d == pytest.approx(gap, abs=2 * cell)


@pytest.mark.slow
def test_gradient_matches_closed_form_and_differences_near_contact(rng):
    fine_disc = make_disc(0.5, 512, name="fine_disc")
    for _ in range(100):
        gap, phi, theta = rng.uniform(-0.05, 0.1), rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi)
        u = np.array([math.cos(phi), math.sin(phi)])
        q_b = Se2State(theta, *((1.0 + gap) * u))
        result = oracle.query(fine_disc, fine_disc, Se2State.identity(), q_b)
        np.testing.assert_allclose(result.grad_cfg, [0.0, u[0], u[1]], atol=1e-2)
        fd = oracle.grad_fd_check(fine_disc, fine_disc, Se2State.identity(), q_b, step=0.05)
        np.testing.assert_allclose(result.grad_cfg, fd, atol=1e-2)


def test_overlay_objective_examples():
    disc = make_disc(1.0, 256)
    ring = oracle.overlay_objective(disc, disc, Se2State(0.0, 3.0, 0.0), np.array([[1.5, 0.0], [1.0, 0.0]]))
    np.testing.assert_allclose(ring, [1.0, 2.0], atol=1e-9)


class TestHalfplane:
    floor = HalfPlane(np.array([0.0, 1.0]), 0.0, "floor")

    def test_box_sinking_into_floor(self, unit_box):
        result = oracle.query_halfplane(unit_box, Se2State(0.0, 2.0, 0.45), self.floor)
        assert result.d == pytest.approx(-0.05)
        np.testing.assert_allclose(result.n_world, [0.0, 1.0])
        np.testing.assert_allclose(result.grad_cfg, [0.0, 0.0, 1.0], atol=1e-9)
        assert result.proj_rB == pytest.approx(-0.45)
        assert result.proj_rA == pytest.approx(0.0)

    def test_rotated_box_matches_dense_boundary(self, unit_box):
        q = Se2State(0.6, 0.0, 0.3)
        result = oracle.query_halfplane(unit_box, q, self.floor)
        s = np.linspace(0.0, 1.0, 2500, endpoint=False)
        verts = unit_box.vertices
        samples = np.concatenate([verts[k] + np.outer(s, verts[(k + 1) % 4] - verts[k]) for k in range(4)])
        c, sn = math.cos(0.6), math.sin(0.6)
        world_y = sn * samples[:, 0] + c * samples[:, 1] + 0.3
        assert result.d == pytest.approx(float(np.min(world_y)), abs=1e-6)

    def test_single_corner_matches_finite_differences(self, unit_box):
        q = Se2State(0.3, 0.5, 0.4)
        result = oracle.query_halfplane(unit_box, q, self.floor)
        fd = oracle.halfplane_grad_fd(unit_box, q, self.floor)
        np.testing.assert_allclose(result.grad_cfg, fd, atol=1e-6)
        # deepest corner (-0.5, -0.5): rotation gradient -(p - x_B) . t
        corner = np.array([[math.cos(0.3), -math.sin(0.3)], [math.sin(0.3), math.cos(0.3)]]) @ [-0.5, -0.5]
        assert result.grad_cfg[0] == pytest.approx(corner[0])

    def test_flat_face_has_no_rotation_gradient(self, unit_box):
        q = Se2State(0.0, 0.0, 0.45)
        result = oracle.query_halfplane(unit_box, q, self.floor)
        fd = oracle.halfplane_grad_fd(unit_box, q, self.floor, step=1e-3)
        assert result.grad_cfg[0] == pytest.approx(0.0, abs=1e-12)
        assert fd[0] == pytest.approx(0.0, abs=1e-9)

    def test_inclined_plane(self, unit_box):
        plane = HalfPlane.through_point([0.0, 1.0], [1.0, 1.0])
        result = oracle.query_halfplane(unit_box, Se2State(0.0, 0.0, 0.0), plane)
        assert result.d == pytest.approx(-math.sqrt(2.0))

    def test_tilting_face_is_continuous(self, unit_box):
        rots = [oracle.query_halfplane(unit_box, Se2State(a, 0.0, 0.5), self.floor).grad_cfg[0]
                for a in (-2e-4, -1e-4, 0.0, 1e-4, 2e-4)]
        assert all(abs(b - a) < 0.2 for a, b in zip(rots, rots[1:]))

    def test_wall(self):
        box = make_box(2.0, 0.5)
        wall = HalfPlane(np.array([-1.0, 0.0]), -3.0, "wall")
        result = oracle.query_halfplane(box, Se2State(0.0, 2.5, 0.0), wall)
        assert result.d == pytest.approx(-0.5)
        np.testing.assert_allclose(result.n_world, [-1.0, 0.0])
