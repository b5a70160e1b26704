import numpy as np
import pytest

from app.scenarios import metrics
from app.schemas.frame import FrameRecord, MetricsRow


def row(t, height, discharged=0):
    return MetricsRow(
        t=t, max_displacement=0.1 * t, kinetic_energy=0.0, max_penetration=1e-4,
        pile_height=height, discharged_count=discharged, contact_count=3, max_cone_excess=0.0,
    )


def test_pile_height():
    y, radii = np.array([0.0, 1.0, 2.0]), np.full(3, 0.5)
    assert metrics.pile_height(y, radii) == 2.5
    assert metrics.pile_height(y, radii, np.array([True, True, False])) == 1.5
    assert metrics.pile_height(y, radii, np.zeros(3, dtype=bool)) == 0.0


def test_metric_pile_height_per_frame():
    frames = [
        FrameRecord(t=0.0, step=0, q=[(0.0, 0.0, 3.0), (0.0, 1.0, 1.0)]),
        FrameRecord(t=0.1, step=100, q=[(0.0, 0.0, 0.5), (0.0, 1.0, 1.0)]),
    ]
    np.testing.assert_allclose(metrics.metric_pile_height(frames, np.full(2, 0.5)), [3.5, 1.5])


def test_discharged_count():
    y, mask = np.array([-1.0, 0.5, -2.0]), np.array([True, True, False])
    assert metrics.discharged_count(y, 0.0, mask) == 1
    assert metrics.discharged_count(y, None, mask) == 0


def test_is_settled():
    assert metrics.is_settled([2.0] * 50)
    assert not metrics.is_settled(np.arange(1.0, 101.0))
    assert not metrics.is_settled([1.0])
    # only the trailing tenth counts
    assert metrics.is_settled(list(range(90)) + [5.0] * 10)


def test_surface_profile():
    profile = metrics.surface_profile(np.array([0.0, 1.0, 2.0]), np.array([1.0, 2.0, 3.0]), bins=2)
    assert profile == [(0.5, 2.0), (1.5, 3.0)]
    assert metrics.surface_profile(np.array([]), np.array([])) == []
    assert metrics.surface_profile(np.array([4.0, 4.0]), np.array([1.0, 2.0])) == [(4.0, 2.0)]


def test_surface_profile_window_skips_empty_bins():
    profile = metrics.surface_profile(np.array([0.5, 3.5]), np.array([1.0, 1.0]), window=(0.0, 4.0), bins=4)
    assert [x for x, _ in profile] == [0.5, 3.5]


def test_angle_of_repose_of_symmetric_pile():
    xs = np.arange(11.0)
    profile = list(zip(xs, 5.0 - np.abs(xs - 5.0)))
    assert metrics.angle_of_repose(profile) == pytest.approx(45.0)


def test_angle_of_repose_needs_a_profile():
    assert metrics.angle_of_repose([(0.0, 1.0), (1.0, 2.0)]) is None


def test_summarize():
    rows = [row(0.0, 5.0), row(0.5, 4.0, 2), row(1.0, 4.0, 3)]
    summary = {c.column: c for c in metrics.summarize(rows)}
    assert "t" not in summary
    assert len(summary) == len(MetricsRow.model_fields) - 1
    assert summary["pile_height"].final == 4.0
    assert summary["pile_height"].maximum == 5.0
    assert summary["discharged_count"].minimum == 0.0
    assert summary["contact_count"].settled
    assert metrics.summarize([]) == []
