import json

import pytest

from app.neural.dataset import sample_dataset
from app.neural.training import train_map

NEAR_MAE = 1.5e-2
SIGN_AGREEMENT = 0.98


@pytest.mark.slow
def test_disc_map_fidelity(disc):
    dataset = sample_dataset(disc, disc, count=50_000, seed=5)
    _, report = train_map(dataset, "5x64")
    assert report.holdout_mae_near <= NEAR_MAE
    assert report.sign_agreement >= SIGN_AGREEMENT


@pytest.mark.slow
def test_hashtag_map_fidelity(seeded_maps):
    # written by seed_maps next to the map
    report = json.loads((seeded_maps / "hashtag__hashtag.json").read_text())
    assert report["arch"] == "5x64"
    assert report["holdout_mae_near"] <= NEAR_MAE
    assert report["sign_agreement"] >= SIGN_AGREEMENT
