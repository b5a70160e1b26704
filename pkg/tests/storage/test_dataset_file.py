import zlib

import numpy as np
import pytest

from app.core.errors import ModelFormatError
from app.storage import dataset_file


def test_dataset_loads_back(tmp_path, disc_dataset):
    path = dataset_file.save_dataset(disc_dataset, tmp_path / "disc__disc.ced")
    loaded = dataset_file.load_dataset(path)
    assert (loaded.shapeA_name, loaded.shapeB_name) == ("disc", "disc")
    assert len(loaded) == len(disc_dataset)
    assert loaded.band == disc_dataset.band
    np.testing.assert_array_equal(loaded.q_rel, disc_dataset.q_rel)
    np.testing.assert_array_equal(loaded.r_b, disc_dataset.r_b)


def test_sample_view(disc_dataset):
    sample = disc_dataset[3]
    assert sample.d == pytest.approx(float(np.linalg.norm(sample.q_rel.translation)) - 1.0)
    np.testing.assert_allclose(sample.r_A - sample.r_B, sample.q_rel.translation)


def test_split_is_seeded(disc_dataset):
    train, holdout = disc_dataset.split(0.25, seed=11)
    again, _ = disc_dataset.split(0.25, seed=11)
    assert len(holdout) == 500
    assert len(train) + len(holdout) == len(disc_dataset)
    np.testing.assert_array_equal(train.d, again.d)


def test_model_magic_is_rejected(disc_dataset):
    data = bytearray(dataset_file.encode_dataset(disc_dataset))
    data[:4] = b"CEM1"
    with pytest.raises(ModelFormatError):
        dataset_file.decode_dataset(bytes(data))


def test_trailing_bytes_are_rejected(disc_dataset):
    data = dataset_file.encode_dataset(disc_dataset)
    body = data[:-4] + b"\x00" * 8
    with pytest.raises(ModelFormatError, match="trailing"):
        dataset_file.decode_dataset(body + zlib.crc32(body).to_bytes(4, "little"))
