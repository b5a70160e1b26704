import logging
from pathlib import Path
from typing import Union

from app.core.errors import ModelFormatError
from app.models.dataset import ContactDataset
from app.storage.binary import BinaryReader, BinaryWriter

logger = logging.getLogger(__name__)

MAGIC = b"CED1"
VERSION = 1

# (column, values per sample)
COLUMNS = (("q_rel", 3), ("d", 1), ("x_star", 2), ("r_a", 2), ("r_b", 2))


def encode_dataset(dataset: ContactDataset) -> bytes:
    writer = BinaryWriter(MAGIC, VERSION)
    writer.text(dataset.shapeA_name)
    writer.text(dataset.shapeB_name)
    writer.f64(dataset.radius_sum)
    writer.f64(dataset.band)
    writer.f64(dataset.near_fraction)
    writer.i64(dataset.seed)
    writer.u64(len(dataset))
    for name, _ in COLUMNS:
        writer.array(getattr(dataset, name), "f8")
    return writer.finish()


def decode_dataset(data: bytes, what: str = "dataset file") -> ContactDataset:
    reader = BinaryReader(data, MAGIC, VERSION, what)
    name_a = reader.text()
    name_b = reader.text()
    radius_sum = reader.f64()
    band = reader.f64()
    near_fraction = reader.f64()
    seed = reader.i64()
    count = reader.u64()
    columns = {name: reader.array(count * width, "f8") for name, width in COLUMNS}
    reader.done()
    return ContactDataset(
        name_a, name_b, radius_sum,
        columns["q_rel"], columns["d"], columns["x_star"], columns["r_a"], columns["r_b"],
        band=band, near_fraction=near_fraction, seed=seed,
    )


def save_dataset(dataset: ContactDataset, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_dataset(dataset))
    logger.info(f"Saved {len(dataset)} samples for {dataset.shapeA_name}/{dataset.shapeB_name} to {path}")
    return path


def load_dataset(path: Union[str, Path]) -> ContactDataset:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ModelFormatError(f"Cannot read dataset file {path}: {e}")
    return decode_dataset(data, what=f"dataset file {path}")
