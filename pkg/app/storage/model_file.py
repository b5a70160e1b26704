import logging
from pathlib import Path
from typing import Union

from app.core.errors import ModelFormatError
from app.models.mlp import Mlp
from app.neural.contact_map import NeuralContactMap
from app.storage.binary import BinaryReader, BinaryWriter

logger = logging.getLogger(__name__)

MAGIC = b"CEM1"
VERSION = 1
MAX_LAYERS = 64


def _write_net(writer: BinaryWriter, net: Mlp):
    writer.u32(len(net.weights))
    for dim in net.layer_dims:
        writer.u32(dim)
    for w, b in zip(net.weights, net.biases):
        writer.array(w, "f4")
        writer.array(b, "f4")


def _read_net(reader: BinaryReader) -> Mlp:
    n_layers = reader.u32()
    if not 1 <= n_layers <= MAX_LAYERS:
        raise ModelFormatError(f"Model file declares {n_layers} layers")
    dims = [reader.u32() for _ in range(n_layers + 1)]
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        weights.append(reader.array(fan_in * fan_out, "f4").reshape(fan_out, fan_in))
        biases.append(reader.array(fan_out, "f4"))
    try:
        return Mlp(weights, biases)
    except ValueError as e:
        raise ModelFormatError(f"Model file holds an invalid network: {e}")


def encode_map(contact_map: NeuralContactMap) -> bytes:
    writer = BinaryWriter(MAGIC, VERSION)
    writer.text(contact_map.shapeA_name)
    writer.text(contact_map.shapeB_name)
    writer.f64(contact_map.radius_sum)
    _write_net(writer, contact_map.dist_net)
    _write_net(writer, contact_map.arm_net)
    return writer.finish()


def decode_map(data: bytes, what: str = "model file") -> NeuralContactMap:
    reader = BinaryReader(data, MAGIC, VERSION, what)
    name_a = reader.text()
    name_b = reader.text()
    radius_sum = reader.f64()
    dist_net = _read_net(reader)
    arm_net = _read_net(reader)
    reader.done()
    try:
        return NeuralContactMap(dist_net, arm_net, name_a, name_b, radius_sum)
    except ValueError as e:
        raise ModelFormatError(f"{what}: {e}")


def save_map(contact_map: NeuralContactMap, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = encode_map(contact_map)
    path.write_bytes(data)
    logger.info(f"Saved {contact_map.shapeA_name}/{contact_map.shapeB_name} map to {path} ({len(data)} bytes)")
    return path


def load_map(path: Union[str, Path]) -> NeuralContactMap:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ModelFormatError(f"Cannot read model file {path}: {e}")
    return decode_map(data, what=f"model file {path}")
