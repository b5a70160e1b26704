"""
Little-endian framing shared by the model and dataset files:
magic, u32 version, payload, trailing CRC32 of everything before it.
"""
import struct
import zlib

import numpy as np

from app.core.errors import ModelFormatError


class BinaryWriter:
    def __init__(self, magic: bytes, version: int):
        self._parts = [magic, struct.pack("<I", version)]

    def u32(self, value: int):
        self._parts.append(struct.pack("<I", value))

    def u64(self, value: int):
        self._parts.append(struct.pack("<Q", value))

    def i64(self, value: int):
        self._parts.append(struct.pack("<q", value))

    def f64(self, value: float):
        self._parts.append(struct.pack("<d", value))

    def text(self, value: str):
        raw = value.encode("utf-8")
        self.u32(len(raw))
        self._parts.append(raw)

    def array(self, values: np.ndarray, dtype: str):
        self._parts.append(np.ascontiguousarray(values, dtype=np.dtype(dtype).newbyteorder("<")).tobytes())

    def finish(self) -> bytes:
        body = b"".join(self._parts)
        return body + struct.pack("<I", zlib.crc32(body))


class BinaryReader:
    """Cursor over a checked payload; every overrun is a ModelFormatError."""

    def __init__(self, data: bytes, magic: bytes, version: int, what: str):
        self.what = what
        if len(data) < len(magic) + 8:
            raise ModelFormatError(f"{what} is truncated ({len(data)} bytes)")
        if data[:len(magic)] != magic:
            raise ModelFormatError(f"{what} has a bad header: expected {magic!r}, found {data[:len(magic)]!r}")
        body, stored = data[:-4], struct.unpack("<I", data[-4:])[0]
        if zlib.crc32(body) != stored:
            raise ModelFormatError(f"{what} failed its checksum; the file is corrupt or truncated")
        self._data = body
        self._pos = len(magic)
        found = self.u32()
        if found != version:
            raise ModelFormatError(f"{what} has format version {found}, this build reads version {version}")

    def _take(self, size: int) -> bytes:
        if size < 0 or self._pos + size > len(self._data):
            raise ModelFormatError(f"{self.what} is truncated at byte {self._pos}")
        chunk = self._data[self._pos:self._pos + size]
        self._pos += size
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def i64(self) -> int:
        return struct.unpack("<q", self._take(8))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self._take(8))[0]

    def text(self) -> str:
        raw = self._take(self.u32())
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ModelFormatError(f"{self.what} holds an invalid name: {e}")

    def array(self, count: int, dtype: str) -> np.ndarray:
        dt = np.dtype(dtype).newbyteorder("<")
        return np.frombuffer(self._take(count * dt.itemsize), dtype=dt).astype(np.dtype(dtype))

    def done(self):
        if self._pos != len(self._data):
            raise ModelFormatError(f"{self.what} has {len(self._data) - self._pos} unexpected trailing bytes")
