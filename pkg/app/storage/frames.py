"""
Frame files (one JSON record per line) and metrics tables (CSV).
"""
import csv
import logging
from pathlib import Path
from typing import List, Optional, Union

from pydantic import ValidationError

from app.core.errors import ConfigError
from app.schemas.frame import FrameRecord, MetricsRow

logger = logging.getLogger(__name__)

METRIC_COLUMNS = list(MetricsRow.model_fields)


class FrameWriter:
    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = self.path.open("w", encoding="utf-8", newline="\n")
        self.count = 0

    def write(self, frame: FrameRecord):
        self._file.write(frame.model_dump_json(exclude_none=True))
        self._file.write("\n")
        self.count += 1

    def close(self):
        self._file.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class MetricsWriter:
    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = self.path.open("w", encoding="utf-8", newline="")
        self._writer = csv.DictWriter(self._file, fieldnames=METRIC_COLUMNS, lineterminator="\n")
        self._writer.writeheader()
        self.count = 0

    def write(self, row: MetricsRow):
        self._writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.model_dump().items()})
        self.count += 1

    def close(self):
        self._file.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_frames(path: Union[str, Path], limit: Optional[int] = None) -> List[FrameRecord]:
    frames = []
    with Path(path).open(encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                frames.append(FrameRecord.model_validate_json(line))
            except ValidationError as e:
                raise ConfigError(f"{path}:{number} is not a frame record: {e}")
            if limit is not None and len(frames) >= limit:
                break
    return frames


def read_metrics(path: Union[str, Path]) -> List[MetricsRow]:
    with Path(path).open(encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        try:
            return [MetricsRow.model_validate(row) for row in reader]
        except ValidationError as e:
            raise ConfigError(f"{path} is not a metrics table: {e}")
