# persuade_net/services/output_writer.py

import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, List, Sequence

from pydantic import BaseModel

logger = logging.getLogger(__name__)


def format_float(x: float) -> str:
    """Stable float text for CSV cells."""
    return format(float(x), ".12g")


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


class OutputWriter:
    """
    Writes run artefacts under one output directory.

    Every file is first written to a temporary sibling and then moved into
    place with `os.replace`, so a reader never sees a half-written file.
    """

    def __init__(self, base_path: Path):
        self.base_path = Path(base_path)
        self.base_path.mkdir(exist_ok=True, parents=True)
        self.written: List[Path] = []

    def _atomic_write(self, name: str, text: str) -> Path:
        target = self.base_path / name
        target.parent.mkdir(exist_ok=True, parents=True)
        fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            os.replace(tmp_name, target)
        except Exception:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        self.written.append(target)
        logger.info(f"Wrote {target}.")
        return target

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        return self._atomic_write(name, buffer.getvalue())

    def write_json(self, name: str, payload: Any) -> Path:
        if isinstance(payload, BaseModel):
            payload = payload.model_dump(mode="json")
        return self._atomic_write(name, json.dumps(payload, indent=2, ensure_ascii=False) + "\n")

    def write_text(self, name: str, text: str) -> Path:
        return self._atomic_write(name, text)
