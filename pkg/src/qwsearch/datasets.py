"""Delimited dataset emission with machine-readable provenance.

Datasets are CSV files whose first line is a ``#``-prefixed JSON
metadata block (instance, command, tool version, timestamp).  Floats are
serialized with 17 significant digits so every file re-parses to the
exact same values.  Writes go through a temporary file and an atomic
rename, so a failed run never leaves a partial dataset behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence


@dataclass
class Dataset:
    """Rectangular table of typed values plus a metadata block."""

    columns: list[str]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} values, expected {width}")

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def standard_metadata(command: str, instance: Any | None = None, **extra: Any) -> dict:
    """Provenance block shared by every emitted dataset."""
    from . import __version__

    meta: dict[str, Any] = {
        "command": command,
        "tool": "qwsearch",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    if instance is not None:
        meta["instance"] = {
            "n1": instance.n1,
            "n2": instance.n2,
            "k1": instance.k1,
            "k2": instance.k2,
        }
    meta.update(extra)
    return meta


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def format_dataset(dataset: Dataset) -> str:
    lines = ["# " + json.dumps(dataset.metadata, sort_keys=True)]
    lines.append(",".join(dataset.columns))
    for row in dataset.rows:
        lines.append(",".join(_format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a same-directory temp file and rename; no partial files."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def write_dataset(dataset: Dataset, path: str | Path) -> None:
    atomic_write_text(path, format_dataset(dataset))


def _parse_cell(cell: str) -> Any:
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        pass
    if cell == "true":
        return True
    if cell == "false":
        return False
    return cell


def read_dataset(path: str | Path) -> Dataset:
    """Parse a dataset written by :func:`write_dataset`, losslessly."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing metadata header line")
    metadata = json.loads(lines[0].lstrip("#").strip())
    if len(lines) < 2:
        raise ValueError(f"{path}: missing column header")
    columns = lines[1].split(",")
    rows = [tuple(_parse_cell(cell) for cell in line.split(",")) for line in lines[2:] if line]
    return Dataset(columns=columns, rows=rows, metadata=metadata)


def columns_from_arrays(columns: Sequence[str], arrays: Sequence[Sequence[Any]], metadata: dict) -> Dataset:
    """Build a dataset from parallel columns."""
    lengths = {len(a) for a in arrays}
    if len(lengths) > 1:
        raise ValueError(f"columns have mismatched lengths {sorted(lengths)}")
    rows = [tuple(array[i] for array in arrays) for i in range(lengths.pop() if lengths else 0)]
    return Dataset(columns=list(columns), rows=rows, metadata=metadata)
