"""Deterministic CSV/JSON serialization of sweep tables"""
from __future__ import annotations

import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, TextIO, Union

import numpy as np

from exceptions import OutputError, ValidationError
from services.experiments import SweepTable

logger = logging.getLogger(__name__)

SUPPORTED_FORMATS = ("csv", "json")
FLOAT_FORMAT = "%.17g"

Destination = Union[str, Path, TextIO]


class TableWriterService:
    """Writes SweepTables so identical inputs give byte-identical files"""

    def render(self, table: SweepTable, fmt: str = "csv") -> str:
        """Serialize a table to text"""
        fmt = fmt.lower()
        if fmt not in SUPPORTED_FORMATS:
            raise ValidationError(
                f"Unsupported format: {fmt}. Must be one of: {', '.join(SUPPORTED_FORMATS)}"
            )
        buffer = io.StringIO()
        if fmt == "csv":
            self._write_csv(table, buffer)
        else:
            self._write_json(table, buffer)
        return buffer.getvalue()

    def write_table(self, table: SweepTable, fmt: str, destination: Destination) -> None:
        """
        Write a table to a path or an open text stream.

        Args:
            table: sweep result
            fmt: "csv" or "json"
            destination: file path, or a text stream such as sys.stdout

        Raises:
            ValidationError: unsupported format
            OutputError: destination cannot be written
        """
        text = self.render(table, fmt)
        if not isinstance(destination, (str, Path)):
            destination.write(text)
            return

        path = Path(destination)
        try:
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        except OSError as e:
            raise OutputError(f"Cannot write {path}: {e}") from e
        logger.info(f"Wrote {table.n_rows} rows ({fmt}) to {path}")

    def read_table(self, path: Union[str, Path]) -> SweepTable:
        """Load a table written by write_table; format from the file suffix"""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise OutputError(f"Cannot read {path}: {e}") from e

        try:
            if path.suffix.lower() == ".json":
                return self._parse_json(text)
            return self._parse_csv(text)
        except (ValueError, KeyError, TypeError) as e:
            raise OutputError(f"Malformed table file {path}: {e}") from e

    def _write_csv(self, table: SweepTable, stream: TextIO) -> None:
        for key, value in table.metadata.items():
            stream.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
        stream.write(",".join(table.column_names) + "\n")
        if table.n_rows == 0:
            return
        data = np.column_stack([np.asarray(col, dtype=float) for col in table.columns.values()])
        np.savetxt(stream, data, fmt=FLOAT_FORMAT, delimiter=",", newline="\n")

    def _write_json(self, table: SweepTable, stream: TextIO) -> None:
        payload = {
            "metadata": table.metadata,
            "columns": {name: list(col) for name, col in table.columns.items()},
        }
        json.dump(payload, stream, indent=2)
        stream.write("\n")

    def _parse_csv(self, text: str) -> SweepTable:
        metadata: Dict[str, Any] = {}
        body: List[str] = []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                metadata[key] = json.loads(value)
            elif line:
                body.append(line)

        if not body:
            raise ValueError("missing header row")
        names = body[0].split(",")
        if len(body) == 1:
            return SweepTable(columns={n: [] for n in names}, metadata=metadata)

        data = np.loadtxt(body[1:], delimiter=",", ndmin=2)
        if data.shape[1] != len(names):
            raise ValueError(f"expected {len(names)} columns, got {data.shape[1]}")
        return SweepTable(
            columns={n: data[:, i].tolist() for i, n in enumerate(names)},
            metadata=metadata,
        )

    def _parse_json(self, text: str) -> SweepTable:
        payload = json.loads(text)
        return SweepTable(columns=payload["columns"], metadata=payload.get("metadata", {}))
