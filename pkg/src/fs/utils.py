"""Filesystem utility functions."""
import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

from src.domain.errors import ParameterError
from src.domain.models import RunManifest

MANIFEST_SUFFIX = ".manifest.json"


def _format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def atomic_write_text(path: str | Path, text: str) -> None:
    """
    Atomically write a text file.

    Writes to a temporary file first, then replaces the target file.
    This ensures the file is never corrupted even if the process crashes.

    Args:
        path: Target file path
        text: Full file content (written as-is, LF line endings kept)
    """
    path = Path(path)

    # Ensure directory exists
    path.parent.mkdir(parents=True, exist_ok=True)

    # Write to temporary file in the same directory
    tf = tempfile.NamedTemporaryFile(
        mode="w",
        delete=False,
        dir=path.parent,
        encoding="utf-8",
        newline="",
        suffix=".tmp"
    )

    # Atomic replace; temp file removed on any failure
    try:
        with tf:
            tf.write(text)
        os.replace(tf.name, path)
    except BaseException:
        Path(tf.name).unlink(missing_ok=True)
        raise


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render rows as CSV text; floats use their shortest round-trip form."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        writer.writerow([_format_cell(value) for value in row])
    return buffer.getvalue()


def write_csv(
    path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> None:
    """Atomically write a CSV file with a header row."""
    atomic_write_text(path, render_csv(header, rows))


def read_csv(path: str | Path) -> list[dict[str, str]]:
    """Read a CSV file written by write_csv into a list of row dicts."""
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def manifest_path_for(csv_path: str | Path) -> Path:
    """Manifest location that accompanies a CSV file."""
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.name + MANIFEST_SUFFIX)


def write_manifest(path: str | Path, manifest: RunManifest) -> None:
    """Atomically write a run manifest as indented JSON."""
    text = json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n"
    atomic_write_text(path, text)


def load_manifest(path: str | Path) -> RunManifest:
    """
    Load a run manifest.

    Raises:
        ParameterError: File unreadable, not valid JSON or missing fields
    """
    try:
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
    except OSError as e:
        raise ParameterError(f"cannot read manifest {path}: {e}", key="manifest") from e
    except json.JSONDecodeError as e:
        raise ParameterError(f"{path}: invalid manifest JSON: {e}", key="manifest") from e
    if not isinstance(payload, dict):
        raise ParameterError(f"{path}: manifest must be a JSON object", key="manifest")
    return RunManifest.from_dict(payload)
