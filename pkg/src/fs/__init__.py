"""Filesystem utilities."""
from .utils import (
    atomic_write_text,
    load_manifest,
    manifest_path_for,
    read_csv,
    render_csv,
    write_csv,
    write_manifest,
)

__all__ = [
    "atomic_write_text",
    "load_manifest",
    "manifest_path_for",
    "read_csv",
    "render_csv",
    "write_csv",
    "write_manifest",
]
