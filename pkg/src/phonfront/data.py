"""Location and low-level parsing of the bundled data tables."""
from __future__ import annotations

import os
from importlib import resources
from pathlib import Path
from typing import Iterator

from .errors import SchemaError

DATA_ENV = "PHONFRONT_DATA"


def default_data_dir() -> Path:
    """Bundled data directory, overridable via the PHONFRONT_DATA env var."""
    override = os.environ.get(DATA_ENV)
    if override:
        path = Path(override)
        if not path.is_dir():
            raise SchemaError(f"{DATA_ENV} does not point at a directory", path=path)
        return path
    return Path(str(resources.files("phonfront") / "data"))


def iter_table_rows(path: Path, n_fields: int) -> Iterator[tuple[int, list[str]]]:
    """Yield (line_number, fields) for each data row of a TSV table.

    Blank lines and ``#`` comments are skipped.  Rows with the wrong field
    count raise a schema error naming the file and line.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise SchemaError("table file not found", path=path) from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != n_fields:
            raise SchemaError(
                f"expected {n_fields} tab-separated fields, got {len(fields)}",
                path=path,
                line=lineno,
            )
        yield lineno, [f.strip() for f in fields]


def table_version(path: Path) -> str:
    """Version string declared in a leading ``# version:`` comment."""
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise SchemaError("table file not found", path=path) from None
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            if body.lower().startswith("version:"):
                return body.split(":", 1)[1].strip()
            continue
        break
    return "unversioned"
