"""Functions for writing reports and tables to disk.

Every JSON report kind has a schema under :data:`config.SCHEMA_DIR`.  Reports
are validated against it before they are written; when ``jsonschema`` is not
installed validation is skipped with a warning.
"""

from __future__ import annotations

import json
import logging
import os
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Union

from config import SCHEMA_DIR
from output.formatter import format_json, format_table, to_jsonable

try:
    import jsonschema  # type: ignore
except ModuleNotFoundError:  # pragma: no cover
    jsonschema = None  # type: ignore

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def load_schema(kind: str) -> Dict[str, Any]:
    path = SCHEMA_DIR / f"{kind}.schema.json"
    if not path.is_file():
        raise FileNotFoundError(f"No schema for report kind {kind!r}: {path}")
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def validate_report(document: Any, kind: str) -> None:
    """Validate a JSON-ready ``document`` against the ``kind`` schema.

    Raises
    ------
    jsonschema.ValidationError
        If the document does not conform.
    """
    if jsonschema is None:
        logger.warning("jsonschema is not installed; skipping %s validation", kind)
        return
    jsonschema.validate(instance=document, schema=load_schema(kind))


def save_output(content: str, path: PathLike) -> str:
    """Write text ``content`` to ``path``, creating parent directories."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(content)
    logger.debug("Wrote %s", path)
    return str(path)


def save_json(report: Any, path: PathLike, kind: Optional[str] = None) -> str:
    """Validate (when ``kind`` is given) and write a JSON report."""
    document = to_jsonable(report)
    if kind is not None:
        validate_report(document, kind)
    return save_output(format_json(document), path)


def save_table(
    rows: Iterable[Mapping[str, Any]], path: PathLike, columns: Optional[Sequence[str]] = None
) -> str:
    return save_output(format_table(rows, columns), path)
