"""Output helpers for the segmentation toolkit.

This package renders reports as deterministic JSON and CSV text and writes
them to disk, validating JSON against the published schemas first.
"""

from .formatter import FLOAT_DECIMALS, format_frame, format_json, format_table, to_jsonable  # noqa: F401
from .save_output import load_schema, save_json, save_output, save_table, validate_report  # noqa: F401

__all__ = [
    "FLOAT_DECIMALS",
    "format_frame",
    "format_json",
    "format_table",
    "to_jsonable",
    "load_schema",
    "save_json",
    "save_output",
    "save_table",
    "validate_report",
]
