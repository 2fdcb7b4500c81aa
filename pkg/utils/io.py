"""CSV and JSON file helpers with deterministic output."""
import csv
import json
import logging
import os
from typing import Any, Dict, List, Optional, Sequence, Tuple

from utils.formatters import to_jsonable

logger = logging.getLogger(__name__)


def ensure_parent(path: str):
    """Create the parent directory of a file path if needed."""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def write_table(path: str, header: Sequence[str], rows: Sequence[Sequence[str]],
                comment: Optional[str] = None):
    """
    Write a UTF-8 CSV table.

    Args:
        path: Destination file
        header: Column names (written as the first row); empty for none
        rows: Pre-formatted cells
        comment: Optional first line, written as "# <comment>"
    """
    ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        if comment is not None:
            handle.write(f"# {comment}\n")
        writer = csv.writer(handle, lineterminator="\n")
        if header:
            writer.writerow(header)
        writer.writerows(rows)
    logger.debug(f"Wrote {len(rows)} rows to {path}")


def read_table(path: str, has_header: bool = True) -> Tuple[Optional[str], List[str], List[List[str]]]:
    """
    Read a CSV table written by write_table.

    Args:
        path: Source file
        has_header: Whether a header row follows the optional comment

    Returns:
        Tuple of (comment or None, header, rows)
    """
    with open(path, "r", encoding="utf-8", newline="") as handle:
        lines = [line for line in handle.read().splitlines() if line.strip()]
    comment = None
    if lines and lines[0].startswith("#"):
        comment = lines[0][1:].strip()
        lines = lines[1:]
    parsed = list(csv.reader(lines))
    header: List[str] = []
    if has_header and parsed:
        header, parsed = parsed[0], parsed[1:]
    return comment, header, parsed


def parse_comment_fields(comment: Optional[str]) -> Dict[str, str]:
    """
    Parse a "key=value key=value" comment line.

    Args:
        comment: Comment text without the leading '#'

    Returns:
        Mapping of keys to raw string values
    """
    fields: Dict[str, str] = {}
    if not comment:
        return fields
    for token in comment.split():
        if "=" in token:
            key, value = token.split("=", 1)
            fields[key.strip()] = value.strip()
    return fields


def write_json(path: str, payload: Dict[str, Any]):
    """Write a JSON document preserving field insertion order."""
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(to_jsonable(payload), handle, indent=2)
        handle.write("\n")
    logger.debug(f"Wrote JSON report to {path}")


def read_json(path: str) -> Dict[str, Any]:
    """Read a JSON document."""
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)
