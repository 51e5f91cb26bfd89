"""Deterministic CSV emission with embedded provenance.

Every file starts with '#'-prefixed comment lines carrying the fully
resolved run configuration, then a header row, then data rows.  Floats are
written as shortest round-trip decimals with '.' separators and LF line
endings, so reruns of the same configuration are byte-identical.
"""

from __future__ import annotations

import math
from pathlib import Path

from . import __version__


def format_value(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def provenance_lines(command: str, config: dict) -> list[str]:
    lines = [f"# dicke-quench {__version__} :: {command}"]
    for key in sorted(config):
        lines.append(f"# {key} = {format_value(config[key])}")
    return lines


def write_csv(
    path: Path,
    command: str,
    config: dict,
    header: list[str],
    rows,
) -> Path:
    """Write one provenance-stamped CSV; rows are iterables of cells."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        for line in provenance_lines(command, config):
            fh.write(line + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(c) for c in row) + "\n")
    return path
