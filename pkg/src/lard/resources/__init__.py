"""Bundled resource files.

``LARD_RESOURCES`` may point at a directory holding replacements for any of
the bundled files (same names); files missing there fall back to the bundle.
"""

from __future__ import annotations

import os
from pathlib import Path

PACKAGE_DIR = Path(__file__).resolve().parent
ENV_VAR = "LARD_RESOURCES"


def resource_path(name: str) -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        candidate = Path(override) / name
        if candidate.exists():
            return candidate
    return PACKAGE_DIR / name


def read_lines(path: str | os.PathLike) -> list[str]:
    """Non-blank lines with ``#`` comments removed."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(line)
    return out


def load_stoplist(path: str | os.PathLike | None = None) -> list[str]:
    return read_lines(path or resource_path("stopwords.txt"))
