"""Access to the versioned data files bundled with the package.

Every data file starts with comment lines (``#``); a ``# version: N`` comment
is required so KB snapshots can record which lexicon revisions built them.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from .errors import LexiconError

_VERSION_RE = re.compile(r"#\s*version:\s*(\S+)")


def data_path(name: str) -> Path:
    """Filesystem path of a bundled data file (e.g. ``cue_lexicon.tsv``)."""
    path = Path(str(resources.files("climatekb").joinpath("data", name)))
    if not path.exists():
        raise LexiconError(f"bundled data file not found: {name}")
    return path


def read_data_file(path: str | Path) -> tuple[list[str], str]:
    """Return (non-comment lines, declared version) of a data file."""
    text = Path(path).read_text(encoding="utf-8")
    version = ""
    lines = []
    for raw in text.splitlines():
        if raw.startswith("#"):
            m = _VERSION_RE.match(raw)
            if m:
                version = m.group(1)
            continue
        if raw.strip():
            lines.append(raw)
    if not version:
        raise LexiconError(f"{path}: missing '# version:' header")
    return lines, version


def read_tsv(path: str | Path, min_cols: int, max_cols: int | None = None) -> tuple[list[list[str]], str]:
    """Parse a tab-separated data file into rows, validating column counts."""
    lines, version = read_data_file(path)
    rows = []
    for i, line in enumerate(lines, start=1):
        cols = line.split("\t")
        if len(cols) < min_cols or (max_cols is not None and len(cols) > max_cols):
            raise LexiconError(f"{path}: bad column count on data line {i}: {line!r}")
        rows.append([c.strip() for c in cols])
    return rows, version


def read_word_list(path: str | Path) -> tuple[set[str], str]:
    """Read a one-word-per-line data file into a lowercase set."""
    lines, version = read_data_file(path)
    return {line.strip().lower() for line in lines}, version
