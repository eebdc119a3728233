"""Verified-event list.

Event typing checks membership in a curated list of event ids loaded
once at startup from a local snapshot file (one kb_id per line, UTF-8,
LF-terminated). Refresh is a manual operation.
"""

from __future__ import annotations

from pathlib import Path


def load_event_list(path: str | Path) -> frozenset[str]:
    ids = set()
    for line in Path(path).read_text(encoding="utf-8").split("\n"):
        line = line.strip()
        if line and not line.startswith("#"):
            ids.add(line)
    return frozenset(ids)
