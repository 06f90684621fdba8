"""Edge-list files and JSON reports.

Edge-list format::

    n <count>
    u<TAB>v<TAB>w
    ...

One edge per line with ``u < v`` in lexicographic order, weights written
with 17 significant digits, ``#`` lines ignored on input. Files written by
:func:`write_edge_list` round-trip byte for byte.
"""
from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import TextIO

from .graph import Graph, new_graph


class FormatError(ValueError):
    pass


def format_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines += [f"{u}\t{v}\t{w:.17g}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise FormatError(f"line {lineno}: expected 'n <count>' header, got {raw!r}")
            try:
                n = int(parts[1])
            except ValueError as exc:
                raise FormatError(f"line {lineno}: bad node count {parts[1]!r}") from exc
            continue
        if len(parts) not in (2, 3):
            raise FormatError(f"line {lineno}: expected 'u v w', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
        edges.append((u, v, w))
    if n is None:
        raise FormatError("missing 'n <count>' header")
    return new_graph(n, edges)


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def write_edge_list(g: Graph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edge_list(g))


def _clean(obj):
    # JSON has no infinity; disconnected coherence is written as null
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def write_json(obj, path: str | Path | None, stream: TextIO | None = None) -> None:
    text = dumps(obj)
    if path is None:
        (stream or sys.stdout).write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
