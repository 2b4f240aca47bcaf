"""Reading and writing presentations.

Text format (one module per block, blocks separated by a line ``---``)::

    # Z + Z/2 over the integers
    ring int
    generators 2
    relations 1
    0
    2

Grammar::

    file       := block ('---' NEWLINE block)*
    block      := (comment | blank)* header gens [rels row*]
    header     := 'ring' ENGINE NEWLINE          ENGINE := 'int' | 'mod' INT | 'poly' PRIME
    gens       := 'generators' INT NEWLINE
    rels       := 'relations' INT NEWLINE        number of relation columns (rows omitted if 0)
    row        := entry (sep entry)* NEWLINE     exactly one row per generator
    entry      := INT | '[' INT (',' INT)* ']'   polynomial: coefficients, lowest degree first
    sep        := whitespace | ','
    comment    := '#' any NEWLINE

The JSON format is the object ``{"engine": ENGINE, "generators": m,
"relations": [[entry, ...], ...]}`` (rows of the relation matrix), or a list
of such objects.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .fpmod import Presentation
from .matrix import Matrix
from .rings import RingEngine, parse_engine


class FormatError(ValueError):
    pass


_ENTRY = re.compile(r"\[[^\]]*\]|[+-]?\d+")


def _parse_entry(tok: str) -> Any:
    if tok.startswith("["):
        body = tok[1:-1].strip()
        try:
            return [int(x) for x in body.split(",")] if body else []
        except ValueError:
            raise FormatError(f"bad polynomial entry {tok!r}") from None
    return int(tok)


def parse_row(line: str) -> list:
    rest = _ENTRY.sub(" ", line).replace(",", " ").strip()
    if rest:
        raise FormatError(f"unexpected characters {rest!r} in row {line!r}")
    return [_parse_entry(t) for t in _ENTRY.findall(line)]


def build_presentation(engine: RingEngine, generators: int, rows: list, cols: int | None = None) -> Presentation:
    if generators < 0:
        raise FormatError("generator count must be non-negative")
    if len(rows) != generators:
        raise FormatError(f"expected {generators} relation rows, got {len(rows)}")
    if cols is None:
        cols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != cols:
            raise FormatError(f"row {r} has {len(r)} entries, expected {cols}")
    try:
        F = Matrix.from_ints(engine, rows, cols)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return Presentation(engine, generators, F)


def _parse_block(lines: list[str]) -> Presentation:
    engine = generators = cols = None
    rows: list = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        key = word.lower()
        if key == "ring":
            try:
                engine = parse_engine(rest)
            except ValueError as exc:
                raise FormatError(str(exc)) from None
        elif key == "generators":
            generators = int(rest)
        elif key == "relations":
            cols = int(rest)
        else:
            if cols is None:
                raise FormatError(f"matrix row before a 'relations' line: {raw!r}")
            rows.append(parse_row(line))
    if engine is None or generators is None:
        raise FormatError("block needs 'ring' and 'generators' lines")
    if not cols and not rows:
        rows = [[] for _ in range(generators)]
    return build_presentation(engine, generators, rows, cols if cols is not None else 0)


def parse_text(text: str) -> list[Presentation]:
    blocks, cur = [], []
    for line in text.splitlines():
        if line.strip() == "---":
            blocks.append(cur)
            cur = []
        else:
            cur.append(line)
    blocks.append(cur)
    try:
        out = [_parse_block(b) for b in blocks if any(l.split("#", 1)[0].strip() for l in b)]
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    if not out:
        raise FormatError("no presentation found")
    return out


def presentation_from_json(obj: dict) -> Presentation:
    if not isinstance(obj, dict) or not ("generators" in obj or "relations" in obj):
        raise FormatError("presentation object needs 'generators' or 'relations'")
    try:
        engine = parse_engine(str(obj["engine"]))
        rows = obj.get("relations", [])
        gens = obj.get("generators", len(rows))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad presentation object: {exc}") from None
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise FormatError("relations must be a list of rows")
    if not rows:
        rows = [[] for _ in range(int(gens))]
    return build_presentation(engine, int(gens), rows)


def parse_json(text: str) -> list[Presentation]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    items = data if isinstance(data, list) else [data]
    if not items:
        raise FormatError("no presentation found")
    return [presentation_from_json(o) for o in items]


def parse_any(text: str) -> list[Presentation]:
    """JSON if the text starts with ``{`` or ``[``, the line format otherwise."""
    head = text.lstrip()[:1]
    return parse_json(text) if head in ("{", "[") else parse_text(text)


def format_text(P: Presentation) -> str:
    e = P.engine
    lines = [f"ring {e.header()}", f"generators {P.generators}", f"relations {P.relations.cols}"]
    for r in P.relations.to_json():
        lines.append(" ".join(json.dumps(x, separators=(",", ":")) for x in r))
    return "\n".join(lines) + "\n"
