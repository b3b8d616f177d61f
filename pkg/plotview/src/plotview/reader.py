"""Reading of the simulator's CSV output schema.

Files start with two comment lines ("# schema: ..." and "# config: <json>"),
then a header row and comma-separated numeric rows.  Rendering never
recomputes physics; everything drawn comes straight from these tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class InputError(Exception):
    """Input file missing, empty, or schema-invalid."""


@dataclass(frozen=True)
class Table:
    path: str
    schema: str
    config: dict
    columns: tuple[str, ...]
    rows: list[list]

    def column(self, name: str) -> list[float]:
        if name not in self.columns:
            raise InputError(
                f"{self.path}: column {name!r} not found "
                f"(header: {', '.join(self.columns)})")
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def read_table(path: str) -> Table:
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(str(exc)) from exc

    schema = ""
    config: dict = {}
    body = []
    for line in lines:
        if line.startswith("# schema:"):
            schema = line.split(":", 1)[1].strip()
        elif line.startswith("# config:"):
            config = json.loads(line.split(":", 1)[1])
        elif line.startswith("#") or not line.strip():
            continue
        else:
            body.append(line)
    if not body:
        raise InputError(f"{path}: no header row")
    columns = tuple(body[0].split(","))
    rows = []
    for line in body[1:]:
        cells = line.split(",")
        if len(cells) != len(columns):
            raise InputError(f"{path}: row width {len(cells)} != header "
                             f"width {len(columns)}")
        rows.append([_cell(c) for c in cells])
    if not rows:
        raise InputError(f"{path}: empty series (no data rows)")
    return Table(path=path, schema=schema, config=config,
                 columns=columns, rows=rows)


def _cell(text: str):
    try:
        return float(text)
    except ValueError:
        return text
