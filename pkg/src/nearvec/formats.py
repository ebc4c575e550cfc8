"""Reading and writing near-fields and near-vector spaces.

Near-field text format::

    nearfield n=<size> zero=<i> one=<i> minus_one=<i>
    add:
    <n rows of n indices>
    mul:
    <n rows of n indices>

An optional ``labels:`` line with ``n`` space-separated element names may
follow the header.  The JSON mirror uses the keys ``size``, ``zero``,
``one``, ``minus_one``, ``add`` and ``mul`` (plus optional ``labels``).

Space JSON has a ``scalar`` entry (an embedded near-field, a
``{"kind": "prime"|"dickson", "p": p}`` builder, or ``{"file": path}``),
a ``kind`` of ``product``, ``twisted`` or ``table`` and the matching
payload ``n``, ``exponents`` or ``add`` plus ``action``.
"""
from __future__ import annotations

import json
import os
from typing import Any

import numpy as np

from .errors import ParseError, StructureError
from .nearfield import NearFieldTable, dickson_p2, nearfield_from_tables, prime_field
from .space import NearVectorSpace, product_space, table_space, twisted_space

__all__ = [
    "nearfield_to_text",
    "nearfield_from_text",
    "nearfield_to_json",
    "nearfield_from_json",
    "load_nearfield",
    "save_nearfield",
    "space_to_json",
    "space_from_json",
    "load_space",
    "save_space",
    "format_table",
    "parse_table",
    "read_label_grid",
    "grid_discrepancies",
    "table_tsv",
]


# -- near-fields ----------------------------------------------------------------


def nearfield_to_text(F: NearFieldTable) -> str:
    lines = [f"nearfield n={F.size} zero={F.zero} one={F.one} minus_one={F.minus_one}"]
    if F.labels is not None:
        lines.append("labels: " + " ".join(F.labels))
    for name, table in (("add", F.add), ("mul", F.mul)):
        lines.append(f"{name}:")
        lines.extend(" ".join(str(int(x)) for x in row) for row in table)
    return "\n".join(lines) + "\n"


def _header(line: str) -> dict[str, int]:
    parts = line.split()
    if not parts or parts[0] != "nearfield":
        raise ParseError(f"expected 'nearfield' header, got {line!r}")
    out = {}
    for item in parts[1:]:
        key, sep, val = item.partition("=")
        if not sep:
            raise ParseError(f"bad header field {item!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise ParseError(f"header field {key} is not an integer: {val!r}") from None
    missing = {"n", "zero", "one", "minus_one"} - out.keys()
    if missing:
        raise ParseError("header lacks " + ", ".join(sorted(missing)))
    return out


def _rows(lines: list[str], start: int, n: int, name: str) -> np.ndarray:
    rows = lines[start:start + n]
    if len(rows) != n:
        raise StructureError(f"{name} table has {len(rows)} rows, expected {n}")
    try:
        data = [[int(x) for x in r.split()] for r in rows]
    except ValueError:
        raise ParseError(f"non-integer entry in {name} table") from None
    for i, r in enumerate(data):
        if len(r) != n:
            raise StructureError(f"{name} row {i} has {len(r)} entries, expected {n}")
    return np.array(data, dtype=np.int64).reshape(n, n)


def nearfield_from_text(text: str, verify: bool = True, name: str = "") -> NearFieldTable:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty near-field file")
    h = _header(lines[0])
    n = h["n"]
    i = 1
    labels = None
    if i < len(lines) and lines[i].startswith("labels:"):
        labels = lines[i][len("labels:"):].split()
        if len(labels) != n:
            raise StructureError(f"{len(labels)} labels for {n} elements")
        i += 1
    tables = {}
    for key in ("add", "mul"):
        if i >= len(lines) or lines[i] != f"{key}:":
            raise ParseError(f"expected '{key}:' section")
        tables[key] = _rows(lines, i + 1, n, key)
        i += 1 + n
    return _build(tables["add"], tables["mul"], h["zero"], h["one"], h["minus_one"], labels, verify, name)


def _build(add, mul, zero, one, minus_one, labels, verify, name) -> NearFieldTable:
    if verify:
        return nearfield_from_tables(add, mul, zero, one, minus_one, labels=labels, name=name)
    add = np.asarray(add, dtype=np.int64)
    return NearFieldTable(len(add), add, mul, zero, one, minus_one, labels, name)


def nearfield_to_json(F: NearFieldTable) -> dict:
    out = {
        "size": F.size,
        "zero": F.zero,
        "one": F.one,
        "minus_one": F.minus_one,
        "add": F.add.tolist(),
        "mul": F.mul.tolist(),
    }
    if F.labels is not None:
        out["labels"] = list(F.labels)
    return out


def nearfield_from_json(data: dict, verify: bool = True, name: str = "") -> NearFieldTable:
    if "kind" in data and "add" not in data:
        return _builder(data)
    try:
        size = int(data["size"])
        add = np.array(data["add"], dtype=np.int64)
        mul = np.array(data["mul"], dtype=np.int64)
        zero, one, minus_one = int(data["zero"]), int(data["one"]), int(data["minus_one"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"near-field JSON: {exc}") from None
    if add.shape != (size, size) or mul.shape != (size, size):
        raise StructureError(f"tables must be {size}x{size}")
    return _build(add, mul, zero, one, minus_one, data.get("labels"), verify, name or data.get("name", ""))


def _builder(data: dict) -> NearFieldTable:
    kind = data["kind"]
    p = int(data["p"])
    if kind == "prime":
        return prime_field(p)
    if kind == "dickson":
        return dickson_p2(p)
    raise ParseError(f"unknown near-field kind {kind!r}")


def load_nearfield(path: str, verify: bool = True) -> NearFieldTable:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(path))[0]
    if text.lstrip().startswith("{"):
        return nearfield_from_json(json.loads(text), verify, name)
    return nearfield_from_text(text, verify, name)


def save_nearfield(F: NearFieldTable, path: str, fmt: str | None = None) -> None:
    fmt = fmt or ("json" if path.endswith(".json") else "text")
    with open(path, "w", encoding="utf-8") as fh:
        if fmt == "json":
            json.dump(nearfield_to_json(F), fh)
            fh.write("\n")
        else:
            fh.write(nearfield_to_text(F))


# -- spaces -----------------------------------------------------------------------


def space_to_json(V: NearVectorSpace) -> dict:
    scalar = V.component if V.kind == "product" else V.scalar
    out: dict[str, Any] = {"scalar": nearfield_to_json(scalar), "kind": V.kind}
    if V.kind == "product":
        out["n"] = int(V.params["n"])
    elif V.kind == "twisted":
        out["p"] = V.scalar.size
        out["exponents"] = list(V.params["exponents"])
    else:
        out["kind"] = "table"
        out["zero"] = V.zero
        out["add"] = V.add.tolist()
        out["action"] = V.act.tolist()
    if V.name:
        out["name"] = V.name
    return out


def _scalar_from(entry, base_dir: str) -> NearFieldTable:
    if isinstance(entry, str):
        return load_nearfield(os.path.join(base_dir, entry))
    if isinstance(entry, dict) and "file" in entry:
        return load_nearfield(os.path.join(base_dir, entry["file"]))
    if isinstance(entry, dict):
        return nearfield_from_json(entry)
    raise ParseError("space JSON needs a 'scalar' near-field")


def space_from_json(data: dict, base_dir: str = ".") -> NearVectorSpace:
    kind = data.get("kind")
    if kind == "twisted":
        p = data.get("p")
        if p is None:
            p = _scalar_from(data["scalar"], base_dir).size
        V = twisted_space(int(p), data["exponents"])
    elif kind == "product":
        F = _scalar_from(data.get("scalar"), base_dir)
        V = product_space(F, int(data["n"]))
    elif kind == "table":
        F = _scalar_from(data.get("scalar"), base_dir)
        try:
            V = table_space(F, data["add"], data["action"], int(data.get("zero", 0)))
        except KeyError as exc:
            raise ParseError(f"table space lacks {exc}") from None
    else:
        raise ParseError(f"unknown space kind {kind!r}")
    if data.get("name"):
        object.__setattr__(V, "name", data["name"])
    return V


def load_space(path: str) -> NearVectorSpace:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return space_from_json(data, os.path.dirname(os.path.abspath(path)))


def save_space(V: NearVectorSpace, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(space_to_json(V), fh)
        fh.write("\n")


# -- pretty printing -----------------------------------------------------------


def format_table(F: NearFieldTable, table: np.ndarray | None = None, corner: str = "o") -> str:
    """Aligned text rendering of a binary table with element labels on both axes."""
    t = F.mul if table is None else table
    labels = [F.label(a) for a in F.elements]
    cells = [[corner] + labels] + [[labels[i]] + [labels[int(x)] for x in t[i]] for i in F.elements]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row).rstrip() for row in cells) + "\n"


def read_label_grid(text: str) -> list[list[str]]:
    """Split a printed table into rows of cell strings; ``#`` lines are comments."""
    return [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def grid_discrepancies(F: NearFieldTable, grid: list[list[str]], table: np.ndarray | None = None) -> list[tuple[str, str, str, str]]:
    """Cells of a printed grid that differ from ``table`` (default: ``F.mul``).

    Each entry is ``(row, column, printed, computed)``; cells that do not
    parse as an element count as discrepancies too.
    """
    t = F.mul if table is None else table
    cols = grid[0][1:]
    out = []
    for row in grid[1:]:
        r = F.parse(row[0])
        for c, cell in zip(cols, row[1:]):
            want = F.label(int(t[r, F.parse(c)]))
            if cell.replace("*", "") != want.replace("*", ""):
                out.append((row[0], c, cell, want))
    return out


def parse_table(F: NearFieldTable, text: str) -> np.ndarray:
    """Inverse of :func:`format_table`, following the row and column labels."""
    lines = read_label_grid(text)
    cols = [F.parse(c) for c in lines[0][1:]]
    out = np.full((F.size, F.size), -1, dtype=np.int64)
    for row in lines[1:]:
        r = F.parse(row[0])
        for c, cell in zip(cols, row[1:]):
            out[r, c] = F.parse(cell)
    return out


def table_tsv(F: NearFieldTable, table: np.ndarray | None = None) -> str:
    t = F.mul if table is None else table
    rows = ["x\ty\tvalue"]
    for i in F.elements:
        for j in F.elements:
            rows.append(f"{F.label(i)}\t{F.label(j)}\t{F.label(int(t[i, j]))}")
    return "\n".join(rows) + "\n"
