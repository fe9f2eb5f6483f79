"""Reading and writing complexes and local systems."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .complexes import ComplexError, LinkExteriorComplex, loads_complex
from .exactla import Matrix
from .localsys import LocalSystemError, MarkedLocalSystem
from .numfield import FieldElement, NumberField, format_rational

__all__ = [
    "InputError",
    "data_path",
    "dumps_local_system",
    "load_complex",
    "load_local_system",
    "loads_local_system",
    "parse_field",
    "shipped_complex",
    "shipped_local_system",
]

SHIPPED_SYSTEMS = {"geom": "geom.json", "iota_geom": "iota_geom.json", "p_exotic": "p_exotic.json"}


class InputError(ValueError):
    """A file could not be parsed into the expected structure."""


def data_path(name: str) -> Path:
    return Path(str(resources.files("torsor") / "data" / name))


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_complex(path) -> LinkExteriorComplex:
    try:
        return loads_complex(_read(path))
    except ComplexError as exc:
        raise InputError(str(exc)) from exc


def shipped_complex() -> LinkExteriorComplex:
    return load_complex(data_path("figure_eight.json"))


def parse_field(decl) -> NumberField:
    if not isinstance(decl, dict) or "min_poly" not in decl:
        raise InputError("field declaration must be an object with a min_poly list")
    try:
        return NumberField(
            decl["min_poly"], trusted=bool(decl.get("trusted", False)), name=decl.get("name", "w")
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad field declaration: {exc}") from exc


def field_decl(field: NumberField, trusted: bool) -> dict:
    return {
        "min_poly": [format_rational(c) for c in field.min_poly],
        "trusted": trusted,
        "name": field.name,
    }


def _element(field: NumberField, raw) -> FieldElement:
    try:
        if isinstance(raw, list) and len(raw) != field.degree:
            raise ValueError(f"coefficient list of length {len(raw)} for a degree-{field.degree} field")
        return field(raw)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad field element {raw!r}: {exc}") from exc


def loads_local_system(text: str, name: str = "") -> MarkedLocalSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("local system document must be a JSON object")
    for key in ("field", "group_tag", "monodromy"):
        if key not in doc:
            raise InputError(f"local system document lacks {key!r}")
    field = parse_field(doc["field"])
    mon = {}
    for cid, rows in doc["monodromy"].items():
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise InputError(f"{cid}: monodromy must be a list of rows")
        if any(len(r) != len(rows) for r in rows):
            raise InputError(f"{cid}: monodromy is not square")
        mon[cid] = Matrix.from_rows(field, [[_element(field, x) for x in r] for r in rows])
    sim = {cid: _element(field, x) for cid, x in doc.get("similitude", {}).items()}
    try:
        return MarkedLocalSystem(field, doc["group_tag"], mon, sim, doc.get("name", name))
    except LocalSystemError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def load_local_system(path) -> MarkedLocalSystem:
    return loads_local_system(_read(path), name=Path(path).stem)


def shipped_local_system(name: str) -> MarkedLocalSystem:
    return load_local_system(data_path(SHIPPED_SYSTEMS[name]))


def dumps_local_system(ls: MarkedLocalSystem, trusted: bool = False) -> str:
    lines = ["{"]
    lines.append(f' "name": {json.dumps(ls.name)},')
    lines.append(f' "field": {json.dumps(field_decl(ls.field, trusted))},')
    lines.append(f' "group_tag": {json.dumps(ls.group_tag)},')
    lines.append(' "monodromy": {')
    items = list(ls.monodromy.items())
    for i, (cid, m) in enumerate(items):
        lines.append(f"  {json.dumps(cid)}: [")
        for r in range(m.rows):
            row = json.dumps([m[r, c].to_strings() for c in range(m.cols)])
            lines.append(f"   {row}" + ("," if r < m.rows - 1 else ""))
        lines.append("  ]" + ("," if i < len(items) - 1 else ""))
    lines.append(" },")
    sim = {cid: ls.similitude[cid].to_strings() for cid in ls.monodromy if cid in ls.similitude}
    lines.append(f' "similitude": {json.dumps(sim)}')
    lines.append("}")
    return "\n".join(lines) + "\n"
