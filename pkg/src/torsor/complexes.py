"""CW complexes with path-decorated boundary words.

Every cell has an anchor 0-cell.  A boundary term of a cell carries a
word in oriented 1-cells walking from the cell's anchor to the anchor of
the target.  For a 1-cell the anchor is its start, so its two terms are
``(end, +1, [E])`` and ``(start, -1, [])``.  Higher anchors are implied by
the words and checked for consistency during validation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "BoundaryTerm",
    "Cell",
    "ComplexError",
    "Expansion",
    "LinkExteriorComplex",
    "PeripheralLoop",
    "ValidationReport",
    "dumps_complex",
    "elementary_expansion",
    "fundamental_cycle_search",
    "integer_boundary",
    "loads_complex",
    "smith_invariants",
    "untwisted_homology",
    "validate_complex",
]

Letter = tuple[str, int]
Word = tuple[Letter, ...]


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryTerm:
    target: str
    sign: int
    path: Word = ()

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ComplexError(f"boundary sign must be +1 or -1, got {self.sign!r}")
        for letter in self.path:
            if len(letter) != 2 or letter[1] not in (1, -1):
                raise ComplexError(f"bad path letter {letter!r}")


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    boundary: tuple[BoundaryTerm, ...] = ()


@dataclass(frozen=True)
class PeripheralLoop:
    id: str
    component: int
    cells: tuple[str, ...]
    cycle: Mapping[str, int]


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, msg: str):
        self.errors.append(msg)


class LinkExteriorComplex:
    """A finite CW complex, optionally with link-exterior decorations.

    ``cells[k]`` lists the k-cells in their fixed linear order.  A bare
    complex (a torus, say) simply leaves the decorations empty.
    """

    def __init__(
        self,
        cells: Sequence[Sequence[Cell]],
        boundary_components: Sequence[Iterable[str]] = (),
        peripheral_loops: Sequence[PeripheralLoop] = (),
        fundamental_class_3: Mapping[str, int] | None = None,
        fundamental_class_2: Mapping[str, int] | None = None,
        name: str = "",
    ):
        self.cells = tuple(tuple(level) for level in cells)
        self.boundary_components = tuple(tuple(c) for c in boundary_components)
        self.peripheral_loops = tuple(peripheral_loops)
        self.fundamental_class_3 = dict(fundamental_class_3 or {})
        self.fundamental_class_2 = dict(fundamental_class_2 or {})
        self.name = name
        self._by_id: dict[str, Cell] = {}
        self._index: dict[str, int] = {}
        for level in self.cells:
            for i, c in enumerate(level):
                if c.id in self._by_id:
                    raise ComplexError(f"duplicate cell id {c.id!r}")
                self._by_id[c.id] = c
                self._index[c.id] = i

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def cell(self, cid: str) -> Cell:
        try:
            return self._by_id[cid]
        except KeyError:
            raise ComplexError(f"unknown cell id {cid!r}") from None

    def index(self, cid: str) -> int:
        return self._index[cid]

    def ids(self, k: int) -> list[str]:
        if k < 0 or k >= len(self.cells):
            return []
        return [c.id for c in self.cells[k]]

    def counts(self) -> list[int]:
        return [len(level) for level in self.cells]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))

    def endpoints(self, edge: str) -> tuple[str, str]:
        """(start, end) of a 1-cell."""
        c = self.cell(edge)
        if c.dim != 1:
            raise ComplexError(f"{edge!r} is not a 1-cell")
        start = [t.target for t in c.boundary if t.sign == -1]
        end = [t.target for t in c.boundary if t.sign == 1]
        if len(start) != 1 or len(end) != 1:
            raise ComplexError(f"1-cell {edge!r} needs exactly one +1 and one -1 term")
        return start[0], end[0]

    def walk(self, start: str, path: Word) -> str:
        """0-cell reached by following ``path`` from ``start``."""
        here = start
        for name, s in path:
            a, b = self.endpoints(name)
            if s == 1:
                if a != here:
                    raise ComplexError(f"path letter {name}+ does not start at {here}")
                here = b
            else:
                if b != here:
                    raise ComplexError(f"path letter {name}- does not start at {here}")
                here = a
        return here

    def anchor(self, cid: str) -> str:
        return self._anchors()[cid]

    def _anchors(self) -> dict[str, str]:
        cached = getattr(self, "_anchor_cache", None)
        if cached is not None:
            return cached
        anchors = {c.id: c.id for c in (self.cells[0] if self.cells else ())}
        for k in range(1, len(self.cells)):
            for c in self.cells[k]:
                if k == 1:
                    anchors[c.id] = self.endpoints(c.id)[0]
                    continue
                if not c.boundary:
                    raise ComplexError(f"cell {c.id!r} of dimension {k} has empty boundary")
                # read the anchor off the first term by walking its path backwards
                t = c.boundary[0]
                here = anchors[t.target]
                for name, s in reversed(t.path):
                    a, b = self.endpoints(name)
                    here = a if s == 1 else b
                anchors[c.id] = here
        self._anchor_cache = anchors
        return anchors

    # -- derived complexes -----------------------------------------------------
    def restrict(self, ids: Iterable[str], name: str = "") -> "LinkExteriorComplex":
        """The subcomplex on ``ids`` in inherited order, without decorations."""
        keep = set(ids)
        levels = [[c for c in level if c.id in keep] for level in self.cells]
        while levels and not levels[-1]:
            levels.pop()
        return LinkExteriorComplex(levels, name=name)

    def reordered(self, orders: Sequence[Sequence[str]]) -> "LinkExteriorComplex":
        """Same complex with each dimension listed in the given order."""
        levels = []
        for k, order in enumerate(orders):
            if sorted(order) != sorted(self.ids(k)):
                raise ComplexError(f"order for dimension {k} is not a permutation")
            levels.append([self.cell(i) for i in order])
        return self._with_cells(levels)

    def _with_cells(self, levels, extra_name: str = "") -> "LinkExteriorComplex":
        return LinkExteriorComplex(
            levels,
            self.boundary_components,
            self.peripheral_loops,
            self.fundamental_class_3,
            self.fundamental_class_2,
            self.name + extra_name,
        )

    def boundary_ids(self) -> set[str]:
        out: set[str] = set()
        for comp in self.boundary_components:
            out.update(comp)
        return out

    def __eq__(self, other):
        return isinstance(other, LinkExteriorComplex) and to_dict(self) == to_dict(other)


# ---------------------------------------------------------------------------
# serialization


def from_dict(doc: Mapping) -> LinkExteriorComplex:
    try:
        raw = doc["cells"]
        levels = []
        for k in range(len(raw)):
            level = []
            for entry in raw[str(k)]:
                terms = tuple(
                    BoundaryTerm(
                        str(t["target"]),
                        int(t["sign"]),
                        tuple((str(n), int(e)) for n, e in t.get("path", [])),
                    )
                    for t in entry.get("boundary", [])
                )
                level.append(Cell(str(entry["id"]), k, terms))
            levels.append(level)
        loops = [
            PeripheralLoop(
                str(p["id"]),
                int(p["component"]),
                tuple(p["cells"]),
                {str(a): int(b) for a, b in p["cycle"].items()},
            )
            for p in doc.get("peripheral_loops", [])
        ]
        return LinkExteriorComplex(
            levels,
            doc.get("boundary_components", []),
            loops,
            {str(a): int(b) for a, b in doc.get("fundamental_class_3", {}).items()},
            {str(a): int(b) for a, b in doc.get("fundamental_class_2", {}).items()},
            name=str(doc.get("name", "")),
        )
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, ComplexError):
            raise
        raise ComplexError(f"malformed complex document: {exc!r}") from exc


def to_dict(c: LinkExteriorComplex) -> dict:
    cells = {}
    for k, level in enumerate(c.cells):
        cells[str(k)] = [
            {
                "id": cell.id,
                "boundary": [
                    {"target": t.target, "sign": t.sign, "path": [[n, e] for n, e in t.path]}
                    for t in cell.boundary
                ],
            }
            for cell in level
        ]
    return {
        "name": c.name,
        "cells": cells,
        "boundary_components": [list(comp) for comp in c.boundary_components],
        "peripheral_loops": [
            {"id": p.id, "component": p.component, "cells": list(p.cells), "cycle": dict(p.cycle)}
            for p in c.peripheral_loops
        ],
        "fundamental_class_3": dict(c.fundamental_class_3),
        "fundamental_class_2": dict(c.fundamental_class_2),
    }


def dumps_complex(c: LinkExteriorComplex) -> str:
    """Canonical text form: one cell per line, one term per line."""
    doc = to_dict(c)
    lines = ["{", f' "name": {json.dumps(doc["name"])},', ' "cells": {']
    dims = list(doc["cells"].items())
    for di, (k, level) in enumerate(dims):
        lines.append(f'  "{k}": [')
        for ci, cell in enumerate(level):
            tail = "," if ci < len(level) - 1 else ""
            if not cell["boundary"]:
                lines.append(f'   {{"id": {json.dumps(cell["id"])}, "boundary": []}}{tail}')
                continue
            lines.append(f'   {{"id": {json.dumps(cell["id"])}, "boundary": [')
            for ti, t in enumerate(cell["boundary"]):
                ttail = "," if ti < len(cell["boundary"]) - 1 else ""
                lines.append(f"    {json.dumps(t)}{ttail}")
            lines.append(f"   ]}}{tail}")
        lines.append("  ]" + ("," if di < len(dims) - 1 else ""))
    lines.append(" },")
    for key in ("boundary_components", "peripheral_loops", "fundamental_class_3"):
        lines.append(f" {json.dumps(key)}: {json.dumps(doc[key])},")
    lines.append(f' "fundamental_class_2": {json.dumps(doc["fundamental_class_2"])}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_complex(text: str) -> LinkExteriorComplex:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ComplexError("complex document must be a JSON object")
    return from_dict(doc)


# ---------------------------------------------------------------------------
# integer chain complex


def integer_boundary(c: LinkExteriorComplex, k: int) -> list[list[int]]:
    """Untwisted boundary C_k -> C_{k-1} as a list of rows (one per (k-1)-cell)."""
    rows_ids = c.ids(k - 1)
    cols_ids = c.ids(k)
    m = [[0] * len(cols_ids) for _ in rows_ids]
    for j, cid in enumerate(cols_ids):
        for t in c.cell(cid).boundary:
            m[c.index(t.target)][j] += t.sign
    return m


def _matmul_int(a, b):
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def smith_invariants(m: list[list[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form of an integer matrix."""
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if done:
                # the pivot must divide every remaining entry
                bad = [(i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p]
                if not bad:
                    break
                i, _ = bad[0]
                a[t] = [x + y for x, y in zip(a[t], a[i])]
                continue
            nz = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            nz += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, pi, pj = min(nz)
            a[t], a[pi] = a[pi], a[t]
            for r in a:
                r[t], r[pj] = r[pj], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def untwisted_homology(c: LinkExteriorComplex, ring: str = "Z") -> list[tuple[int, list[int]]]:
    """(free rank, torsion invariant factors) of H_k for each k."""
    if ring not in ("Z", "Q"):
        raise ValueError("ring must be 'Z' or 'Q'")
    n = c.counts()
    top = len(n)
    inv = [smith_invariants(integer_boundary(c, k)) if 0 < k < top else [] for k in range(top + 1)]
    out = []
    for k in range(top):
        rank_k = len(inv[k])
        rank_k1 = len(inv[k + 1])
        free = n[k] - rank_k - rank_k1
        tors = [d for d in inv[k + 1] if d > 1] if ring == "Z" else []
        out.append((free, tors))
    return out


def _chain_boundary(c: LinkExteriorComplex, chain: Mapping[str, int]) -> dict[str, int]:
    out: dict[str, int] = {}
    for cid, coeff in chain.items():
        for t in c.cell(cid).boundary:
            out[t.target] = out.get(t.target, 0) + coeff * t.sign
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# validation


def validate_complex(c: LinkExteriorComplex) -> ValidationReport:
    rep = ValidationReport()
    one_cells = set(c.ids(1))
    for k, level in enumerate(c.cells):
        for cell in level:
            if k == 0 and cell.boundary:
                rep.add(f"{cell.id}: 0-cell with nonempty boundary")
            for t in cell.boundary:
                try:
                    tgt = c.cell(t.target)
                except ComplexError:
                    rep.add(f"{cell.id}: boundary target {t.target!r} does not exist")
                    continue
                if tgt.dim != k - 1:
                    rep.add(f"{cell.id}: boundary target {t.target} has dimension {tgt.dim}, expected {k - 1}")
                for name, _ in t.path:
                    if name not in one_cells:
                        rep.add(f"{cell.id}: path letter {name!r} is not a 1-cell")
            if k == 1:
                signs = sorted(t.sign for t in cell.boundary)
                if signs != [-1, 1]:
                    rep.add(f"{cell.id}: 1-cell needs exactly one +1 and one -1 term")
                else:
                    for t in cell.boundary:
                        want = ((cell.id, 1),) if t.sign == 1 else ()
                        if t.path != want:
                            rep.add(f"{cell.id}: 1-cell term paths must be [] and [{cell.id}+]")
    if not rep.ok:
        return rep

    # paths must walk from the anchor of a cell to the anchor of each target
    try:
        anchors = c._anchors()
        for k in range(2, len(c.cells)):
            for cell in c.cells[k]:
                for t in cell.boundary:
                    end = c.walk(anchors[cell.id], t.path)
                    if end != anchors[t.target]:
                        rep.add(f"{cell.id}: path to {t.target} ends at {end}, not at its anchor {anchors[t.target]}")
    except ComplexError as exc:
        rep.add(f"path walk failed: {exc}")

    for k in range(2, len(c.cells)):
        prod = _matmul_int(integer_boundary(c, k - 1), integer_boundary(c, k))
        for i, row in enumerate(prod):
            for j, x in enumerate(row):
                if x:
                    rep.add(f"{c.ids(k)[j]}: untwisted boundary of boundary is nonzero on {c.ids(k - 2)[i]}")

    bd = c.boundary_ids()
    for ci, comp in enumerate(c.boundary_components):
        _check_closed(c, comp, f"boundary component {ci}", rep)
        sub = c.restrict(comp)
        if sub.euler_characteristic() != 0:
            rep.add(f"boundary component {ci}: Euler characteristic {sub.euler_characteristic()} != 0")
    for loop in c.peripheral_loops:
        _check_closed(c, loop.cells, f"peripheral loop {loop.id}", rep)
        if not 0 <= loop.component < len(c.boundary_components):
            rep.add(f"peripheral loop {loop.id}: no boundary component {loop.component}")
            continue
        comp = set(c.boundary_components[loop.component])
        if not set(loop.cells) <= comp:
            rep.add(f"peripheral loop {loop.id}: cells leave boundary component {loop.component}")
        if any(cid not in loop.cells or c.cell(cid).dim != 1 for cid in loop.cycle):
            rep.add(f"peripheral loop {loop.id}: cycle must be supported on its 1-cells")
            continue
        if _chain_boundary(c, loop.cycle):
            rep.add(f"peripheral loop {loop.id}: cycle has nonzero boundary")
        elif not _nonzero_in_homology(c.restrict(comp), loop.cycle):
            rep.add(f"peripheral loop {loop.id}: cycle is null-homologous in its boundary component")

    if c.fundamental_class_3:
        for cid in c.fundamental_class_3:
            if cid not in c._by_id or c.cell(cid).dim != 3:
                rep.add(f"fundamental class: {cid!r} is not a 3-cell")
        if rep.ok:
            d = _chain_boundary(c, c.fundamental_class_3)
            off = sorted(k for k in d if k not in bd)
            for cid in off:
                rep.add(f"{cid}: fundamental class is not a relative cycle (interior coefficient {d[cid]})")
            restricted = {k: v for k, v in d.items() if k in bd}
            if restricted != {k: v for k, v in c.fundamental_class_2.items() if v}:
                rep.add("fundamental_class_2 differs from the boundary of fundamental_class_3")
            for ci, comp in enumerate(c.boundary_components):
                part = {k: v for k, v in restricted.items() if k in set(comp)}
                try:
                    gen = fundamental_cycle_search(c, ci)
                except ComplexError as exc:
                    rep.add(f"boundary component {ci}: {exc}")
                    continue
                if part != gen:
                    rep.add(f"boundary component {ci}: boundary of the fundamental class is not a generator of H2")
    return rep


def _check_closed(c, ids, label, rep):
    keep = set(ids)
    for cid in ids:
        if cid not in c._by_id:
            rep.add(f"{label}: unknown cell {cid!r}")
            continue
        for t in c.cell(cid).boundary:
            if t.target not in keep:
                rep.add(f"{label}: {cid} has boundary cell {t.target} outside the subcomplex")
            for name, _ in t.path:
                if name not in keep:
                    rep.add(f"{label}: {cid} has path letter {name} outside the subcomplex")


def _nonzero_in_homology(sub: LinkExteriorComplex, cycle: Mapping[str, int]) -> bool:
    d2 = integer_boundary(sub, 2) if len(sub.cells) > 2 else [[] for _ in sub.ids(1)]
    v = [cycle.get(cid, 0) for cid in sub.ids(1)]
    base = smith_invariants(d2) if d2 and d2[0] else []
    aug = [row + [x] for row, x in zip(d2, v)] if d2 and d2[0] else [[x] for x in v]
    return len(smith_invariants(aug)) > len(base)


def fundamental_cycle_search(c: LinkExteriorComplex, component: int) -> dict[str, int]:
    """Generator of H_2 of a closed surface component, signed like the stored class."""
    if not 0 <= component < len(c.boundary_components):
        raise ComplexError(f"no boundary component {component}")
    sub = c.restrict(c.boundary_components[component])
    h = untwisted_homology(sub, "Z")
    if h[0][0] != 1:
        raise ComplexError("component is not connected")
    if len(h) < 3 or h[2] != (1, []):
        raise ComplexError("H2 of the component is not Z")
    gen = _integer_kernel_vector(integer_boundary(sub, 2))
    ids = sub.ids(2)
    cycle = {cid: x for cid, x in zip(ids, gen) if x}
    ref = c.fundamental_class_2
    dot = sum(cycle.get(k, 0) * v for k, v in ref.items())
    if dot < 0:
        cycle = {k: -v for k, v in cycle.items()}
    return cycle


def _integer_kernel_vector(m: list[list[int]]) -> list[int]:
    """Primitive integer generator of a rank-one kernel."""
    from fractions import Fraction
    from math import gcd, lcm

    cols = len(m[0])
    rows = [[Fraction(x) for x in r] for r in m]
    pivots = []
    r = 0
    for col in range(cols):
        p = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        rows[r] = [x / rows[r][col] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [j for j in range(cols) if j not in pivots]
    if len(free) != 1:
        raise ComplexError(f"kernel has rank {len(free)}, expected 1")
    v = [Fraction(0)] * cols
    v[free[0]] = Fraction(1)
    for i, p in enumerate(pivots):
        v[p] = -rows[i][free[0]]
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints]


# ---------------------------------------------------------------------------
# elementary expansions


@dataclass(frozen=True)
class Expansion:
    """Record of one elementary expansion.

    ``copies`` maps each new 1-cell to the old 1-cell whose monodromy it
    inherits, so a local system extends over the expanded complex.
    """

    complex: LinkExteriorComplex
    free_face: str
    new_cell: str
    incidence: int
    copies: Mapping[str, str]


def elementary_expansion(c: LinkExteriorComplex, dim: int, along: str, suffix: str = "'") -> Expansion:
    """Attach a ``dim``-cell and its free ``(dim-1)``-face along an interior cell.

    ``dim = 2``: ``along`` is an interior 1-cell e; adds a parallel edge e'
    and a bigon with boundary e - e'.
    ``dim = 3``: ``along`` is an interior 2-cell H; adds a parallel copy H'
    and a 3-ball with boundary H' - H.
    """
    old = c.cell(along)
    if along in c.boundary_ids():
        raise ComplexError(f"{along} lies on the boundary; expansions must stay in the interior")
    if old.dim != dim - 1:
        raise ComplexError(f"a {dim}-dimensional expansion needs a {dim - 1}-cell, got {along}")
    face_id = along + suffix
    ball_id = ("D" if dim == 2 else "P") + "_" + along
    for cid in (face_id, ball_id):
        if cid in c._by_id:
            raise ComplexError(f"cell id {cid!r} already exists")
    levels = [list(level) for level in c.cells]
    while len(levels) <= dim:
        levels.append([])
    copies: dict[str, str] = {}
    if dim == 2:
        start, end = c.endpoints(along)
        face = Cell(face_id, 1, (BoundaryTerm(end, 1, ((face_id, 1),)), BoundaryTerm(start, -1, ())))
        ball = Cell(ball_id, 2, (
            BoundaryTerm(along, 1, ()),
            BoundaryTerm(face_id, -1, ((along, 1), (face_id, -1))),
        ))
        copies[face_id] = along
        incidence = -1
    elif dim == 3:
        face = Cell(face_id, 2, old.boundary)
        ball = Cell(ball_id, 3, (BoundaryTerm(face_id, 1, ()), BoundaryTerm(along, -1, ())))
        incidence = 1
    else:
        raise ComplexError("only 2- and 3-dimensional expansions are supported")
    levels[dim - 1].append(face)
    levels[dim].append(ball)
    new = c._with_cells(levels)
    return Expansion(new, face_id, ball_id, incidence, copies)
