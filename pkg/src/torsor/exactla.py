"""Exact dense linear algebra over a number field.

Vectors are column vectors given as tuples of field elements.  All
elimination pivots on the first nonzero entry scanning top to bottom,
which keeps every result deterministic.
"""
from __future__ import annotations

from itertools import permutations
from typing import Iterable, Sequence

from .numfield import FieldElement, FieldMismatchError, NumberField

__all__ = [
    "LinearAlgebraError",
    "Matrix",
    "VectorFamily",
    "basis_change_det",
    "determinant",
    "image_pivot_columns",
    "kernel_basis",
    "leibniz_determinant",
    "rref",
    "solve",
]


class LinearAlgebraError(ValueError):
    pass


class Matrix:
    """A rows x cols matrix over one number field, stored row-major."""

    __slots__ = ("field", "rows", "cols", "_data")

    def __init__(self, field: NumberField, rows: int, cols: int, entries: Sequence):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        data = []
        for r in range(rows):
            data.append([field(x) for x in entries[r * cols:(r + 1) * cols]])
        self.field = field
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def _wrap(cls, field: NumberField, data: list[list[FieldElement]], cols: int) -> "Matrix":
        m = cls.__new__(cls)
        m.field = field
        m.rows = len(data)
        m.cols = cols
        m._data = data
        return m

    @classmethod
    def from_rows(cls, field: NumberField, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls._wrap(field, [[field(x) for x in r] for r in rows], cols)

    @classmethod
    def zeros(cls, field: NumberField, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls._wrap(field, [[z] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, field: NumberField, n: int) -> "Matrix":
        m = cls.zeros(field, n, n)
        one = field.one
        for i in range(n):
            m._data[i][i] = one
        return m

    @classmethod
    def from_columns(cls, field: NumberField, columns: Sequence[Sequence], rows: int) -> "Matrix":
        data = [[field(col[r]) for col in columns] for r in range(rows)]
        return cls._wrap(field, data, len(columns))

    # -- access --------------------------------------------------------------
    @property
    def entries(self) -> list[FieldElement]:
        return [x for row in self._data for x in row]

    def __getitem__(self, idx):
        r, c = idx
        return self._data[r][c]

    def row(self, r: int) -> tuple:
        return tuple(self._data[r])

    def column(self, c: int) -> tuple:
        return tuple(row[c] for row in self._data)

    def to_rows(self) -> list[list[FieldElement]]:
        return [list(r) for r in self._data]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.field == other.field
            and self._data == other._data
        )

    def __hash__(self):
        return hash((self.shape, tuple(map(tuple, self._data))))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {[[str(x) for x in r] for r in self._data]})"

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._data]

    # -- arithmetic ------------------------------------------------------------
    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatchError("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise LinearAlgebraError("shape mismatch in addition")
        return Matrix._wrap(
            self.field,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
            self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix._wrap(self.field, [[c * a for a in r] for r in self._data], self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise LinearAlgebraError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.field.zero
        out = []
        odata = other._data
        for row in self._data:
            acc = [zero] * other.cols
            for k, a in enumerate(row):
                if a:
                    orow = odata[k]
                    for j, b in enumerate(orow):
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix._wrap(self.field, out, other.cols)

    def apply(self, v: Sequence[FieldElement]) -> tuple:
        if len(v) != self.cols:
            raise LinearAlgebraError("vector length mismatch")
        zero = self.field.zero
        out = []
        for row in self._data:
            acc = zero
            for a, b in zip(row, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Matrix":
        data = [[self._data[r][c] for r in range(self.rows)] for c in range(self.cols)]
        return Matrix._wrap(self.field, data, self.rows)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise LinearAlgebraError("inverse of a non-square matrix")
        n = self.rows
        aug = Matrix._wrap(
            self.field,
            [list(r) + [self.field.one if i == j else self.field.zero for j in range(n)]
             for i, r in enumerate(self._data)],
            2 * n,
        )
        red, pivots, _ = rref(aug)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix._wrap(self.field, [r[n:] for r in red._data], n)

    def is_zero(self) -> bool:
        return not any(x for r in self._data for x in r)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._wrap(self.field, [r[c0:c1] for r in self._data[r0:r1]], c1 - c0)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.rows != other.rows:
            raise LinearAlgebraError("row count mismatch in hstack")
        return Matrix._wrap(
            self.field, [a + b for a, b in zip(self._data, other._data)], self.cols + other.cols
        )

    def select_rows(self, idx: Iterable[int]) -> "Matrix":
        return Matrix._wrap(self.field, [list(self._data[i]) for i in idx], self.cols)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._wrap(self.field, [[r[j] for j in idx] for r in self._data], len(idx))


class VectorFamily:
    """An ordered list of vectors in K^ambient_dim."""

    __slots__ = ("field", "ambient_dim", "vectors")

    def __init__(self, field: NumberField, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            vecs.append(tuple(field(x) for x in v))
        self.field = field
        self.ambient_dim = ambient_dim
        self.vectors = vecs

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    def __add__(self, other: "VectorFamily") -> "VectorFamily":
        if other.ambient_dim != self.ambient_dim:
            raise LinearAlgebraError("ambient dimension mismatch")
        out = VectorFamily(self.field, self.ambient_dim)
        out.vectors = self.vectors + other.vectors
        return out

    def as_matrix(self) -> Matrix:
        """The vectors as the columns of a matrix."""
        return Matrix.from_columns(self.field, self.vectors, self.ambient_dim)

    def __repr__(self):
        return f"VectorFamily(dim={self.ambient_dim}, {[[str(x) for x in v] for v in self.vectors]})"


def _rref_rows(field: NumberField, rows: list[list], cols: int):
    """In-place reduction of a list of rows; returns (rows, pivots).

    Pivots are searched in the first ``cols`` columns only; any further
    (augmented) columns are carried along by the row operations.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(cols):
        if r == nrows:
            break
        p = None
        for i in range(r, nrows):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        inv = prow[c].inverse()
        if inv != 1:
            prow = [x * inv if x else x for x in prow]
            rows[r] = prow
        nz = [j for j in range(c, len(prow)) if prow[j]]
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f:
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    rows = [list(r) for r in m._data]
    rows, pivots = _rref_rows(m.field, rows, m.cols)
    return Matrix._wrap(m.field, rows, m.cols), pivots, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


def kernel_basis(m: Matrix) -> VectorFamily:
    """Basis of the right null space, one vector per free column."""
    red, pivots, rk = rref(m)
    field = m.field
    free = [c for c in range(m.cols) if c not in set(pivots)]
    vecs = []
    zero, one = field.zero, field.one
    for f in free:
        v = [zero] * m.cols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -red._data[i][f]
        vecs.append(v)
    return VectorFamily(field, m.cols, vecs)


def image_pivot_columns(m: Matrix) -> tuple[VectorFamily, VectorFamily]:
    """Pivot columns of ``m`` and the standard basis vectors mapping onto them."""
    _, pivots, _ = rref(m)
    field = m.field
    image = VectorFamily(field, m.rows, [m.column(p) for p in pivots])
    zero, one = field.zero, field.one
    pre = VectorFamily(
        field, m.cols, [[one if j == p else zero for j in range(m.cols)] for p in pivots]
    )
    return image, pre


def determinant(m: Matrix) -> FieldElement:
    if m.rows != m.cols:
        raise LinearAlgebraError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    field = m.field
    n = m.rows
    rows = [list(r) for r in m._data]
    det = field.one
    for c in range(n):
        p = None
        for i in range(c, n):
            if rows[i][c]:
                p = i
                break
        if p is None:
            return field.zero
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        prow = rows[c]
        piv = prow[c]
        det = det * piv
        inv = piv.inverse()
        nz = [j for j in range(c + 1, n) if prow[j]]
        for i in range(c + 1, n):
            row = rows[i]
            f = row[c]
            if f:
                f = f * inv
                for j in nz:
                    row[j] = row[j] - f * prow[j]
    return det


def leibniz_determinant(m: Matrix) -> FieldElement:
    """Permutation-sum determinant; only sensible for tiny matrices."""
    if m.rows != m.cols:
        raise LinearAlgebraError("determinant of a non-square matrix")
    n = m.rows
    total = m.field.zero
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = m.field.one
        for i in range(n):
            term = term * m._data[i][perm[i]]
        total = total + term if sign > 0 else total - term
    return total


def solve(m: Matrix, rhs: VectorFamily) -> VectorFamily:
    """One particular solution per right-hand side, free variables set to zero."""
    if rhs.ambient_dim != m.rows:
        raise LinearAlgebraError("right-hand side length does not match row count")
    field = m.field
    k = len(rhs)
    rows = [list(m._data[i]) + [v[i] for v in rhs.vectors] for i in range(m.rows)]
    rows, pivots = _rref_rows(field, rows, m.cols)
    rk = len(pivots)
    for i in range(rk, m.rows):
        if any(rows[i][m.cols + j] for j in range(k)):
            raise LinearAlgebraError("inconsistent linear system")
    zero = field.zero
    out = []
    for j in range(k):
        x = [zero] * m.cols
        for i, p in enumerate(pivots):
            x[p] = rows[i][m.cols + j]
        out.append(x)
    return VectorFamily(field, m.cols, out)


def basis_change_det(u: VectorFamily, v: VectorFamily) -> FieldElement:
    """Determinant of the coordinates of ``u`` in the basis ``v``.

    Returns zero when ``u`` is dependent.  Raises if ``v`` is dependent or
    some member of ``u`` lies outside the span of ``v``.
    """
    if len(u) != len(v):
        raise LinearAlgebraError("families of different cardinality")
    if u.ambient_dim != v.ambient_dim:
        raise LinearAlgebraError("families in different ambient spaces")
    n = len(v)
    field = v.field
    if n == 0:
        return field.one
    vm = v.as_matrix()
    if rank(vm) < n:
        raise LinearAlgebraError("reference family is not linearly independent")
    try:
        coords = solve(vm, u)
    except LinearAlgebraError as exc:
        raise LinearAlgebraError("a vector lies outside the span of the reference basis") from exc
    return determinant(coords.as_matrix())
