"""Marked local systems and the representations that act on them.

A marked local system assigns an invertible matrix to every oriented
1-cell.  Words are evaluated right to left: walking a_1 then a_2 gives
``mon(a_2) @ mon(a_1)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable, Mapping, Sequence

from .exactla import Matrix, kernel_basis, rref
from .numfield import FieldElement, NumberField

__all__ = [
    "GROUP_TAGS",
    "LocalSystemError",
    "MarkedLocalSystem",
    "Representation",
    "adjoint_rep_pgsp4",
    "change_of_basis",
    "direct_sum",
    "exponents",
    "principal_embedding_c2",
    "pullback_local_system",
    "sl2_irrep",
    "sp4_basis",
    "symplectic_form",
    "trivial_rep",
    "validate_gsp",
    "word_monodromy",
]

GROUP_TAGS = ("GL", "GSp(4)", "PGL(2)", "PGSp(4)")


class LocalSystemError(ValueError):
    pass


def symplectic_form(field: NumberField) -> Matrix:
    """The anti-diagonal form pairing coordinates 1 with 4 and 2 with 3."""
    return Matrix.from_rows(field, [[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])


def validate_gsp(g: Matrix, lam) -> bool:
    """Exact check of g^T J g = lam J."""
    if g.shape != (4, 4):
        return False
    J = symplectic_form(g.field)
    return g.transpose() @ J @ g == J.scale(lam)


def similitude_factor(g: Matrix) -> FieldElement | None:
    """The multiplier of a symplectic similitude, or None if g is not one."""
    if g.shape != (4, 4):
        return None
    J = symplectic_form(g.field)
    lam = (g.transpose() @ J @ g)[0, 3]
    return lam if lam and validate_gsp(g, lam) else None


@dataclass
class MarkedLocalSystem:
    field: NumberField
    group_tag: str
    monodromy: dict[str, Matrix]
    similitude: dict[str, FieldElement] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        tag = self.group_tag
        if not (tag in GROUP_TAGS or re.fullmatch(r"GL\(\d+\)", tag)):
            raise LocalSystemError(f"unknown group tag {tag!r}")
        dims = {m.shape for m in self.monodromy.values()}
        if len(dims) > 1:
            raise LocalSystemError("monodromy matrices have different shapes")
        self._inverse: dict[str, Matrix] = {}
        for cid, m in self.monodromy.items():
            if m.rows != m.cols:
                raise LocalSystemError(f"{cid}: monodromy is not square")
            if m.field != self.field:
                raise LocalSystemError(f"{cid}: monodromy over the wrong field")
            try:
                self._inverse[cid] = m.inverse()
            except ZeroDivisionError:
                raise LocalSystemError(f"{cid}: monodromy is singular") from None
        if tag in ("GSp(4)", "PGSp(4)"):
            for cid, m in self.monodromy.items():
                lam = self.similitude.get(cid)
                if lam is None:
                    lam = similitude_factor(m)
                    if lam is None:
                        raise LocalSystemError(f"{cid}: not a symplectic similitude")
                    self.similitude[cid] = lam
                elif not validate_gsp(m, lam):
                    raise LocalSystemError(f"{cid}: g^T J g != lambda J for the stored lambda")
        m = re.fullmatch(r"GL\((\d+)\)", tag)
        if m and dims and dims != {(int(m.group(1)),) * 2}:
            raise LocalSystemError(f"{tag} system with matrices of shape {dims.pop()}")

    @property
    def rank(self) -> int:
        m = next(iter(self.monodromy.values()))
        return m.rows

    @property
    def projective(self) -> bool:
        return self.group_tag.startswith("PG")

    def letter(self, cid: str, exponent: int) -> Matrix:
        try:
            return self.monodromy[cid] if exponent == 1 else self._inverse[cid]
        except KeyError:
            raise LocalSystemError(f"no monodromy for 1-cell {cid!r}") from None

    def with_monodromy(self, monodromy: Mapping[str, Matrix], **kw) -> "MarkedLocalSystem":
        return MarkedLocalSystem(
            self.field,
            kw.get("group_tag", self.group_tag),
            dict(monodromy),
            dict(kw.get("similitude", {})),
            kw.get("name", self.name),
        )


def word_monodromy(ls: MarkedLocalSystem, word: Sequence[tuple[str, int]]) -> Matrix:
    """mon(a_k)^{s_k} ... mon(a_1)^{s_1} for the word a_1^{s_1} ... a_k^{s_k}."""
    out = Matrix.identity(ls.field, ls.rank)
    for cid, s in word:
        out = ls.letter(cid, s) @ out
    return out


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class Representation:
    """A rule turning group representatives into dim x dim matrices.

    ``source_dim`` is the size of the matrices it accepts; ``projective_ok``
    says whether it is insensitive to scalar multiples of its input.
    """

    name: str
    dim: int
    source_dim: int
    projective_ok: bool
    _apply: Callable[[Matrix], Matrix] = field(repr=False, compare=False)

    def apply(self, g: Matrix) -> Matrix:
        if g.shape != (self.source_dim, self.source_dim):
            raise LocalSystemError(
                f"{self.name} expects {self.source_dim}x{self.source_dim} input, got {g.shape}"
            )
        return self._apply(g)

    __call__ = apply


def trivial_rep(r: int, source_dim: int) -> Representation:
    return Representation(
        f"trivial({r})", r, source_dim, True, lambda g: Matrix.identity(g.field, r)
    )


def identity_rep(n: int) -> Representation:
    return Representation(f"standard({n})", n, n, False, lambda g: g)


@lru_cache(maxsize=8)
def sp4_basis(field: NumberField) -> tuple[tuple[Matrix, ...], tuple[int, ...]]:
    """Ordered basis of sp_4 and the matrix positions that read off coordinates.

    The basis is the kernel of X -> X^T J + J X on row-major 4x4 matrices,
    one element per free column of the reduced echelon form.  Each basis
    element has a 1 at its own free position and 0 at the others, so the
    coordinates of any X in sp_4 are its entries at those positions.
    """
    J = symplectic_form(field)
    rows = []
    for r in range(4):
        for c in range(4):
            # (X^T J + J X)[r, c] as a linear form in the entries X[i, j]
            coeffs = [field.zero] * 16
            for k in range(4):
                if J[k, c]:
                    coeffs[k * 4 + r] = coeffs[k * 4 + r] + J[k, c]
                if J[r, k]:
                    coeffs[k * 4 + c] = coeffs[k * 4 + c] + J[r, k]
            rows.append(coeffs)
    ker = kernel_basis(Matrix.from_rows(field, rows))
    _, pivots, _ = rref(Matrix.from_rows(field, rows))
    free = tuple(j for j in range(16) if j not in pivots)
    basis = tuple(Matrix(field, 4, 4, list(v)) for v in ker.vectors)
    return basis, free


def sp4_coordinates(X: Matrix) -> list[FieldElement]:
    _, free = sp4_basis(X.field)
    return [X[p // 4, p % 4] for p in free]


def sp4_from_coordinates(field: NumberField, coords: Sequence) -> Matrix:
    basis, _ = sp4_basis(field)
    out = Matrix.zeros(field, 4, 4)
    for c, X in zip(coords, basis):
        if c:
            out = out + X.scale(c)
    return out


def _adjoint_apply(g: Matrix) -> Matrix:
    if similitude_factor(g) is None:
        raise LocalSystemError("adjoint representation needs a symplectic similitude")
    field = g.field
    basis, free = sp4_basis(field)
    ginv = g.inverse()
    cols = []
    for X in basis:
        Y = g @ X @ ginv
        cols.append([Y[p // 4, p % 4] for p in free])
    return Matrix.from_columns(field, cols, 10)


def adjoint_rep_pgsp4() -> Representation:
    """X -> g X g^{-1} on sp_4, in the basis of :func:`sp4_basis`."""
    return Representation("adjoint-pgsp4", 10, 4, True, _adjoint_apply)


def sl2_irrep(n: int) -> Representation:
    """The n-dimensional irreducible on binary forms of degree n-1.

    Basis: x^(n-1-k) y^k for k = 0..n-1, where g sends x to its first
    column and y to its second.  For odd n the result is divided by
    det(g)^((n-1)/2), which makes it insensitive to scalars.
    """
    if n < 1:
        raise ValueError("sl2_irrep needs n >= 1")

    def apply(g: Matrix) -> Matrix:
        field = g.field
        a, b, c, d = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
        deg = n - 1
        cols = []
        for k in range(n):
            # (a x + c y)^(deg-k) (b x + d y)^k
            p1 = _binom_power(a, c, deg - k, field)
            p2 = _binom_power(b, d, k, field)
            col = [field.zero] * n
            for i, u in enumerate(p1):
                if u:
                    for j, v in enumerate(p2):
                        if v:
                            col[i + j] = col[i + j] + u * v
            cols.append(col)
        m = Matrix.from_columns(field, cols, n)
        if n % 2 == 1 and n > 1:
            det = a * d - b * c
            if not det:
                raise LocalSystemError("singular input to sl2_irrep")
            m = m.scale(det ** (-(deg // 2)))
        return m

    return Representation(f"sl2-irrep({n})", n, 2, n % 2 == 1, apply)


def _binom_power(p, q, m: int, field: NumberField) -> list[FieldElement]:
    """Coefficients of y^i in (p x + q y)^m."""
    return [p ** (m - i) * q ** i * comb(m, i) for i in range(m + 1)]


# ---------------------------------------------------------------------------
# principal embedding PGL_2 -> PGSp_4


def _omega(field: NumberField) -> FieldElement:
    if field.min_poly != NumberField([1, -1, 1]).min_poly:
        raise LocalSystemError("the principal embedding is defined over Q[w]/(w^2 - w + 1)")
    return field.gen


def _nilpotent_images(field: NumberField) -> tuple[Matrix, Matrix]:
    w = _omega(field)
    wi = w.inverse()
    z = field.zero
    ne = Matrix.from_rows(field, [
        [z, w * "9/4", z, z],
        [z, z, wi * "-16/9", z],
        [z, z, z, w * "9/4"],
        [z, z, z, z],
    ])
    nf = Matrix.from_rows(field, [
        [z, z, z, z],
        [wi * "4/3", z, z, z],
        [z, w * "-9/4", z, z],
        [z, z, wi * "4/3", z],
    ])
    return ne, nf


def _exp_nilpotent(n: Matrix, t: FieldElement) -> Matrix:
    # N^4 = 0 for the images above, so the series stops at the cubic term
    field = n.field
    tn = n.scale(t)
    tn2 = tn @ tn
    tn3 = tn2 @ tn
    return Matrix.identity(field, 4) + tn + tn2.scale("1/2") + tn3.scale("1/6")


def principal_embedding_c2(g: Matrix) -> Matrix:
    """Group-level image of a 2x2 matrix under the principal embedding.

    Factors g = L(c/a) diag(a, det/a) U(b/a) and maps each factor through
    the exponential of the corresponding nilpotent or torus image.  The
    result is defined up to a scalar.
    """
    if g.shape != (2, 2):
        raise LocalSystemError("principal embedding needs a 2x2 matrix")
    field = g.field
    a, b, c, d = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    det = a * d - b * c
    if not det:
        raise LocalSystemError("principal embedding of a singular matrix")
    ne, nf = _nilpotent_images(field)
    if not a:
        um = Matrix.from_rows(field, [[1, -1], [0, 1]])
        return _exp_nilpotent(ne, field.one) @ principal_embedding_c2(um @ g)
    # diag(a, det/a) is diag(s, 1) up to scalar with s = a^2 / det
    s = a * a / det
    torus = Matrix.from_rows(field, [
        [s ** 3, 0, 0, 0], [0, s ** 2, 0, 0], [0, 0, s, 0], [0, 0, 0, 1],
    ])
    return _exp_nilpotent(nf, c / a) @ torus @ _exp_nilpotent(ne, b / a)


# ---------------------------------------------------------------------------
# building new local systems


def pullback_local_system(ls: MarkedLocalSystem, rep: Representation) -> MarkedLocalSystem:
    """The GL(dim) system rep o monodromy."""
    if ls.projective and not rep.projective_ok:
        raise LocalSystemError(f"{rep.name} does not descend to {ls.group_tag}")
    mon = {cid: rep.apply(m) for cid, m in ls.monodromy.items()}
    return MarkedLocalSystem(ls.field, f"GL({rep.dim})", mon, name=f"{rep.name}({ls.name})")


def principal_embed_system(ls: MarkedLocalSystem) -> MarkedLocalSystem:
    if ls.group_tag != "PGL(2)":
        raise LocalSystemError("principal embedding expects a PGL(2) system")
    mon = {cid: principal_embedding_c2(m) for cid, m in ls.monodromy.items()}
    return MarkedLocalSystem(ls.field, "PGSp(4)", mon, name=f"iota({ls.name})")


def direct_sum(a: MarkedLocalSystem, b: MarkedLocalSystem) -> MarkedLocalSystem:
    if a.field != b.field or set(a.monodromy) != set(b.monodromy):
        raise LocalSystemError("direct sum needs systems over one field on the same 1-cells")
    n, m = a.rank, b.rank
    mon = {}
    for cid in a.monodromy:
        rows = [list(r) + [a.field.zero] * m for r in a.monodromy[cid].to_rows()]
        rows += [[a.field.zero] * n + list(r) for r in b.monodromy[cid].to_rows()]
        mon[cid] = Matrix.from_rows(a.field, rows)
    return MarkedLocalSystem(a.field, f"GL({n + m})", mon, name=f"{a.name}+{b.name}")


def change_of_basis(ls: MarkedLocalSystem, p: Matrix) -> MarkedLocalSystem:
    """Conjugate every monodromy by p (new coordinates x = p y)."""
    pinv = p.inverse()
    mon = {cid: pinv @ m @ p for cid, m in ls.monodromy.items()}
    return MarkedLocalSystem(ls.field, f"GL({ls.rank})", mon, name=ls.name)


def extend_along(ls: MarkedLocalSystem, copies: Mapping[str, str]) -> MarkedLocalSystem:
    """Give each new 1-cell the monodromy of the 1-cell it copies."""
    mon = dict(ls.monodromy)
    for new, old in copies.items():
        mon[new] = ls.monodromy[old]
    return MarkedLocalSystem(ls.field, ls.group_tag, mon, dict(ls.similitude), ls.name)


# ---------------------------------------------------------------------------
# exponents of simple Lie algebras


def exponents(lie_type: str) -> tuple[int, ...]:
    """Exponents of a simple Lie algebra given as e.g. ``"C2"`` or ``"E8"``."""
    m = re.fullmatch(r"([A-G])_?(\d+)", lie_type.strip())
    if not m:
        raise ValueError(f"cannot parse Lie type {lie_type!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "A" and n >= 1:
        return tuple(range(1, n + 1))
    if kind in ("B", "C") and n >= 2:
        return tuple(range(1, 2 * n, 2))
    if kind == "D" and n >= 4:
        return tuple(sorted(list(range(1, 2 * n - 2, 2)) + [n - 1]))
    exceptional = {
        ("E", 6): (1, 4, 5, 7, 8, 11),
        ("E", 7): (1, 5, 7, 9, 11, 13, 17),
        ("E", 8): (1, 7, 11, 13, 17, 19, 23, 29),
        ("F", 4): (1, 5, 7, 11),
        ("G", 2): (1, 5),
    }
    if (kind, n) in exceptional:
        return exceptional[(kind, n)]
    raise ValueError(f"no simple Lie algebra of type {lie_type!r}")
