import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import system
from torsor.exactla import Matrix, rank
from torsor.localsys import (
    LocalSystemError,
    MarkedLocalSystem,
    adjoint_rep_pgsp4,
    change_of_basis,
    direct_sum,
    exponents,
    principal_embed_system,
    principal_embedding_c2,
    sl2_irrep,
    sp4_basis,
    sp4_coordinates,
    sp4_from_coordinates,
    symplectic_form,
    validate_gsp,
    word_monodromy,
)
from torsor.numfield import QQ, NumberField
from torsor.torsion import commutant_dimension

K2 = NumberField([1, -1, 1])

small = st.integers(-3, 3)


def gl2(field=QQ):
    return st.tuples(small, small, small, small).filter(lambda t: t[0] * t[3] - t[1] * t[2] != 0).map(
        lambda t: Matrix.from_rows(field, [[t[0], t[1]], [t[2], t[3]]])
    )


def bracket(x, y):
    return x @ y - y @ x


def proportional(a, b):
    """a = c b for a nonzero scalar c."""
    flat_a, flat_b = a.entries, b.entries
    k = next(i for i, x in enumerate(flat_b) if x)
    c = flat_a[k] / flat_b[k]
    return bool(c) and all(x == c * y for x, y in zip(flat_a, flat_b))


# --- symplectic similitudes --------------------------------------------------


@pytest.mark.parametrize("name", ["iota_geom", "p_exotic"])
def test_shipped_monodromies_are_similitudes(name):
    ls = system(name)
    for cid, g in ls.monodromy.items():
        assert validate_gsp(g, ls.similitude[cid]), cid


def test_printed_sign_in_parabolic_matrix_is_not_a_similitude():
    g = system("iota_geom").monodromy["e2"]
    rows = [list(r) for r in g.to_rows()]
    rows[1][2] = -rows[1][2]
    flipped = Matrix.from_rows(K2, rows)
    assert not validate_gsp(flipped, K2.one)
    with pytest.raises(LocalSystemError):
        MarkedLocalSystem(K2, "PGSp(4)", {"e2": flipped})


def test_singular_monodromy_rejected():
    with pytest.raises(LocalSystemError):
        MarkedLocalSystem(QQ, "GL(2)", {"a": Matrix.from_rows(QQ, [[1, 2], [2, 4]])})


def test_wrong_similitude_rejected():
    g = system("iota_geom").monodromy["e0"]
    with pytest.raises(LocalSystemError):
        MarkedLocalSystem(K2, "PGSp(4)", {"e0": g}, {"e0": K2("2")})


# --- principal embedding -----------------------------------------------------


def test_principal_embedding_reproduces_shipped_image():
    image = principal_embed_system(system("geom"))
    target = system("iota_geom")
    for cid, g in target.monodromy.items():
        assert image.monodromy[cid] == g, cid


@settings(max_examples=40, deadline=None)
@given(gl2(K2), gl2(K2))
def test_principal_embedding_is_projectively_multiplicative(g, h):
    prod = principal_embedding_c2(g) @ principal_embedding_c2(h)
    assert proportional(prod, principal_embedding_c2(g @ h))
    lam = (principal_embedding_c2(g).transpose() @ symplectic_form(K2) @ principal_embedding_c2(g))[0, 3]
    assert validate_gsp(principal_embedding_c2(g), lam)


# --- sl2 irreducibles --------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(gl2(), gl2(), st.integers(1, 7))
def test_sl2_irrep_is_a_homomorphism(g, h, n):
    rep = sl2_irrep(n)
    assert rep(g @ h) == rep(g) @ rep(h)


@settings(max_examples=30, deadline=None)
@given(gl2(), st.sampled_from([3, 5, 7]), st.integers(1, 5))
def test_odd_irreps_ignore_scalars(g, n, lam):
    rep = sl2_irrep(n)
    assert rep(g.scale(lam)) == rep(g)


@settings(max_examples=30, deadline=None)
@given(gl2())
def test_v3_character_formula(g):
    # trace of the 3-dimensional irreducible equals tr(g)^2 / det(g) - 1
    tr = g[0, 0] + g[1, 1]
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    v3 = sl2_irrep(3)(g)
    assert v3[0, 0] + v3[1, 1] + v3[2, 2] == tr * tr / det - 1


def test_adjoint_of_principal_image_splits_as_v3_plus_v7_characters():
    g = system("geom").monodromy["e1"] @ system("geom").monodromy["E0"]
    ad = adjoint_rep_pgsp4()(principal_embedding_c2(g))
    v3, v7 = sl2_irrep(3)(g), sl2_irrep(7)(g)

    def trace(m):
        return sum((m[i, i] for i in range(m.rows)), m.field.zero)

    assert trace(ad) == trace(v3) + trace(v7)


# --- adjoint representation --------------------------------------------------


def test_sp4_basis():
    basis, free = sp4_basis(QQ)
    J = symplectic_form(QQ)
    assert len(basis) == 10 and len(free) == 10
    for x in basis:
        assert (x.transpose() @ J + J @ x).is_zero()
    assert rank(Matrix.from_columns(QQ, [tuple(x.entries) for x in basis], 16)) == 10


@settings(max_examples=20, deadline=None)
@given(st.lists(small, min_size=10, max_size=10), st.lists(small, min_size=10, max_size=10))
def test_adjoint_preserves_bracket(cx, cy):
    ls = system("iota_geom")
    g = ls.monodromy["E0"] @ ls.monodromy["e1"]
    ad = adjoint_rep_pgsp4()(g)
    x = sp4_from_coordinates(K2, [K2(c) for c in cx])
    y = sp4_from_coordinates(K2, [K2(c) for c in cy])
    assert sp4_coordinates(sp4_from_coordinates(K2, sp4_coordinates(x))) == sp4_coordinates(x)

    def ad_of(m):
        return sp4_from_coordinates(K2, ad.apply(sp4_coordinates(m)))

    assert ad_of(bracket(x, y)) == bracket(ad_of(x), ad_of(y))


def test_adjoint_is_a_homomorphism_and_ignores_scalars():
    ls = system("p_exotic")
    a, b = ls.monodromy["E0"], ls.monodromy["e4"]
    ad = adjoint_rep_pgsp4()
    assert ad(a @ b) == ad(a) @ ad(b)
    assert ad(a.scale(ls.field("3"))) == ad(a)


def test_adjoint_needs_a_similitude():
    with pytest.raises(LocalSystemError):
        adjoint_rep_pgsp4()(Matrix.from_rows(QQ, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))


# --- exponents ---------------------------------------------------------------

DIMENSIONS = {"A1": 3, "A3": 15, "B3": 21, "C2": 10, "C4": 36, "D4": 28, "D5": 45,
              "E6": 78, "E7": 133, "E8": 248, "F4": 52, "G2": 14}


@pytest.mark.parametrize("lie_type,dim", sorted(DIMENSIONS.items()))
def test_exponents_sum_to_dimension(lie_type, dim):
    assert sum(2 * m + 1 for m in exponents(lie_type)) == dim


def test_exponent_values():
    assert exponents("C2") == (1, 3)
    assert exponents("A_1") == (1,)
    assert exponents("D4") == (1, 3, 3, 5)
    with pytest.raises(ValueError):
        exponents("C1")


# --- building systems --------------------------------------------------------


def test_word_monodromy_reads_right_to_left():
    ls = system("geom")
    m = word_monodromy(ls, [("E0", 1), ("e1", -1)])
    assert m == ls.letter("e1", -1) @ ls.monodromy["E0"]


def test_direct_sum_and_change_of_basis():
    ls = system("geom")
    v3 = ls.monodromy["E0"]
    s = direct_sum(MarkedLocalSystem(K2, "GL(2)", {"E0": v3}), MarkedLocalSystem(K2, "GL(2)", {"E0": v3}))
    assert s.rank == 4 and s.monodromy["E0"].block(0, 2, 0, 2) == v3
    p = Matrix.from_rows(K2, [[1, 1], [0, 1]])
    cb = change_of_basis(MarkedLocalSystem(K2, "GL(2)", {"E0": v3}), p)
    assert p @ cb.monodromy["E0"] == v3 @ p


def test_commutant_dimensions():
    rep = adjoint_rep_pgsp4()
    gens = sorted(system("geom").monodromy)
    assert commutant_dimension(system("p_exotic"), rep, gens) == 1
    assert commutant_dimension(system("iota_geom"), rep, gens) == 2
