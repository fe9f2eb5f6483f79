"""Acceptance criteria 1-8, one pass/fail line each.

Run under pytest (the lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
import itertools
import random
import sys
import time

import pytest

from helpers import ACCEPTANCE_LINES, adjoint_complex, adjoint_result, adjoint_system, figure_eight, system
from torsor.complexes import elementary_expansion, integer_boundary
from torsor.exactla import Matrix, determinant, kernel_basis, leibniz_determinant, rank
from torsor.localsys import (
    adjoint_rep_pgsp4,
    change_of_basis,
    direct_sum,
    extend_along,
    pullback_local_system,
    sl2_irrep,
    sp4_coordinates,
    trivial_rep,
)
from torsor.numfield import QQ
from torsor.selfchecks import EMBEDDING_TOL, GOLDEN_B, GOLDEN_B_EMBEDDINGS, distinct_values, reference_sections
from torsor.torsion import (
    BChoice,
    adjoint_torsion,
    assemble_twisted,
    check_regularity,
    commutant_dimension,
    decomposition_check,
    default_orientation,
    invariant_sections,
    porti_bases,
    torsion,
)


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def criterion_1():
    r, secs = timed(lambda: adjoint_torsion(figure_eight(), system("iota_geom")))
    ok = r.exact == "360" and secs < 30
    return ok, f"golden value A = {r.exact} (exact), {secs:.1f} s"


def criterion_2():
    r, secs = timed(lambda: adjoint_torsion(figure_eight(), system("p_exotic")))
    ok = r.exact == GOLDEN_B and secs < 300
    return ok, f"golden value B = {r.exact}, {secs:.1f} s"


def criterion_3():
    got = distinct_values(adjoint_result("p_exotic").embeddings)
    want = sorted(GOLDEN_B_EMBEDDINGS)
    if len(got) != len(want):
        return False, f"{len(got)} distinct embedded values, expected {len(want)}"
    err = max(max(abs(a[0] - b[0]), abs(a[1] - b[1])) for a, b in zip(got, want))
    return err <= EMBEDDING_TOL, f"embeddings of B, max componentwise deviation {err:.1e} (tol {EMBEDDING_TOL:g})"


def criterion_4():
    c = figure_eight()
    parts, ok = [], True
    for name in ("iota_geom", "p_exotic"):
        ls = system(name)
        secs = invariant_sections(c, ls, adjoint_rep_pgsp4(), 0, "v0")
        span = Matrix.from_columns(ls.field, list(secs.vectors), 10)
        for v in reference_sections(name):
            # membership: appending the reference vector does not raise the rank
            ok &= rank(Matrix.from_columns(ls.field, list(secs.vectors) + [tuple(sp4_coordinates(v))], 10)) == rank(span)
        ok &= len(secs) == 2
        parts.append(f"{name} dim {len(secs)}")
    return ok, "invariant sections: " + ", ".join(parts) + ", both listed sections lie in the span"


def criterion_5():
    c = figure_eight()
    flags = {}
    for name in ("iota_geom", "p_exotic"):
        rep = check_regularity(adjoint_complex(name))
        flags[name] = rep.boundary_regular and rep.gamma_regular
    triv = check_regularity(assemble_twisted(c, pullback_local_system(system("geom"), trivial_rep(1, 2))))
    ok = all(flags.values()) and not triv.boundary_regular and not triv.gamma_regular
    return ok, f"regularity: {flags}, trivial system regular = {triv.boundary_regular or triv.gamma_regular}"


def criterion_6():
    d = decomposition_check(figure_eight(), system("geom"), orientation=default_orientation(figure_eight()))
    factors = ", ".join(f"V{n} = {v}" for n, v in d.factors.items())
    ok = d.rhs == 360
    return ok, (
        f"decomposition: {factors}, product {d.rhs}, adjoint {d.lhs}; "
        f"graded sign (-1)^(r3 r7) = {d.graded_sign:+d}, signed product equals adjoint: {d.equal_with_graded_sign}"
    )


def criterion_7():
    gens = sorted(system("geom").monodromy)
    rep = adjoint_rep_pgsp4()
    a = commutant_dimension(system("p_exotic"), rep, gens)
    b = commutant_dimension(system("iota_geom"), rep, gens)
    return a == 1 and b >= 2, f"commutant: p_exotic {a}, iota_geom {b}"


def _property_suite():
    c = figure_eight()
    checks = {}

    flat = True
    for name, rep in [("iota_geom", adjoint_rep_pgsp4()), ("p_exotic", adjoint_rep_pgsp4()),
                      ("geom", sl2_irrep(3)), ("geom", sl2_irrep(7))]:
        t = assemble_twisted(c, system(name), rep)
        flat &= all((t.boundary(k - 1) @ t.boundary(k)).is_zero() for k in (2, 3))
    checks["d o d = 0"] = flat

    t = adjoint_complex("iota_geom")
    checks["(a) b-choice"] = all(
        torsion(t, choice=BChoice(s, 11)).value == 360 for s in ("reversed", "random")
    )

    rng = random.Random(0)
    orders = [rng.sample(c.ids(k), len(c.ids(k))) for k in range(4)]
    shuffled = c.reordered(orders)
    checks["(b) cell permutation"] = (
        torsion(assemble_twisted(shuffled, system("iota_geom"), adjoint_rep_pgsp4())).value == 360
    )

    ad = adjoint_system("iota_geom")
    f = ad.field
    p = Matrix.from_rows(f, [[f.one if i == j else (f.gen if j == i + 1 else f.zero) for j in range(10)]
                             for i in range(10)][::-1])
    checks["(c) basis change"] = torsion(assemble_twisted(c, change_of_basis(ad, p))).value == 360

    exp = elementary_expansion(c, 2, "E0")
    moved = extend_along(system("iota_geom"), exp.copies)
    checks["(d) expansion"] = (
        torsion(assemble_twisted(exp.complex, moved, adjoint_rep_pgsp4())).value == 360
    )

    checks["direct sum"] = torsion(assemble_twisted(c, direct_sum(ad, ad))).value == 360 * 360

    d2 = integer_boundary(c, 2)
    j = c.index("t0")
    cycle = {cid: d2[i][j] for i, cid in enumerate(c.ids(1)) if d2[i][j]}
    r = torsion(t, bases=porti_bases(t, loop_cycles={0: cycle}))
    checks["non-regular gives 0"] = r.value == 0 and not r.regular.gamma_regular

    oracle = True
    lrng = random.Random(5)
    for n in range(1, 5):
        for _ in range(5):
            rows = [[lrng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            m = Matrix.from_rows(QQ, rows)
            oracle &= determinant(m) == leibniz_determinant(m)
    for _ in range(20):
        rows = [[lrng.randint(-1, 1) for _ in range(4)] for _ in range(3)]
        m = Matrix.from_rows(QQ, rows)
        ker = kernel_basis(m)
        sols = [x for x in itertools.product((-1, 0, 1), repeat=4)
                if all(sum(r[i] * x[i] for i in range(4)) == 0 for r in rows)]
        oracle &= all(rank(Matrix.from_columns(QQ, list(ker.vectors) + [tuple(QQ(v) for v in x)], 4)) == len(ker)
                      for x in sols)
        oracle &= len(ker) == 4 - rank(m)
    checks["linear algebra oracles"] = oracle
    return checks


def criterion_8():
    checks, secs = timed(_property_suite)
    failed = [k for k, v in checks.items() if not v]
    ok = not failed and secs < 120
    detail = f"property suite: {len(checks) - len(failed)}/{len(checks)} checks, {secs:.1f} s"
    if failed:
        detail += f", failed {failed}"
    return ok, detail


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 9)}


def line(n, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] {n} {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_acceptance_criterion(n):
    try:
        ok, detail = CRITERIA[n]()
    except Exception as exc:
        ACCEPTANCE_LINES[n] = line(n, False, f"raised {type(exc).__name__}: {exc}")
        raise
    ACCEPTANCE_LINES[n] = line(n, ok, detail)
    print(ACCEPTANCE_LINES[n])
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for n, fn in CRITERIA.items():
        ok, detail = fn()
        failures += not ok
        print(line(n, ok, detail), flush=True)
    sys.exit(1 if failures else 0)
