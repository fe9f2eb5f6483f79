"""Generate the three shipped local systems on the figure-eight exterior.

Entries are typed in as printed (inverses written as ``inv(...)``) and
stored as exact coefficient lists.

Usage: python scripts/build_local_systems.py src/torsor/data
"""
import sys
from pathlib import Path

from torsor.exactla import Matrix
from torsor.io import dumps_local_system
from torsor.localsys import MarkedLocalSystem
from torsor.numfield import NumberField

K2 = NumberField([1, -1, 1])
K6 = NumberField([8, -6, 8, -5, 3, -1, 1], trusted=True)


def mat(field, rows):
    return Matrix.from_rows(field, [[field.parse(x) if isinstance(x, str) else x for x in r] for r in rows])


def geom():
    w = K2.gen
    wi = w.inverse()
    mon = {
        "E0": Matrix.from_rows(K2, [[0, -wi], [w, 0]]),
        "E1": Matrix.from_rows(K2, [[0, 1], [-1, 0]]),
    }
    for i in range(4):
        mon[f"e{3 * i}"] = Matrix.from_rows(K2, [[1, 1], [0, 1]])
        mon[f"e{3 * i + 1}"] = Matrix.from_rows(K2, [[1, -w], [0, 1]])
        mon[f"e{3 * i + 2}"] = Matrix.from_rows(K2, [[1, -wi], [0, 1]])
    return MarkedLocalSystem(K2, "PGL(2)", mon, name="geom")


def iota_geom():
    w = K2.gen
    wi = w.inverse()
    q = K2.from_rational
    z = K2.zero
    mon = {
        "E0": Matrix.from_rows(K2, [
            [z, z, z, q("-3/2") * w], [z, z, q("8/9") * w, z],
            [z, q("-9/8") * wi, z, z], [q("2/3") * wi, z, z, z]]),
        "E1": Matrix.from_rows(K2, [
            [z, z, z, q("-3/2") * w], [z, z, q("8/9") * wi, z],
            [z, q("-9/8") * w, z, z], [q("2/3") * wi, z, z, z]]),
    }
    for i in range(4):
        mon[f"e{3 * i}"] = Matrix.from_rows(K2, [
            [1, q("9/4") * w, -2, q("-3/2") * w], [0, 1, q("-16/9") * wi, -2],
            [0, 0, 1, q("9/4") * w], [0, 0, 0, 1]])
        mon[f"e{3 * i + 1}"] = Matrix.from_rows(K2, [
            [1, q("9/4") * wi, 2 * wi, q("-3/2") * w], [0, 1, q("16/9"), 2 * wi],
            [0, 0, 1, q("9/4") * wi], [0, 0, 0, 1]])
        mon[f"e{3 * i + 2}"] = Matrix.from_rows(K2, [
            # the (2, 3) entry carries a minus sign; with a plus sign the
            # matrix is not a symplectic similitude
            [1, q("-9/4"), 2 * w, q("-3/2") * w], [0, 1, q("-16/9") * w, 2 * w],
            [0, 0, 1, q("-9/4")], [0, 0, 0, 1]])
    return MarkedLocalSystem(K2, "PGSp(4)", mon, name="iota_geom")


def p_exotic():
    P = K6.parse

    def inv(s):
        return P(s).inverse()

    alpha = [
        P("3/32*w^5 - 3/16*w^4 + 7/32*w^3 - 11/16*w^2 + 11/16*w - 1/4"),
        P("-1/64*w^5 - 3/32*w^4 + 3/64*w^3 - 3/32*w^2 + 15/32*w - 9/8"),
    ]
    beta = [
        P("1/32*w^5 + 1/4*w^4 + 7/32*w^3 + 7/16*w^2 + 3/16*w - 5/4"),
        P("11/32*w^5 - 1/2*w^4 + 29/32*w^3 - 23/16*w^2 + 25/16*w - 9/4"),
    ]
    a0 = P("3/8*w^5 - 3/8*w^4 + 3/4*w^3 - 2*w^2 + w - 5/2")
    b0 = inv("-1/4*w^5 + 1/4*w^4 - 1/2*w^3 + w^2 - w - 1")
    c0 = P("-1/8*w^5 - 1/8*w^3 + 1/2*w^2 + 1/4*w + 3/2")
    d0 = inv("-5/64*w^5 - 9/32*w^4 - 1/64*w^3 + 21/32*w^2 + 3/32*w - 5/8")
    e0 = inv("1/4*w^5 - 1/4*w^4 + 1/2*w^3 - w^2 + w")
    a1 = P("-1/16*w^5 - 7/16*w^3 + 5/8*w^2 + 5/8*w + 3/2")
    b1 = inv("1/8*w^5 - 1/4*w^4 + 1/8*w^3 - 1/4*w^2 + 1/4*w - 1")
    c1 = P("1/4*w^5 + 3/8*w^4 + 3/4*w^3 + 5/8*w^2 + 1/4*w + 1/4")
    d1 = inv("-5/64*w^5 - 1/16*w^4 + 9/64*w^3 - 19/32*w^2 - 3/32*w - 11/8")
    a2 = P("-5/16*w^5 + 3/8*w^4 - 5/16*w^3 + 11/8*w^2 - 13/8*w + 1")
    b2 = inv("1/8*w^5 - 1/2*w^4 + 3/8*w^3 - 5/4*w^2 + 3/4*w - 1")
    c2 = P("-1/4*w^4 - 1/4*w^3 - 1/2*w^2 + 1/2*w - 1")
    d2 = inv("3/8*w^5 + 7/32*w^4 + 9/32*w^3 - 1/2*w^2 + 1/16*w - 3/4")
    e2 = inv("1/8*w^4 + 3/8*w^2 + 1/4*w - 1/4")
    c4 = P("-1/8*w^5 + 1/8*w^3 + 1/4*w^2 - 3/4*w - 1")
    # (a, b, c, d, e, f) for e_0 .. e_5
    entries = [
        (a0, b0, c0, d0, e0, a0),
        (a1, b1, c1, d1, b1, a1),
        (a2, b2, c2, d2, e2, a2),
        (a0, e0, c0, d0, b0, a0),
        (a1, b1, c4, d1, b1, a1),
        (a2, e2, c2, d2, b2, a2),
    ]
    z = K6.zero
    mon = {}
    for k in range(2):
        al, be = alpha[k], beta[k]
        mon[f"E{k}"] = Matrix.from_rows(K6, [
            [z, z, z, -al.inverse()], [z, z, be.inverse(), z], [z, -be, z, z], [al, z, z, z]])
    for i in range(12):
        a, b, c, d, e, f = entries[i % 6]
        mon[f"e{i}"] = Matrix.from_rows(K6, [[1, a, b, c], [0, 1, d, e], [0, 0, 1, f], [0, 0, 0, 1]])
    return MarkedLocalSystem(K6, "PGSp(4)", mon, name="p_exotic")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "src/torsor/data")
    (out / "geom.json").write_text(dumps_local_system(geom()))
    (out / "iota_geom.json").write_text(dumps_local_system(iota_geom()))
    (out / "p_exotic.json").write_text(dumps_local_system(p_exotic(), trusted=True))


if __name__ == "__main__":
    main()
