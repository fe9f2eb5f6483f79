"""Generate the shipped figure-eight exterior complex from its truncated
ideal triangulation.

Each tetrahedron is truncated; corner (i, j) is the vertex of the
truncation triangle at tet vertex i lying on the tet edge ij.  Orientation
signs of faces are read off from a concrete positively oriented embedding.

Usage: python scripts/build_figure_eight.py > src/torsor/data/figure_eight.json
"""
import sys
from collections import deque

import numpy as np

from torsor.complexes import dumps_complex, from_dict

EDGE_ENDS = {
    "E0": ("v1", "v3"), "E1": ("v0", "v2"),
    "e0": ("v0", "v1"), "e1": ("v0", "v0"), "e2": ("v1", "v0"),
    "e3": ("v1", "v2"), "e4": ("v1", "v1"), "e5": ("v2", "v1"),
    "e6": ("v2", "v3"), "e7": ("v2", "v2"), "e8": ("v3", "v2"),
    "e9": ("v3", "v0"), "e10": ("v3", "v3"), "e11": ("v0", "v3"),
}

# long edge along tet edge (i, j), oriented from corner (i, j) to corner (j, i)
LONG = [
    {(1, 3): "E0", (0, 2): "E0", (0, 1): "E1", (0, 3): "E1", (1, 2): "E0", (2, 3): "E1"},
    {(1, 3): "E1", (0, 2): "E1", (0, 1): "E0", (0, 3): "E0", (1, 2): "E1", (2, 3): "E0"},
]

# truncation triangles: tet vertex -> (name, forward cycle of (from, to, edge))
SHORT = [
    {
        0: ("t0", [((0, 1), (0, 2), "e0"), ((0, 2), (0, 3), "e2"), ((0, 3), (0, 1), "e1")]),
        1: ("t1", [((1, 2), (1, 0), "e3"), ((1, 0), (1, 3), "e5"), ((1, 3), (1, 2), "e4")]),
        2: ("t3", [((2, 1), (2, 3), "e9"), ((2, 3), (2, 0), "e11"), ((2, 0), (2, 1), "e10")]),
        3: ("t2", [((3, 2), (3, 1), "e6"), ((3, 1), (3, 0), "e8"), ((3, 0), (3, 2), "e7")]),
    },
    {
        0: ("t4", [((0, 1), (0, 2), "e2"), ((0, 2), (0, 3), "e0"), ((0, 3), (0, 1), "e4")]),
        1: ("t7", [((1, 2), (1, 0), "e11"), ((1, 0), (1, 3), "e9"), ((1, 3), (1, 2), "e1")]),
        2: ("t5", [((2, 1), (2, 3), "e5"), ((2, 3), (2, 0), "e3"), ((2, 0), (2, 1), "e7")]),
        3: ("t6", [((3, 2), (3, 1), "e8"), ((3, 1), (3, 0), "e6"), ((3, 0), (3, 2), "e10")]),
    },
]

# hexagon opposite each tet vertex
HEX = [{0: "H0", 1: "H1", 2: "H2", 3: "H3"}, {0: "H2", 1: "H3", 2: "H0", 3: "H1"}]

POINTS = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)


def corner_point(c):
    i, j = c
    return POINTS[i] + 0.2 * (POINTS[j] - POINTS[i])


def corner_vertices(t):
    cv = {}
    for _, (_, cyc) in SHORT[t].items():
        for a, b, name in cyc:
            s, e = EDGE_ENDS[name]
            assert cv.setdefault(a, s) == s and cv.setdefault(b, e) == e
    for (i, j), name in LONG[t].items():
        s, e = EDGE_ENDS[name]
        assert cv[(i, j)] == s and cv[(j, i)] == e, (t, i, j)
    return cv


def steps(t):
    """Directed 1-skeleton of tet t: corner -> [(corner, letter)]."""
    adj = {}
    for _, (_, cyc) in SHORT[t].items():
        for a, b, name in cyc:
            adj.setdefault(a, []).append((b, (name, 1)))
            adj.setdefault(b, []).append((a, (name, -1)))
    for (i, j), name in sorted(LONG[t].items()):
        adj.setdefault((i, j), []).append(((j, i), (name, 1)))
        adj.setdefault((j, i), []).append(((i, j), (name, -1)))
    return adj


def step(t, a, b):
    for c, letter in steps(t)[a]:
        if c == b:
            return letter
    raise KeyError((t, a, b))


def hexagon_corners(face):
    i, j, k = face
    return [(i, j), (j, i), (j, k), (k, j), (k, i), (i, k)]


def bfs_paths(t, root):
    adj = steps(t)
    paths = {root: []}
    queue = deque([root])
    while queue:
        a = queue.popleft()
        for b, letter in adj[a]:
            if b not in paths:
                paths[b] = paths[a] + [letter]
                queue.append(b)
    return paths


def orientation_sign(corners, t_center):
    p = [corner_point(c) for c in corners]
    normal = np.cross(p[1] - p[0], p[2] - p[0])
    outward = np.mean(p, axis=0) - t_center
    d = float(np.dot(normal, outward))
    assert abs(d) > 1e-9
    return 1 if d > 0 else -1


def two_cell_terms(word):
    """Boundary terms of a 2-cell whose boundary cycle, read from its anchor, is ``word``."""
    terms = []
    for j, (name, s) in enumerate(word):
        path = word[:j] if s == 1 else word[: j + 1]
        terms.append({"target": name, "sign": s, "path": [[n, e] for n, e in path]})
    return terms


def main():
    cells0 = [{"id": f"v{i}", "boundary": []} for i in range(4)]
    cells1 = []
    for name in ["E0", "E1"] + [f"e{i}" for i in range(12)]:
        s, e = EDGE_ENDS[name]
        cells1.append({"id": name, "boundary": [
            {"target": e, "sign": 1, "path": [[name, 1]]},
            {"target": s, "sign": -1, "path": []},
        ]})

    hex_words, hex_start = {}, {}
    tri_words, tri_start = {}, {}
    three_terms = []
    for t in range(2):
        cv = corner_vertices(t)
        center = POINTS.mean(axis=0)
        root = (0, 1)
        paths = bfs_paths(t, root)
        terms = []
        for opp in range(4):
            face = tuple(x for x in range(4) if x != opp)
            corners = hexagon_corners(face)
            word = [step(t, corners[n], corners[(n + 1) % 6]) for n in range(6)]
            name = HEX[t][opp]
            if name in hex_words:
                assert hex_words[name] == word and hex_start[name] == cv[corners[0]], name
            hex_words[name], hex_start[name] = word, cv[corners[0]]
            terms.append((name, orientation_sign(corners, center), paths[corners[0]]))
        for v in range(4):
            name, cyc = SHORT[t][v]
            corners = [a for a, _, _ in cyc]
            tri_words[name] = [(e, 1) for _, _, e in cyc]
            tri_start[name] = cv[corners[0]]
            terms.append((name, orientation_sign(corners, center), paths[corners[0]]))
        three_terms.append(terms)

    # B0 + s*B1 must cancel on every hexagon
    s0 = {n: sg for n, sg, _ in three_terms[0]}
    s1 = {n: sg for n, sg, _ in three_terms[1]}
    ratios = {-s0[h] * s1[h] for h in ("H0", "H1", "H2", "H3")}
    assert len(ratios) == 1, ratios
    s = ratios.pop()

    cells2 = []
    for name in ["H0", "H1", "H2", "H3"]:
        cells2.append({"id": name, "boundary": two_cell_terms(hex_words[name])})
    for name in [f"t{i}" for i in range(8)]:
        cells2.append({"id": name, "boundary": two_cell_terms(tri_words[name])})

    cells3 = []
    for t in range(2):
        cells3.append({"id": f"B{t}", "boundary": [
            {"target": n, "sign": sg, "path": [[a, e] for a, e in p]} for n, sg, p in three_terms[t]
        ]})

    fc3 = {"B0": 1, "B1": s}
    fc2 = {}
    for t, coeff in ((0, 1), (1, s)):
        for n, sg, _ in three_terms[t]:
            if n.startswith("t"):
                fc2[n] = fc2.get(n, 0) + coeff * sg
    fc2 = {f"t{i}": fc2[f"t{i}"] for i in range(8)}

    torus = [f"v{i}" for i in range(4)] + [f"e{i}" for i in range(12)] + [f"t{i}" for i in range(8)]
    doc = {
        "name": "figure-eight knot exterior",
        "cells": {"0": cells0, "1": cells1, "2": cells2, "3": cells3},
        "boundary_components": [torus],
        "peripheral_loops": [
            {"id": "mu", "component": 0, "cells": ["v0", "e1"], "cycle": {"e1": -1}},
        ],
        "fundamental_class_3": fc3,
        "fundamental_class_2": fc2,
    }
    sys.stdout.write(dumps_complex(from_dict(doc)))


if __name__ == "__main__":
    main()
