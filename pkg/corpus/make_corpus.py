"""Regenerate the bundled example graphs (canonical serialization)."""

import pathlib

import ribbonmod as rm
from ribbonmod.core import BOUNDARY, VERTEX

HERE = pathlib.Path(__file__).parent


def build():
    out = {}
    gl = rm.from_permutations(range(2), [[0, 1]], [[0, 1]])
    out["g_l"] = rm.attach_pointing(gl, {"p0": (BOUNDARY, 0), "p1": (BOUNDARY, 1),
                                         "p2": (VERTEX, 0)})
    gs = rm.from_permutations(range(2), [], [[0, 1]])
    out["g_s"] = rm.attach_pointing(gs, {"p0": (BOUNDARY, 0), "p1": (VERTEX, 0),
                                         "p2": (VERTEX, 1)})
    gt0 = rm.from_permutations(range(6), [[0, 2, 4], [1, 5, 3]], [[0, 1], [2, 3], [4, 5]])
    out["g_t0"] = rm.attach_pointing(gt0, {"p0": (BOUNDARY, gt0.face_rep(0)),
                                           "p1": (BOUNDARY, gt0.face_rep(2)),
                                           "p2": (BOUNDARY, gt0.face_rep(1))})
    gt1 = rm.from_permutations(range(6), [[0, 2, 4], [1, 3, 5]], [[0, 1], [2, 3], [4, 5]])
    out["g_t1"] = rm.attach_pointing(gt1, {"p0": (BOUNDARY, 0)})
    gf8 = rm.from_permutations(range(4), [[0, 2, 1, 3]], [[0, 1], [2, 3]])
    out["g_f8"] = rm.attach_pointing(gf8, {"p0": (BOUNDARY, 0)})
    gp8 = rm.from_permutations(range(4), [[0, 1, 2, 3]], [[0, 1], [2, 3]])
    out["g_p8"] = rm.attach_pointing(gp8, {"p0": (BOUNDARY, gp8.face_rep(0)),
                                           "p1": (BOUNDARY, gp8.face_rep(1)),
                                           "p2": (BOUNDARY, gp8.face_rep(2))})
    glp = rm.from_permutations(range(4), [[0, 1, 2]], [[0, 1], [2, 3]])
    out["g_lp"] = rm.attach_pointing(glp, {"p0": (BOUNDARY, glp.face_rep(0)),
                                           "p1": (BOUNDARY, glp.face_rep(1)),
                                           "p2": (VERTEX, 3)})
    out["g_f8q"] = rm.PointedRibbonGraph(gf8, {"p0": (BOUNDARY, 0), "p1": (VERTEX, 0)})
    return out


def main():
    for name, gp in sorted(build().items()):
        path = HERE / f"{name}.json"
        path.write_text(rm.graph_dumps(gp), encoding="utf-8")
        print(path)


if __name__ == "__main__":
    main()
