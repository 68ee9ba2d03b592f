import pytest

import ribbonmod as rm
from ribbonmod.core import BOUNDARY, VERTEX


@pytest.fixture
def g_l():
    """Loop: one bivalent vertex, one edge, two boundary cycles."""
    return rm.from_permutations(range(2), [[0, 1]], [[0, 1]])


@pytest.fixture
def g_s():
    """Segment: two univalent vertices, one edge, one boundary cycle."""
    return rm.from_permutations(range(2), [], [[0, 1]])


@pytest.fixture
def g_t0():
    """Planar theta: two trivalent vertices, three edges, three faces."""
    return rm.from_permutations(range(6), [[0, 2, 4], [1, 5, 3]], [[0, 1], [2, 3], [4, 5]])


@pytest.fixture
def g_t1():
    """Once-punctured torus triangulation: two trivalent vertices, one face."""
    return rm.from_permutations(range(6), [[0, 2, 4], [1, 3, 5]], [[0, 1], [2, 3], [4, 5]])


@pytest.fixture
def g_f8():
    """Genus-one figure eight: one 4-valent vertex, one face."""
    return rm.from_permutations(range(4), [[0, 2, 1, 3]], [[0, 1], [2, 3]])


@pytest.fixture
def g_p8():
    """Planar figure eight: one 4-valent vertex, three faces."""
    return rm.from_permutations(range(4), [[0, 1, 2, 3]], [[0, 1], [2, 3]])


@pytest.fixture
def g_lp():
    """Lollipop: loop plus whisker."""
    return rm.from_permutations(range(4), [[0, 1, 2]], [[0, 1], [2, 3]])


@pytest.fixture
def t0_pointed(g_t0):
    return rm.attach_pointing(g_t0, {"p0": (BOUNDARY, g_t0.face_rep(0)),
                                     "p1": (BOUNDARY, g_t0.face_rep(2)),
                                     "p2": (BOUNDARY, g_t0.face_rep(1))})


@pytest.fixture
def t1_pointed(g_t1):
    return rm.attach_pointing(g_t1, {"p0": (BOUNDARY, 0)})


@pytest.fixture
def f8_pointed(g_f8):
    return rm.attach_pointing(g_f8, {"p0": (BOUNDARY, 0)})


@pytest.fixture
def f8q(g_f8):
    """Figure eight with a second label on the vertex (a (1,2) class)."""
    return rm.PointedRibbonGraph(g_f8, {"p0": (BOUNDARY, 0), "p1": (VERTEX, 0)})


@pytest.fixture
def l_pointed(g_l):
    return rm.attach_pointing(g_l, {"p0": (BOUNDARY, 0), "p1": (BOUNDARY, 1),
                                    "p2": (VERTEX, 0)})


@pytest.fixture
def s_pointed(g_s):
    return rm.attach_pointing(g_s, {"p0": (BOUNDARY, 0), "p1": (VERTEX, 0),
                                    "p2": (VERTEX, 1)})


@pytest.fixture
def lp_pointed(g_lp):
    return rm.attach_pointing(g_lp, {"p0": (BOUNDARY, g_lp.face_rep(0)),
                                     "p1": (BOUNDARY, g_lp.face_rep(1)),
                                     "p2": (VERTEX, 3)})


@pytest.fixture
def genus2():
    """One-vertex genus-2 graph with a single face."""
    return rm.from_permutations(range(8), [[0, 2, 1, 3, 4, 6, 5, 7]],
                                [[0, 1], [2, 3], [4, 5], [6, 7]])


def count_orbits(perm):
    """Independent cycle counter used as an oracle against perm_orbits."""
    seen = set()
    count = 0
    for start in perm:
        if start in seen:
            continue
        count += 1
        x = start
        while x not in seen:
            seen.add(x)
            x = perm[x]
    return count
