import itertools
import random
from fractions import Fraction as F

import pytest

import ribbonmod as rm
from ribbonmod import errors
from ribbonmod.core import BOUNDARY, VERTEX


def random_unital(gp, rng):
    reps = sorted(gp.graph.edge_reps())
    raw = {r: F(rng.randint(1, 12), rng.randint(1, 12)) for r in reps}
    return rm.unital(gp, raw)


# --- lambda -------------------------------------------------------------------

def test_lambda_barycenter(t0_pointed):
    lam = rm.lambda_point(t0_pointed, {0: F(1, 3), 2: F(1, 3), 4: F(1, 3)})
    assert set(lam.values()) == {F(1, 3)}


def test_lambda_single_face(t1_pointed):
    lam = rm.lambda_point(t1_pointed, {0: F(1, 2), 2: F(1, 4), 4: F(1, 4)})
    assert lam == {"p0": F(1)}


def test_lambda_loop(l_pointed):
    lam = rm.lambda_point(l_pointed, {0: F(1)})
    assert lam == {"p0": F(1, 2), "p1": F(1, 2), "p2": F(0)}


def test_lambda_sums_to_one(t0_pointed, f8q, lp_pointed, s_pointed):
    rng = random.Random(23)
    for gp in (t0_pointed, f8q, lp_pointed, s_pointed):
        for _ in range(50):
            lam = rm.lambda_point(gp, random_unital(gp, rng))
            assert sum(lam.values()) == 1


def test_lambda_disconnected():
    g = rm.from_permutations(range(4), [[0, 1], [2, 3]], [[0, 1], [2, 3]])
    gp = rm.PointedRibbonGraph(g, {})
    with pytest.raises(errors.Disconnected):
        rm.lambda_point(gp, {0: F(1), 2: F(1)})


# --- cell lambda map -------------------------------------------------------------

def test_cell_map_ranks(t0_pointed, t1_pointed):
    _, rank, fiber = rm.cell_lambda_map(t0_pointed)
    assert (rank, fiber) == (3, 0)
    _, rank, fiber = rm.cell_lambda_map(t1_pointed)
    assert (rank, fiber) == (1, 2)


def test_cell_map_p8(g_p8):
    gp = rm.attach_pointing(g_p8, {"p0": (BOUNDARY, g_p8.face_rep(0)),
                                   "p1": (BOUNDARY, g_p8.face_rep(1)),
                                   "p2": (BOUNDARY, g_p8.face_rep(2))})
    _, rank, fiber = rm.cell_lambda_map(gp)
    assert rank == 2


# --- almost-metric reduction ------------------------------------------------------

def test_reduce_t1(t1_pointed, g_f8):
    out, lengths = rm.reduce_almost_metric(t1_pointed, {0: F(1, 3), 2: F(2, 3), 4: F(0)})
    assert rm.certificate(out.graph) == rm.certificate(g_f8)
    assert lengths == {0: F(1, 3), 2: F(2, 3)}


def test_reduce_identity(t1_pointed):
    m = {0: F(1, 3), 2: F(1, 3), 4: F(1, 3)}
    out, lengths = rm.reduce_almost_metric(t1_pointed, m)
    assert out is t1_pointed and lengths == m


def test_reduce_not_negligible(f8_pointed):
    with pytest.raises(errors.NotNegligible):
        rm.reduce_almost_metric(f8_pointed, {0: F(0), 2: F(1)})


def test_lambda_commutes_with_reduction(t1_pointed, t0_pointed, lp_pointed):
    rng = random.Random(9)
    for gp in (t1_pointed, t0_pointed, lp_pointed):
        for r in sorted(gp.graph.edge_reps()):
            if not rm.is_negligible(gp, {r}):
                continue
            m = {k: (F(0) if k == r else v) for k, v in random_unital(gp, rng).items()}
            total = sum(m.values())
            m = {k: v / total for k, v in m.items()}
            before = rm.lambda_point(gp, m)
            out, lengths = rm.reduce_almost_metric(gp, m)
            after = rm.lambda_point(out, lengths)
            assert before == after


# --- projections --------------------------------------------------------------------

def test_project_f8q_loop(f8q):
    pm = rm.project(f8q, {0: F(1, 5), 2: F(4, 5)}, {0})
    assert pm.lengths == {0: F(1)}


def test_project_identity(t0_pointed):
    m = {0: F(1, 4), 2: F(1, 4), 4: F(1, 2)}
    pm = rm.project(t0_pointed, m, {0, 2, 4})
    assert pm.lengths == m


def test_project_t0_2gon(t0_pointed):
    pm = rm.project(t0_pointed, {0: F(1, 4), 2: F(1, 4), 4: F(1, 2)}, {2, 4})
    assert sorted(pm.lengths.values()) == [F(1, 3), F(2, 3)]
    # with equal lengths the projection is (1/2, 1/2) on the 2-gon
    pm = rm.project(t0_pointed, {0: F(1, 2), 2: F(1, 4), 4: F(1, 4)}, {2, 4})
    assert sorted(pm.lengths.values()) == [F(1, 2), F(1, 2)]
    assert len(pm.graph.edges) == 2 and len(pm.graph.vertices) == 2


def test_project_scale_invariance(t0_pointed):
    rng = random.Random(4)
    for _ in range(20):
        m = {r: F(rng.randint(1, 9)) for r in t0_pointed.graph.edge_reps()}
        scaled = {r: 7 * v for r, v in m.items()}
        for z in ({0}, {0, 2}, {0, 2, 4}):
            assert rm.project(t0_pointed, m, z).lengths == \
                rm.project(t0_pointed, scaled, z).lengths


def test_project_errors(t0_pointed):
    with pytest.raises(errors.DisconnectedSubgraph):
        g = rm.from_permutations(range(8), [[0, 2], [1, 3], [4, 6], [5, 7]],
                                 [[0, 1], [2, 3], [4, 5], [6, 7]])
        gp = rm.PointedRibbonGraph(g, {})
        rm.project(gp, {0: F(1), 2: F(1), 4: F(1), 6: F(1)}, {0, 4})
    with pytest.raises(errors.ZeroOnSubgraph):
        rm.project(t0_pointed, {0: F(0), 2: F(1), 4: F(1)}, {0, 2})


# --- degeneration schedules -----------------------------------------------------------

def test_degenerate_f8q(f8q):
    ps = rm.validate_permissible(f8q, [frozenset({0, 2}), frozenset({0})])
    out = rm.degenerate(f8q, {0: F(1, 2), 2: F(1, 2)}, ps, F(1, 4))
    assert out == {0: F(1, 8), 2: F(1, 2)}


def test_degenerate_identity(f8q, t1_pointed):
    ps = rm.validate_permissible(f8q, [frozenset({0, 2}), frozenset({0})])
    m = {0: F(1, 2), 2: F(1, 2)}
    assert rm.degenerate(f8q, m, ps, F(1)) == m
    ps0 = rm.validate_permissible(t1_pointed, [frozenset({0, 2, 4})])
    m0 = {0: F(1, 3), 2: F(1, 3), 4: F(1, 3)}
    assert rm.degenerate(t1_pointed, m0, ps0, F(3, 7)) == m0


def test_degenerate_multiplicative(f8q):
    ps = rm.validate_permissible(f8q, [frozenset({0, 2}), frozenset({0})])
    m = {0: F(2, 3), 2: F(1, 3)}
    s, t = F(2, 5), F(3, 7)
    assert rm.degenerate(f8q, m, ps, s * t) == \
        rm.degenerate(f8q, rm.degenerate(f8q, m, ps, s), ps, t)


# --- extraction ----------------------------------------------------------------------

def test_extract_worked_example(f8q):
    ps = rm.validate_permissible(f8q, [frozenset({0, 2}), frozenset({0})])
    poly = rm.degenerate_poly(f8q, {0: F(1, 2), 2: F(1, 2)}, ps)
    fam = rm.limits_from_path(f8q, poly)
    sm = rm.extract_stable(f8q, fam)
    assert sm.sequence.levels == ps.levels
    assert sm.levels == ({2: F(1)}, {0: F(1)})


def test_extract_depth0(f8q):
    ps = rm.validate_permissible(f8q, [frozenset({0, 2})])
    poly = rm.degenerate_poly(f8q, {0: F(1, 3), 2: F(2, 3)}, ps)
    sm = rm.extract_stable(f8q, rm.limits_from_path(f8q, poly))
    assert sm.depth == 0 and sm.levels == ({0: F(1, 3), 2: F(2, 3)},)


def test_extract_negligible_reduction(t1_pointed):
    fam = rm.limits_from_path(t1_pointed,
                              {0: {0: F(1, 3)}, 2: {0: F(2, 3)}, 4: {1: F(1)}})
    sm = rm.extract_stable(t1_pointed, fam)
    assert sm.depth == 0
    assert sorted(sm.sequence.host.graph.edge_reps()) == [0, 2]
    assert sm.levels == ({0: F(1, 3), 2: F(2, 3)},)


def test_extract_contracted_node_rejected(f8_pointed):
    # shrinking the unmarked loop of the face-pointed figure eight leaves the
    # cell through a contracted node
    fam = rm.limits_from_path(f8_pointed, {0: {1: F(1)}, 2: {0: F(1)}})
    with pytest.raises(errors.InconsistentLimit):
        rm.extract_stable(f8_pointed, fam)


def test_extract_missing_entry(f8q):
    with pytest.raises(errors.InconsistentLimit):
        rm.extract_stable(f8q, {})


# --- the round trip --------------------------------------------------------------------

def test_round_trip_small(t0_pointed, f8q, t1_pointed, f8_pointed, lp_pointed):
    rng = random.Random(17)
    for gp in (t0_pointed, f8q, t1_pointed, f8_pointed, lp_pointed):
        for ps, _ in rm.enumerate_permissible(gp, 2):
            lengths = {r: F(rng.randint(1, 9), rng.randint(1, 9))
                       for r in gp.graph.edge_reps()}
            expected = rm.stable_metric_of(gp, lengths, ps)
            fam = rm.limits_from_path(gp, rm.degenerate_poly(gp, lengths, ps))
            got = rm.extract_stable(gp, fam)
            assert got.sequence.levels == ps.levels
            assert got.levels == expected.levels
