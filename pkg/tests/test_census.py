import itertools

import pytest

import ribbonmod as rm
from ribbonmod import errors
from ribbonmod.core import BOUNDARY


def test_unstable_pair():
    with pytest.raises(errors.UnstablePair):
        rm.build_complex(0, 2)
    with pytest.raises(errors.UnstablePair):
        rm.enumerate_graphs(0, 1)


def test_census_1_1():
    cx = rm.build_complex(1, 1)
    assert len(cx.cells) == 2
    assert cx.dimension_histogram() == {1: 1, 2: 1}
    assert sorted(info.aut_order for info in cx.cells.values()) == [4, 6]


def test_census_0_3_against_brute_force():
    # the independent oracle: every rotation system on <= 6 half-edges over
    # the standard pairing, every pointing, canonicalized
    oracle = rm.brute_force_classes(0, 3, 3)
    cx = rm.build_complex(0, 3)
    assert set(cx.cells) == set(oracle)
    assert len(cx.cells) == 19
    assert cx.dimension_histogram() == {0: 6, 1: 9, 2: 4}


def test_census_1_1_against_brute_force():
    oracle = rm.brute_force_classes(1, 1, 3)
    cx = rm.build_complex(1, 1)
    assert set(cx.cells) == set(oracle)


def test_cells_validate():
    for g, n in ((0, 3), (1, 1), (1, 2)):
        cx = rm.build_complex(g, n)
        for info in cx.cells.values():
            gp = info.graph
            assert gp.graph.connected
            assert rm.genus(gp.graph) == g
            rm.attach_pointing(gp.graph, gp.pointing)   # full validity
            assert 1 <= len(gp.graph.edge_reps()) <= rm.max_edges(g, n)
            assert len(gp.graph.labels) % info.aut_order == 0
            assert info.Q == gp.Q


def test_face_relation_closed_and_consistent():
    for g, n in ((0, 3), (1, 1)):
        cx = rm.build_complex(g, n)
        for cert, arrows in cx.faces.items():
            parent = cx.cells[cert]
            for child_cert, mult in arrows.items():
                child = cx.cells[child_cert]
                assert child.dim == parent.dim - 1
                count = sum(
                    1 for r in parent.graph.graph.edge_reps()
                    if rm.is_negligible(parent.graph, {r})
                    and rm.certificate(rm.to_standard(
                        rm.quotient_ribbon(parent.graph, {r}))) == child_cert)
                assert count == mult


def test_t1_to_f8_multiplicity():
    cx = rm.build_complex(1, 1)
    (top_cert,) = [c for c, i in cx.cells.items() if i.dim == 2]
    (bot_cert,) = [c for c, i in cx.cells.items() if i.dim == 1]
    assert cx.faces[top_cert] == {bot_cert: 3}
    assert cx.faces[bot_cert] == {}


def test_t0_has_three_facets():
    cx = rm.build_complex(0, 3)
    theta = [c for c, i in cx.cells.items()
             if i.dim == 2 and all(
                 i.graph.graph.vertex_rep(r) != i.graph.graph.vertex_rep(
                     i.graph.graph.s1[r]) for r in i.graph.graph.edge_reps())]
    (theta_cert,) = theta
    arrows = cx.faces[theta_cert]
    assert sum(arrows.values()) == 3
    for child in arrows:
        gp = cx.cells[child].graph
        assert len(gp.graph.vertices) == 1 and len(gp.graph.edges) == 2


def test_resolutions_counts(f8_pointed):
    assert len(rm.resolutions(f8_pointed, 0)) == 2
    g5 = rm.from_permutations(range(10), [[0, 2, 4, 6, 8], [1, 3, 5, 7, 9]],
                              [[0, 1], [2, 3], [4, 5], [6, 7], [8, 9]])
    gp5 = rm.PointedRibbonGraph(g5, {"p0": (BOUNDARY, g5.face_rep(0))})
    assert len(rm.resolutions(gp5, 0)) == 5
    with pytest.raises(errors.ValencyTooLow):
        rm.resolutions(rm.PointedRibbonGraph(
            rm.from_permutations(range(6), [[0, 2, 4], [1, 3, 5]],
                                 [[0, 1], [2, 3], [4, 5]]), {}), 0)


def test_resolution_collapse_identity(f8_pointed):
    for res in rm.resolutions(f8_pointed, 0):
        new_edge = max(res.graph.edge_reps())
        back = rm.collapse_edge(res, new_edge)
        assert rm.certificate(rm.to_standard(back)) == rm.certificate(
            rm.to_standard(f8_pointed))


def test_verify_dimensions_1_1():
    rep = rm.verify_dimensions(1, 1)
    assert rep["max_dim_full_stratum"] == 2 == rep["max_dim_full_formula"]
    assert rep["max_fiber_dim"] == 2
    assert rep["min_dim"] == 1 and rep["min_dim_attains_paper"]
    assert rep["longest_full_stratum_chain"] == 1 <= rep["chain_bound"]


def test_verify_dimensions_0_3():
    rep = rm.verify_dimensions(0, 3)
    assert rep["max_dim_full_stratum"] == 2
    assert rep["max_fiber_dim"] == 0
    assert rep["min_dim"] == 0 and rep["min_dim_attains_derived"]
    assert rep["longest_full_stratum_chain"] == 1 == rep["chain_bound"]


def test_verify_dimensions_0_4_formula():
    rep = rm.verify_dimensions(0, 4)
    assert rep["max_dim_full_stratum"] == 5 == 6 * 0 - 7 + 3 * 4
    assert rep["max_fiber_ok"] and rep["chain_ok"] and rep["per_stratum_bound_ok"]


def test_orbifold_euler_1():
    assert rm.orbifold_euler(1) == rm.harer_zagier_euler(1)
    assert str(rm.orbifold_euler(1)) == "-1/12"


def test_enumerate_permissible(t1_pointed, f8q):
    seqs = rm.enumerate_permissible(t1_pointed, 1)
    assert len(seqs) == 1 and seqs[0][0].depth == 0
    seqs = rm.enumerate_permissible(f8q, 1)
    depths = sorted(ps.depth for ps, _ in seqs)
    assert depths == [0, 1, 1]      # depth-0 plus {a} and {b}
    seqs0 = rm.enumerate_permissible(f8q, 0)
    assert len(seqs0) == 1


def test_enumeration_deterministic():
    a = [rm.graph_dumps(gp) for gp in rm.enumerate_graphs(0, 3)]
    b = [rm.graph_dumps(gp) for gp in rm.enumerate_graphs(0, 3)]
    assert a == b


def test_random_membership_oracle():
    known = set(rm.build_complex(0, 3).cells)
    hits = 0
    for m in (1, 2, 3):
        hits += rm.random_membership_trials(0, 3, m, 2000, seed=m, known=known)
    assert hits > 100
    known11 = set(rm.build_complex(1, 1).cells)
    for m in (1, 2, 3):
        rm.random_membership_trials(1, 1, m, 2000, seed=10 + m, known=known11)
