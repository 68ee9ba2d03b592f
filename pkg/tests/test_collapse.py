import itertools
import random

import pytest

import ribbonmod as rm
from ribbonmod import errors
from ribbonmod.core import BOUNDARY, VERTEX


# --- subgraph_ribbon -----------------------------------------------------------

def test_subgraph_f8_loop(f8_pointed):
    sub = rm.subgraph_ribbon(f8_pointed, {0})
    assert sub.labels == frozenset({0, 1})
    assert sub.s0 == {0: 1, 1: 0}       # first return: s0(0)=2 is skipped


def test_subgraph_t0_2gon(t0_pointed):
    sub = rm.subgraph_ribbon(t0_pointed, {2, 4})
    assert len(sub.vertices) == 2 and len(sub.edges) == 2 and len(sub.faces) == 2


def test_subgraph_identity(t1_pointed):
    sub = rm.subgraph_ribbon(t1_pointed, {0, 2, 4})
    assert sub == t1_pointed.graph
    with pytest.raises(errors.EmptySubset):
        rm.subgraph_ribbon(t1_pointed, set())


# --- quotient_ribbon -----------------------------------------------------------

def test_quotient_f8_gives_segment(f8_pointed, g_s):
    q = rm.quotient_ribbon(f8_pointed, {0})
    assert q.graph.labels == frozenset({2, 3})
    assert rm.certificate(q.graph) == rm.certificate(g_s)


def test_quotient_t0_gives_loop(t0_pointed, g_l):
    q = rm.quotient_ribbon(t0_pointed, {2, 4})
    assert rm.certificate(q.graph) == rm.certificate(g_l)
    # the label of the swallowed face moved to the new vertex
    kinds = sorted(kind for kind, _ in q.pointing.values())
    assert kinds == [BOUNDARY, BOUNDARY, VERTEX]


def test_quotient_t1_gives_f8(t1_pointed, g_f8):
    q = rm.quotient_ribbon(t1_pointed, {4})
    assert rm.certificate(q.graph) == rm.certificate(g_f8)
    with pytest.raises(errors.FullSubset):
        rm.quotient_ribbon(t1_pointed, {0, 2, 4})


def test_quotient_composition(t0_pointed, f8q, t1_pointed):
    rng = random.Random(5)
    for gp in (t0_pointed, f8q, t1_pointed):
        reps = sorted(gp.graph.edge_reps())
        for z1 in range(1, len(reps)):
            for combo in itertools.combinations(reps, z1):
                rest = [r for r in reps if r not in combo]
                extra = rng.sample(rest, rng.randint(0, len(rest) - 1))
                big = frozenset(combo) | frozenset(extra)
                if big >= frozenset(reps):
                    continue
                try:
                    direct = rm.quotient_ribbon(gp, big)
                    staged = rm.quotient_ribbon(rm.quotient_ribbon(gp, frozenset(combo)),
                                                big - frozenset(combo))
                except errors.RibbonError:
                    continue
                assert direct.graph == staged.graph


# --- is_negligible ---------------------------------------------------------------

def test_negligible(t1_pointed, f8_pointed, t0_pointed):
    assert rm.is_negligible(t1_pointed, {4})           # unmarked tree edge
    assert not rm.is_negligible(f8_pointed, {0})       # circle missing its face
    assert rm.is_negligible(t0_pointed, {2, 4})        # circle containing a face


def test_negligible_collapse_preserves_shape(t0_pointed):
    q = rm.quotient_ribbon(t0_pointed, {2, 4})
    assert rm.genus(q.graph) == rm.genus(t0_pointed.graph)
    assert len(q.graph.components()) == len(t0_pointed.graph.components())
    # dimension drops by |Z|
    assert len(q.graph.edges) == len(t0_pointed.graph.edges) - 2


# --- collapse_edge ----------------------------------------------------------------

def test_collapse_edge_t1(t1_pointed, g_f8):
    out = rm.collapse_edge(t1_pointed, 4)
    assert rm.certificate(out.graph) == rm.certificate(g_f8)


def test_collapse_edge_lollipop_pointing_variants(g_lp):
    both = rm.PointedRibbonGraph(g_lp, {"a": (VERTEX, g_lp.vertex_rep(0)),
                                        "b": (VERTEX, 3)})
    with pytest.raises(errors.NotNegligible):
        rm.collapse_edge(both, 2)
    one = rm.PointedRibbonGraph(g_lp, {"b": (VERTEX, 3)})
    out = rm.collapse_edge(one, 2)
    assert len(out.graph.edges) == 1 and len(out.graph.faces) == 2


def test_collapse_edge_f8_loop_rejected(f8_pointed):
    with pytest.raises(errors.NotNegligible):
        rm.collapse_edge(f8_pointed, 0)


# --- cores --------------------------------------------------------------------------

def test_semistable_cores(t1_pointed, f8_pointed, f8q, t0_pointed):
    assert rm.semistable_core(t1_pointed, {0}).edges == frozenset()
    assert rm.semistable_core(f8_pointed, {0}).edges == {0}
    assert rm.semistable_core(t0_pointed, {2, 4}).edges == frozenset()


def test_stable_cores(f8_pointed, f8q):
    assert rm.stable_core(f8_pointed, {0}).edges == frozenset()
    assert rm.stable_core(f8q, {0}).edges == {0}


def test_core_properties(t0_pointed, f8q, t1_pointed, f8_pointed):
    for gp in (t0_pointed, f8q, t1_pointed, f8_pointed):
        reps = sorted(gp.graph.edge_reps())
        subsets = [frozenset(c) for k in range(len(reps) + 1)
                   for c in itertools.combinations(reps, k)]
        for z in subsets:
            sst = rm.semistable_core(gp, z).edges
            st = rm.stable_core(gp, z).edges
            assert st <= sst <= z
            assert rm.semistable_core(gp, sst).edges == sst     # idempotent
            assert rm.stable_core(gp, st).edges == st
            assert rm.is_negligible(gp, z - sst)
        for za, zb in itertools.combinations(subsets, 2):
            if za <= zb:
                assert rm.semistable_core(gp, za).edges <= rm.semistable_core(gp, zb).edges
                assert rm.stable_core(gp, za).edges <= rm.stable_core(gp, zb).edges


# --- exceptional sets -----------------------------------------------------------------

def test_exceptional_f8(f8_pointed):
    data = rm.exceptional_sets(f8_pointed, {0})
    assert data.exceptional_vertices == (2, 3)
    assert len(data.exceptional_faces) == 2
    assert len(data.pairs) == 2 and set(data.pairs.values()) == set(data.exceptional_faces)


def test_exceptional_trivial(t1_pointed):
    data = rm.exceptional_sets(t1_pointed, {4})
    assert data.pairs == {} and data.core is None


def test_exceptional_f8q(f8q, f8_pointed):
    a = rm.exceptional_sets(f8q, {0})
    b = rm.exceptional_sets(f8_pointed, {0})
    assert a.pairs == b.pairs


# --- pseudosurface ----------------------------------------------------------------------

def test_pseudosurface_f8(f8_pointed, g_s):
    ps = rm.pseudosurface(f8_pointed, {0})
    assert rm.certificate(ps.normalization) == rm.certificate(g_s)
    assert len(ps.classes) == 1 and len(ps.classes[0]) == 2
    assert ps.epsilon == (0,)
    assert ps.Q == {"p0"}


def test_pseudosurface_t1(t1_pointed, g_f8):
    ps = rm.pseudosurface(t1_pointed, {4})
    assert rm.certificate(ps.normalization) == rm.certificate(g_f8)
    assert ps.classes == () and ps.epsilon == ()


def test_pseudosurface_genus_defect(genus2):
    gp = rm.attach_pointing(genus2, {"p0": (BOUNDARY, 0)})
    # the first handle is a genus-1 semistable subgraph with one boundary cycle
    sub = rm.subgraph_ribbon(gp, {0, 2})
    assert rm.genus(sub) == 1 and len(sub.faces) == 1    # oracle for epsilon
    ps = rm.pseudosurface(gp, {0, 2})
    assert ps.classes == (frozenset({4}),)
    assert ps.epsilon == (1,)
    assert rm.glued_genus(ps) == 2


# --- genus bookkeeping -----------------------------------------------------------------

def test_genus_bookkeeping_small(t0_pointed, f8q, t1_pointed, f8_pointed, lp_pointed):
    for gp in (t0_pointed, f8q, t1_pointed, f8_pointed, lp_pointed):
        host_genus = rm.genus(gp.graph)
        reps = sorted(gp.graph.edge_reps())
        for k in range(1, len(reps)):
            for combo in itertools.combinations(reps, k):
                ps = rm.pseudosurface(gp, frozenset(combo))
                assert rm.glued_genus(ps) == host_genus, (gp, combo)
