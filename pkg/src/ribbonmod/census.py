"""Exhaustive generation of pointed ribbon graph classes at desk scale.

The cell complex of a pair (g, n) is generated stratum by stratum.  For each
subset Q of the labels, the maximal cells of the stratum (all boundary cycles
carry Q, the other labels sit on univalent whisker vertices, every unpointed
vertex is trivalent) are produced by a Whitehead-flip BFS over the trivalent
(g, |Q|) face-labeled classes followed by exhaustive whisker insertion; the
full complex is the closure under single negligible edge collapses, which is
also how the face relation is recorded.

An independent brute-force generator (all rotation systems over a fixed
pairing) and a randomized membership oracle are provided to certify
completeness at small sizes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import errors
from .collapse import Context, is_negligible, quotient_ribbon, stable_core_in
from .core import (BOUNDARY, VERTEX, PointedRibbonGraph, RibbonGraph,
                   attach_pointing, automorphisms, canonical_form, certificate,
                   distinguished_points, genus, perm_from_cycles, relabel,
                   to_standard)
from .metric import cell_lambda_map
from .stable import PermissibleSequence, _level_context, stabilize_sequence


def labels_for(n):
    return tuple(f"p{i}" for i in range(n))


def max_edges(g, n):
    return 6 * g - 6 + 3 * n


def _check_pair(g, n):
    if g < 0 or n < 1 or 2 - 2 * g - n >= 0:
        raise errors.UnstablePair(f"(g, n) = ({g}, {n}) is not hyperbolic")


# ---------------------------------------------------------------------------
# seeds and elementary moves
# ---------------------------------------------------------------------------

def rose(g, q) -> RibbonGraph:
    """One-vertex graph of genus g with q boundary cycles: g interleaved
    handles followed by q-1 petals."""
    cycle = []
    for i in range(g):
        a, abar, b, bbar = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        cycle += [a, b, abar, bbar]
    base = 4 * g
    for j in range(q - 1):
        cycle += [base + 2 * j, base + 2 * j + 1]
    nlabels = 4 * g + 2 * (q - 1)
    if nlabels == 0:
        raise errors.UnstablePair(f"no one-vertex graph with (g, q) = ({g}, {q})")
    s1 = {i: i ^ 1 for i in range(nlabels)}
    s0 = perm_from_cycles([cycle], frozenset(range(nlabels)))
    out = RibbonGraph(s0, s1)
    assert genus(out) == g and len(out.faces) == q
    return out


def resolutions(gp: PointedRibbonGraph, vrep):
    """All splittings of an unpointed vertex of valency >= 4 into two
    consecutive arcs of size >= 2 joined by a new edge.  Collapsing the new
    edge of any result returns the input."""
    g = gp.graph
    if (VERTEX, vrep) in gp.pointing.values():
        raise errors.VertexPointed(f"vertex {vrep} carries a label")
    orb = g.vertex_of(vrep)
    k = len(orb)
    if k < 4:
        raise errors.ValencyTooLow(f"vertex {vrep} has valency {k}")
    base = max(g.labels) + 1
    w0, w1 = base, base + 1
    out = []
    for i in range(k):
        for j in range(i + 2, k):
            if (k - (j - i)) < 2:
                continue
            arc1 = list(orb[i:j])
            arc2 = list(orb[j:]) + list(orb[:i])
            s0 = dict(g.s0)
            for cyc in (arc1 + [w0], arc2 + [w1]):
                for idx, x in enumerate(cyc):
                    s0[x] = cyc[(idx + 1) % len(cyc)]
            s1 = dict(g.s1)
            s1[w0], s1[w1] = w1, w0
            out.append(PointedRibbonGraph(RibbonGraph(s0, s1), dict(gp.pointing)))
    return tuple(out)


def _resolve_to_trivalent(gp: PointedRibbonGraph) -> PointedRibbonGraph:
    while True:
        big = [orb[0] for orb in gp.graph.vertices
               if len(orb) >= 4 and (VERTEX, orb[0]) not in gp.pointing.values()]
        if not big:
            return gp
        gp = to_standard(resolutions(gp, big[0])[0])


def insert_whisker(gp: PointedRibbonGraph, oriented, label) -> PointedRibbonGraph:
    """Subdivide the edge of ``oriented`` at a new trivalent vertex and attach
    a pendant edge there, its univalent end carrying ``label``; the whisker
    points into the boundary cycle on the left of ``oriented``."""
    g = gp.graph
    e = oriented
    ebar = g.s1[e]
    base = max(g.labels) + 1
    c, d, w, u = base, base + 1, base + 2, base + 3
    s0 = dict(g.s0)
    s1 = dict(g.s1)
    s1[e], s1[c] = c, e
    s1[d], s1[ebar] = ebar, d
    s1[w], s1[u] = u, w
    s0[c], s0[w], s0[d] = w, d, c
    s0[u] = u
    newg = RibbonGraph(s0, s1)
    pointing = dict(gp.pointing)
    assert label not in pointing
    pointing[label] = (VERTEX, u)
    out = PointedRibbonGraph(newg, pointing)
    assert len(newg.faces) == len(g.faces)
    return out


# ---------------------------------------------------------------------------
# stratum-maximal cells
# ---------------------------------------------------------------------------

def _face_labelings(g: RibbonGraph, q_labels):
    reps = [orb[0] for orb in g.faces]
    assert len(reps) == len(q_labels)
    for perm in itertools.permutations(q_labels):
        yield {p: (BOUNDARY, r) for p, r in zip(perm, reps)}


def trivalent_classes(g, q, q_labels):
    """All trivalent genus-g classes with q labeled boundary cycles, by
    Whitehead-flip BFS from a resolved rose seed."""
    seed_graph = rose(g, q)
    seen = {}
    frontier = []
    for pointing in _face_labelings(seed_graph, q_labels):
        gp = _resolve_to_trivalent(to_standard(PointedRibbonGraph(seed_graph, pointing)))
        gp = to_standard(gp)
        if certificate(gp) not in seen:
            seen[certificate(gp)] = gp
            frontier.append(gp)
    while frontier:
        gp = frontier.pop()
        for r in gp.graph.edge_reps():
            a, b = r, gp.graph.s1[r]
            if gp.graph.vertex_rep(a) == gp.graph.vertex_rep(b):
                continue    # loops cannot be collapsed
            collapsed = quotient_ribbon(gp, {r})
            merged = next(orb[0] for orb in collapsed.graph.vertices if len(orb) == 4)
            for res in resolutions(collapsed, merged):
                cf = canonical_form(res)
                if cf.certificate not in seen:
                    std = relabel(res, cf.relabeling)
                    std._cert = cf.certificate
                    seen[cf.certificate] = std
                    frontier.append(std)
    return tuple(seen[c] for c in sorted(seen))


def _whisker_closure(bases, whisker_sets):
    """All ways of inserting the remaining whisker labels, one at a time at
    every position (including onto earlier whiskers)."""
    done = {}
    frontier = []
    for gp, rest in zip(bases, whisker_sets):
        gp = to_standard(gp)
        key = (certificate(gp), frozenset(rest))
        if key not in done:
            done[key] = (gp, frozenset(rest))
            frontier.append((gp, frozenset(rest)))
    out = {}
    while frontier:
        gp, rest = frontier.pop()
        if not rest:
            out[certificate(gp)] = gp
            continue
        for w in sorted(rest):
            for oriented in sorted(gp.graph.labels):
                raw = insert_whisker(gp, oriented, w)
                cf = canonical_form(raw)
                key = (cf.certificate, rest - {w})
                if key not in done:
                    child = relabel(raw, cf.relabeling)
                    child._cert = cf.certificate
                    done[key] = (child, rest - {w})
                    frontier.append((child, rest - {w}))
    return out


def stratum_maximal(g, q_labels, w_labels):
    """Maximal cells of the stratum with boundary labels q_labels and whisker
    labels w_labels: trivalent flip classes (or the segment and lollipop cores
    when (g, |Q|) is not hyperbolic) with all whiskers inserted."""
    q = len(q_labels)
    bases = []
    rests = []
    if 2 - 2 * g - q < 0:
        for gp in trivalent_classes(g, q, q_labels):
            bases.append(gp)
            rests.append(frozenset(w_labels))
    elif (g, q) == (0, 2):
        # lollipop core: loop plus one whisker at the loop vertex
        s1 = {0: 1, 1: 0, 2: 3, 3: 2}
        s0 = perm_from_cycles([[0, 1, 2]], frozenset(range(4)))
        core = RibbonGraph(s0, s1)
        freps = [orb[0] for orb in core.faces]
        for fl in itertools.permutations(q_labels):
            for w in sorted(w_labels):
                pointing = {fl[0]: (BOUNDARY, freps[0]), fl[1]: (BOUNDARY, freps[1]),
                            w: (VERTEX, core.vertex_rep(3))}
                bases.append(PointedRibbonGraph(core, pointing))
                rests.append(frozenset(w_labels) - {w})
    elif (g, q) == (0, 1):
        # segment core: one edge with both pointed univalent ends
        if len(w_labels) < 2:
            return {}
        s1 = {0: 1, 1: 0}
        s0 = {0: 0, 1: 1}
        core = RibbonGraph(s0, s1)
        for pair in itertools.combinations(sorted(w_labels), 2):
            pointing = {q_labels[0]: (BOUNDARY, 0),
                        pair[0]: (VERTEX, 0), pair[1]: (VERTEX, 1)}
            bases.append(PointedRibbonGraph(core, pointing))
            rests.append(frozenset(w_labels) - set(pair))
    else:
        return {}
    return _whisker_closure(bases, rests)


# ---------------------------------------------------------------------------
# the complex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CellInfo:
    graph: PointedRibbonGraph
    dim: int
    aut_order: int
    lambda_rank: int
    fiber_dim: int
    Q: frozenset


@dataclass(frozen=True)
class ModuliCellComplex:
    genus: int
    n: int
    cells: dict                # certificate -> CellInfo
    faces: dict                # certificate -> {child certificate: multiplicity}

    def by_dim(self):
        out = {}
        for c, info in self.cells.items():
            out.setdefault(info.dim, []).append(c)
        return {d: sorted(v) for d, v in sorted(out.items())}

    def dimension_histogram(self):
        return {d: len(v) for d, v in self.by_dim().items()}


def enumerate_graphs(g, n):
    """All isomorphism classes of connected pointed ribbon graphs of genus g
    with n distinguishable labels, in deterministic (certificate) order."""
    return tuple(info.graph for _, info in sorted(build_complex(g, n).cells.items()))


def _generate_cells(g, n):
    P = labels_for(n)
    cells = {}
    for q in range(1, n + 1):
        for q_subset in itertools.combinations(P, q):
            w_labels = tuple(p for p in P if p not in q_subset)
            for c, gp in stratum_maximal(g, q_subset, w_labels).items():
                cells.setdefault(c, gp)
    # downward closure under single negligible collapses, recording faces
    faces = {c: {} for c in cells}
    queue = list(cells.values())
    while queue:
        gp = queue.pop()
        c = certificate(gp)
        arrows = faces.setdefault(c, {})
        reps = gp.graph.edge_reps()
        if len(reps) == 1:
            continue    # one-edge cells have no faces
        for r in reps:
            if not is_negligible(gp, {r}):
                continue
            raw = quotient_ribbon(gp, {r})
            cf = canonical_form(raw)
            cc = cf.certificate
            arrows[cc] = arrows.get(cc, 0) + 1
            if cc not in cells:
                child = relabel(raw, cf.relabeling)
                child._cert = cc
                cells[cc] = child
                faces[cc] = {}
                queue.append(child)
    return cells, faces


def build_complex(g, n) -> ModuliCellComplex:
    _check_pair(g, n)
    cells, faces = _generate_cells(g, n)
    infos = {}
    for c, gp in cells.items():
        assert genus(gp.graph) == g and len(gp.pointing) == n
        order, _ = automorphisms(gp)
        _, rank, fiber = cell_lambda_map(gp)
        infos[c] = CellInfo(graph=gp,
                            dim=len(gp.graph.edge_reps()) - 1,
                            aut_order=order,
                            lambda_rank=rank,
                            fiber_dim=fiber,
                            Q=gp.Q)
    return ModuliCellComplex(g, n, infos, faces)


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------

def verify_dimensions(g, n, complex=None) -> dict:
    """Dimension audit: stratum maxima, lambda-fiber dimensions, minimal
    dimension against both candidate lower bounds, and the longest face chain
    inside the full stratum Q = P."""
    cx = complex if complex is not None else build_complex(g, n)
    P = frozenset(labels_for(n))
    dims = [info.dim for info in cx.cells.values()]
    top_formula = 6 * g - 7 + 3 * n
    fiber_formula = 6 * g - 6 + 2 * n

    per_q = {}
    for info in cx.cells.values():
        key = tuple(sorted(info.Q))
        per_q[key] = max(per_q.get(key, -1), info.dim)
    q_bound_ok = all(d <= 6 * g - 6 + 2 * n + (len(k) - 1) for k, d in per_q.items())

    full = [c for c, info in cx.cells.items() if info.Q == P]
    max_dim_full = max(cx.cells[c].dim for c in full) if full else None
    max_fiber = max(info.fiber_dim for info in cx.cells.values())

    # longest chain of face arrows through cells of the full stratum
    # (dynamic program from low dimension upward)
    order = sorted(full, key=lambda c: cx.cells[c].dim)
    chain = {c: 0 for c in full}
    for c in order:
        best = 0
        for child, _ in cx.faces.get(c, {}).items():
            if child in chain:
                best = max(best, chain[child] + 1)
        chain[c] = best
    longest_chain = max(chain.values()) if chain else 0
    chain_bound = 4 * g - 4 + n + (n - 1)

    return {
        "cells": len(cx.cells),
        "dimension_histogram": cx.dimension_histogram(),
        "max_dim_full_stratum": max_dim_full,
        "max_dim_full_formula": top_formula,
        "max_dim_full_ok": max_dim_full == top_formula,
        "per_stratum_bound_ok": q_bound_ok,
        "max_fiber_dim": max_fiber,
        "max_fiber_formula": fiber_formula,
        "max_fiber_ok": max_fiber == fiber_formula,
        "min_dim": min(dims),
        "min_dim_paper_bound": 2 * g - 2 + n,
        "min_dim_derived_bound": 2 * g - 3 + n,
        "min_dim_attains_paper": min(dims) == 2 * g - 2 + n,
        "min_dim_attains_derived": min(dims) == 2 * g - 3 + n,
        "longest_full_stratum_chain": longest_chain,
        "chain_bound": chain_bound,
        "chain_ok": longest_chain <= chain_bound,
    }


def orbifold_euler(g) -> Fraction:
    """Sum of (-1)^(dim) / |Aut| over the (g, 1) classes (dim = |X1| - 1)."""
    if g < 1:
        raise errors.UnstablePair("the audit needs n = 1, g >= 1")
    cx = build_complex(g, 1)
    total = Fraction(0)
    for info in cx.cells.values():
        total += Fraction((-1) ** info.dim, info.aut_order)
    return total


def harer_zagier_euler(g) -> Fraction:
    """Closed form zeta(1-2g) = -B_{2g}/(2g) for the (g,1) orbifold Euler
    characteristic; the external cross-check of the enumeration."""
    n = 2 * g
    bern = [Fraction(0)] * (n + 1)
    bern[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += Fraction(_binom(m + 1, k)) * bern[k]
        bern[m] = -acc / (m + 1)
    return -bern[n] / n


def _binom(a, b):
    out = 1
    for i in range(b):
        out = out * (a - i) // (i + 1)
    return out


# ---------------------------------------------------------------------------
# permissible-sequence census
# ---------------------------------------------------------------------------

def stable_certificate(s) -> tuple:
    """Canonical certificate of a stable ribbon graph: the pointed certificate
    together with iota written in relabeled orbit minima."""
    cf = canonical_form(s.pointed)
    g = s.graph

    def move(point):
        kind, rep = point
        orbit = g.vertex_of(rep) if kind == VERTEX else g.face_of(rep)
        return (kind, min(cf.relabeling[x] for x in orbit))

    pairs = sorted(tuple(sorted((move(a), move(b)))) for a, b in s.iota.items())
    return (cf.certificate, tuple(pairs))


def enumerate_permissible(gp: PointedRibbonGraph, max_depth):
    """All permissible sequences of depth <= max_depth, in deterministic
    order, each paired with its stabilize_sequence certificate."""
    all_edges = frozenset(gp.graph.edge_reps())
    out = []

    def rec(levels):
        ps = PermissibleSequence(gp, levels)
        out.append((ps, stable_certificate(stabilize_sequence(gp, ps))))
        if len(levels) - 1 >= max_depth:
            return
        ctx = _level_context(gp, levels[-1] if len(levels) > 1 else None)
        bar_reps = sorted(min(orb) for orb in ctx.bar.edges)
        bctx = Context(ctx.bar, ctx.bar_marks)
        comp_reps = [frozenset(min(x, ctx.bar.s1[x]) for x in comp)
                     for comp in ctx.bar.components()]
        for k in range(1, len(bar_reps) + 1):
            for combo in itertools.combinations(bar_reps, k):
                z = frozenset(combo)
                if any(cr <= z for cr in comp_reps):
                    continue
                if stable_core_in(bctx, z) != z:
                    continue
                host_reps = ctx.host_reps_of(z)
                rec(levels + (host_reps,))

    rec((all_edges,))
    out.sort(key=lambda t: tuple(tuple(sorted(z)) for z in t[0].levels))
    return tuple(out)


# ---------------------------------------------------------------------------
# completeness oracles
# ---------------------------------------------------------------------------

def all_pointings(g: RibbonGraph, plabels):
    """Every valid pointing of ``g`` by the given labels (not deduplicated)."""
    n = len(plabels)
    dist = sorted(distinguished_points(g))
    if len(dist) > n:
        return
    others = sorted(p for p in
                    ({(VERTEX, orb[0]) for orb in g.vertices}
                     | {(BOUNDARY, orb[0]) for orb in g.faces})
                    if p not in set(dist))
    for extra in itertools.combinations(others, n - len(dist)):
        targets = dist + list(extra)
        for perm in itertools.permutations(plabels):
            pointing = {p: t for p, t in zip(perm, targets)}
            try:
                yield attach_pointing(g, pointing)
            except errors.RibbonError:
                continue


def brute_force_classes(g, n, edge_limit):
    """Independent generator: all rotation systems over the standard pairing
    up to ``edge_limit`` edges, filtered and canonicalized."""
    P = labels_for(n)
    found = {}
    for m in range(1, edge_limit + 1):
        labels = list(range(2 * m))
        s1 = {i: i ^ 1 for i in labels}
        for perm in itertools.permutations(labels):
            s0 = {i: perm[i] for i in labels}
            graph = RibbonGraph(s0, s1)
            if not graph.connected or genus(graph) != g:
                continue
            for gp in all_pointings(graph, P):
                c = certificate(gp)
                if c not in found:
                    found[c] = to_standard(gp)
    return found


def random_membership_trials(g, n, m, trials, seed, known):
    """Randomized completeness oracle: random rotation systems at 2m labels;
    every valid pointed class found must already be in ``known``.  Returns the
    number of hits; raises AssertionError listing any missing class."""
    rng = random.Random(seed)
    P = labels_for(n)
    labels = list(range(2 * m))
    s1 = {i: i ^ 1 for i in labels}
    hits = 0
    for _ in range(trials):
        perm = list(labels)
        rng.shuffle(perm)
        s0 = {i: perm[i] for i in labels}
        graph = RibbonGraph(s0, s1)
        if not graph.connected or genus(graph) != g:
            continue
        for gp in all_pointings(graph, P):
            c = certificate(gp)
            if c not in known:
                raise AssertionError(f"class outside the enumerated set: {gp!r}")
            hits += 1
    return hits
