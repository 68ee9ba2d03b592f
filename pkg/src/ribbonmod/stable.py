"""Stable ribbon graphs: combinatorial stable curves.

A stable ribbon graph is a possibly-disconnected pointed ribbon graph together
with a set Sigma of special points (containing the pointing image and all
distinguished points) and a fixed-point free involution iota on part of
Sigma - x(P) describing the nodes.  Components acquire an order: order zero
when a label sits on one of their boundary cycles, order at most k+1 when a
special point is iota-paired into a component of order at most k; every
boundary-cycle member of a pair on an order-k component must point at a vertex
on an order-(k-1) component.

``stabilize`` turns (host, edge subset) into such an object: the quotient
G/G_Z glued along exceptional pairs to the stable core G_{Z^st}, with the
unmarked circles of the semistable core contracted to plain vertex-vertex
nodes.  ``stabilize_sequence`` iterates this along a permissible sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import errors
from .collapse import (Context, PseudosurfaceData, _as_reps, edge_label_set,
                       quotient_ribbon, quotient_structure, semistable_core_in,
                       stable_core_in, structural_exceptional,
                       subgraph_structure)
from .core import (BOUNDARY, VERTEX, PointedRibbonGraph, RibbonGraph,
                   all_points, distinguished_points, genus)


# ---------------------------------------------------------------------------
# the stable object
# ---------------------------------------------------------------------------

class StableRibbonGraph:
    """A stable pointed ribbon graph (graph, x, Sigma, iota)."""

    __slots__ = ("pointed", "sigma", "iota", "_orders")

    def __init__(self, pointed: PointedRibbonGraph, sigma, iota):
        g = pointed.graph
        points = all_points(g)
        sigma = frozenset(sigma)
        if not sigma <= points:
            raise errors.BadPointingTarget("Sigma contains non-points")
        needed = frozenset(pointed.pointing.values()) | distinguished_points(g)
        if not needed <= sigma:
            raise errors.BadPointingTarget("Sigma must contain x(P) and all distinguished points")
        image = frozenset(pointed.pointing.values())
        iota = dict(iota)
        for a, b in iota.items():
            if a == b:
                raise errors.NotInvolution(f"iota fixes {a}")
            if iota.get(b) != a:
                raise errors.NotInvolution(f"iota is not an involution at {a}")
            if a in image or b in image:
                raise errors.BadPointingTarget("iota touches a pointed point")
            if a not in sigma or b not in sigma:
                raise errors.BadPointingTarget("iota pairs points outside Sigma")
        self.pointed = pointed
        self.sigma = sigma
        self.iota = iota
        self._orders = None

    @property
    def graph(self) -> RibbonGraph:
        return self.pointed.graph

    @property
    def pointing(self):
        return self.pointed.pointing

    def component_index(self, point):
        comps = self.graph.components()
        for i, c in enumerate(comps):
            if point[1] in c:
                return i
        raise KeyError(point)

    def __repr__(self):
        return (f"StableRibbonGraph({self.pointed!r}, sigma={sorted(self.sigma)}, "
                f"iota={sorted(self.iota.items())})")


def component_orders(s: StableRibbonGraph):
    """Least orders per component, as the reachability closure of the
    inductive definition.  Raises UnorderedComponent when some component
    receives no order."""
    if s._orders is not None:
        return s._orders
    comps = s.graph.components()
    orders = {}
    for p, (kind, rep) in s.pointing.items():
        if kind == BOUNDARY:
            orders[s.component_index((kind, rep))] = 0
    changed = True
    while changed:
        changed = False
        for a, b in s.iota.items():
            ca, cb = s.component_index(a), s.component_index(b)
            if cb in orders:
                k = orders[cb] + 1
                if ca not in orders or orders[ca] > k:
                    orders[ca] = k
                    changed = True
    missing = [i for i in range(len(comps)) if i not in orders]
    if missing:
        raise errors.UnorderedComponent(f"components {missing} receive no order")
    s._orders = {i: orders[i] for i in range(len(comps))}
    return s._orders


def validate_stable(s: StableRibbonGraph) -> StableRibbonGraph:
    """Check both stability conditions; returns the certified object."""
    orders = component_orders(s)
    for a, b in s.iota.items():
        if a[0] != BOUNDARY:
            continue
        k = orders[s.component_index(a)]
        if k > 0:
            if b[0] != VERTEX or orders[s.component_index(b)] != k - 1:
                raise errors.BadFaceTarget(
                    f"boundary cycle {a} on an order-{k} component pairs with {b}")
    return s


# ---------------------------------------------------------------------------
# the bar construction
# ---------------------------------------------------------------------------

def _smooth_bare(g: RibbonGraph, vrep):
    """Smooth a bivalent vertex of a bare graph; None when it closes a loop."""
    orb = g.vertex_of(vrep)
    if len(orb) != 2:
        raise errors.NotBivalent(f"vertex {vrep} has valency {len(orb)}")
    e1, e2 = orb
    if g.s1[e1] == e2:
        return None
    a, b = g.s1[e1], g.s1[e2]
    s0 = {x: y for x, y in g.s0.items() if x not in (e1, e2)}
    s1 = {x: y for x, y in g.s1.items() if x not in (e1, e2)}
    s1[a], s1[b] = b, a
    return RibbonGraph(s0, s1)


def bar_graph_chains(g: RibbonGraph, bivalent_reps):
    """Smooth the listed bivalent vertices where possible, in ascending rep
    order; a vertex whose two half-edges pair each other is kept, so a circle
    retains one vertex.  Returns (graph, chains), where ``chains`` sends each
    surviving edge rep to the frozenset of original edge reps merged into it.
    """
    for rep in bivalent_reps:
        if len(g.vertex_of(rep)) != 2:
            raise errors.NotBivalent(f"vertex {rep} has valency {len(g.vertex_of(rep))}")
    chains = {orb[0]: frozenset({orb[0]}) for orb in g.edges}
    edge_key = {x: orb[0] for orb in g.edges for x in orb}
    cur = g
    for rep in sorted(bivalent_reps):
        e1, e2 = cur.vertex_of(rep)
        nxt = _smooth_bare(cur, rep)
        if nxt is None:
            continue
        a, b = cur.s1[e1], cur.s1[e2]
        merged = chains.pop(edge_key[e1]) | chains.pop(edge_key[e2])
        newkey = min(a, b)
        chains[newkey] = merged
        edge_key[a] = edge_key[b] = newkey
        cur = nxt
    final = {orb[0]: chains[edge_key[orb[0]]] for orb in cur.edges}
    return cur, final


def bar_graph(g: RibbonGraph, bivalent_reps) -> RibbonGraph:
    """Forget the listed bivalent vertices (see ``bar_graph_chains``)."""
    return bar_graph_chains(g, bivalent_reps)[0]


# ---------------------------------------------------------------------------
# one-step stabilization
# ---------------------------------------------------------------------------

def stabilize(gp: PointedRibbonGraph, Z) -> StableRibbonGraph:
    """One-step stabilization of (G, Z): the quotient next to the stable core,
    exceptional vertices paired with exceptional boundary cycles; semistable
    circles missing the stable core contract to plain vertex-vertex nodes."""
    g = gp.graph
    reps = _as_reps(gp, Z)
    if reps >= frozenset(g.edge_reps()):
        raise errors.FullSubset("Z must be proper")
    ctx = Context.of(gp)
    zsst = semistable_core_in(ctx, reps)
    zst = stable_core_in(ctx, zsst)
    neg = reps - zsst
    gp1 = quotient_ribbon(gp, neg) if neg else gp
    if not zsst:
        sigma = set(gp1.pointing.values()) | distinguished_points(gp1.graph)
        return StableRibbonGraph(gp1, sigma, {})
    g1 = gp1.graph
    zl_sst = edge_label_set(g1, zsst)
    zl_st = edge_label_set(g1, zst) if zst else frozenset()
    qg, sub, comps, pairs = structural_exceptional(g1, zl_sst)
    stable_comps = {i for i, c in enumerate(comps)
                    if {min(x, g1.s1[x]) for x in c} <= zst}

    # labels on surviving vertices/faces stay on the quotient; labels inside
    # the stable core live on the core piece
    pointing = {}
    for p in sorted(gp1.pointing):
        kind, rep = gp1.pointing[p]
        if kind == VERTEX:
            orbit = set(g1.vertex_of(rep))
            inside = orbit & zl_sst
            if inside:
                assert inside & zl_st, "marked vertex on a contracted circle"
                pointing[p] = (VERTEX, sub.vertex_rep(min(inside)))
            else:
                pointing[p] = (VERTEX, rep)
        else:
            face = set(g1.face_of(rep))
            surv = face - zl_sst
            if surv:
                pointing[p] = (BOUNDARY, qg.face_rep(min(surv)))
            else:
                assert face <= zl_st, "pointed face on a contracted circle"
                pointing[p] = (BOUNDARY, sub.face_rep(min(face)))

    # union graph: quotient plus the stable core (label sets are disjoint)
    s0 = dict(qg.s0)
    s1 = dict(qg.s1)
    for x in zl_st:
        s0[x] = sub.s0[x]
        s1[x] = sub.s1[x]
    union = RibbonGraph(s0, s1)
    pointed = PointedRibbonGraph(union, pointing)

    iota = {}
    contracted = {}
    for v, (ci, frep) in sorted(pairs.items()):
        if ci in stable_comps:
            a, b = (VERTEX, v), (BOUNDARY, frep)
            iota[a] = b
            iota[b] = a
        else:
            contracted.setdefault(ci, []).append(v)
    for ci, verts in sorted(contracted.items()):
        assert len(verts) == 2, "a contracted circle has two exceptional vertices"
        a, b = (VERTEX, verts[0]), (VERTEX, verts[1])
        iota[a] = b
        iota[b] = a
    sigma = set(pointing.values()) | distinguished_points(union) | set(iota)
    return StableRibbonGraph(pointed, sigma, iota)


# ---------------------------------------------------------------------------
# permissible sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PermissibleSequence:
    """Nested edge subsets Z_0 = X1 ⊃ Z_1 ⊃ … ⊃ Z_k (host edge reps)."""
    host: PointedRibbonGraph
    levels: tuple

    @property
    def depth(self):
        return len(self.levels) - 1

    def level_of(self, edge_rep):
        k = 0
        for j in range(1, len(self.levels)):
            if edge_rep in self.levels[j]:
                k = j
        return k


@dataclass(frozen=True)
class LevelContext:
    """Level-k ambient data: the subgraph carrying Z_k, its marked vertices,
    and the bar graph obtained by smoothing the marked bivalent ones, with the
    chain map from bar-edge reps to sets of host edge reps."""
    graph: RibbonGraph
    marks: frozenset
    bar: RibbonGraph
    bar_marks: frozenset
    chains: dict

    def bar_reps_of(self, host_edge_reps):
        """Express a union of chains in bar-edge reps (NotNested otherwise)."""
        host_edge_reps = frozenset(host_edge_reps)
        out = set()
        covered = set()
        for r, ch in self.chains.items():
            inter = ch & host_edge_reps
            if not inter:
                continue
            if inter != ch:
                raise errors.NotNested(
                    f"edge set cuts through the merged chain {sorted(ch)}")
            out.add(r)
            covered |= ch
        if covered != host_edge_reps:
            raise errors.NotNested("edge set is not a union of this level's edges")
        return frozenset(out)

    def host_reps_of(self, bar_reps):
        out = set()
        for r in bar_reps:
            out |= self.chains[r]
        return frozenset(out)


def _level_context(host: PointedRibbonGraph, level_reps=None) -> LevelContext:
    hostg = host.graph
    hostmarks = host.marked_vertex_reps()
    if level_reps is None:
        g = hostg
    else:
        g = subgraph_structure(hostg, edge_label_set(hostg, level_reps))
    marks = frozenset(orb[0] for orb in g.vertices
                      if hostg.vertex_rep(orb[0]) in hostmarks)
    smooth = [orb[0] for orb in g.vertices if len(orb) == 2 and orb[0] in marks]
    bar, chains = bar_graph_chains(g, smooth)
    bar_marks = frozenset(orb[0] for orb in bar.vertices
                          if hostg.vertex_rep(orb[0]) in hostmarks)
    return LevelContext(g, marks, bar, bar_marks, chains)


def validate_permissible(gp: PointedRibbonGraph, levels) -> PermissibleSequence:
    """Check a candidate sequence of host edge subsets.

    Each Z_k (k >= 1) must be a union of edges of the previous level's bar
    graph, must not contain one of its connected components, and must equal
    its own stable core in that bar context.
    """
    levels = tuple(frozenset(z) for z in levels)
    all_edges = frozenset(gp.graph.edge_reps())
    if not levels or levels[0] != all_edges:
        raise errors.NotNested("Z_0 must be the full edge set")
    for k in range(1, len(levels)):
        zk = levels[k]
        if not zk:
            raise errors.NotNested(f"level {k} is empty")
        if not zk <= levels[k - 1]:
            raise errors.NotNested(f"level {k} is not nested in level {k - 1}")
        ctx = _level_context(gp, levels[k - 1] if k > 1 else None)
        bar_reps = ctx.bar_reps_of(zk)
        bctx = Context(ctx.bar, ctx.bar_marks)
        for comp in ctx.bar.components():
            comp_reps = frozenset(min(x, ctx.bar.s1[x]) for x in comp)
            if comp_reps <= bar_reps:
                raise errors.SwallowsComponent(
                    f"level {k} contains a whole component of the level-{k - 1} bar graph")
        if stable_core_in(bctx, bar_reps) != bar_reps:
            raise errors.NotInStableCore(f"level {k} is not stable at level {k - 1}")
    return PermissibleSequence(gp, levels)


def level_contexts(ps: PermissibleSequence):
    """LevelContext for every level of the sequence (level 0 is the host)."""
    out = [_level_context(ps.host)]
    for k in range(1, len(ps.levels)):
        out.append(_level_context(ps.host, ps.levels[k]))
    return out


def stabilize_sequence(gp: PointedRibbonGraph, ps) -> StableRibbonGraph:
    """The stable pointed ribbon graph of a permissible sequence: level-k
    pieces G_{Z_k}/G_{Z_{k+1}} glued along the exceptional pairings, iota
    accumulated levelwise.  An exceptional boundary cycle that degenerates
    further pairs with its image in the deepest level where it survives."""
    levels = ps.levels if isinstance(ps, PermissibleSequence) else tuple(
        frozenset(z) for z in ps)
    validate_permissible(gp, levels)
    host = gp.graph
    hostmarks = gp.marked_vertex_reps()
    k_max = len(levels) - 1

    level_graphs = [host]
    for k in range(1, len(levels)):
        level_graphs.append(subgraph_structure(host, edge_label_set(host, levels[k])))

    pieces = []
    pending = []   # (vertex point of piece k, level k+1, face label set there)
    for k in range(len(levels)):
        gk = level_graphs[k]
        if k < k_max:
            ctx = Context(gk, frozenset(orb[0] for orb in gk.vertices
                                        if host.vertex_rep(orb[0]) in hostmarks))
            assert stable_core_in(ctx, levels[k + 1]) == levels[k + 1], \
                "sequence level is not stable in its ambient level"
            zl_next = edge_label_set(host, levels[k + 1])
            qg, sub, comps, pairs = structural_exceptional(gk, zl_next)
            pieces.append(qg)
            for v, (ci, frep) in sorted(pairs.items()):
                pending.append(((VERTEX, v), k + 1, frozenset(sub.face_of(frep))))
        else:
            pieces.append(gk)

    s0 = {}
    s1 = {}
    for piece in pieces:
        s0.update(piece.s0)
        s1.update(piece.s1)
    union = RibbonGraph(s0, s1)

    # each label lands in the deepest level that still carries it
    pointing = {}
    for p in sorted(gp.pointing):
        kind, rep = gp.pointing[p]
        if kind == VERTEX:
            orbit = set(host.vertex_of(rep))
            k = max(kk for kk in range(len(levels))
                    if kk == 0 or orbit & edge_label_set(host, levels[kk]))
            piece = pieces[k]
            surviving = orbit & piece.labels
            assert surviving, "a marked vertex must survive in its deepest level"
            pointing[p] = (VERTEX, piece.vertex_rep(min(surviving)))
        else:
            face = set(host.face_of(rep))
            k = max(kk for kk in range(len(levels))
                    if kk == 0 or face <= edge_label_set(host, levels[kk]))
            piece = pieces[k]
            surviving = face & piece.labels
            assert surviving, "a pointed face must survive in its deepest level"
            pointing[p] = (BOUNDARY, piece.face_rep(min(surviving)))
    pointed = PointedRibbonGraph(union, pointing)

    # resolve iota face targets to the deepest level where the face survives
    iota = {}
    for vpoint, k, face in pending:
        kk, ff = k, face
        while kk < k_max and ff <= edge_label_set(host, levels[kk + 1]):
            kk += 1
        piece = pieces[kk]
        surviving = ff & piece.labels
        assert surviving, "an exceptional boundary cycle must survive somewhere"
        fpoint = (BOUNDARY, piece.face_rep(min(surviving)))
        iota[vpoint] = fpoint
        iota[fpoint] = vpoint
    sigma = set(pointing.values()) | distinguished_points(union) | set(iota)
    return StableRibbonGraph(pointed, sigma, iota)


# ---------------------------------------------------------------------------
# glued genus and Q-minimality
# ---------------------------------------------------------------------------

def _glued_count(n_comps, glue):
    parent = list(range(n_comps))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in glue:
        parent[find(i)] = find(j)
    return len({find(i) for i in range(n_comps)})


def glued_genus(obj) -> int:
    """Arithmetic genus of the glued pseudosurface.

    For a stable ribbon graph, g = Σ g_c + #nodes − #components + 1; for
    pseudosurface data, g = Σ g_c + Σ_classes (ε + size − 1) − #components + 1.
    Raises Disconnected when the gluing does not connect everything.
    """
    if isinstance(obj, StableRibbonGraph):
        g = obj.graph
        comps = g.components()
        idx = {x: i for i, c in enumerate(comps) for x in c}
        pairs = {frozenset((a, b)) for a, b in obj.iota.items()}
        glue = []
        for pair in pairs:
            a, b = sorted(pair)
            glue.append((idx[a[1]], idx[b[1]]))
        if _glued_count(len(comps), glue) != 1:
            raise errors.Disconnected("the glued pseudosurface is disconnected")
        total = sum(genus(g, c) for c in comps) + len(pairs) - len(comps) + 1
        assert 2 - 2 * total == sum(2 - 2 * genus(g, c) for c in comps) - 2 * len(pairs)
        return total
    if isinstance(obj, PseudosurfaceData):
        g = obj.normalization
        comps = g.components()
        idx = {x: i for i, c in enumerate(comps) for x in c}
        glue = []
        for cls in obj.classes:
            members = sorted(cls)
            for m in members[1:]:
                glue.append((idx[members[0]], idx[m]))
        if _glued_count(len(comps), glue) != 1:
            raise errors.Disconnected("the glued pseudosurface is disconnected")
        defect = sum(obj.epsilon[i] + len(cls) - 1 for i, cls in enumerate(obj.classes))
        return sum(genus(g, c) for c in comps) + defect - len(comps) + 1
    raise TypeError(f"glued_genus of {type(obj).__name__}")


def q_minimal_check(ps: PseudosurfaceData) -> dict:
    """Verify the three Q-minimality conditions of a pseudosurface:

    (1) Q is carried injectively by boundary cycles and meets every component
        of the regular part;
    (2) every component of the regular part minus (x(P) ∪ supp ε) has negative
        Euler characteristic;
    (3) the genus identity g = Σ g_c + Σ (ε + r − 1) − #components + 1 against
        the genus of the degenerated marked surface.
    """
    g = ps.normalization
    comps = g.components()
    idx = {x: i for i, c in enumerate(comps) for x in c}

    q_targets = [ps.x[p] for p in sorted(ps.Q)]
    cond1 = all(kind == BOUNDARY for kind, _ in q_targets)
    cond1 = cond1 and len(set(q_targets)) == len(q_targets)
    cond1 = cond1 and {idx[rep] for _, rep in q_targets} == set(range(len(comps)))

    # points removed from the regular part: distinct x-images, plus the class
    # members of every multi-branch or positive-defect class
    removed_points = [set() for _ in comps]
    for point in ps.x.values():
        removed_points[idx[point[1]]].add(point)
    for i, cls in enumerate(ps.classes):
        if len(cls) >= 2 or ps.epsilon[i] > 0:
            for v in cls:
                removed_points[idx[v]].add((VERTEX, v))
    cond2 = all(2 - 2 * genus(g, c) - len(removed_points[i]) < 0
                for i, c in enumerate(comps))

    try:
        value = glued_genus(ps)
        cond3 = ps.host_genus is None or value == ps.host_genus
    except errors.Disconnected:
        value = None
        cond3 = False
    return {"q_injective_meets_all": cond1,
            "negative_euler": cond2,
            "genus_identity": cond3,
            "glued_genus": value}
