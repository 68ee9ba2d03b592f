"""Edge subsets, their cores, and collapses.

A subset Z of the edges of a pointed ribbon graph carries two induced ribbon
structures: the subgraph G_Z (sigma0 acts by first return into Z) and the
quotient G/G_Z (sigma_inf acts by first return outside Z).  Collapsing a
negligible Z leaves the marked surface unchanged; a general Z collapses to a
pseudosurface whose combinatorial normalization is G/G_Z, with exceptional
vertices grouped by the semistable component they came from and a genus
defect per group.

Most functions are parametrized by a ``Context`` (an ambient graph plus the
set of marked vertices) so that the same machinery drives nested levels of a
permissible sequence, where the ambient graph is itself a subgraph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import errors
from .core import (BOUNDARY, VERTEX, PointedRibbonGraph, RibbonGraph, genus)


@dataclass(frozen=True)
class Context:
    """An ambient ribbon graph with marked vertices (host-level: the pointed
    vertices of a PointedRibbonGraph)."""
    graph: RibbonGraph
    marks: frozenset

    @classmethod
    def of(cls, gp: PointedRibbonGraph):
        return cls(gp.graph, gp.marked_vertex_reps())


# ---------------------------------------------------------------------------
# edge subsets
# ---------------------------------------------------------------------------

def edge_label_set(g: RibbonGraph, edge_reps):
    """All half-edge labels of the given edges (edges named by their minimal
    half-edge label)."""
    reps = set(edge_reps)
    valid = set(g.edge_reps())
    bad = reps - valid
    if bad:
        raise errors.RibbonError(f"not edge representatives: {sorted(bad)}")
    return frozenset(x for r in reps for x in (r, g.s1[r]))


def _as_reps(gp, Z):
    if isinstance(Z, EdgeSubset):
        return Z.edges
    return frozenset(Z)


@dataclass(frozen=True)
class EdgeSubset:
    """A subset of the edges of a pointed host graph, with cached core flags."""
    host: PointedRibbonGraph
    edges: frozenset
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        edge_label_set(self.host.graph, self.edges)  # validates

    @property
    def labels(self):
        return edge_label_set(self.host.graph, self.edges)

    @property
    def proper(self):
        return self.edges < frozenset(self.host.graph.edge_reps())

    @property
    def negligible(self):
        if "neg" not in self._cache:
            self._cache["neg"] = is_negligible(self.host, self.edges)
        return self._cache["neg"]

    @property
    def semistable(self):
        if "sst" not in self._cache:
            self._cache["sst"] = semistable_core(self.host, self.edges).edges == self.edges
        return self._cache["sst"]

    @property
    def stable(self):
        if "st" not in self._cache:
            self._cache["st"] = stable_core(self.host, self.edges).edges == self.edges
        return self._cache["st"]


# ---------------------------------------------------------------------------
# induced ribbon structures
# ---------------------------------------------------------------------------

def subgraph_structure(g: RibbonGraph, zlabels) -> RibbonGraph:
    """Ribbon structure on the oriented edges of Z: sigma0 sends e to the
    first sigma0-iterate inside X(G_Z), sigma1 restricts."""
    zl = frozenset(zlabels)
    s0 = {}
    for e in zl:
        y = g.s0[e]
        while y not in zl:
            y = g.s0[y]
        s0[e] = y
    s1 = {e: g.s1[e] for e in zl}
    return RibbonGraph(s0, s1)


def quotient_structure(g: RibbonGraph, zlabels) -> RibbonGraph:
    """Ribbon structure on the surviving edges: sigma_inf sends e to the first
    sigma_inf-iterate outside X(G_Z), sigma1 restricts, sigma0 is derived."""
    zl = frozenset(zlabels)
    survivors = g.labels - zl
    if not survivors:
        raise errors.FullSubset("quotient by the full edge set")
    sinf = {}
    for e in survivors:
        y = g.sinf[e]
        while y in zl:
            y = g.sinf[y]
        sinf[e] = y
    s1 = {e: g.s1[e] for e in survivors}
    # sigma0' = (sigma_inf' . sigma1)^(-1)
    s0 = {sinf[s1[x]]: x for x in survivors}
    return RibbonGraph(s0, s1)


def subgraph_ribbon(gp: PointedRibbonGraph, Z) -> RibbonGraph:
    """The subgraph ribbon structure G_Z of a pointed host."""
    reps = _as_reps(gp, Z)
    if not reps:
        raise errors.EmptySubset("subgraph of the empty edge set")
    return subgraph_structure(gp.graph, edge_label_set(gp.graph, reps))


# ---------------------------------------------------------------------------
# component analysis and negligibility
# ---------------------------------------------------------------------------

def _sub_components(g: RibbonGraph, zl):
    """Components of the subgraph on zl, via the induced ribbon structure."""
    if not zl:
        return ()
    return subgraph_structure(g, zl).components()


def _component_profile(ctx: Context, sub: RibbonGraph, comp):
    """(n_vertices, n_edges, marked_vertex_count, all_bivalent) of a subgraph
    component, where marks are read off the ambient vertices."""
    g = ctx.graph
    nv = ne = marked = 0
    all_bivalent = True
    for orb in sub.vertices:
        if orb[0] not in comp:
            continue
        nv += 1
        if len(orb) != 2:
            all_bivalent = False
        if g.vertex_rep(orb[0]) in ctx.marks:
            marked += 1
    for orb in sub.edges:
        if orb[0] in comp:
            ne += 1
    return nv, ne, marked, all_bivalent


def _contains_ambient_face(ctx: Context, comp):
    comp = frozenset(comp)
    return any(set(face) <= comp for face in ctx.graph.faces)


def _negligible_component(ctx: Context, sub: RibbonGraph, comp):
    """One subgraph component is negligible when it is a tree with at most one
    marked vertex, or a homotopy circle without marked vertices containing an
    entire boundary cycle of the ambient graph."""
    nv, ne, marked, _ = _component_profile(ctx, sub, comp)
    if ne == nv - 1:
        return marked <= 1
    if ne == nv:
        return marked == 0 and _contains_ambient_face(ctx, comp)
    return False


def negligible_in(ctx: Context, edge_reps) -> bool:
    reps = frozenset(edge_reps)
    if not reps:
        return True
    zl = edge_label_set(ctx.graph, reps)
    sub = subgraph_structure(ctx.graph, zl)
    return all(_negligible_component(ctx, sub, comp) for comp in sub.components())


def is_negligible(gp: PointedRibbonGraph, Z) -> bool:
    """Spec predicate on a pointed host."""
    return negligible_in(Context.of(gp), _as_reps(gp, Z))


# ---------------------------------------------------------------------------
# cores
# ---------------------------------------------------------------------------

def semistable_core_in(ctx: Context, edge_reps) -> frozenset:
    """Maximal Z' inside Z with no negligible component and every univalent
    vertex marked; the greatest fixed point of worklist pruning."""
    g = ctx.graph
    cur = set(frozenset(edge_reps))
    while cur:
        zl = edge_label_set(g, cur)
        sub = subgraph_structure(g, zl)
        drop = set()
        for orb in sub.vertices:
            if len(orb) == 1 and g.vertex_rep(orb[0]) not in ctx.marks:
                drop.add(sub.edge_rep(orb[0]))
        if not drop:
            for comp in sub.components():
                if _negligible_component(ctx, sub, comp):
                    drop |= {sub.edge_rep(x) for x in comp}
        if not drop:
            break
        cur -= {min(r, g.s1[r]) for r in drop}
        cur = {r for r in cur}
    return frozenset(min(r, g.s1[r]) for r in cur)


def stable_core_in(ctx: Context, edge_reps) -> frozenset:
    """Union of semistable-core components that are not unmarked topological
    circles."""
    g = ctx.graph
    sst = semistable_core_in(ctx, edge_reps)
    if not sst:
        return sst
    zl = edge_label_set(g, sst)
    sub = subgraph_structure(g, zl)
    keep = set()
    for comp in sub.components():
        nv, ne, marked, all_bivalent = _component_profile(ctx, sub, comp)
        if ne == nv and all_bivalent and marked == 0:
            continue
        keep |= {min(x, g.s1[x]) for x in comp}
    return frozenset(r for r in keep if r == min(r, g.s1[r]))


def semistable_core(gp: PointedRibbonGraph, Z) -> EdgeSubset:
    ctx = Context.of(gp)
    reps = _as_reps(gp, Z)
    core = semistable_core_in(ctx, reps)
    # the pruned remainder is a negligible set (paper: read with the roles of
    # Z and Z^sst as computed here)
    rest = reps - core
    assert negligible_in(ctx, rest), "pruned remainder is not negligible"
    return EdgeSubset(gp, core)


def stable_core(gp: PointedRibbonGraph, Z) -> EdgeSubset:
    return EdgeSubset(gp, stable_core_in(Context.of(gp), _as_reps(gp, Z)))


# ---------------------------------------------------------------------------
# quotients with pointing transfer
# ---------------------------------------------------------------------------

def _sector_anchor(g: RibbonGraph, zl, e):
    """For a surviving half-edge e whose vertex meets the collapsed subgraph,
    the base of its corner: the first sigma0^(-k)(e), k >= 1, inside X(G_Z).
    Returns None when e's vertex is untouched."""
    s0inv = {y: x for x, y in g.s0.items()}
    y = s0inv[e]
    while y != e:
        if y in zl:
            return y
        y = s0inv[y]
    return None


def _sector_map(g: RibbonGraph, zl):
    """anchor in X(G_Z) for every surviving half-edge at a collapsed blob."""
    s0inv = {y: x for x, y in g.s0.items()}
    anchors = {}
    for e in g.labels - zl:
        y = s0inv[e]
        while y != e and y not in zl:
            y = s0inv[y]
        if y in zl:
            anchors[e] = y
    return anchors


def quotient_ribbon(gp: PointedRibbonGraph, Z) -> PointedRibbonGraph:
    """The quotient G/G_Z with the pointing transferred.

    Labels on surviving vertices and boundary cycles keep their images; labels
    on boundary cycles wholly inside G_Z, and labels on vertices of G_Z, move
    to the image vertex of their component (the minimal exceptional vertex).
    """
    g = gp.graph
    reps = _as_reps(gp, Z)
    if reps >= frozenset(g.edge_reps()):
        raise errors.FullSubset("cannot collapse every edge")
    if not reps:
        return gp
    zl = edge_label_set(g, reps)
    qg = quotient_structure(g, zl)
    sub = subgraph_structure(g, zl)
    comps = sub.components()

    def comp_of(label):
        for i, c in enumerate(comps):
            if label in c:
                return i
        raise KeyError(label)

    anchors = _sector_map(g, zl)
    image_vertex = {}
    for e, a in anchors.items():
        i = comp_of(a)
        v = qg.vertex_rep(e)
        image_vertex[i] = min(image_vertex.get(i, v), v)

    pointing = {}
    used = {}
    for p in sorted(gp.pointing):
        kind, rep = gp.pointing[p]
        if kind == VERTEX:
            orbit = set(g.vertex_of(rep))
            if orbit & zl:
                i = comp_of(next(iter(orbit & zl)))
                if i not in image_vertex:
                    raise errors.FullSubset(
                        f"label {p!r} sits on a component collapsed without image")
                tgt = (VERTEX, image_vertex[i])
            else:
                tgt = (VERTEX, rep)
        else:
            face = set(g.face_of(rep))
            surv = face - zl
            if surv:
                tgt = (BOUNDARY, qg.face_rep(min(surv)))
            else:
                i = comp_of(next(iter(face)))
                if i not in image_vertex:
                    raise errors.FullSubset(
                        f"label {p!r} sits on a boundary cycle collapsed without image")
                tgt = (VERTEX, image_vertex[i])
        if tgt in used:
            raise errors.PointingCollision(f"labels {used[tgt]!r} and {p!r} both land on {tgt}")
        used[tgt] = p
        pointing[p] = tgt
    return PointedRibbonGraph(qg, pointing)


def collapse_edge(gp: PointedRibbonGraph, edge_rep) -> PointedRibbonGraph:
    """Collapse a single negligible edge (an edge collapse, or a total
    collapse of a loop bounding its own boundary cycle)."""
    if not is_negligible(gp, {edge_rep}):
        raise errors.NotNegligible(f"edge {edge_rep} is not negligible")
    return quotient_ribbon(gp, {edge_rep})


# ---------------------------------------------------------------------------
# exceptional data and pseudosurfaces
# ---------------------------------------------------------------------------

def structural_exceptional(g: RibbonGraph, zl):
    """Quotient and exceptional pairing of a semistable label set, with no
    pointing involved: (quotient graph, subgraph, components, pairs) where
    pairs maps quotient-vertex reps to (component index, subgraph face rep)."""
    qg = quotient_structure(g, zl)
    sub = subgraph_structure(g, zl)
    comps = sub.components()
    host_faces = [frozenset(f) for f in g.faces]
    pairs = {}
    for e, a in _sector_map(g, zl).items():
        v = qg.vertex_rep(e)
        ci = next(i for i, c in enumerate(comps) if a in c)
        tgt = (ci, sub.face_rep(a))
        assert pairs.setdefault(v, tgt) == tgt, "inconsistent sector map"
    # every exceptional boundary cycle of the core is hit exactly once
    exceptional = {(i, orb[0])
                   for i, c in enumerate(comps)
                   for orb in sub.faces
                   if orb[0] in c and frozenset(orb) not in host_faces}
    assert set(pairs.values()) == exceptional and len(set(pairs.values())) == len(pairs)
    return qg, sub, comps, pairs


@dataclass(frozen=True)
class ExceptionalData:
    """Exceptional vertices of G/G_Z, exceptional boundary cycles of the
    semistable core, and the bijection between them.

    ``pairs`` maps each exceptional quotient-vertex rep to
    ``(component_index, face_rep)`` of the core subgraph; ``components`` are
    the label sets of the semistable core's components.
    """
    quotient: RibbonGraph
    core: RibbonGraph | None
    components: tuple
    pairs: dict

    @property
    def exceptional_vertices(self):
        return tuple(sorted(self.pairs))

    @property
    def exceptional_faces(self):
        return tuple(sorted(self.pairs.values()))


def exceptional_sets(gp: PointedRibbonGraph, Z):
    """Exceptional vertices of G/G_Z and boundary cycles of G_{Z^sst}, with
    their correspondence, after first collapsing the negligible part of Z."""
    reps = _as_reps(gp, Z)
    if reps >= frozenset(gp.graph.edge_reps()):
        raise errors.FullSubset("Z must be proper")
    zsst = semistable_core_in(Context.of(gp), reps)
    neg = reps - zsst
    gp1 = quotient_ribbon(gp, neg) if neg else gp
    if not zsst:
        return ExceptionalData(gp1.graph, None, (), {})
    qg, sub, comps, pairs = structural_exceptional(
        gp1.graph, edge_label_set(gp1.graph, zsst))
    return ExceptionalData(qg, sub, comps, pairs)


@dataclass(frozen=True)
class PseudosurfaceData:
    """The fiber over an almost-metric with zero set Z: the combinatorial
    normalization G/G_Z, identification classes of its vertices (one class per
    semistable component of G_Z, collapsing to one point), the genus defect of
    each class, the P-map, the set Q of labels still carried by boundary
    cycles, and the genus of the marked surface the fiber degenerates.

    ``x`` need not be injective off Q: two marked vertices swallowed by one
    component hit the same node of the pseudosurface.
    """
    normalization: RibbonGraph
    classes: tuple            # tuple of frozensets of vertex reps
    epsilon: tuple            # genus defect per class, same order
    x: dict                   # label -> point of the normalization
    Q: frozenset
    host_genus: int | None = None

    def class_of(self, vrep):
        for i, cls in enumerate(self.classes):
            if vrep in cls:
                return i
        raise KeyError(vrep)


def pseudosurface(gp: PointedRibbonGraph, Z) -> PseudosurfaceData:
    reps = _as_reps(gp, Z)
    if reps >= frozenset(gp.graph.edge_reps()):
        raise errors.FullSubset("Z must be proper")
    zsst = semistable_core_in(Context.of(gp), reps)
    neg = reps - zsst
    gp1 = quotient_ribbon(gp, neg) if neg else gp
    g1 = gp1.graph
    if not zsst:
        return PseudosurfaceData(
            normalization=g1, classes=(), epsilon=(), x=dict(gp1.pointing),
            Q=gp1.Q, host_genus=genus(gp.graph) if gp.graph.connected else None)
    zl = edge_label_set(g1, zsst)
    qg, sub, comps, pairs = structural_exceptional(g1, zl)
    groups = {}
    for v, (ci, _) in pairs.items():
        groups.setdefault(ci, set()).add(v)
    classes = []
    eps = []
    node_of = {}
    for ci in sorted(groups):
        classes.append(frozenset(groups[ci]))
        eps.append(genus(sub, comps[ci]))
        node_of[ci] = min(groups[ci])

    def comp_of(label):
        return next(i for i, c in enumerate(comps) if label in c)

    x = {}
    for p in sorted(gp1.pointing):
        kind, rep = gp1.pointing[p]
        if kind == VERTEX:
            orbit = set(g1.vertex_of(rep))
            inside = orbit & zl
            x[p] = (VERTEX, node_of[comp_of(min(inside))]) if inside else (VERTEX, rep)
        else:
            face = set(g1.face_of(rep))
            surv = face - zl
            if surv:
                x[p] = (BOUNDARY, qg.face_rep(min(surv)))
            else:
                x[p] = (VERTEX, node_of[comp_of(min(face))])
    return PseudosurfaceData(
        normalization=qg,
        classes=tuple(classes),
        epsilon=tuple(eps),
        x=x,
        Q=frozenset(p for p, (kind, _) in x.items() if kind == BOUNDARY),
        host_genus=genus(gp.graph) if gp.graph.connected else None,
    )
