"""Permutation model of ribbon graphs (fatgraphs).

A ribbon graph is a finite set X of oriented edges together with a fixed-point
free involution ``sigma1`` (orientation reversal) and a permutation ``sigma0``
(counterclockwise successor among the outgoing edges of a vertex).  The third
permutation ``sigma_inf`` is determined by  sigma_inf . sigma1 . sigma0 = id.
Vertices, edges and boundary cycles are the orbits of sigma0, sigma1 and
sigma_inf respectively, so the whole combinatorial surface is encoded by the
pair (sigma0, sigma1).

A pointing places a finite label set P injectively on vertices and boundary
cycles so that every distinguished point (boundary cycle, or vertex of valency
at most 2) is covered.

All objects here are immutable after construction and all operations are pure;
they can be shared freely between threads.
"""

from __future__ import annotations

import json

from . import errors

# A point of the surface that can carry a label: a vertex or a boundary cycle,
# identified by the minimal half-edge label of its orbit.
VERTEX = "vertex"
BOUNDARY = "boundary"


# ---------------------------------------------------------------------------
# permutation helpers (dict based; label sets are small and possibly sparse)
# ---------------------------------------------------------------------------

def perm_from_cycles(cycles, domain):
    """Build a permutation dict on ``domain`` from a cycle list.

    Labels of ``domain`` not mentioned in any cycle are fixed points.
    """
    perm = {x: x for x in domain}
    seen = set()
    for cyc in cycles:
        for x in cyc:
            if x not in perm:
                raise errors.NotAPermutation(f"cycle entry {x} outside the label set")
            if x in seen:
                raise errors.NotAPermutation(f"label {x} occurs in two cycles")
            seen.add(x)
        for i, x in enumerate(cyc):
            perm[x] = cyc[(i + 1) % len(cyc)]
    return perm


def perm_orbits(perm):
    """Orbits of a permutation dict, each a tuple starting at its minimum,
    listed in increasing order of that minimum."""
    seen = set()
    out = []
    for start in sorted(perm):
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            orbit.append(x)
            seen.add(x)
            x = perm[x]
        out.append(tuple(orbit))
    return out


def perm_cycles_string(perm):
    return "".join("(" + " ".join(map(str, c)) + ")" for c in perm_orbits(perm))


def _check_perm(perm, labels, what):
    if set(perm) != labels or set(perm.values()) != labels:
        raise errors.NotAPermutation(f"{what} is not a permutation of the label set")


# ---------------------------------------------------------------------------
# RibbonGraph
# ---------------------------------------------------------------------------

class RibbonGraph:
    """A (possibly disconnected) ribbon graph in the permutation model.

    ``s0``, ``s1`` and the derived ``sinf`` are mappings label -> label.
    ``vertices``/``edges``/``faces`` are the orbit lists of s0/s1/sinf, each
    orbit a tuple starting at its minimal label.
    """

    __slots__ = ("labels", "s0", "s1", "sinf", "vertices", "edges", "faces",
                 "_vrep", "_frep", "_comps")

    def __init__(self, s0, s1):
        labels = frozenset(s0)
        if not labels:
            raise errors.EmptyLabelSet("a ribbon graph needs at least one edge")
        if len(labels) % 2:
            raise errors.NotAPermutation("odd number of half-edge labels")
        _check_perm(s0, labels, "sigma0")
        _check_perm(s1, labels, "sigma1")
        for x in labels:
            if s1[x] == x:
                raise errors.FixedPointInPairing(f"sigma1 fixes half-edge {x}")
            if s1[s1[x]] != x:
                raise errors.NotInvolution(f"sigma1 is not an involution at {x}")
        self.labels = labels
        self.s0 = dict(s0)
        self.s1 = dict(s1)
        # sigma_inf . sigma1 . sigma0 = id  <=>  sinf[s1[s0[x]]] = x
        self.sinf = {s1[s0[x]]: x for x in labels}
        self.vertices = tuple(perm_orbits(self.s0))
        self.edges = tuple(perm_orbits(self.s1))
        self.faces = tuple(perm_orbits(self.sinf))
        self._vrep = {x: orb[0] for orb in self.vertices for x in orb}
        self._frep = {x: orb[0] for orb in self.faces for x in orb}
        self._comps = None

    # -- basic queries -----------------------------------------------------

    def vertex_rep(self, e):
        return self._vrep[e]

    def face_rep(self, e):
        return self._frep[e]

    def edge_rep(self, e):
        return min(e, self.s1[e])

    def edge_reps(self):
        return tuple(orb[0] for orb in self.edges)

    def vertex_of(self, rep):
        for orb in self.vertices:
            if orb[0] == rep:
                return orb
        raise KeyError(rep)

    def face_of(self, rep):
        for orb in self.faces:
            if orb[0] == rep:
                return orb
        raise KeyError(rep)

    def valency(self, vrep):
        return len(self.vertex_of(vrep))

    def components(self):
        """Partition of the labels under the group generated by s0 and s1."""
        if self._comps is None:
            seen = set()
            comps = []
            for start in sorted(self.labels):
                if start in seen:
                    continue
                stack = [start]
                comp = set()
                while stack:
                    x = stack.pop()
                    if x in comp:
                        continue
                    comp.add(x)
                    stack.append(self.s0[x])
                    stack.append(self.s1[x])
                seen |= comp
                comps.append(frozenset(comp))
            self._comps = tuple(comps)
        return self._comps

    @property
    def connected(self):
        return len(self.components()) == 1

    def component_of(self, label):
        for comp in self.components():
            if label in comp:
                return comp
        raise KeyError(label)

    def __eq__(self, other):
        return isinstance(other, RibbonGraph) and self.s0 == other.s0 and self.s1 == other.s1

    def __hash__(self):
        return hash((frozenset(self.s0.items()), frozenset(self.s1.items())))

    def __repr__(self):
        return f"RibbonGraph(s0={perm_cycles_string(self.s0)}, s1={perm_cycles_string(self.s1)})"


def from_permutations(half_edges, sigma0, sigma1):
    """Build and validate a RibbonGraph from a label set and two permutations.

    ``sigma0``/``sigma1`` may be dicts or cycle lists over ``half_edges``.
    """
    labels = frozenset(half_edges)
    if not labels:
        raise errors.EmptyLabelSet("empty half-edge set")
    if not isinstance(sigma0, dict):
        sigma0 = perm_from_cycles(sigma0, labels)
    if not isinstance(sigma1, dict):
        sigma1 = perm_from_cycles(sigma1, labels)
    return RibbonGraph(sigma0, sigma1)


def genus(g: RibbonGraph, component=None):
    """Genus of the closed surface realized by one connected component.

    2 - 2*genus = V - E + F restricted to the component.
    """
    if component is None:
        comps = g.components()
        if len(comps) != 1:
            raise errors.Disconnected("genus of a disconnected graph is per component")
        component = comps[0]
    component = frozenset(component)
    v = sum(1 for orb in g.vertices if orb[0] in component)
    e = sum(1 for orb in g.edges if orb[0] in component)
    f = sum(1 for orb in g.faces if orb[0] in component)
    chi = v - e + f
    if chi % 2:
        raise errors.NotAPermutation("odd Euler characteristic; component is not closed")
    gen = (2 - chi) // 2
    assert gen >= 0
    return gen


def dual(g: RibbonGraph) -> RibbonGraph:
    """The dual ribbon graph (X; sigma_inf, sigma1).

    Edges of the dual are canonically indexed by the edges of ``g`` (same
    sigma1 orbits).
    """
    return RibbonGraph(dict(g.sinf), dict(g.s1))


def distinguished_points(g: RibbonGraph):
    """All boundary cycles, plus all vertices of valency <= 2."""
    pts = {(BOUNDARY, orb[0]) for orb in g.faces}
    pts |= {(VERTEX, orb[0]) for orb in g.vertices if len(orb) <= 2}
    return frozenset(pts)


def all_points(g: RibbonGraph):
    return frozenset({(VERTEX, orb[0]) for orb in g.vertices}
                     | {(BOUNDARY, orb[0]) for orb in g.faces})


# ---------------------------------------------------------------------------
# pointings
# ---------------------------------------------------------------------------

class PointedRibbonGraph:
    """A ribbon graph with an injective pointing of a label set P.

    ``pointing`` maps each label (a string) to a point ``(kind, rep)`` where
    ``kind`` is ``"vertex"`` or ``"boundary"`` and ``rep`` is the minimal
    half-edge label of the orbit.

    The constructor performs structural validation only (targets exist and are
    hit injectively); quotients of pointed graphs may leave exceptional
    distinguished points uncovered, which the caller accounts for separately.
    Use :func:`attach_pointing` for the full validity check.
    """

    __slots__ = ("graph", "pointing", "_cert")

    def __init__(self, graph: RibbonGraph, pointing):
        points = all_points(graph)
        seen = set()
        for p in sorted(pointing):
            tgt = pointing[p]
            if tgt not in points:
                raise errors.BadPointingTarget(f"label {p!r} points at {tgt}, not a vertex or boundary orbit rep")
            if tgt in seen:
                raise errors.NotInjective(f"two labels point at {tgt}")
            seen.add(tgt)
        self.graph = graph
        self.pointing = dict(pointing)
        self._cert = None

    @property
    def P(self):
        return frozenset(self.pointing)

    @property
    def Q(self):
        """Labels carried by boundary cycles."""
        return frozenset(p for p, (kind, _) in self.pointing.items() if kind == BOUNDARY)

    def marked_vertex_reps(self):
        return frozenset(rep for kind, rep in self.pointing.values() if kind == VERTEX)

    def pointed_face_reps(self):
        return frozenset(rep for kind, rep in self.pointing.values() if kind == BOUNDARY)

    def labels_in(self, component):
        component = frozenset(component)
        return frozenset(p for p, (_, rep) in self.pointing.items() if rep in component)

    def __eq__(self, other):
        return (isinstance(other, PointedRibbonGraph)
                and self.graph == other.graph and self.pointing == other.pointing)

    def __hash__(self):
        return hash((self.graph, frozenset(self.pointing.items())))

    def __repr__(self):
        pt = {p: f"{k}:{r}" for p, (k, r) in sorted(self.pointing.items())}
        return f"PointedRibbonGraph({self.graph!r}, {pt})"


def pointing_complete(gp: PointedRibbonGraph):
    """True when the pointing covers every distinguished point."""
    image = set(gp.pointing.values())
    return distinguished_points(gp.graph) <= image


def attach_pointing(g: RibbonGraph, pointing) -> PointedRibbonGraph:
    """Validate a pointing fully: injective, covering all distinguished
    points, and leaving every component with negative Euler characteristic."""
    gp = PointedRibbonGraph(g, pointing)
    image = set(gp.pointing.values())
    for pt in sorted(distinguished_points(g)):
        if pt not in image:
            raise errors.DistinguishedPointUncovered(f"distinguished point {pt} is not pointed")
    for comp in g.components():
        n_c = len(gp.labels_in(comp))
        if 2 - 2 * genus(g, comp) - n_c >= 0:
            raise errors.NonNegativeEulerComponent(
                f"component with genus {genus(g, comp)} carries only {n_c} labels")
    return gp


def smooth_bivalent(gp: PointedRibbonGraph, vrep) -> PointedRibbonGraph:
    """Forget an unpointed bivalent vertex, merging its two edges.

    The underlying surface is unchanged; the metric counterpart adds the two
    lengths (see the metric module's projections).
    """
    g = gp.graph
    orb = g.vertex_of(vrep)
    if (VERTEX, vrep) in gp.pointing.values():
        raise errors.VertexPointed(f"vertex {vrep} carries a label")
    if len(orb) != 2:
        raise errors.NotBivalent(f"vertex {vrep} has valency {len(orb)}")
    e1, e2 = orb
    if g.s1[e1] == e2:
        # the vertex is the sole vertex of a loop component; nothing remains
        raise errors.NotBivalent(f"vertex {vrep} closes a loop; smoothing it would leave no 0-cell")
    a, b = g.s1[e1], g.s1[e2]
    s0 = {x: y for x, y in g.s0.items() if x not in (e1, e2)}
    s1 = {x: y for x, y in g.s1.items() if x not in (e1, e2)}
    s1[a], s1[b] = b, a
    newg = RibbonGraph(s0, s1)
    pointing = {}
    for p, (kind, rep) in gp.pointing.items():
        if kind == BOUNDARY:
            # the face keeps its labels minus {e1, e2}; recompute the rep
            old = set(g.face_of(rep))
            pointing[p] = (BOUNDARY, min(old - {e1, e2}))
        else:
            pointing[p] = (kind, rep)
    return PointedRibbonGraph(newg, pointing)


# ---------------------------------------------------------------------------
# canonical form and automorphisms
# ---------------------------------------------------------------------------

class CanonicalForm:
    """A canonical relabeling certificate.

    ``certificate`` is equal for isomorphic inputs (pointed isomorphism when a
    pointing is present); ``relabeling`` maps old labels to 0..2m-1 and sends
    sigma1 to the standard pairing (0 1)(2 3)....
    """

    __slots__ = ("certificate", "relabeling")

    def __init__(self, certificate, relabeling):
        self.certificate = certificate
        self.relabeling = relabeling


def canonical_form(obj) -> CanonicalForm:
    """Canonical form of a RibbonGraph or PointedRibbonGraph.

    Minimum-trace search: each start label yields a BFS relabeling (assigned
    in sigma1-pair blocks, so the relabeled pairing is standard) whose
    encoding is the one-line form of the relabeled sigma0 plus the pointing
    data; the lexicographic minimum over starts, per component, components
    sorted by encoding, is the certificate.
    """
    if isinstance(obj, PointedRibbonGraph):
        g, pointing = obj.graph, obj.pointing
    else:
        g, pointing = obj, None
    per_comp = []
    for comp in g.components():
        comp_sorted = sorted(comp)
        size = len(comp_sorted)
        idx = {lab: i for i, lab in enumerate(comp_sorted)}
        s0l = [idx[g.s0[lab]] for lab in comp_sorted]
        s1l = [idx[g.s1[lab]] for lab in comp_sorted]
        ppart = []
        if pointing:
            for p in sorted(pointing):
                kind, rep = pointing[p]
                if rep not in idx:
                    continue
                orbit = g.vertex_of(rep) if kind == VERTEX else g.face_of(rep)
                ppart.append((p, kind, [idx[x] for x in orbit]))
        best = None
        best_new = None
        for start in range(size):
            new = [-1] * size
            new[start] = 0
            new[s1l[start]] = 1
            order = [start, s1l[start]]
            head = 0
            nxt = 2
            while head < len(order):
                y = s0l[order[head]]
                head += 1
                if new[y] < 0:
                    new[y] = nxt
                    new[s1l[y]] = nxt + 1
                    order.append(y)
                    order.append(s1l[y])
                    nxt += 2
            enc = tuple(new[s0l[x]] for x in order)
            pp = tuple((p, kind, min(new[i] for i in orb)) for p, kind, orb in ppart)
            cand = (size, enc, pp)
            if best is None or cand < best:
                best, best_new = cand, new
        mapping = {comp_sorted[i]: best_new[i] for i in range(size)}
        per_comp.append((best, mapping))
    per_comp.sort(key=lambda t: t[0])
    relabeling = {}
    offset = 0
    certs = []
    for enc, mapping in per_comp:
        for old, new in mapping.items():
            relabeling[old] = new + offset
        offset += enc[0]
        certs.append(enc)
    return CanonicalForm(tuple(certs), relabeling)


def relabel(gp: PointedRibbonGraph, mapping) -> PointedRibbonGraph:
    g = gp.graph
    s0 = {mapping[x]: mapping[y] for x, y in g.s0.items()}
    s1 = {mapping[x]: mapping[y] for x, y in g.s1.items()}
    newg = RibbonGraph(s0, s1)
    pointing = {}
    for p, (kind, rep) in gp.pointing.items():
        orbit = g.vertex_of(rep) if kind == VERTEX else g.face_of(rep)
        pointing[p] = (kind, min(mapping[x] for x in orbit))
    return PointedRibbonGraph(newg, pointing)


def to_standard(gp: PointedRibbonGraph) -> PointedRibbonGraph:
    """Canonically relabeled copy: labels 0..2m-1, sigma1 = (0 1)(2 3)...."""
    cf = canonical_form(gp)
    out = relabel(gp, cf.relabeling)
    out._cert = cf.certificate
    return out


def certificate(gp) -> tuple:
    """Cached canonical certificate of a (pointed) ribbon graph."""
    if isinstance(gp, PointedRibbonGraph):
        if gp._cert is None:
            gp._cert = canonical_form(gp).certificate
        return gp._cert
    return canonical_form(gp).certificate


def automorphisms(obj):
    """All permutations of X commuting with sigma0 and sigma1 (and fixing the
    pointing, when present), for a connected graph.

    Returns ``(order, elements)``; the group acts freely on X, so each element
    is determined by the image of one half-edge and the order divides |X|.
    """
    if isinstance(obj, PointedRibbonGraph):
        g, pointing = obj.graph, obj.pointing
    else:
        g, pointing = obj, None
    if not g.connected:
        raise errors.Disconnected("automorphisms are computed per connected graph")
    base = min(g.labels)
    elements = []
    for target in sorted(g.labels):
        phi = {base: target}
        stack = [base]
        ok = True
        while stack and ok:
            x = stack.pop()
            for sigma in (g.s0, g.s1):
                y, fy = sigma[x], sigma[phi[x]]
                if y in phi:
                    if phi[y] != fy:
                        ok = False
                        break
                else:
                    phi[y] = fy
                    stack.append(y)
        if not ok or len(phi) != len(g.labels):
            continue
        if pointing is not None:
            for kind, rep in pointing.values():
                orbit = g.vertex_of(rep) if kind == VERTEX else g.face_of(rep)
                if min(phi[x] for x in orbit) != rep:
                    ok = False
                    break
        if ok:
            elements.append(phi)
    return len(elements), tuple(elements)


# ---------------------------------------------------------------------------
# tile surface
# ---------------------------------------------------------------------------

class SurfaceComplex:
    """The closed-surface triangle complex with one tile per oriented edge.

    Tiles are indexed by half-edges; the 0-cells are the apex classes
    (one per vertex of G), the edge-end classes (one per boundary cycle) and
    the edge midpoints.  The gluings identify <v0,vbar0> x {e} with
    <vbar0,v0> x {sigma1 e} and <v0,vinf> x {e} with <vbar0,vinf> x {sigma0 e}.
    """

    __slots__ = ("graph", "triangles", "zero_cells", "one_cells", "euler_characteristic")

    def __init__(self, graph, triangles, zero_cells, one_cells, euler_characteristic):
        self.graph = graph
        self.triangles = triangles
        self.zero_cells = zero_cells
        self.one_cells = one_cells
        self.euler_characteristic = euler_characteristic


def surface_complex(g: RibbonGraph) -> SurfaceComplex:
    """Build the tile surface and certify it closed and oriented."""
    s0, s1 = g.s0, g.s1
    # 0-cells.  Chasing the corner identifications: the apex corners of tiles
    # e and sigma0(e) coincide (one apex class per vertex of G), while the
    # base-end corners chain under sigma1.sigma0, one class per boundary cycle.
    apex = {e: ("apex", g.vertex_rep(e)) for e in g.labels}
    endc = {e: ("end", g.face_rep(e)) for e in g.labels}
    mid = {e: ("mid", g.edge_rep(e)) for e in g.labels}
    zero_cells = frozenset(apex.values()) | frozenset(endc.values()) | frozenset(mid.values())

    # 1-cells with their (tile, sign) incidences; the sign records the
    # direction of the side in the boundary of the oriented tile
    # (v0, vbar0, vinf).
    one_cells = {}

    def add_side(cell, tile, sign):
        one_cells.setdefault(cell, []).append((tile, sign))

    for e in sorted(g.labels):
        # base half at the origin end of e: shared by tile e (its v0 half,
        # traversed v0 -> mid) and tile sigma1(e) (its vbar0 half, mid -> v0)
        add_side(("baseh", e), e, +1)
        add_side(("baseh", e), s1[e], -1)
        # the side <v0,vinf> of tile e is glued to <vbar0,vinf> of sigma0(e);
        # tile e traverses it vinf -> v0, tile sigma0(e) traverses vbar0 -> vinf
        add_side(("side", e), e, -1)
        add_side(("side", e), s0[e], +1)

    # every 1-cell must bound exactly two triangles, with opposite directions
    for cell, inc in one_cells.items():
        if len(inc) != 2 or inc[0][1] + inc[1][1] != 0:
            raise errors.NotAPermutation(f"tile surface failed to close up at {cell}")

    chi = len(zero_cells) - len(one_cells) + len(g.labels)
    expected = len(g.vertices) - len(g.edges) + len(g.faces)
    assert chi == expected, (chi, expected)
    triangles = {e: (apex[e], endc[e], endc[s1[e]]) for e in g.labels}
    return SurfaceComplex(g, triangles, zero_cells, frozenset(one_cells), chi)


def tile_monodromies(g: RibbonGraph):
    """Walking the tile gluings around the three corner classes of the model
    triangle permutes the tiles by sigma0 (apex), sigma1 (midpoint) and the
    face walk sigma1.sigma0 = sigma_inf^<-1> (edge ends)."""
    around_apex = dict(g.s0)
    around_mid = dict(g.s1)
    around_end = {x: g.s1[g.s0[x]] for x in g.labels}
    return around_apex, around_mid, around_end


# ---------------------------------------------------------------------------
# JSON graph files
# ---------------------------------------------------------------------------

_GRAPH_FIELDS = {"half_edges", "sigma0", "pointing"}
_POINT_FIELDS = {"kind", "orbit_rep"}


def graph_to_obj(gp: PointedRibbonGraph) -> dict:
    """Serialize canonically: labels 0..2m-1, sigma1 implicitly (0 1)(2 3)...."""
    std = to_standard(gp)
    g = std.graph
    sigma0 = [list(orb) for orb in g.vertices]
    pointing = {p: {"kind": kind, "orbit_rep": rep}
                for p, (kind, rep) in sorted(std.pointing.items())}
    return {"half_edges": len(g.labels), "sigma0": sigma0, "pointing": pointing}


def graph_from_obj(obj) -> PointedRibbonGraph:
    if not isinstance(obj, dict):
        raise errors.RibbonError("graph file must be a JSON object")
    unknown = set(obj) - _GRAPH_FIELDS
    if unknown:
        raise errors.RibbonError(f"unknown graph fields: {sorted(unknown)}")
    try:
        n = int(obj["half_edges"])
    except (KeyError, TypeError, ValueError):
        raise errors.RibbonError("missing or bad 'half_edges'") from None
    if n <= 0 or n % 2:
        raise errors.EmptyLabelSet("'half_edges' must be a positive even count")
    labels = range(n)
    s1 = {i: i ^ 1 for i in labels}
    s0 = perm_from_cycles(obj.get("sigma0", []), frozenset(labels))
    g = RibbonGraph(s0, s1)
    pointing = {}
    for p, tgt in obj.get("pointing", {}).items():
        if not isinstance(tgt, dict) or set(tgt) - _POINT_FIELDS:
            raise errors.RibbonError(f"bad pointing entry for {p!r}")
        kind = tgt.get("kind")
        if kind not in (VERTEX, BOUNDARY):
            raise errors.BadPointingTarget(f"bad pointing kind {kind!r}")
        pointing[p] = (kind, int(tgt["orbit_rep"]))
    return PointedRibbonGraph(g, pointing)


def graph_dumps(gp: PointedRibbonGraph) -> str:
    return json.dumps(graph_to_obj(gp), sort_keys=True, indent=1) + "\n"


def graph_loads(text: str) -> PointedRibbonGraph:
    return graph_from_obj(json.loads(text))
