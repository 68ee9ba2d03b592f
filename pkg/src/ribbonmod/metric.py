"""Exact-rational metrics on pointed ribbon graphs and their degenerations.

Everything is a Fraction; limits t -> 0 are taken symbolically on metrics
whose entries are polynomials in t with positive rational coefficients, so
"topological limit" means leading-order extraction and there are no tolerance
questions anywhere.

The key objects:

* ``lambda_point``: the barycentric point of Delta_P given by half-perimeters
  of pointed boundary cycles (zero on vertex labels);
* ``project``: the unital metric proportional to l|G_Z, pushed to the bar
  graph of G_Z (marked bivalent vertices merged, lengths added);
* ``degenerate``: the schedule l(t) = t^k l on the level-k part of a
  permissible sequence;
* ``extract_stable``: Prop.-style extraction of (Z_bullet, l_bullet) from the
  family of projection limits, one entry per stable connected subset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import errors
from .collapse import (Context, edge_label_set, is_negligible, negligible_in,
                       quotient_ribbon, quotient_structure, stable_core_in,
                       subgraph_structure)
from .core import BOUNDARY, PointedRibbonGraph, RibbonGraph
from .stable import (LevelContext, PermissibleSequence, _level_context,
                     validate_permissible)


# ---------------------------------------------------------------------------
# metric validation helpers
# ---------------------------------------------------------------------------

def _as_metric(gp: PointedRibbonGraph, lengths, positive=True):
    reps = frozenset(gp.graph.edge_reps())
    out = {}
    for r in sorted(reps):
        if r not in lengths:
            raise errors.RibbonError(f"no length for edge {r}")
        v = Fraction(lengths[r])
        if positive and v <= 0:
            raise errors.NotPositive(f"edge {r} has length {v}")
        if v < 0:
            raise errors.NotPositive(f"edge {r} has length {v}")
        out[r] = v
    extra = set(lengths) - set(reps)
    if extra:
        raise errors.RibbonError(f"lengths on non-edges {sorted(extra)}")
    return out


def check_unital(gp: PointedRibbonGraph, lengths):
    """Total length one on every connected component."""
    g = gp.graph
    for comp in g.components():
        total = sum(lengths[min(x, g.s1[x])] for x in comp) / 2
        if total != 1:
            raise errors.NotUnital(f"component total {total} != 1")
    return lengths


def unital(gp: PointedRibbonGraph, lengths):
    """Rescale to total length one per connected component."""
    g = gp.graph
    out = dict(lengths)
    for comp in g.components():
        reps = {min(x, g.s1[x]) for x in comp}
        total = sum(out[r] for r in reps)
        if total <= 0:
            raise errors.NotPositive("component of total length zero")
        for r in reps:
            out[r] = Fraction(out[r], 1) / total
    return out


# ---------------------------------------------------------------------------
# the lambda map
# ---------------------------------------------------------------------------

def face_length(g: RibbonGraph, face_rep, lengths):
    """Length of a boundary cycle: each oriented edge contributes its edge
    length (an edge traversed twice counts twice)."""
    return sum(lengths[min(x, g.s1[x])] for x in g.face_of(face_rep))


def lambda_point(gp: PointedRibbonGraph, lengths):
    """lambda_p = half the length of the pointed boundary cycle, zero for
    vertex labels; a barycentric point of Delta_P for a connected unital
    metrized graph (almost-metrics, with zeros, are allowed)."""
    g = gp.graph
    if not g.connected:
        raise errors.Disconnected("lambda is defined for connected graphs")
    lengths = check_unital(gp, _as_metric(gp, lengths, positive=False))
    out = {}
    for p, (kind, rep) in gp.pointing.items():
        if kind == BOUNDARY:
            out[p] = face_length(g, rep, lengths) / 2
        else:
            out[p] = Fraction(0)
    assert sum(out.values()) == 1
    return out


def _rank(rows):
    """Exact rank of a list of Fraction rows."""
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    row = 0
    for col in range(cols):
        pivot = next((i for i in range(row, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        for i in range(len(rows)):
            if i != row and rows[i][col] != 0:
                f = rows[i][col] / rows[row][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[row])]
        row += 1
        rank += 1
        if row == len(rows):
            break
    return rank


def cell_lambda_map(gp: PointedRibbonGraph):
    """The matrix of lambda as an affine map from the cell simplex
    (coordinates = edge lengths, sum 1) to Delta_P, its exact rank, and the
    generic fiber dimension (|X1| - 1) - (rank - 1)."""
    g = gp.graph
    if not g.connected:
        raise errors.Disconnected("cell map is defined for connected graphs")
    ereps = sorted(g.edge_reps())
    rows = {}
    for p in sorted(gp.pointing):
        kind, rep = gp.pointing[p]
        counts = {r: 0 for r in ereps}
        if kind == BOUNDARY:
            for x in g.face_of(rep):
                counts[min(x, g.s1[x])] += 1
        rows[p] = {r: Fraction(c, 2) for r, c in counts.items()}
    matrix = [[rows[p][r] for r in ereps] for p in sorted(rows)]
    rank = _rank(matrix)
    fiber_dim = (len(ereps) - 1) - (rank - 1)
    return rows, rank, fiber_dim


# ---------------------------------------------------------------------------
# almost-metric reduction and projections
# ---------------------------------------------------------------------------

def reduce_almost_metric(gp: PointedRibbonGraph, lengths):
    """Collapse the (negligible) zero set and restrict: the metric then
    factorizes over the quotient graph."""
    lengths = _as_metric(gp, lengths, positive=False)
    zero = frozenset(r for r, v in lengths.items() if v == 0)
    if zero and not is_negligible(gp, zero):
        raise errors.NotNegligible("the zero set is not negligible")
    if not zero:
        return gp, lengths
    gq = quotient_ribbon(gp, zero)
    return gq, {r: lengths[r] for r in gq.graph.edge_reps()}


@dataclass(frozen=True)
class ProjectedMetric:
    """A unital metric on the bar graph of a connected subgraph."""
    graph: RibbonGraph
    lengths: dict
    chains: dict       # bar-edge rep -> frozenset of host edge reps

    def items(self):
        return self.lengths.items()


def _bar_of_subset(gp: PointedRibbonGraph, edge_reps) -> LevelContext:
    return _level_context(gp, frozenset(edge_reps))


def project(gp: PointedRibbonGraph, lengths, Z) -> ProjectedMetric:
    """The unital metric proportional to l|G_Z on the bar graph of G_Z
    (pointed bivalent vertices merged first, lengths adding)."""
    reps = frozenset(Z)
    if not reps:
        raise errors.EmptySubset("projection onto the empty subgraph")
    lengths = _as_metric(gp, lengths, positive=False)
    if any(lengths[r] == 0 for r in reps):
        raise errors.ZeroOnSubgraph("the metric vanishes on part of Z")
    sub = subgraph_structure(gp.graph, edge_label_set(gp.graph, reps))
    if len(sub.components()) != 1:
        raise errors.DisconnectedSubgraph("G_Z is not connected")
    ctx = _bar_of_subset(gp, reps)
    raw = {r: sum(lengths[h] for h in ch) for r, ch in ctx.chains.items()}
    total = sum(raw.values())
    return ProjectedMetric(ctx.bar, {r: v / total for r, v in raw.items()}, dict(ctx.chains))


# ---------------------------------------------------------------------------
# degeneration schedules
# ---------------------------------------------------------------------------

def degenerate(gp: PointedRibbonGraph, lengths, sequence, t):
    """l(t): multiply the level-k part of a permissible sequence by t^k."""
    ps = sequence if isinstance(sequence, PermissibleSequence) else validate_permissible(gp, sequence)
    if ps.host != gp:
        ps = validate_permissible(gp, ps.levels)
    lengths = _as_metric(gp, lengths)
    t = Fraction(t)
    if t <= 0:
        raise errors.NotPositive("t must be positive")
    return {r: lengths[r] * t ** ps.level_of(r) for r in lengths}


# --- symbolic one-parameter families: values are polynomials in t ----------

def _tp(coeff, power=0):
    coeff = Fraction(coeff)
    return {power: coeff} if coeff else {}

def _tp_add(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, Fraction(0)) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out

def _tp_sum(polys):
    out = {}
    for p in polys:
        out = _tp_add(out, p)
    return out

def _tp_leading(a):
    k = min(a)
    return k, a[k]


def degenerate_poly(gp: PointedRibbonGraph, lengths, sequence):
    """The schedule as a symbolic metric: edge e carries l(e) * t^level(e)."""
    ps = sequence if isinstance(sequence, PermissibleSequence) else validate_permissible(gp, sequence)
    lengths = _as_metric(gp, lengths)
    return {r: _tp(lengths[r], ps.level_of(r)) for r in lengths}


def project_limit(gp: PointedRibbonGraph, poly_lengths, Z):
    """lim_{t->0} of the unital projection of a symbolic metric onto bar(G_Z).

    All coefficients are positive, so the leading power of the total is the
    minimum over the chains and the limit keeps exactly the leading chains.
    """
    reps = frozenset(Z)
    if not reps:
        raise errors.EmptySubset("projection onto the empty subgraph")
    sub = subgraph_structure(gp.graph, edge_label_set(gp.graph, reps))
    if len(sub.components()) != 1:
        raise errors.DisconnectedSubgraph("G_Z is not connected")
    ctx = _bar_of_subset(gp, reps)
    raw = {r: _tp_sum(poly_lengths[h] for h in ch) for r, ch in ctx.chains.items()}
    total = _tp_sum(raw.values())
    if not total:
        raise errors.ZeroOnSubgraph("the family vanishes identically on Z")
    k0, c0 = _tp_leading(total)
    return {r: v.get(k0, Fraction(0)) / c0 for r, v in raw.items()}


def stable_connected_subsets(gp: PointedRibbonGraph):
    """The collection of stable subsets Z with G_Z connected, as frozensets of
    edge reps, in deterministic order."""
    g = gp.graph
    ctx = Context.of(gp)
    reps = sorted(g.edge_reps())
    out = []
    for k in range(1, len(reps) + 1):
        for combo in itertools.combinations(reps, k):
            z = frozenset(combo)
            sub = subgraph_structure(g, edge_label_set(g, z))
            if len(sub.components()) != 1:
                continue
            if stable_core_in(ctx, z) == z:
                out.append(z)
    return tuple(out)


def limits_from_path(gp: PointedRibbonGraph, poly_lengths):
    """Projection limits of a symbolic metric over every stable connected
    subset: the coordinates of a point in the closure of the cell."""
    return {z: project_limit(gp, poly_lengths, z) for z in stable_connected_subsets(gp)}


# ---------------------------------------------------------------------------
# stable metrics and extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StableMetric:
    """Per-level unital structures along a permissible sequence.

    ``levels[k]`` maps each bar-edge rep of the level-k graph outside
    Z_{k+1} to a positive rational; unital on every connected component of the
    level difference (the level-k pieces of the stable graph)."""
    sequence: PermissibleSequence
    levels: tuple

    @property
    def depth(self):
        return self.sequence.depth


def _difference_normalize(gp, levels, k, values):
    """Normalize positive bar-edge values of level k to be unital on each
    component of the level-k difference quotient."""
    host = gp.graph
    if k == 0:
        lk = host
    else:
        lk = subgraph_structure(host, edge_label_set(host, levels[k]))
    if k + 1 < len(levels):
        qg = quotient_structure(lk, edge_label_set(host, levels[k + 1]))
    else:
        qg = lk
    comps = qg.components()

    def comp_index(host_edge_rep):
        for i, c in enumerate(comps):
            if host_edge_rep in c or (host_edge_rep in host.s1 and host.s1[host_edge_rep] in c):
                return i
        raise KeyError(host_edge_rep)

    ctx = _level_context(gp, levels[k] if k else None)
    totals = {}
    where = {}
    for r, v in values.items():
        anylabel = min(ctx.chains[r])
        i = comp_index(anylabel)
        where[r] = i
        totals[i] = totals.get(i, Fraction(0)) + v
    out = {}
    for r, v in values.items():
        if totals[where[r]] <= 0:
            raise errors.NotPositive("difference component of zero total length")
        out[r] = v / totals[where[r]]
    return out


def stable_metric_of(gp: PointedRibbonGraph, lengths, sequence) -> StableMetric:
    """The stable metric defined by the restrictions of a positive metric:
    level-k values are the bar-chain sums outside Z_{k+1}, renormalized on
    every difference component."""
    ps = sequence if isinstance(sequence, PermissibleSequence) else validate_permissible(gp, sequence)
    lengths = _as_metric(gp, lengths)
    out = []
    for k in range(len(ps.levels)):
        ctx = _level_context(gp, ps.levels[k] if k else None)
        nxt = ps.levels[k + 1] if k + 1 < len(ps.levels) else frozenset()
        vals = {}
        for r, ch in ctx.chains.items():
            if ch & nxt:
                continue
            vals[r] = sum(lengths[h] for h in ch)
        out.append(_difference_normalize(gp, ps.levels, k, vals))
    return StableMetric(ps, tuple(out))


def extract_stable(gp: PointedRibbonGraph, limits) -> StableMetric:
    """Extraction of a stable metric from a family of projection limits.

    Iteratively: the top-level limit gives l_0; Z_{k+1} is the stable core of
    the zero set of l_k (judged in the level-k bar graph); l_{k+1} is
    assembled from the limit entries of the components of G_{Z_{k+1}}.  A
    negligible unstable excess in the top-level zero set reduces the host
    first, per the almost-metric factorization.
    """
    limits = {frozenset(z): dict(v) for z, v in limits.items()}

    def component_entry(creps, expect_keys):
        entry = limits.get(frozenset(creps))
        if entry is None:
            raise errors.InconsistentLimit(f"no limit entry for {sorted(creps)}")
        if set(entry) != set(expect_keys):
            raise errors.InconsistentLimit(
                f"limit entry for {sorted(creps)} lives on the wrong bar edges")
        vals = {r: Fraction(v) for r, v in entry.items()}
        if any(v < 0 for v in vals.values()):
            raise errors.InconsistentLimit("negative limit value")
        if sum(vals.values()) != 1:
            raise errors.InconsistentLimit("limit entry is not unital")
        return vals

    host = gp
    for _reduction in range(len(gp.graph.edges) + 1):
        g = host.graph
        ctx0 = _level_context(host)
        l0 = {}
        for comp in g.components():
            creps = frozenset(min(x, g.s1[x]) for x in comp)
            keys = [r for r, ch in ctx0.chains.items() if ch <= creps]
            l0.update(component_entry(creps, keys))
        zero_bar = {r for r, v in l0.items() if v == 0}
        stable_bar = stable_core_in(Context(ctx0.bar, ctx0.bar_marks), frozenset(zero_bar))
        excess = zero_bar - stable_bar
        if not excess:
            break
        excess_host = ctx0.host_reps_of(excess)
        if not negligible_in(Context.of(host), excess_host):
            raise errors.InconsistentLimit(
                "the zero set has a non-negligible unstable part; the limit "
                "leaves this cell through a contracted node")
        reduced = quotient_ribbon(host, excess_host)
        # carry the top-level entry to the reduced host: its bar chains
        # coarsen the surviving ones, so values add along chains
        rctx = _level_context(reduced)
        carried = {}
        for r_red, ch_red in rctx.chains.items():
            parts = [r for r, ch in ctx0.chains.items() if ch <= ch_red]
            assert frozenset().union(*[ctx0.chains[r] for r in parts]) == ch_red
            carried[r_red] = sum(l0[r] for r in parts)
        for comp in reduced.graph.components():
            creps = frozenset(min(x, reduced.graph.s1[x]) for x in comp)
            limits[creps] = {r: v for r, v in carried.items()
                             if rctx.chains[r] <= creps}
        host = reduced
    else:
        raise errors.InconsistentLimit("reduction did not terminate")

    g = host.graph
    levels = [frozenset(g.edge_reps())]
    level_values = [l0]
    ctx = ctx0
    while True:
        vals = level_values[-1]
        zero_bar = frozenset(r for r, v in vals.items() if v == 0)
        if not zero_bar:
            break
        bctx = Context(ctx.bar, ctx.bar_marks)
        stable_bar = stable_core_in(bctx, zero_bar)
        if stable_bar != zero_bar:
            raise errors.InconsistentLimit(
                "a deeper zero set is not stable; the limit leaves this cell")
        z_next = ctx.host_reps_of(stable_bar)
        levels.append(z_next)
        nxt_ctx = _level_context(host, z_next)
        sub = subgraph_structure(g, edge_label_set(g, z_next))
        nxt_vals = {}
        for comp in sub.components():
            creps = frozenset(min(x, sub.s1[x]) for x in comp)
            keys = [r for r, ch in nxt_ctx.chains.items() if ch <= creps]
            nxt_vals.update(component_entry(creps, keys))
        level_values.append(nxt_vals)
        ctx = nxt_ctx

    ps = validate_permissible(host, levels)
    out = []
    for k, vals in enumerate(level_values):
        positive = {r: v for r, v in vals.items() if v > 0}
        out.append(_difference_normalize(host, ps.levels, k, positive))
    return StableMetric(ps, tuple(out))
