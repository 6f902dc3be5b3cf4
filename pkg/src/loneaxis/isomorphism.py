"""Isomorphism and canonical labeling of marked graphs.

An isomorphism is a vertex bijection plus an oriented-edge bijection
commuting with reversal and endpoints (lengths matched within a
tolerance when requested).  Labeling is canonicalized by
individualization-refinement: vertices are colored, colors refined by
neighbor multisets, and ties broken by branching on every member of the
first non-singleton class.  Desk-scale graphs only; the search is
capped.
"""

from __future__ import annotations

from collections import defaultdict

from .errors import InvalidGraphError
from .graphs import base_label, rev_edge

LENGTH_TOL = 1e-9
_LEAF_CAP = 20000


class GraphIsomorphism:
    """Vertex and oriented-edge bijections witnessing G1 == G2."""

    def __init__(self, g1, g2, vertex_map, edge_map):
        self.g1 = g1
        self.g2 = g2
        self.vertex_map = dict(vertex_map)
        self.edge_map = dict(edge_map)

    def check(self, respect_lengths=False, length_tol=LENGTH_TOL):
        """Verify all defining properties; used by tests."""
        if sorted(self.vertex_map) != sorted(self.g1.vertices):
            return False
        if sorted(self.vertex_map.values()) != sorted(self.g2.vertices):
            return False
        if sorted(self.edge_map) != sorted(self.g1.oriented):
            return False
        if sorted(self.edge_map.values()) != sorted(self.g2.oriented):
            return False
        for e, f in self.edge_map.items():
            if self.edge_map[rev_edge(e)] != rev_edge(f):
                return False
            if self.vertex_map[self.g1.init_vertex(e)] != self.g2.init_vertex(f):
                return False
            if self.vertex_map[self.g1.term_vertex(e)] != self.g2.term_vertex(f):
                return False
            if respect_lengths:
                if abs(float(self.g1.length(e)) - float(self.g2.length(f))) > length_tol:
                    return False
        return True

    def map_path(self, path):
        return tuple(self.edge_map[e] for e in path)


def _refine(graph, colors):
    verts = sorted(graph.vertices)
    while True:
        sigs = {}
        for v in verts:
            loops = 0
            nb = []
            for e in graph.directions_at(v):
                w = graph.term_vertex(e)
                if w == v:
                    loops += 1
                else:
                    nb.append(colors[w])
            sigs[v] = (colors[v], loops, tuple(sorted(nb)))
        ordered = sorted(set(sigs.values()))
        index = {s: i for i, s in enumerate(ordered)}
        new = {v: index[sigs[v]] for v in verts}
        if new == colors:
            return colors
        colors = new


def _leaf_orderings(graph):
    """All discrete colorings reached by individualization-refinement.

    Each leaf is a dict vertex -> rank in 0..n-1.
    """
    leaves = []

    def rec(colors):
        if len(leaves) > _LEAF_CAP:
            raise InvalidGraphError("graph too symmetric for canonical labeling")
        colors = _refine(graph, colors)
        classes = defaultdict(list)
        for v, c in colors.items():
            classes[c].append(v)
        target = None
        for c in sorted(classes):
            if len(classes[c]) > 1:
                target = c
                break
        if target is None:
            leaves.append(colors)
            return
        fresh = len(graph.vertices)
        for v in sorted(classes[target]):
            child = dict(colors)
            child[v] = fresh
            rec(child)

    rec({v: 0 for v in graph.vertices})
    return leaves


def _pair_type(graph, rank, lbl):
    a = rank[graph.init_vertex(lbl)]
    b = rank[graph.term_vertex(lbl)]
    return (a, b) if a <= b else (b, a)


def _encode(graph, rank):
    types = sorted(_pair_type(graph, rank, lbl) for lbl in graph.pairs)
    return (len(graph.vertices), tuple(types))


def _min_leaves(graph):
    leaves = _leaf_orderings(graph)
    encoded = [(_encode(graph, rank), rank) for rank in leaves]
    best = min(enc for enc, _ in encoded)
    return best, [rank for enc, rank in encoded if enc == best]


def canonical_encoding(graph) -> str:
    """Combinatorial isomorphism invariant, identical iff isomorphic."""
    (n, types), _leaves = _min_leaves(graph)
    body = ",".join(f"{a}-{b}" for a, b in types)
    return f"v{n}:{body}"


def _match_edges(g1, r1, g2, r2, respect_lengths, length_tol):
    """Pair edge labels class by class; returns an oriented edge map or None."""
    by_type1 = defaultdict(list)
    by_type2 = defaultdict(list)
    for lbl in g1.pairs:
        by_type1[_pair_type(g1, r1, lbl)].append(lbl)
    for lbl in g2.pairs:
        by_type2[_pair_type(g2, r2, lbl)].append(lbl)
    if set(by_type1) != set(by_type2):
        return None

    def oriented_rep(g, rank, lbl, tp):
        # orientation of the pair whose (init, term) ranks equal tp
        if (rank[g.init_vertex(lbl)], rank[g.term_vertex(lbl)]) == tp:
            return lbl
        return rev_edge(lbl)

    emap = {}
    for tp, labels1 in by_type1.items():
        labels2 = by_type2[tp]
        if len(labels1) != len(labels2):
            return None
        if respect_lengths:
            labels1 = sorted(labels1, key=lambda l: (float(g1.lengths[l]), l))
            labels2 = sorted(labels2, key=lambda l: (float(g2.lengths[l]), l))
            for a, b in zip(labels1, labels2):
                if abs(float(g1.lengths[a]) - float(g2.lengths[b])) > length_tol:
                    return None
        else:
            labels1 = sorted(labels1)
            labels2 = sorted(labels2)
        for a, b in zip(labels1, labels2):
            ea = oriented_rep(g1, r1, a, tp)
            eb = oriented_rep(g2, r2, b, tp)
            emap[ea] = eb
            emap[rev_edge(ea)] = rev_edge(eb)
    return emap


def are_isomorphic(g1, g2, respect_lengths=False, length_tol=LENGTH_TOL):
    """An isomorphism g1 -> g2, or None.

    Deterministic: both graphs are canonically labeled and the least
    labelings aligned.  With ``respect_lengths`` the edge matching also
    requires lengths to agree within ``length_tol``.
    """
    if respect_lengths and (g1.lengths is None or g2.lengths is None):
        raise InvalidGraphError("length-respecting isomorphism needs lengths")
    if len(g1.vertices) != len(g2.vertices) or len(g1.pairs) != len(g2.pairs):
        return None
    enc1, leaves1 = _min_leaves(g1)
    enc2, leaves2 = _min_leaves(g2)
    if enc1 != enc2:
        return None
    r1 = leaves1[0]
    for r2 in leaves2:
        emap = _match_edges(g1, r1, g2, r2, respect_lengths, length_tol)
        if emap is None:
            continue
        inv_rank2 = {rank: v for v, rank in r2.items()}
        vmap = {v: inv_rank2[r1[v]] for v in g1.vertices}
        iso = GraphIsomorphism(g1, g2, vmap, emap)
        if iso.check(respect_lengths=respect_lengths, length_tol=length_tol):
            return iso
    return None


def canonical_turn_encoding(graph, decorated_directions, same_pair=None) -> str:
    """Canonical label of a decorated turn inside the graph.

    ``decorated_directions`` is a sequence of (direction, extra) pairs;
    the result is the minimum over all minimal canonical labelings, so
    it is invariant under graph isomorphism.
    """
    _, leaves = _min_leaves(graph)
    dirs = [d for d, _ in decorated_directions]
    if same_pair is None:
        same_pair = (len(dirs) == 2 and base_label(dirs[0]) == base_label(dirs[1]))
    best = None
    for rank in leaves:
        items = []
        for d, extra in decorated_directions:
            t = (rank[graph.init_vertex(d)], rank[graph.term_vertex(d)])
            items.append((t, extra))
        enc = (tuple(sorted(items)), bool(same_pair))
        if best is None or enc < best:
            best = enc
    return repr(best)
