"""Directed two-layer social graph.

The social layer holds typed ties (friendship or neighborhood, mutually
exclusive per ordered pair). The communication layer holds message arcs
weighted by the cumulative number of messages sent along them. Analyses treat
the social layer as the union of both tie types.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

FRIENDSHIP = "friendship"
NEIGHBORHOOD = "neighborhood"
TIE_TYPES = (FRIENDSHIP, NEIGHBORHOOD)

SOCIAL = "social"
COMM = "comm"
LAYERS = (SOCIAL, COMM)


class GraphError(ValueError):
    pass


class SocialGraph:
    """Two-layer directed graph with forward and reverse adjacency indexes."""

    def __init__(self, nodes=()):
        self._nodes = set()
        self._soc_out = {}
        self._soc_in = {}
        self._comm_out = {}
        self._comm_in = {}
        self._msg_out = {}
        self._msg_in = {}
        self._n_social = 0
        self._n_comm = 0
        for u in nodes:
            self.add_node(u)

    # -- construction -----------------------------------------------------

    def add_node(self, u):
        u = int(u)
        if u < 0:
            raise GraphError(f"user ids must be non-negative, got {u}")
        if u in self._nodes:
            return
        self._nodes.add(u)
        self._soc_out[u] = {}
        self._soc_in[u] = set()
        self._comm_out[u] = {}
        self._comm_in[u] = {}
        self._msg_out[u] = 0
        self._msg_in[u] = 0

    def _check_pair(self, u, v):
        if u == v:
            raise GraphError(f"self-arc on node {u} is not allowed")
        for x in (u, v):
            if x not in self._nodes:
                raise GraphError(f"unknown node {x}")

    def add_social_arc(self, u, v, tie=NEIGHBORHOOD):
        """Add the social tie ``u -> v``; an existing tie on the pair is retyped."""
        if tie not in TIE_TYPES:
            raise GraphError(f"unknown tie type {tie!r}")
        self._check_pair(u, v)
        out = self._soc_out[u]
        if v not in out:
            self._n_social += 1
            self._soc_in[v].add(u)
        out[v] = tie

    def add_message(self, u, v, count=1):
        self._check_pair(u, v)
        if count < 1:
            raise GraphError("message count must be positive")
        out = self._comm_out[u]
        if v not in out:
            self._n_comm += 1
            out[v] = 0
            self._comm_in[v][u] = 0
        out[v] += count
        self._comm_in[v][u] += count
        self._msg_out[u] += count
        self._msg_in[v] += count

    def copy(self):
        g = SocialGraph()
        g._nodes = set(self._nodes)
        g._soc_out = {u: dict(d) for u, d in self._soc_out.items()}
        g._soc_in = {u: set(s) for u, s in self._soc_in.items()}
        g._comm_out = {u: dict(d) for u, d in self._comm_out.items()}
        g._comm_in = {u: dict(d) for u, d in self._comm_in.items()}
        g._msg_out = dict(self._msg_out)
        g._msg_in = dict(self._msg_in)
        g._n_social = self._n_social
        g._n_comm = self._n_comm
        return g

    # -- queries ----------------------------------------------------------

    @property
    def nodes(self):
        return sorted(self._nodes)

    def __contains__(self, u):
        return u in self._nodes

    def __len__(self):
        return len(self._nodes)

    def arc_count(self, layer=SOCIAL):
        return self._n_social if layer == SOCIAL else self._n_comm

    def has_arc(self, u, v, layer=SOCIAL):
        if u not in self._nodes:
            return False
        adj = self._soc_out[u] if layer == SOCIAL else self._comm_out[u]
        return v in adj

    def tie_type(self, u, v):
        return self._soc_out[u].get(v)

    def out_neighbors(self, u, layer=SOCIAL):
        """Gamma_out(u) as a live key view; do not mutate the graph while holding it."""
        return (self._soc_out[u] if layer == SOCIAL else self._comm_out[u]).keys()

    def in_neighbors(self, u, layer=SOCIAL):
        return self._soc_in[u] if layer == SOCIAL else self._comm_in[u].keys()

    def out_degree(self, u, layer=SOCIAL):
        return len(self._soc_out[u] if layer == SOCIAL else self._comm_out[u])

    def in_degree(self, u, layer=SOCIAL):
        return len(self._soc_in[u] if layer == SOCIAL else self._comm_in[u])

    def weight(self, u, v):
        return self._comm_out[u].get(v, 0)

    def msg_out(self, u):
        return self._msg_out[u]

    def msg_in(self, u):
        return self._msg_in[u]

    def social_arcs(self):
        """Yield ``(u, v, tie)`` in sorted order."""
        for u in sorted(self._nodes):
            out = self._soc_out[u]
            for v in sorted(out):
                yield u, v, out[v]

    def comm_arcs(self):
        """Yield ``(u, v, weight)`` in sorted order."""
        for u in sorted(self._nodes):
            out = self._comm_out[u]
            for v in sorted(out):
                yield u, v, out[v]

    def arcs(self, layer=SOCIAL):
        if layer == SOCIAL:
            return [(u, v) for u, v, _ in self.social_arcs()]
        if layer == COMM:
            return [(u, v) for u, v, _ in self.comm_arcs()]
        raise GraphError(f"unknown layer {layer!r}")

    def layer_nodes(self, layer=SOCIAL):
        """Nodes incident to at least one arc of ``layer``."""
        out = self._soc_out if layer == SOCIAL else self._comm_out
        inn = self._soc_in if layer == SOCIAL else self._comm_in
        return sorted(u for u in self._nodes if out[u] or inn[u])

    def distance2_out_candidates(self, u):
        """Nodes two social hops from ``u`` that ``u`` does not already follow."""
        out = self._soc_out[u]
        cands = set()
        for z in out:
            cands.update(self._soc_out[z])
        cands.difference_update(out)
        cands.discard(u)
        return cands

    def adjacency(self, layer=SOCIAL, nodes=None):
        """Return ``(nodes, csr)`` where ``csr[i, j] = 1`` for arc ``nodes[i] -> nodes[j]``."""
        nodes = self.nodes if nodes is None else list(nodes)
        index = {u: i for i, u in enumerate(nodes)}
        rows, cols = [], []
        for u, v in self.arcs(layer):
            if u in index and v in index:
                rows.append(index[u])
                cols.append(index[v])
        data = np.ones(len(rows), dtype=float)
        mat = csr_matrix((data, (rows, cols)), shape=(len(nodes), len(nodes)))
        return nodes, mat

    def subgraph(self, keep):
        keep = set(keep)
        g = SocialGraph(sorted(keep & self._nodes))
        for u, v, tie in self.social_arcs():
            if u in keep and v in keep:
                g.add_social_arc(u, v, tie)
        for u, v, w in self.comm_arcs():
            if u in keep and v in keep:
                g.add_message(u, v, w)
        return g

    def __eq__(self, other):
        if not isinstance(other, SocialGraph):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and list(self.social_arcs()) == list(other.social_arcs())
            and list(self.comm_arcs()) == list(other.comm_arcs())
        )

    def __repr__(self):
        return f"SocialGraph(nodes={len(self)}, social={self._n_social}, comm={self._n_comm})"


def add_social_arc(g, u, v, tie=NEIGHBORHOOD):
    g.add_social_arc(u, v, tie)
    return g


def add_message(g, u, v):
    g.add_message(u, v)
    return g


def distance2_out_candidates(g, u):
    if u not in g:
        raise GraphError(f"unknown node {u}")
    return g.distance2_out_candidates(u)


@dataclass(frozen=True)
class GraphStats:
    layer: str
    node_count: int
    arc_count: int
    mean_out_degree: float
    reciprocation: float
    gscc_size: int


def reciprocation(g, layer=SOCIAL):
    """Fraction of arcs whose reverse arc also exists."""
    m = g.arc_count(layer)
    if m == 0:
        return 0.0
    both = sum(1 for u, v in g.arcs(layer) if g.has_arc(v, u, layer))
    return both / m


def compute_stats(g, layer=SOCIAL):
    """Basic structural quantities of one layer, over the nodes incident to it."""
    nodes = g.layer_nodes(layer)
    m = g.arc_count(layer)
    if not nodes:
        return GraphStats(layer, 0, 0, 0.0, 0.0, 0)
    _, adj = g.adjacency(layer, nodes)
    _, labels = connected_components(adj, directed=True, connection="strong")
    gscc = int(np.bincount(labels).max())
    return GraphStats(layer, len(nodes), m, m / len(nodes), reciprocation(g, layer), gscc)


# -- edge-list I/O ------------------------------------------------------------

def save_edgelist(g, path):
    """Write both layers as ``src<TAB>dst<TAB>layer<TAB>attr`` lines."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("# src\tdst\tlayer\tattr\n")
        for u, v, tie in g.social_arcs():
            fh.write(f"{u}\t{v}\t{SOCIAL}\t{tie}\n")
        for u, v, w in g.comm_arcs():
            fh.write(f"{u}\t{v}\t{COMM}\t{w}\n")


def load_edgelist(path, nodes=()):
    """Read an edge-list file. ``nodes`` adds ids that may have no arcs."""
    g = SocialGraph(nodes)
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise GraphError(f"{path}:{lineno}: expected 4 tab-separated fields, got {len(parts)}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphError(f"{path}:{lineno}: node ids must be integers") from None
            layer, attr = parts[2], parts[3]
            g.add_node(u)
            g.add_node(v)
            try:
                if layer == SOCIAL:
                    if g.has_arc(u, v):
                        raise GraphError("duplicate social arc")
                    g.add_social_arc(u, v, attr)
                elif layer == COMM:
                    if g.has_arc(u, v, COMM):
                        raise GraphError("duplicate comm arc")
                    g.add_message(u, v, int(attr))
                else:
                    raise GraphError(f"unknown layer {layer!r}")
            except (GraphError, ValueError) as exc:
                raise GraphError(f"{path}:{lineno}: {exc}") from None
    return g
