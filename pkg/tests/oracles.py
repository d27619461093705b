"""Independent reference implementations used only by the tests.

They work from raw arc lists and dense matrices, never from SocialGraph's
indexes, so agreement with the library is meaningful.
"""

import math

import numpy as np


def brute_features(arcs, profiles, u, v):
    """Feature tuple of ``u -> v`` by scanning the full arc list for every quantity."""
    arcs = set(arcs)
    nodes = sorted({x for a in arcs for x in a} | {u, v})

    def kout(x):
        return sum(1 for (a, _) in arcs if a == x)

    cn_nodes = [z for z in nodes if (u, z) in arcs and (z, v) in arcs]
    cn = len(cn_nodes)
    k_u = kout(u)
    overlap = cn / k_u if k_u else 0.0
    ra = math.fsum(1.0 / kout(z) for z in cn_nodes) / k_u if k_u else 0.0
    recip = int((v, u) in arcs)

    def binary_cos(xs, ys, universe):
        a = [1 if t in xs else 0 for t in universe]
        b = [1 if t in ys else 0 for t in universe]
        na, nb = sum(a), sum(b)
        if na == 0 or nb == 0:
            return 0.0
        dot = sum(p * q for p, q in zip(a, b))
        return 0.0 if dot == 0 else dot / math.sqrt(na * nb)

    out_u = {b for (a, b) in arcs if a == u}
    out_v = {b for (a, b) in arcs if a == v}
    pu, pv = profiles[u], profiles[v]
    books = sorted(pu.library | pv.library)
    groups_all = sorted(pu.groups | pv.groups)
    sizes = {}
    for p in profiles.values():
        for gid in p.groups:
            sizes[gid] = sizes.get(gid, 0) + 1
    common_groups = [gid for gid in groups_all if gid in pu.groups and gid in pv.groups]
    return (
        cn,
        overlap,
        ra,
        recip,
        binary_cos(out_u, out_v, nodes),
        binary_cos(pu.library, pv.library, books),
        binary_cos(pu.groups, pv.groups, groups_all),
        min((sizes[gid] for gid in common_groups), default=0),
    )


def dense_adjacency(nodes, arcs, weights=None):
    idx = {u: i for i, u in enumerate(nodes)}
    A = np.zeros((len(nodes), len(nodes)))
    for k, (u, v) in enumerate(arcs):
        A[idx[u], idx[v]] = 1.0 if weights is None else weights[k]
    return A


def dense_pagerank(A, damping=0.85, iters=3000):
    """Google-matrix power iteration; dangling rows jump uniformly."""
    n = A.shape[0]
    out = A.sum(axis=1)
    P = np.where(out[:, None] > 0, A / np.where(out > 0, out, 1)[:, None], 1.0 / n)
    G = damping * P + (1 - damping) / n
    x = np.full(n, 1.0 / n)
    for _ in range(iters):
        x = x @ G
    return x / x.sum()


def dense_hits(A, iters=20000):
    """Alternating authority/hub updates with L1 normalization, from a uniform hub vector."""
    n = A.shape[0]
    h = np.full(n, 1.0 / n)
    a = np.zeros(n)
    for _ in range(iters):
        a = A.T @ h
        a = a / a.sum()
        h = A @ a
        h = h / h.sum()
    return h, a


def scc_sizes_networkx(nodes, arcs):
    import networkx as nx

    G = nx.DiGraph()
    G.add_nodes_from(nodes)
    G.add_edges_from(arcs)
    return max((len(c) for c in nx.strongly_connected_components(G)), default=0)


def chance_intra(sizes):
    """Expected intra share when targets are uniform over all other nodes, by explicit pair counting."""
    block = [b for b, s in enumerate(sizes) for _ in range(s)]
    same = total = 0
    for i, bi in enumerate(block):
        for j, bj in enumerate(block):
            if i != j:
                total += 1
                same += bi == bj
    return same / total
