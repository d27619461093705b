"""Faction clustering analytics: out-degree null model, intra/inter ratios,
community detection with two-way merge, FCCV, sentiment windows and keyword subgraphs."""

from collections import Counter
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .corpus import CONTRA, FACTIONS, NEGATIVE, NEUTRAL, POSITIVE, PRO
from .graph import COMM, SOCIAL, SocialGraph


class PolarizationError(ValueError):
    pass


def rewire_preserve_outdegree(g, layer=SOCIAL, seed=0):
    """Copy of ``g`` whose ``layer`` arcs get fresh uniformly random targets.

    Each node keeps its exact out-degree; targets are drawn without
    replacement among the other nodes, so no self-arcs or duplicates appear.
    A node already linked to everyone keeps its neighborhood. Arc attributes
    (tie type or message weight) travel with the re-targeted arcs.
    """
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    if g.arc_count(layer) == 0:
        raise PolarizationError(f"layer {layer!r} has no arcs to rewire")
    nodes = np.array(g.nodes)
    n = len(nodes)
    out = SocialGraph(g.nodes)
    other = COMM if layer == SOCIAL else SOCIAL
    for u, v, attr in (g.social_arcs() if other == SOCIAL else g.comm_arcs()):
        (out.add_social_arc if other == SOCIAL else out.add_message)(u, v, attr)
    for i, u in enumerate(nodes.tolist()):
        old = sorted(g.out_neighbors(u, layer))
        k = len(old)
        if not k:
            continue
        attrs = [g.tie_type(u, v) if layer == SOCIAL else g.weight(u, v) for v in old]
        if k >= n - 1:
            targets = old
        else:
            pick = rng.choice(n - 1, k, replace=False)
            pick[pick >= i] += 1
            targets = nodes[pick].tolist()
        for v, attr in zip(targets, attrs):
            if layer == SOCIAL:
                out.add_social_arc(u, v, attr)
            else:
                out.add_message(u, v, attr)
    return out


def intra_inter_ratio(g, layer, labels, nodes=None):
    """Fractions of arcs inside one faction and across factions.

    Only arcs with both endpoints in ``nodes`` (default: every node) count;
    each such endpoint must carry a faction label.
    """
    keep = None if nodes is None else set(nodes)
    intra = inter = 0
    for u, v in g.arcs(layer):
        if keep is not None and (u not in keep or v not in keep):
            continue
        try:
            same = labels[u] == labels[v]
        except KeyError as exc:
            raise PolarizationError(f"arc endpoint {exc.args[0]} has no faction label") from None
        if same:
            intra += 1
        else:
            inter += 1
    total = intra + inter
    if total == 0:
        raise PolarizationError("no arcs inside the labeled node set")
    return intra / total, inter / total


def chance_intra_level(block_sizes):
    """Intra fraction expected when every node's targets are uniform over the others."""
    s = np.asarray(block_sizes, dtype=float)
    n = s.sum()
    return float((s * (s - 1)).sum() / (n * (n - 1)))


def planted_faction_graph(sizes=(102, 72), out_degree=8, intra=0.74, seed=0, layer=SOCIAL):
    """Random graph with a fixed out-degree and a planted intra-faction arc share.

    Nodes of the first block are labeled ``pro``, the second ``contra``.
    Returns ``(graph, labels)``.
    """
    if len(sizes) != 2:
        raise PolarizationError("planted faction graphs have exactly two blocks")
    rng = np.random.default_rng(seed)
    n = int(sum(sizes))
    g = SocialGraph(range(n))
    blocks = [np.arange(0, sizes[0]), np.arange(sizes[0], n)]
    labels = {u: (PRO if u < sizes[0] else CONTRA) for u in range(n)}
    for u in range(n):
        b = 0 if u < sizes[0] else 1
        own = blocks[b][blocks[b] != u]
        away = blocks[1 - b]
        k_in = min(int(rng.binomial(out_degree, intra)), len(own))
        k_out = min(out_degree - k_in, len(away))
        targets = np.concatenate([rng.choice(own, k_in, replace=False), rng.choice(away, k_out, replace=False)])
        for v in sorted(targets.tolist()):
            if layer == SOCIAL:
                g.add_social_arc(u, v)
            else:
                g.add_message(u, v)
    return g, labels


def detect_communities(g, layer=SOCIAL, seed=0, nodes=None, hop_attenuation=0.4, max_sweeps=100):
    """Asynchronous label propagation with hop attenuation on the symmetrized layer.

    Each node carries a label and a score. A node adopts the label with the
    highest neighbor support, where a neighbor contributes its score times the
    number of arcs (either direction) joining the pair; the node's score becomes
    the best score among neighbors holding that label minus ``hop_attenuation``.
    Attenuation stops one label from flooding a dense graph. Nodes are swept in
    one permutation drawn from ``seed`` and ties are broken by the same stream.
    Returns a list of node sets ordered by their smallest member.
    """
    rng = np.random.default_rng(seed)
    members = g.nodes if nodes is None else sorted(set(nodes))
    if not members:
        raise PolarizationError("community detection on an empty node set")
    keep = set(members)
    nbrs = {u: Counter() for u in members}
    for u, v in g.arcs(layer):
        if u in keep and v in keep:
            nbrs[u][v] += 1
            nbrs[v][u] += 1
    nbrs = {u: sorted(c.items()) for u, c in nbrs.items()}
    label = {u: u for u in members}
    score = dict.fromkeys(members, 1.0)
    order = [members[i] for i in rng.permutation(len(members)).tolist()]
    for _ in range(max_sweeps):
        changed = False
        for u in order:
            if not nbrs[u]:
                continue
            support = Counter()
            for v, w in nbrs[u]:
                support[label[v]] += w * score[v]
            top = max(support.values())
            best = sorted(lab for lab, x in support.items() if x >= top - 1e-12)
            if label[u] in best:
                continue
            new = best[int(rng.integers(len(best)))] if len(best) > 1 else best[0]
            label[u] = new
            score[u] = max(score[v] for v, _ in nbrs[u] if label[v] == new) - hop_attenuation
            changed = True
        if not changed:
            break
    groups = {}
    for u in members:
        groups.setdefault(label[u], set()).add(u)
    return sorted(groups.values(), key=min)


class MacroClusters(NamedTuple):
    pro: frozenset
    contra: frozenset
    degenerate: bool


def majority_faction(cluster, labels):
    counts = Counter(labels[u] for u in cluster if u in labels)
    top = max((counts[f] for f in FACTIONS), default=0)
    return sorted(f for f in FACTIONS if counts[f] == top)[0]


def merge_to_two(clusters, labels):
    """Union clusters by their labeled majority into a pro and a contra macro-cluster.

    Majority ties resolve to the lexicographically first faction name. If every
    cluster leans the same way one macro-cluster is empty and the result is
    flagged degenerate.
    """
    if not clusters:
        raise PolarizationError("nothing to merge")
    merged = {PRO: set(), CONTRA: set()}
    for c in clusters:
        merged[majority_faction(c, labels)].update(c)
    return MacroClusters(frozenset(merged[PRO]), frozenset(merged[CONTRA]),
                         not merged[PRO] or not merged[CONTRA])


def fccv_single(macro, labels):
    """Fraction of labeled nodes matched under the better of the two cluster-to-faction assignments."""
    a, b = (macro.pro, macro.contra) if isinstance(macro, MacroClusters) else macro
    if not labels:
        raise PolarizationError("no labeled nodes")
    straight = sum(1 for u, f in labels.items() if (u in a and f == PRO) or (u in b and f == CONTRA))
    swapped = sum(1 for u, f in labels.items() if (u in a and f == CONTRA) or (u in b and f == PRO))
    return max(straight, swapped) / len(labels)


def fccv(runs, labels):
    """Mean FCCV over a sequence of two-way clusterings (one per realization)."""
    if isinstance(runs, MacroClusters):
        runs = [runs]
    runs = list(runs)
    if not runs:
        raise PolarizationError("no realizations given")
    return float(np.mean([fccv_single(r, labels) for r in runs]))


def fccv_over_seeds(g, labels, seeds, layer=SOCIAL, nodes=None):
    """Detect, merge and score once per seed; returns ``(mean_fccv, per_run)``."""
    per_run = []
    for s in seeds:
        macro = merge_to_two(detect_communities(g, layer, s, nodes), labels)
        per_run.append(fccv_single(macro, labels))
    return float(np.mean(per_run)), per_run


def randomization_table(g, labels, layers=(SOCIAL, COMM), runs=50, seed=0, nodes=None):
    """Actual vs rewired intra/inter fractions per layer.

    Returns ``{layer: (intra, inter, rand_intra, rand_inter)}`` with the rewired
    columns averaged over ``runs`` realizations.
    """
    rng = np.random.default_rng(seed)
    table = {}
    for layer in layers:
        if g.arc_count(layer) == 0:
            continue
        intra, inter = intra_inter_ratio(g, layer, labels, nodes)
        rand = [intra_inter_ratio(rewire_preserve_outdegree(g, layer, rng), layer, labels, nodes)[0]
                for _ in range(runs)]
        r = float(np.mean(rand))
        table[layer] = (intra, inter, r, 1.0 - r)
    return table


# -- message streams --------------------------------------------------------------

def keyword_subgraph(g, messages, keyword):
    """Communication arcs built only from messages containing ``keyword``."""
    keyword = keyword.lower()
    counts = Counter((m.author, m.recipient) for m in messages if keyword in m.keywords and m.author != m.recipient)
    sub = SocialGraph(sorted({x for pair in counts for x in pair}))
    for (u, v), c in sorted(counts.items()):
        sub.add_message(u, v, c)
    return sub


class Window(NamedTuple):
    index: int
    pos: float
    neutral: float
    neg: float
    size: int


def sentiment_timeline(messages, window=50):
    """Sentiment shares over consecutive disjoint windows of labeled messages.

    Messages are taken in time order (stable for equal times). Returns
    ``(windows, skipped)`` where ``skipped`` counts unlabeled messages; the last
    window may be shorter and carries its own size.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    ordered = sorted(messages, key=lambda m: m.time)
    labeled = [m.sentiment for m in ordered if m.sentiment is not None]
    skipped = len(ordered) - len(labeled)
    out = []
    for k, start in enumerate(range(0, len(labeled), window)):
        chunk = labeled[start:start + window]
        c = Counter(chunk)
        n = len(chunk)
        pos, neg = c[POSITIVE] / n, c[NEGATIVE] / n
        out.append(Window(k, pos, c[NEUTRAL] / n, neg, n))
    return out, skipped


def write_timeline(windows, path, header=""):
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(header)
        fh.write("# window\tpos\tneutral\tneg\tsize\n")
        for w in windows:
            fh.write(f"{w.index}\t{w.pos!r}\t{w.neutral!r}\t{w.neg!r}\t{w.size}\n")
