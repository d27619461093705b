"""Synthetic two-layer social network with library homophily.

Nodes arrive one at a time. Each draws a topic, a library from a topic-biased
catalog and a few topic-biased group memberships, then links out to earlier
nodes. Every out-arc picks a handful of candidates, either by preferential
attachment on in-degree or by closing a triangle through an earlier target,
and keeps one with probability proportional to ``exp(h * cosine(libraries))``.
Arcs are reciprocated at a rate chosen so that the measured fraction of
bidirectional arcs equals ``reciprocation_prob``.
"""

import math

import numpy as np

from ..corpus import Profile, Profiles
from ..graph import FRIENDSHIP, NEIGHBORHOOD, SocialGraph
from ..linkpred.features import cosine
from .models import GeneratorConfig


def reverse_arc_rate(target):
    """Per-arc reciprocation probability giving a bidirectional-arc fraction of ``target``.

    Reciprocating each of ``m`` one-way arcs with probability ``q`` yields
    ``m (1 + q)`` arcs of which ``2 m q`` are bidirectional.
    """
    return target / (2.0 - target)


class _AttachmentSampler:
    """Draw nodes with weight ``(in_degree + 1) ** exponent``.

    Linear attachment uses the repeated-entries list; other exponents use a
    Fenwick tree over the weights.
    """

    def __init__(self, capacity, exponent, rng):
        self.rng = rng
        self.exponent = exponent
        self.linear = exponent == 1.0
        self.indeg = np.zeros(capacity, dtype=np.int64)
        if self.linear:
            self.entries = []
        else:
            self.tree = np.zeros(capacity + 1)
            self.total = 0.0
            self.size = capacity

    def _fen_add(self, i, delta):
        i += 1
        while i <= self.size:
            self.tree[i] += delta
            i += i & -i
        self.total += delta

    def _fen_find(self, x):
        pos, step = 0, 1 << self.size.bit_length()
        while step:
            nxt = pos + step
            if nxt <= self.size and self.tree[nxt] <= x:
                pos = nxt
                x -= self.tree[nxt]
            step >>= 1
        return min(pos, self.size - 1)

    def add_node(self, u):
        if self.linear:
            self.entries.append(u)
        else:
            self._fen_add(u, 1.0)

    def bump(self, v):
        old = self.indeg[v]
        self.indeg[v] = old + 1
        if self.linear:
            self.entries.append(v)
        else:
            self._fen_add(v, (old + 2) ** self.exponent - (old + 1) ** self.exponent)

    def sample(self, k):
        if self.linear:
            idx = self.rng.integers(0, len(self.entries), size=k)
            return [self.entries[i] for i in idx.tolist()]
        return [self._fen_find(x) for x in (self.rng.random(k) * self.total).tolist()]


def _zipf_weights(n, s=0.8):
    w = 1.0 / np.arange(1, n + 1) ** s
    return w / w.sum()


def _draw_profiles(cfg, rng):
    n = cfg.n_nodes
    topics = rng.integers(0, cfg.n_topics, size=n)
    block = max(1, cfg.catalog_size // cfg.n_topics)
    in_topic = _zipf_weights(block)
    everywhere = _zipf_weights(cfg.catalog_size, 0.6)
    sizes = np.minimum(
        np.maximum(0, np.rint(rng.lognormal(math.log(cfg.books_median), cfg.books_sigma, size=n))),
        cfg.catalog_size // 2,
    ).astype(np.int64)

    groups_by_topic = [np.arange(t, cfg.group_count, cfg.n_topics) for t in range(cfg.n_topics)]
    group_pop = _zipf_weights(cfg.group_count, 1.0)
    profiles = Profiles()
    for u in range(n):
        k = int(sizes[u])
        own = int(rng.binomial(k, cfg.topic_affinity))
        own = min(own, block)
        start = int(topics[u]) * block
        books = set((start + rng.choice(block, own, replace=False, p=in_topic)).tolist()) if own else set()
        while len(books) < k:
            books.update(rng.choice(cfg.catalog_size, k - len(books), p=everywhere).tolist())
        m = int(rng.poisson(cfg.groups_mean))
        groups = set()
        for _ in range(m):
            pool = groups_by_topic[int(topics[u])]
            if rng.random() < cfg.topic_affinity and len(pool):
                groups.add(int(pool[rng.integers(len(pool))]))
            else:
                groups.add(int(rng.choice(cfg.group_count, p=group_pop)))
        nat = cfg.home_nationality if rng.random() < cfg.home_share else "xx"
        profiles[u] = Profile(u, frozenset(books), frozenset(groups), nat)
    return profiles


def _pick(rng, cands, lib, profiles, h):
    if len(cands) == 1 or h == 0:
        return cands[int(rng.integers(len(cands)))]
    w = np.exp(h * np.array([cosine(lib, profiles[c].library) for c in cands]))
    return cands[int(rng.choice(len(cands), p=w / w.sum()))]


def generate_network(cfg=None, rng=None):
    """Grow a social graph with profiles and a message layer. Returns ``(graph, profiles)``."""
    cfg = cfg or GeneratorConfig()
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    n = cfg.n_nodes
    profiles = _draw_profiles(cfg, rng)
    g = SocialGraph(range(n))
    q = reverse_arc_rate(cfg.reciprocation_prob)
    sampler = _AttachmentSampler(n, cfg.attachment_exponent, rng)
    nbr_lists = [[] for _ in range(n)]

    def link(u, v):
        tie = FRIENDSHIP if rng.random() < cfg.friendship_share else NEIGHBORHOOD
        g.add_social_arc(u, v, tie)
        nbr_lists[u].append(v)
        nbr_lists[v].append(u)
        sampler.bump(v)

    core = min(5, n)
    for u in range(core):
        sampler.add_node(u)
    for u in range(core):
        v = (u + 1) % core
        link(u, v)
        if rng.random() < q:
            link(v, u)

    mean_extra = cfg.mean_out_degree - 1.0
    for t in range(core, n):
        m = 1 + int(rng.poisson(rng.exponential(mean_extra))) if mean_extra > 0 else 1
        m = min(m, t)
        lib = profiles[t].library
        chosen = []
        attempts = 0
        while len(chosen) < m and attempts < 4 * m + 10:
            attempts += 1
            if chosen and rng.random() < cfg.triadic_prob:
                z = chosen[int(rng.integers(len(chosen)))]
                nb = nbr_lists[z]
                cands = [nb[i] for i in rng.integers(0, len(nb), size=cfg.candidate_pool).tolist()]
            else:
                cands = sampler.sample(cfg.candidate_pool)
            cands = [c for c in dict.fromkeys(cands) if c != t and c not in chosen]
            if not cands:
                continue
            chosen.append(_pick(rng, cands, lib, profiles, cfg.homophily_strength))
        sampler.add_node(t)
        for v in chosen:
            link(t, v)
            if rng.random() < q:
                link(v, t)

    _add_messages(g, profiles, cfg, rng, nbr_lists)
    return g, profiles


def _add_messages(g, profiles, cfg, rng, nbr_lists):
    books = np.array([profiles[u].book_count for u in range(cfg.n_nodes)], dtype=float)
    activity = books / max(books.mean(), 1e-9)
    counts = rng.poisson(cfg.message_rate * activity)
    for u in range(cfg.n_nodes):
        c = int(counts[u])
        nb = sorted(set(nbr_lists[u]))
        if not c or not nb:
            continue
        w = books[nb] + 1.0
        picks = rng.choice(len(nb), size=c, p=w / w.sum())
        for i in np.unique(picks).tolist():
            v = nb[i]
            g.add_message(u, v, int((picks == i).sum()))
            if rng.random() < cfg.reply_prob:
                g.add_message(v, u)


def evolve_network(g, profiles, cfg=None, rng=None, new_arcs=None):
    """Return a later snapshot of ``g`` with extra social arcs among existing users.

    New arcs mostly close two-hop paths found by short random walks, again
    weighted by library similarity and favouring reverses of incoming arcs;
    a share goes to uniformly random users.
    """
    cfg = cfg or GeneratorConfig()
    rng = rng if rng is not None else np.random.default_rng(cfg.seed + 1)
    g1 = g.copy()
    nodes = g1.nodes
    if new_arcs is None:
        new_arcs = int(round(cfg.evolution_rate * g.arc_count()))
    q = reverse_arc_rate(cfg.reciprocation_prob)
    out = {u: list(g1.out_neighbors(u)) for u in nodes}
    cum = np.cumsum([len(out[u]) + 1 for u in nodes], dtype=float)
    added = 0
    guard = 0
    while added < new_arcs and guard < 20 * new_arcs + 100:
        guard += 1
        u = nodes[int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))]
        if rng.random() < cfg.evolution_random_share or not out[u]:
            v = nodes[int(rng.integers(len(nodes)))]
            cands = [v]
        else:
            cands = []
            for _ in range(cfg.candidate_pool):
                z = out[u][int(rng.integers(len(out[u])))]
                if out[z]:
                    cands.append(out[z][int(rng.integers(len(out[z])))])
        cands = [c for c in dict.fromkeys(cands) if c != u and not g1.has_arc(u, c)]
        if not cands:
            continue
        lib = profiles[u].library
        w = np.exp(cfg.homophily_strength * np.array([cosine(lib, profiles[c].library) for c in cands]))
        w *= np.array([3.0 if g1.has_arc(c, u) else 1.0 for c in cands])
        v = cands[int(rng.choice(len(cands), p=w / w.sum()))]
        tie = FRIENDSHIP if rng.random() < cfg.friendship_share else NEIGHBORHOOD
        g1.add_social_arc(u, v, tie)
        out[u].append(v)
        added += 1
        if not g1.has_arc(v, u) and rng.random() < q:
            g1.add_social_arc(v, u, tie)
            out[v].append(u)
            added += 1
    return g1
