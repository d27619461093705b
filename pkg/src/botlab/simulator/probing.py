"""Periodic profile-visiting rounds by the bot and the shouts they provoke."""

from collections import Counter, deque

import numpy as np

from ..graph import FRIENDSHIP, NEIGHBORHOOD
from .models import LINK_CREATED, SHOUT, VISIT, Event, EventLog, ResponseModel


def bfs_order(g, start, skip=()):
    """Nodes reachable from ``start`` over social arcs in either direction, in BFS order."""
    skip = set(skip)
    seen = {start}
    order = []
    queue = deque([start])
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in sorted(set(g.out_neighbors(u)) | set(g.in_neighbors(u))):
            if v not in seen and v not in skip:
                seen.add(v)
                queue.append(v)
    return order


def run_probe_rounds(g, profiles=None, model=None, rounds=15, interval_ticks=15, seed=0,
                     bot=None, start=None):
    """Add a bot to ``g`` (in place) and run ``rounds`` visit rounds.

    Round ``r`` visits every reachable user at tick ``r * interval_ticks``.
    A user visited for the ``k``-th time shouts with probability
    ``p_shout_per_visit * shout_decay ** (k - 1)``; a shout lands on the round
    tick unless it is late, and each shout increments the user's message arc
    to the bot. Shouters may also tie themselves to the bot. There is no
    spontaneous shouting outside this response.
    """
    model = model or ResponseModel()
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    if interval_ticks < 1:
        raise ValueError("interval_ticks must be at least 1")
    rng = np.random.default_rng(seed)
    users = g.nodes
    if bot is None:
        bot = (users[-1] + 1) if users else 0
    if start is None:
        start = users[0] if users else None
    order = bfs_order(g, start, skip={bot}) if start is not None else []
    g.add_node(bot)

    visits = Counter()
    pending = []  # late shouts as (tick, seq, event)
    events = []

    def release(batch):
        for _, _, e in sorted(batch):
            events.append(e)
            events.extend(_apply(g, e, bot, rng, model))

    for r in range(rounds):
        tick = r * interval_ticks
        release([p for p in pending if p[0] < tick])
        pending = [p for p in pending if p[0] >= tick]
        now = []
        for u in order:
            events.append(Event(tick, VISIT, bot, u))
            visits[u] += 1
            if rng.random() >= model.p_shout_per_visit * model.shout_decay ** (visits[u] - 1):
                continue
            if rng.random() < model.late_shout_prob:
                delay = int(rng.geometric(0.5))
                pending.append((tick + delay, len(pending), Event(tick + delay, SHOUT, u, bot)))
            else:
                now.append((tick, len(now), Event(tick, SHOUT, u, bot)))
        release(now)
    release(pending)

    events.sort(key=lambda e: e.tick)
    return EventLog(events, bot)


def _apply(g, shout, bot, rng, model):
    """Record a shout on the graph; return the tie-to-bot event it may cause."""
    g.add_message(shout.actor, bot)
    if not g.has_arc(shout.actor, bot) and rng.random() < model.p_link_bot:
        tie = FRIENDSHIP if rng.random() < 0.4 else NEIGHBORHOOD
        g.add_social_arc(shout.actor, bot, tie)
        return [Event(shout.tick, LINK_CREATED, shout.actor, bot)]
    return []


def shouters(log):
    """Distinct users who shouted at least once."""
    return {e.actor for e in log if e.kind == SHOUT}


def shout_histogram(log):
    """``[(tick, shouts, cumulative distinct shouters), ...]`` over every tick in the log span."""
    if not len(log):
        return []
    per_tick = Counter()
    first_tick = {}
    for e in log:
        if e.kind == SHOUT:
            per_tick[e.tick] += 1
            first_tick.setdefault(e.actor, e.tick)
    new_by_tick = Counter(first_tick.values())
    last = log.events[-1].tick
    rows, distinct = [], 0
    for t in range(log.events[0].tick, last + 1):
        distinct += new_by_tick[t]
        rows.append((t, per_tick[t], distinct))
    return rows


def round_ticks(log):
    return sorted({e.tick for e in log if e.kind == VISIT})
