"""The recommendation campaign: five-category assignment and simulated user responses."""

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..corpus import filter_active
from ..graph import NEIGHBORHOOD
from ..linkpred.features import FeatureExtractor
from ..linkpred.training import recommend
from .models import LINK_CREATED, REC_SENT, Event, EventLog, ResponseModel

log = logging.getLogger(__name__)

FOLLOWER_REC = "FollowerRec"
FOLLOWER_RAND = "FollowerRand"
NONFOLLOWER_REC = "NonFollowerRec"
NONFOLLOWER_RAND = "NonFollowerRand"
RECIPROCAL = "Reciprocal"
CATEGORIES = (FOLLOWER_REC, FOLLOWER_RAND, NONFOLLOWER_REC, NONFOLLOWER_RAND, RECIPROCAL)
RANDOM_CATEGORIES = (FOLLOWER_RAND, NONFOLLOWER_RAND)
SPONTANEOUS = "spontaneous"


class CampaignError(ValueError):
    pass


@dataclass(frozen=True)
class RecommendationAssignment:
    target: int
    suggestion: int
    category: str
    accepted: bool = False
    confidence: float | None = None
    fallback: bool = False
    origin: str | None = None  # category of the pair a Reciprocal assignment mirrors


def _random_suggestion(g, u, rng, users, exclude):
    out = g.out_neighbors(u)
    for _ in range(1000):
        v = users[int(rng.integers(len(users)))]
        if v != u and v not in out and v not in exclude:
            return v
    free = [v for v in users if v != u and v not in out and v not in exclude]
    if not free:
        raise CampaignError(f"user {u} is already linked to every other user")
    return free[int(rng.integers(len(free)))]


def assign_recommendations(g, profiles, shouters, model, min_books=10, frac_model=0.5,
                           frac_reciprocal=0.25, seed=0, eligible_tag=None, pool_size=None,
                           bot=None, cache=None):
    """Build the campaign's recommendation assignments.

    Followers are the (eligible) shouters; an equal number of non-followers is
    drawn among eligible users with at least ``min_books`` books. Within each
    pool a ``frac_model`` share gets the classifier's top suggestion and the
    rest a uniformly random non-contact. A ``frac_reciprocal`` share of all
    pairs ``(u, v)`` spawns the mirror suggestion ``(v, u)``. Categories are
    then down-sampled to a common size.

    ``cache`` (a dict) memoizes classifier suggestions across calls on the
    same unchanged graph and model.
    """
    rng = np.random.default_rng(seed)
    exclude = {bot} if bot is not None else set()
    users = [u for u in g.nodes if u not in exclude]

    def eligible(u):
        return eligible_tag is None or profiles[u].nationality == eligible_tag

    followers = sorted(u for u in shouters if u in g and u not in exclude and eligible(u))
    if pool_size is not None and len(followers) > pool_size:
        followers = sorted(rng.choice(followers, pool_size, replace=False).tolist())
    shout_set = set(shouters)
    candidates = sorted(u for u in filter_active(profiles, min_books)
                        if u in g and u not in shout_set and u not in exclude and eligible(u))
    if len(candidates) < len(followers):
        raise CampaignError(
            f"need {len(followers)} eligible non-followers with >= {min_books} books, found {len(candidates)}")
    nonfollowers = sorted(rng.choice(candidates, len(followers), replace=False).tolist()) if followers else []

    fx = FeatureExtractor(g, profiles)
    base = []
    for pool, rec_cat, rand_cat in ((followers, FOLLOWER_REC, FOLLOWER_RAND),
                                    (nonfollowers, NONFOLLOWER_REC, NONFOLLOWER_RAND)):
        order = rng.permutation(len(pool))
        n_model = int(round(frac_model * len(pool)))
        for rank, i in enumerate(order.tolist()):
            u = pool[i]
            if rank < n_model:
                if cache is not None and u in cache:
                    best = cache[u]
                else:
                    best = recommend(model, g, profiles, u, extractor=fx, exclude=exclude)
                    if cache is not None:
                        cache[u] = best
                if best is None:
                    log.info("no positive candidate for user %d; falling back to a random suggestion", u)
                    v = _random_suggestion(g, u, rng, users, exclude)
                    base.append(RecommendationAssignment(u, v, rec_cat, fallback=True))
                else:
                    base.append(RecommendationAssignment(u, best[0], rec_cat, confidence=best[1]))
            else:
                base.append(RecommendationAssignment(u, _random_suggestion(g, u, rng, users, exclude), rand_cat))

    pairs = {(a.target, a.suggestion) for a in base}
    mirrored = []
    n_mirror = int(round(frac_reciprocal * len(base)))
    if n_mirror:
        for i in np.sort(rng.choice(len(base), n_mirror, replace=False)).tolist():
            a = base[i]
            rev = (a.suggestion, a.target)
            if rev in pairs or g.has_arc(*rev):
                continue
            pairs.add(rev)
            mirrored.append(RecommendationAssignment(rev[0], rev[1], RECIPROCAL, origin=a.category))

    by_cat = {c: [a for a in base + mirrored if a.category == c] for c in CATEGORIES}
    present = [c for c in CATEGORIES if by_cat[c]]
    if not present:
        return []
    size = min(len(by_cat[c]) for c in present)
    out = []
    for c in present:
        items = by_cat[c]
        if len(items) > size:
            keep = np.sort(rng.choice(len(items), size, replace=False))
            items = [items[k] for k in keep.tolist()]
        out.extend(items)
    return out


@dataclass
class CampaignSummary:
    sent: Counter = field(default_factory=Counter)
    accepted: Counter = field(default_factory=Counter)
    targets: int = 0
    link_creators: int = 0
    followed: int = 0
    decisions: list = field(default_factory=list)

    @property
    def follow_rate(self):
        """Share of link-creating targets that accepted at least one suggestion."""
        return self.followed / self.link_creators if self.link_creators else 0.0

    @property
    def random_share(self):
        """Share of accepted suggestions that came from the random categories."""
        total = sum(self.accepted.values())
        return sum(self.accepted[c] for c in RANDOM_CATEGORIES) / total if total else 0.0

    def rows(self):
        return [(c, self.sent[c], self.accepted[c]) for c in CATEGORIES if self.sent[c]]

    def save(self, path, header=""):
        with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(header)
            fh.write("# category\tsent\taccepted\n")
            for c, s, a in self.rows():
                fh.write(f"{c}\t{s}\t{a}\n")
            fh.write(f"# targets={self.targets} link_creators={self.link_creators} followed={self.followed}\n")
            fh.write(f"# follow_rate={self.follow_rate:.6f} random_share={self.random_share:.6f}\n")


def acceptance_probability(a, model, mirrored):
    base = {
        FOLLOWER_REC: model.follower_rec,
        FOLLOWER_RAND: model.follower_rand,
        NONFOLLOWER_REC: model.nonfollower_rec,
        NONFOLLOWER_RAND: model.nonfollower_rand,
    }
    p = base[a.origin if a.category == RECIPROCAL else a.category]
    if mirrored:
        p *= model.reciprocal_boost
    return min(1.0, p)


def simulate_responses(assignments, response_model=None, seed=0, g=None, tick=0):
    """Decide each assignment independently and record the resulting links.

    Every target may also create an unrelated link with probability
    ``p_spontaneous_link``; that is what makes the follow rate below one.
    When ``g`` is given, accepted and spontaneous links are added to it.
    Returns ``(EventLog, CampaignSummary)``.
    """
    model = response_model or ResponseModel()
    rng = np.random.default_rng(seed)
    pairs = {(a.target, a.suggestion) for a in assignments}
    events = [Event(tick, REC_SENT, a.target, a.suggestion, a.category) for a in assignments]
    summary = CampaignSummary()
    decided = []
    for a in assignments:
        mirrored = (a.suggestion, a.target) in pairs
        ok = bool(rng.random() < acceptance_probability(a, model, mirrored))
        decided.append(replace(a, accepted=ok))
        summary.sent[a.category] += 1
    links = []
    for a in decided:
        if a.accepted:
            summary.accepted[a.category] += 1
            if g is None or not g.has_arc(a.target, a.suggestion):
                links.append(Event(tick + 1, LINK_CREATED, a.target, a.suggestion, a.category))
                if g is not None:
                    g.add_social_arc(a.target, a.suggestion, NEIGHBORHOOD)

    targets = sorted({a.target for a in decided})
    users = g.nodes if g is not None else None
    spontaneous = set()
    for u in targets:
        if rng.random() < model.p_spontaneous_link:
            spontaneous.add(u)
            v = None
            if g is not None:
                v = _random_suggestion(g, u, rng, users, {a.suggestion for a in decided if a.target == u})
                g.add_social_arc(u, v, NEIGHBORHOOD)
            links.append(Event(tick + 1, LINK_CREATED, u, v, SPONTANEOUS))

    followed = {a.target for a in decided if a.accepted}
    summary.targets = len(targets)
    summary.followed = len(followed)
    summary.link_creators = len(followed | spontaneous)
    summary.decisions = decided
    return EventLog(events + links), summary


def save_assignments(assignments, path, header=""):
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(header)
        fh.write("# target\tsuggestion\tcategory\taccepted\tconfidence\tfallback\n")
        for a in assignments:
            conf = "-" if a.confidence is None else repr(a.confidence)
            fh.write(f"{a.target}\t{a.suggestion}\t{a.category}\t{int(a.accepted)}\t{conf}\t{int(a.fallback)}\n")
