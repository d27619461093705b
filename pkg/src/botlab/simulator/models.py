"""Configuration records and the event log shared by the simulation stages."""

from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import NamedTuple


class ConfigError(ValueError):
    pass


def _check_prob(obj, *names):
    for name in names:
        p = getattr(obj, name)
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"{type(obj).__name__}.{name} must lie in [0, 1], got {p}")


def from_mapping(cls, data):
    """Build dataclass ``cls`` from a mapping, rejecting unknown keys."""
    known = {f.name for f in fields(cls)}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown {cls.__name__} fields: {', '.join(sorted(extra))}")
    return cls(**data)


@dataclass(frozen=True)
class GeneratorConfig:
    n_nodes: int = 20000
    mean_out_degree: float = 5.0
    attachment_exponent: float = 1.0
    triadic_prob: float = 0.6
    reciprocation_prob: float = 0.57
    homophily_strength: float = 4.0
    candidate_pool: int = 8
    catalog_size: int = 6000
    n_topics: int = 30
    topic_affinity: float = 0.8
    books_median: float = 20.0
    books_sigma: float = 1.0
    group_count: int = 600
    groups_mean: float = 1.5
    friendship_share: float = 0.4
    message_rate: float = 3.0
    reply_prob: float = 0.35
    home_nationality: str = "it"
    home_share: float = 0.6
    evolution_rate: float = 0.15
    evolution_random_share: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.mean_out_degree < 1:
            raise ConfigError("mean_out_degree must be at least 1")
        if self.mean_out_degree >= self.n_nodes - 1:
            raise ConfigError(
                f"mean_out_degree {self.mean_out_degree} is infeasible for {self.n_nodes} nodes")
        if self.n_nodes < 10:
            raise ConfigError("n_nodes must be at least 10")
        _check_prob(self, "triadic_prob", "reciprocation_prob", "topic_affinity", "friendship_share",
                    "reply_prob", "home_share", "evolution_random_share")
        for name in ("attachment_exponent", "homophily_strength", "books_sigma", "groups_mean",
                     "message_rate", "evolution_rate"):
            if getattr(self, name) < 0:
                raise ConfigError(f"GeneratorConfig.{name} must be non-negative")
        if self.candidate_pool < 1 or self.catalog_size < 1 or self.n_topics < 1 or self.group_count < 1:
            raise ConfigError("candidate_pool, catalog_size, n_topics and group_count must be positive")
        if self.books_median <= 0:
            raise ConfigError("books_median must be positive")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ResponseModel:
    """How users react to bot visits and to recommendations.

    Acceptance probabilities are per recommendation category; a suggestion
    whose mirror image was also sent is accepted with its probability
    multiplied by ``reciprocal_boost`` (capped at 1).
    """

    p_shout_per_visit: float = 0.012
    shout_decay: float = 0.92
    late_shout_prob: float = 0.04
    p_link_bot: float = 0.12
    follower_rec: float = 0.30
    follower_rand: float = 0.05
    nonfollower_rec: float = 0.12
    nonfollower_rand: float = 0.025
    reciprocal_boost: float = 1.6
    p_spontaneous_link: float = 0.167

    def __post_init__(self):
        _check_prob(self, "p_shout_per_visit", "late_shout_prob", "p_link_bot", "follower_rec",
                    "follower_rand", "nonfollower_rec", "nonfollower_rand", "p_spontaneous_link")
        if self.shout_decay < 0 or self.reciprocal_boost < 0:
            raise ConfigError("shout_decay and reciprocal_boost must be non-negative")

    def to_dict(self):
        return asdict(self)


VISIT, SHOUT, REC_SENT, LINK_CREATED = "visit", "shout", "rec_sent", "link_created"
EVENT_KINDS = (VISIT, SHOUT, REC_SENT, LINK_CREATED)


class Event(NamedTuple):
    tick: int
    kind: str
    actor: int
    subject: int | None = None
    category: str | None = None


class EventLog:
    """Ordered simulation events; ticks never decrease."""

    def __init__(self, events=(), bot=None):
        self.events = []
        self.bot = bot
        for e in events:
            self.append(e)

    def append(self, event):
        if event.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {event.kind!r}")
        if self.events and event.tick < self.events[-1].tick:
            raise ValueError("event ticks must be non-decreasing")
        self.events.append(event)

    def extend(self, events):
        for e in events:
            self.append(e)

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)

    def __eq__(self, other):
        return isinstance(other, EventLog) and self.events == other.events

    def of_kind(self, kind):
        return [e for e in self.events if e.kind == kind]

    def shift(self, offset):
        return EventLog((e._replace(tick=e.tick + offset) for e in self.events), self.bot)

    def save(self, path, header=""):
        with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(header)
            fh.write("# tick\tkind\tactor\tsubject\tcategory\n")
            for e in self.events:
                subject = "-" if e.subject is None else e.subject
                fh.write(f"{e.tick}\t{e.kind}\t{e.actor}\t{subject}\t{e.category or '-'}\n")

    @classmethod
    def load(cls, path):
        log = cls()
        with Path(path).open(encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 5:
                    raise ValueError(f"{path}:{lineno}: expected 5 tab-separated fields")
                tick, kind, actor, subject, cat = parts
                log.append(Event(int(tick), kind, int(actor),
                                 None if subject == "-" else int(subject),
                                 None if cat == "-" else cat))
        return log
