"""User profiles, message streams and faction labels, with their file formats.

Profile file::

    user<TAB>books=<csv ids><TAB>groups=<csv ids><TAB>nat=<tag>

Message file::

    time<TAB>author<TAB>recipient<TAB>sentiment<TAB>space separated tokens

Faction file::

    user<TAB>faction

Sentiment is never inferred; an empty field or ``-`` marks an unlabeled message.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

POSITIVE, NEUTRAL, NEGATIVE = "positive", "neutral", "negative"
SENTIMENTS = (POSITIVE, NEUTRAL, NEGATIVE)
PRO, CONTRA = "pro", "contra"
FACTIONS = (PRO, CONTRA)


class CorpusError(ValueError):
    pass


@dataclass
class Profile:
    user: int
    library: frozenset = frozenset()
    groups: frozenset = frozenset()
    nationality: str | None = None

    @property
    def book_count(self):
        return len(self.library)


@dataclass(frozen=True)
class MessageRecord:
    time: int
    author: int
    recipient: int
    sentiment: str | None = None
    keywords: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.sentiment is not None and self.sentiment not in SENTIMENTS:
            raise CorpusError(f"sentiment must be one of {SENTIMENTS}, got {self.sentiment!r}")
        if self.time < 0:
            raise CorpusError("message time must be non-negative")


class Profiles(dict):
    """``UserId -> Profile`` map that hands out empty profiles for unknown users."""

    def __missing__(self, user):
        return Profile(user)

    def group_sizes(self):
        sizes = defaultdict(int)
        for p in self.values():
            for gid in p.groups:
                sizes[gid] += 1
        return dict(sizes)


def _parse_ids(text, what, where):
    if not text:
        return frozenset()
    try:
        ids = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CorpusError(f"{where}: bad {what} id list {text!r}") from None
    if len(ids) != len(set(ids)):
        raise CorpusError(f"{where}: duplicate {what} ids")
    return frozenset(ids)


def parse_profile_line(line, where="<line>"):
    parts = line.split("\t") if "\t" in line else line.split()
    try:
        user = int(parts[0])
    except (ValueError, IndexError):
        raise CorpusError(f"{where}: expected a user id first") from None
    books = groups = frozenset()
    nat = None
    for part in parts[1:]:
        key, sep, val = part.partition("=")
        if not sep:
            raise CorpusError(f"{where}: expected key=value, got {part!r}")
        if key == "books":
            books = _parse_ids(val, "book", where)
        elif key == "groups":
            groups = _parse_ids(val, "group", where)
        elif key == "nat":
            nat = val or None
        else:
            raise CorpusError(f"{where}: unknown field {key!r}")
    return Profile(user, books, groups, nat)


def load_profiles(path):
    profiles = Profiles()
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            p = parse_profile_line(line, f"{path}:{lineno}")
            if p.user in profiles:
                raise CorpusError(f"{path}:{lineno}: duplicate user id {p.user}")
            profiles[p.user] = p
    return profiles


def save_profiles(profiles, path):
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for user in sorted(profiles):
            p = profiles[user]
            books = ",".join(map(str, sorted(p.library)))
            groups = ",".join(map(str, sorted(p.groups)))
            fh.write(f"{user}\tbooks={books}\tgroups={groups}\tnat={p.nationality or ''}\n")


def filter_active(profiles, min_books):
    """Users whose library holds at least ``min_books`` items."""
    if min_books < 0:
        raise CorpusError("min_books must be non-negative")
    return {u for u, p in profiles.items() if p.book_count >= min_books}


def books_messages_by_inbox(g, profiles, users=None):
    """Mean library size and mean sent messages per distinct received-message count.

    Returns ``[(msg_in, mean_books, mean_sent), ...]`` sorted by ``msg_in``.
    """
    users = g.nodes if users is None else users
    acc = defaultdict(lambda: [0, 0, 0])
    for u in users:
        row = acc[g.msg_in(u)]
        row[0] += 1
        row[1] += profiles[u].book_count
        row[2] += g.msg_out(u)
    return [(k, acc[k][1] / acc[k][0], acc[k][2] / acc[k][0]) for k in sorted(acc)]


# -- messages -------------------------------------------------------------------

def load_messages(path):
    msgs = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 4:
                raise CorpusError(f"{path}:{lineno}: expected at least 4 tab-separated fields")
            try:
                t, a, r = int(parts[0]), int(parts[1]), int(parts[2])
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: time, author and recipient must be integers") from None
            label = parts[3].strip() or None
            if label == "-":
                label = None
            tokens = frozenset(parts[4].lower().split()) if len(parts) > 4 else frozenset()
            try:
                msgs.append(MessageRecord(t, a, r, label, tokens))
            except CorpusError as exc:
                raise CorpusError(f"{path}:{lineno}: {exc}") from None
    return msgs


def save_messages(messages, path):
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for m in messages:
            fh.write(f"{m.time}\t{m.author}\t{m.recipient}\t{m.sentiment or '-'}\t{' '.join(sorted(m.keywords))}\n")


def load_labels(path):
    """Read ``index<TAB>sentiment`` lines; ``index`` is the 0-based message position."""
    labels = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            idx, _, label = line.partition("\t")
            if label not in SENTIMENTS:
                raise CorpusError(f"{path}:{lineno}: bad sentiment {label!r}")
            labels[int(idx)] = label
    return labels


def apply_labels(messages, labels):
    return [
        MessageRecord(m.time, m.author, m.recipient, labels.get(i, m.sentiment), m.keywords)
        for i, m in enumerate(messages)
    ]


# -- factions -------------------------------------------------------------------

def load_factions(path):
    labels = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2 or parts[1] not in FACTIONS:
                raise CorpusError(f"{path}:{lineno}: expected 'user<TAB>pro|contra'")
            user = int(parts[0])
            if user in labels:
                raise CorpusError(f"{path}:{lineno}: user {user} has two factions")
            labels[user] = parts[1]
    return labels


def save_factions(labels, path):
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for u in sorted(labels):
            fh.write(f"{u}\t{labels[u]}\n")
