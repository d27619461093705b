"""Figures rendered next to the tab-separated reports.

Everything draws on the non-interactive Agg backend and writes PNG files with
fixed metadata, so the same data gives the same bytes.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.dpi": 100,
    "savefig.dpi": 120,
    "axes.spines.top": False,
    "axes.spines.right": False,
}

CATEGORY_COLORS = {
    "FollowerRec": "#1f77b4",
    "FollowerRand": "#9ecae1",
    "NonFollowerRec": "#d62728",
    "NonFollowerRand": "#fc9272",
    "Reciprocal": "#2ca02c",
}


def new(nrows=1, ncols=1, width=4.5, height=3.2):
    with plt.rc_context(RC):
        fig, ax = plt.subplots(nrows, ncols, figsize=(width * ncols, height * nrows), squeeze=False)
    return fig, ax


def save(fig, path):
    with plt.rc_context(RC):
        fig.tight_layout()
        fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
    return path


def ccdf_panels(panels, path, marks=None):
    """One log-log CCDF panel per ``title -> [(x, P(X >= x)), ...]``.

    ``marks`` optionally maps a title to an ``x`` value highlighted on the curve.
    """
    marks = marks or {}
    titles = list(panels)
    fig, axes = new(1, len(titles), width=3.2)
    for ax, title in zip(axes[0], titles):
        pts = [(x, f) for x, f in panels[title] if x > 0]
        if pts:
            xs, fs = zip(*pts)
            ax.loglog(xs, fs, marker=".", ls="none", ms=3, color="0.25")
        if title in marks and marks[title] is not None and marks[title] > 0:
            x = marks[title]
            frac = min((f for v, f in panels[title] if v <= x), default=1.0)
            ax.plot([x], [frac], marker="x", ms=9, mew=2, color="tab:blue")
        ax.set_title(title)
        ax.set_xlabel("x")
        ax.set_ylabel("P(X ≥ x)")
    return save(fig, path)


def inbox_correlation(rows, path):
    """Mean books and mean sent messages against received messages."""
    fig, axes = new()
    ax = axes[0][0]
    rows = [r for r in rows if r[0] > 0]
    if rows:
        k, books, sent = zip(*rows)
        ax.loglog(k, books, "o", ms=3, label="books")
        ax.loglog(k, [max(s, 1e-3) for s in sent], "s", ms=3, label="sent messages")
    ax.set_xlabel("received messages")
    ax.set_ylabel("average")
    ax.legend(frameon=False)
    return save(fig, path)


def shout_timeline(rows, path, round_ticks=()):
    """Shouts per tick (bars) and cumulative distinct shouters (line)."""
    fig, axes = new(width=6)
    ax = axes[0][0]
    if rows:
        ticks, shouts, distinct = zip(*rows)
        ax.bar(ticks, shouts, width=1.0, color="0.3")
        ax2 = ax.twinx()
        ax2.plot(ticks, distinct, color="tab:red")
        ax2.set_ylabel("distinct shouters", color="tab:red")
    for t in round_ticks:
        ax.axvline(t, color="tab:blue", lw=0.4, alpha=0.4)
    ax.set_xlabel("tick")
    ax.set_ylabel("shouts")
    return save(fig, path)


def campaign_bars(rows, path):
    """Accepted share of sent recommendations per category."""
    fig, axes = new()
    ax = axes[0][0]
    names = [c for c, _, _ in rows]
    rates = [a / s if s else 0.0 for _, s, a in rows]
    ax.bar(range(len(names)), rates, color=[CATEGORY_COLORS.get(c, "0.5") for c in names])
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=30, ha="right")
    ax.set_ylabel("accepted / sent")
    return save(fig, path)


def sentiment_area(windows, path):
    """Stacked positive / neutral / negative shares per message window."""
    fig, axes = new(width=6)
    ax = axes[0][0]
    if windows:
        idx = [w.index for w in windows]
        ax.stackplot(idx, [w.pos for w in windows], [w.neutral for w in windows], [w.neg for w in windows],
                     colors=["tab:blue", "tab:green", "tab:red"], labels=["positive", "neutral", "negative"])
        ax.set_ylim(0, 1)
        ax.legend(loc="lower left", frameon=False)
    ax.set_xlabel("window")
    ax.set_ylabel("share")
    return save(fig, path)


def intra_inter_bars(table, path):
    """Actual vs randomized intra-faction shares per layer."""
    fig, axes = new()
    ax = axes[0][0]
    layers = list(table)
    xs = range(len(layers))
    ax.bar([x - 0.2 for x in xs], [table[l][0] for l in layers], width=0.4, label="actual")
    ax.bar([x + 0.2 for x in xs], [table[l][2] for l in layers], width=0.4, label="randomized")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(layers)
    ax.set_ylim(0, 1)
    ax.set_ylabel("intra share")
    ax.legend(frameon=False)
    return save(fig, path)
