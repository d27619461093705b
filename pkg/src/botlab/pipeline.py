"""Experiment stages with file-based handoff.

Each stage reads what it needs from memory or from files, writes its outputs
into the run directory as soon as it finishes, and draws randomness from its
own named substream of the root seed. ``run_pipeline`` chains them all.
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from . import plotting, reports
from .corpus import books_messages_by_inbox, load_factions, load_profiles, save_profiles
from .graph import COMM, SOCIAL, compute_stats, load_edgelist, save_edgelist
from .linkpred import (
    ClassifierModel,
    build_training_set,
    chi_squared_rank,
    evaluate_auc,
    forest_builder,
    pairs_to_arrays,
)
from .metrics import ccdf, degree_values, hits, pagerank, percentile_of
from .polarization import (
    chance_intra_level,
    fccv_over_seeds,
    planted_faction_graph,
    randomization_table,
)
from .rng import child_seeds, substream
from .simulator import (
    EventLog,
    assign_recommendations,
    evolve_network,
    generate_network,
    round_ticks,
    run_probe_rounds,
    save_assignments,
    shout_histogram,
    shouters,
    simulate_responses,
)

log = logging.getLogger(__name__)

GRAPH = "graph.tsv"
LATER_GRAPH = "graph_later.tsv"
PROBED_GRAPH = "graph_probed.tsv"
PROFILES = "profiles.tsv"
MODEL = "model.json"
PROBE_EVENTS = "probe_events.tsv"


class StageError(RuntimeError):
    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class Run:
    """Output directory plus the bookkeeping shared by all stages."""

    cfg: object
    out: Path
    figures: bool = True
    written: list = field(default_factory=list)

    def __post_init__(self):
        self.out = Path(self.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self._digest = self.cfg.digest()

    def path(self, name):
        p = self.out / name
        self.written.append(p)
        return p

    def head(self, title):
        return reports.header(title, self.cfg.seed, self._digest)

    def rng(self, name):
        return substream(self.cfg.seed, name)

    def figure(self, fn, name, *args, **kwargs):
        if self.figures:
            fn(*args, path=self.path(name), **kwargs)


@contextmanager
def stage(name):
    log.info("stage %s", name)
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


# -- generation -------------------------------------------------------------

def generate(run, later=False):
    """Synthetic snapshot(s), profiles, the stats table and degree CCDFs."""
    cfg = run.cfg.generator
    g, profiles = generate_network(cfg, run.rng("generator"))
    save_edgelist(g, run.path(GRAPH))
    save_profiles(profiles, run.path(PROFILES))
    stats = [compute_stats(g, SOCIAL), compute_stats(g, COMM)]
    reports.write_stats(run.path("stats.tsv"), stats, run.head("network statistics"))
    panels = {
        "social in-degree": ccdf(degree_values(g, "in-degree", SOCIAL).values()),
        "social out-degree": ccdf(degree_values(g, "out-degree", SOCIAL).values()),
        "messages in": ccdf(degree_values(g, "msg-in", COMM).values()),
    }
    run.figure(plotting.ccdf_panels, "degree_ccdf.png", panels)
    run.figure(plotting.inbox_correlation, "inbox_correlation.png", books_messages_by_inbox(g, profiles))
    g1 = None
    if later:
        g1 = evolve_network(g, profiles, cfg, run.rng("evolution"))
        save_edgelist(g1, run.path(LATER_GRAPH))
    return g, g1, profiles


def read_graph(path, profiles=None):
    return load_edgelist(path, nodes=sorted(profiles) if profiles else ())


# -- link prediction ---------------------------------------------------------

def train_stage(run, g0, g1, profiles):
    """Training set from two snapshots, fitted forest, optional CV AUC and feature ranking."""
    p = run.cfg.classifier
    rng = run.rng("training")
    pair_seed, forest_seed, fold_seed = child_seeds(rng, 3)
    pairs = build_training_set(g0, g1, profiles, p.training_pairs, pair_seed)
    X, y = pairs_to_arrays(pairs)
    model = ClassifierModel(p.tree_count, p.max_depth, p.min_leaf, seed=forest_seed).fit(X, y)
    model.save(run.path(MODEL))
    rows = [("pairs", len(y)), ("positives", int(y.sum()))]
    if p.folds >= 2:
        builder = forest_builder(p.tree_count, forest_seed, max_depth=p.max_depth, min_leaf=p.min_leaf)
        rows.append(("auc", evaluate_auc(builder, (X, y), p.folds, fold_seed)))
    rows += [(f"chi2:{name}", stat) for name, stat in chi_squared_rank((X, y), p.chi2_bins)]
    reports.write_rows(run.path("training.tsv"), rows, ("quantity", "value"), run.head("link prediction"))
    return model


# -- probing and campaign ----------------------------------------------------

def probe_stage(run, g, profiles):
    """Bot visit rounds on ``g`` (mutated), the probe event log and shout histogram."""
    p = run.cfg.probe
    events = run_probe_rounds(g, profiles, run.cfg.response, p.rounds, p.interval_ticks,
                              seed=run.rng("probing"))
    events.save(run.path(PROBE_EVENTS), run.head("probe events"))
    save_edgelist(g, run.path(PROBED_GRAPH))
    hist = shout_histogram(events)
    reports.write_rows(run.path("shout_histogram.tsv"), hist, ("tick", "shouts", "distinct_shouters"),
                       run.head(f"shout histogram bot={events.bot}"))
    run.figure(plotting.shout_timeline, "shouts.png", hist, round_ticks=round_ticks(events))
    return events


def campaign_stage(run, g, profiles, model, probe_log, tick=None):
    """Assign and simulate recommendations; returns ``(event log, summary)``."""
    c = run.cfg.campaign
    assignments = assign_recommendations(
        g, profiles, shouters(probe_log), model, c.min_books, c.frac_model, c.frac_reciprocal,
        seed=run.rng("assignment"), eligible_tag=c.eligible_tag, pool_size=c.pool_size, bot=probe_log.bot)
    if tick is None:
        tick = (probe_log.events[-1].tick + 1) if len(probe_log) else 0
    events, summary = simulate_responses(assignments, run.cfg.response, run.rng("responses"), g, tick)
    save_assignments(summary.decisions, run.path("assignments.tsv"), run.head("recommendations"))
    events.save(run.path("campaign_events.tsv"), run.head("campaign events"))
    summary.save(run.path("campaign_summary.tsv"), run.head("campaign acceptance"))
    run.figure(plotting.campaign_bars, "campaign.png", summary.rows())
    return events, summary


# -- centrality ----------------------------------------------------------------

def percentile_stage(run, g, bot):
    """Where the bot ranks among all users by degree, messages, Pagerank and HITS."""
    a = run.cfg.analysis
    rows, panels, marks = [], {}, {}

    def add(measure, layer, values):
        rows.append((measure, layer, values[bot], percentile_of(values, bot)))

    indeg = degree_values(g, "in-degree", SOCIAL, g.nodes)
    msgin = degree_values(g, "msg-in", COMM, g.nodes)
    add("in-degree", SOCIAL, indeg)
    add("msg-in", COMM, msgin)
    panels["social in-degree"], marks["social in-degree"] = ccdf(indeg.values()), indeg[bot]
    for layer in (SOCIAL, COMM):
        if g.arc_count(layer) == 0:
            continue
        pr = pagerank(g, layer, a.damping, a.tol, a.max_iters).scores
        hub, auth = hits(g, layer, a.tol, a.max_iters)
        for measure, values in (("pagerank", pr), ("hub", hub.scores), ("authority", auth.scores)):
            values = {u: values.get(u, 0.0) for u in g.nodes}
            add(measure, layer, values)
        if layer == SOCIAL:
            values = {u: pr.get(u, 0.0) for u in g.nodes}
            panels["pagerank"], marks["pagerank"] = ccdf(values.values()), values[bot]
    reports.write_rows(run.path("percentiles.tsv"), rows, ("measure", "layer", "bot_value", "percentile"),
                       run.head(f"bot percentiles bot={bot} users={len(g.nodes)}"))
    run.figure(plotting.ccdf_panels, "centrality_ccdf.png", panels, marks=marks)
    return rows


# -- polarization ---------------------------------------------------------------

def faction_network(run):
    """Planted two-faction network with both layers drawn from their own intra share."""
    a = run.cfg.analysis
    rng = run.rng("factions")
    s_seed, c_seed = child_seeds(rng, 2)
    g, labels = planted_faction_graph(a.faction_sizes, a.faction_out_degree, a.social_intra, s_seed, SOCIAL)
    comm, _ = planted_faction_graph(a.faction_sizes, a.faction_out_degree, a.comm_intra, c_seed, COMM)
    for u, v, w in comm.comm_arcs():
        g.add_message(u, v, w)
    return g, labels


def polarization_stage(run, g, labels, nodes=None, fccv_runs=None):
    """Actual vs randomized intra/inter shares and FCCV per layer."""
    a = run.cfg.analysis
    fccv_runs = a.fccv_runs if fccv_runs is None else fccv_runs
    table = randomization_table(g, labels, (SOCIAL, COMM), a.null_runs, run.rng("rewiring"), nodes)
    det = run.rng("detection")
    rows = []
    for layer, (intra, inter, r_intra, r_inter) in table.items():
        fc, _ = fccv_over_seeds(g, labels, child_seeds(det, fccv_runs), layer, nodes) if fccv_runs else (None, [])
        rows.append((layer, intra, inter, r_intra, r_inter, fc))
    sizes = [sum(1 for u in labels if labels[u] == f) for f in sorted(set(labels.values()))]
    reports.write_rows(run.path("polarization.tsv"), rows,
                       ("layer", "intra", "inter", "rand_intra", "rand_inter", "fccv"),
                       run.head(f"faction clustering chance_intra={chance_intra_level(sizes)!r}"))
    run.figure(plotting.intra_inter_bars, "polarization.png", table)
    return rows


# -- full run -----------------------------------------------------------------

def run_pipeline(cfg, out, figures=True):
    """Every stage in order. Returns the :class:`Run` with the list of written files.

    A failing stage raises :class:`StageError`; files from earlier stages stay on disk.
    """
    run = Run(cfg, out, figures)
    with stage("generate"):
        if cfg.paths.graph:
            profiles = load_profiles(cfg.paths.profiles)
            g0 = read_graph(cfg.paths.graph, profiles)
            g1 = read_graph(cfg.paths.later_graph, profiles)
        else:
            g0, g1, profiles = generate(run, later=True)
    with stage("train"):
        model = train_stage(run, g0, g1, profiles)
    with stage("probe"):
        probe_log = probe_stage(run, g1, profiles)
    with stage("campaign"):
        camp_log, summary = campaign_stage(run, g1, profiles, model, probe_log)
        merged = EventLog(probe_log.events + camp_log.events, probe_log.bot)
        merged.save(run.path("events.tsv"), run.head("event log"))
    with stage("centrality"):
        pct = percentile_stage(run, g1, probe_log.bot)
    with stage("polarization"):
        if cfg.paths.factions:
            labels = load_factions(cfg.paths.factions)
            pol = polarization_stage(run, g1, labels, sorted(labels))
        else:
            fg, labels = faction_network(run)
            pol = polarization_stage(run, fg, labels)
    write_summary(run, summary, pct, pol, probe_log)
    return run


def write_summary(run, summary, pct, pol, probe_log):
    lines = [run.head("run summary").rstrip("\n")]
    lines.append(f"bot\t{probe_log.bot}")
    lines.append(f"shouters\t{len(shouters(probe_log))}")
    lines.append(f"follow_rate\t{summary.follow_rate!r}")
    lines.append(f"random_share\t{summary.random_share!r}")
    for c, s, acc in summary.rows():
        lines.append(f"accepted:{c}\t{acc}/{s}")
    for measure, layer, _, p in pct:
        lines.append(f"percentile:{measure}:{layer}\t{p!r}")
    for layer, intra, _, r_intra, _, fc in pol:
        lines.append(f"intra:{layer}\t{intra!r}\t{r_intra!r}\tfccv={fc!r}")
    run.path("summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
