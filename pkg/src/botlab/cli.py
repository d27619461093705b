"""``botlab`` command line."""

import functools
import logging
import sys

import click

from . import pipeline, plotting, reports
from .config import RunConfig
from .corpus import (
    CorpusError,
    apply_labels,
    books_messages_by_inbox,
    load_factions,
    load_labels,
    load_messages,
    load_profiles,
)
from .graph import COMM, SOCIAL, GraphError, compute_stats, save_edgelist
from .linkpred import ClassifierModel, FeatureExtractor, recommend as recommend_for
from .metrics import ccdf, degree_values, hits, pagerank, write_ccdf, write_scores
from .polarization import PolarizationError, sentiment_timeline, write_timeline
from .polarization import keyword_subgraph as build_keyword_subgraph
from .simulator import ConfigError, EventLog
from .simulator.models import VISIT

EXPECTED = (ConfigError, GraphError, CorpusError, PolarizationError, pipeline.StageError, OSError,
            KeyError, ValueError)


def common(fn):
    """--seed/--config/--out/--no-figures plus uniform error reporting."""

    @click.option("--seed", type=int, default=None, help="Root seed (required here or in the config).")
    @click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                  help="JSON config mirroring RunConfig sections, or a shipped preset name.")
    @click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory.")
    @click.option("--no-figures", is_flag=True, help="Skip PNG rendering.")
    @functools.wraps(fn)
    def wrapper(seed, config_path, out, no_figures, **kwargs):
        try:
            fn(seed=seed, config_path=config_path, out=out, figures=not no_figures, **kwargs)
        except EXPECTED as exc:
            msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
            raise click.ClickException(str(msg)) from None

    return wrapper


def load_run(seed, config_path, out, figures, **overrides):
    paths = {k: v for k, v in overrides.pop("paths", {}).items() if v is not None}
    if out is not None:
        paths["out"] = out
    cfg = RunConfig.load(config_path, seed, {"paths": paths, **overrides})
    return cfg, pipeline.Run(cfg, cfg.paths.out, figures)


def read_inputs(cfg, profiles_required=True):
    profiles = None
    if cfg.paths.profiles or profiles_required:
        cfg.validate_inputs("profiles")
        profiles = load_profiles(cfg.paths.profiles)
    cfg.validate_inputs("graph")
    return pipeline.read_graph(cfg.paths.graph, profiles), profiles


def done(run):
    click.echo(f"wrote {len(run.written)} files to {run.out}")


@click.group()
@click.option("-v", "--verbose", count=True, help="More logging.")
@click.version_option(package_name="botlab")
def main(verbose):
    """Social-bot influence workbench: synthetic networks, probing, link prediction and reports."""
    level = logging.WARNING - 10 * verbose
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


@main.command()
@common
@click.option("--nodes", type=int, default=None, help="Number of users.")
@click.option("--degree", type=float, default=None, help="Target mean out-degree.")
@click.option("--later", is_flag=True, help="Also write an evolved second snapshot.")
def generate(seed, config_path, out, figures, nodes, degree, later):
    """Synthetic social network, profiles and a statistics table."""
    cfg, run = load_run(seed, config_path, out, figures,
                        generator={"n_nodes": nodes, "mean_out_degree": degree})
    pipeline.generate(run, later=later)
    done(run)


@main.command()
@common
@click.option("--graph", type=click.Path(dir_okay=False), help="Edge list to probe.")
@click.option("--profiles", type=click.Path(dir_okay=False))
@click.option("--rounds", type=int, default=None)
@click.option("--interval", type=int, default=None, help="Ticks between rounds.")
def probe(seed, config_path, out, figures, graph, profiles, rounds, interval):
    """Run bot visit rounds; writes the probe event log and the probed graph."""
    cfg, run = load_run(seed, config_path, out, figures, paths={"graph": graph, "profiles": profiles},
                        probe={"rounds": rounds, "interval_ticks": interval})
    g, prof = read_inputs(cfg)
    pipeline.probe_stage(run, g, prof)
    done(run)


@main.command()
@common
@click.option("--graph", type=click.Path(dir_okay=False), help="Earlier snapshot.")
@click.option("--later-graph", type=click.Path(dir_okay=False), help="Later snapshot.")
@click.option("--profiles", type=click.Path(dir_okay=False))
@click.option("--pairs", type=int, default=None, help="Training pairs (even).")
@click.option("--trees", type=int, default=None)
@click.option("--folds", type=int, default=None, help="Cross-validation folds; 0 skips.")
def train(seed, config_path, out, figures, graph, later_graph, profiles, pairs, trees, folds):
    """Fit the link classifier on two snapshots."""
    cfg, run = load_run(seed, config_path, out, figures,
                        paths={"graph": graph, "later_graph": later_graph, "profiles": profiles},
                        classifier={"training_pairs": pairs, "tree_count": trees, "folds": folds})
    g0, prof = read_inputs(cfg)
    cfg.validate_inputs("later_graph")
    g1 = pipeline.read_graph(cfg.paths.later_graph, prof)
    pipeline.train_stage(run, g0, g1, prof)
    done(run)


def _bot_of(log):
    for e in log:
        if e.kind == VISIT:
            return e.actor
    raise ConfigError("probe event log has no visits; cannot tell which node is the bot")


@main.command()
@common
@click.option("--graph", type=click.Path(dir_okay=False), help="Probed graph.")
@click.option("--profiles", type=click.Path(dir_okay=False))
@click.option("--events", type=click.Path(dir_okay=False), help="Probe event log.")
@click.option("--model", type=click.Path(dir_okay=False))
def campaign(seed, config_path, out, figures, graph, profiles, events, model):
    """Assign recommendations to shouters and non-shouters and simulate answers."""
    cfg, run = load_run(seed, config_path, out, figures,
                        paths={"graph": graph, "profiles": profiles, "events": events, "model": model})
    g, prof = read_inputs(cfg)
    cfg.validate_inputs("events", "model")
    log = EventLog.load(cfg.paths.events)
    log.bot = _bot_of(log)
    pipeline.campaign_stage(run, g, prof, ClassifierModel.load(cfg.paths.model), log)
    done(run)


@main.command()
@common
@click.option("--graph", type=click.Path(dir_okay=False))
@click.option("--profiles", type=click.Path(dir_okay=False))
@click.option("--model", type=click.Path(dir_okay=False))
@click.option("--user", "users", type=int, multiple=True, required=True, help="User to recommend for (repeatable).")
@click.option("--k", type=int, default=1, show_default=True, help="Suggestions per user.")
def recommend(seed, config_path, out, figures, graph, profiles, model, users, k):
    """Print user<TAB>suggestion<TAB>confidence for the top positive candidates."""
    cfg = RunConfig.load(config_path, seed if seed is not None else 0,
                         {"paths": {"graph": graph, "profiles": profiles, "model": model}})
    g, prof = read_inputs(cfg)
    cfg.validate_inputs("model")
    clf = ClassifierModel.load(cfg.paths.model)
    fx = FeatureExtractor(g, prof)
    for u in users:
        best = recommend_for(clf, g, prof, u, k=k, extractor=fx)
        if k == 1:
            best = [best] if best else []
        for v, conf in best:
            click.echo(f"{u}\t{v}\t{conf!r}")


@main.command()
@common
@click.option("--graph", type=click.Path(dir_okay=False), help="Edge list to analyze.")
@click.option("--profiles", type=click.Path(dir_okay=False))
@click.option("--messages", type=click.Path(dir_okay=False))
@click.option("--labels", type=click.Path(dir_okay=False), help="index<TAB>sentiment labels for --messages.")
@click.option("--factions", type=click.Path(dir_okay=False), help="user<TAB>pro|contra labels.")
@click.option("--layer", type=click.Choice([SOCIAL, COMM]), default=SOCIAL, show_default=True)
@click.option("--ccdf", "ccdf_of", multiple=True,
              type=click.Choice(["in-degree", "out-degree", "msg-in", "msg-out"]))
@click.option("--pagerank", "do_pagerank", is_flag=True)
@click.option("--hits", "do_hits", is_flag=True)
@click.option("--percentile", type=int, default=None, metavar="NODE", help="Percentile ranks of NODE.")
@click.option("--correlation", is_flag=True, help="Books and sent messages by received messages.")
@click.option("--intra-inter", is_flag=True, help="Intra/inter faction shares against the rewired null.")
@click.option("--null-runs", type=int, default=None)
@click.option("--fccv", is_flag=True, help="Faction-cluster consistency of detected communities.")
@click.option("--fccv-runs", type=int, default=None)
@click.option("--timeline", is_flag=True, help="Sentiment shares over message windows.")
@click.option("--window", type=int, default=None)
@click.option("--keyword-subgraph", default=None, metavar="WORD")
def analyze(seed, config_path, out, figures, graph, profiles, messages, labels, factions, layer, ccdf_of,
            do_pagerank, do_hits, percentile, correlation, intra_inter, null_runs, fccv, fccv_runs,
            timeline, window, keyword_subgraph):
    """Reports on an ingested graph, selected by flags."""
    cfg, run = load_run(seed, config_path, out, figures,
                        paths={"graph": graph, "profiles": profiles, "messages": messages,
                               "labels": labels, "factions": factions},
                        analysis={"null_runs": null_runs, "fccv_runs": fccv_runs, "window": window})
    a = cfg.analysis
    if timeline:
        cfg.validate_inputs("labels", "messages")
    if keyword_subgraph:
        cfg.validate_inputs("messages")
    if intra_inter or fccv:
        cfg.validate_inputs("factions")
    if correlation:
        cfg.validate_inputs("profiles")
    g, prof = read_inputs(cfg, profiles_required=False)

    for measure in ccdf_of:
        lay = COMM if measure.startswith("msg") else layer
        pts = ccdf(degree_values(g, measure, lay).values())
        write_ccdf(pts, run.path(f"ccdf_{measure}.tsv"), run.head(f"ccdf {measure} layer={lay}"))
        run.figure(plotting.ccdf_panels, f"ccdf_{measure}.png", {measure: pts})
    if do_pagerank:
        pr = pagerank(g, layer, a.damping, a.tol, a.max_iters)
        write_scores(pr, run.path(f"pagerank_{layer}.tsv"), run.head(f"pagerank layer={layer}"))
    if do_hits:
        hub, auth = hits(g, layer, a.tol, a.max_iters)
        write_scores(hub, run.path(f"hubs_{layer}.tsv"), run.head(f"hubs layer={layer}"))
        write_scores(auth, run.path(f"authorities_{layer}.tsv"), run.head(f"authorities layer={layer}"))
    if percentile is not None:
        if percentile not in g:
            raise click.ClickException(f"node {percentile} is not in the graph")
        pipeline.percentile_stage(run, g, percentile)
    if correlation:
        rows = books_messages_by_inbox(g, prof)
        reports.write_rows(run.path("inbox_correlation.tsv"), rows, ("msg_in", "mean_books", "mean_sent"),
                           run.head("books and sent messages by inbox size"))
        run.figure(plotting.inbox_correlation, "inbox_correlation.png", rows)
    if intra_inter or fccv:
        fl = load_factions(cfg.paths.factions)
        pipeline.polarization_stage(run, g, fl, sorted(u for u in fl if u in g),
                                    fccv_runs=a.fccv_runs if fccv else 0)
    if timeline or keyword_subgraph:
        msgs = load_messages(cfg.paths.messages)
    if timeline:
        msgs = apply_labels(msgs, load_labels(cfg.paths.labels))
        windows, skipped = sentiment_timeline(msgs, a.window)
        write_timeline(windows, run.path("timeline.tsv"),
                       run.head(f"sentiment timeline window={a.window} unlabeled={skipped}"))
        run.figure(plotting.sentiment_area, "timeline.png", windows)
    if keyword_subgraph:
        sub = build_keyword_subgraph(g, msgs, keyword_subgraph)
        save_edgelist(sub, run.path(f"keyword_{keyword_subgraph}.tsv"))
        if sub.nodes:
            reports.write_stats(run.path(f"keyword_{keyword_subgraph}_stats.tsv"), [compute_stats(sub, COMM)],
                                run.head(f"keyword subgraph {keyword_subgraph}"))
    if not run.written:
        raise click.UsageError("no report selected; pass at least one analysis flag")
    done(run)


@main.command("pipeline")
@common
def pipeline_cmd(seed, config_path, out, figures):
    """Generate, train, probe, run the campaign and write every report."""
    cfg, run = load_run(seed, config_path, out, figures)
    result = pipeline.run_pipeline(cfg, run.out, figures)
    done(result)


if __name__ == "__main__":
    main()
