import json

import pytest
from click.testing import CliRunner

from botlab.cli import main
from botlab.config import RunConfig, preset_path
from botlab.pipeline import StageError, run_pipeline
from botlab.simulator import ConfigError

SMALL = {
    "generator": {"n_nodes": 600},
    "classifier": {"training_pairs": 400, "tree_count": 10, "folds": 0},
    "analysis": {"null_runs": 3, "fccv_runs": 3},
}


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def tri(tmp_path):
    path = tmp_path / "tri.tsv"
    path.write_text("1\t2\tsocial\tneighborhood\n2\t3\tsocial\tneighborhood\n3\t1\tsocial\tneighborhood\n")
    return path


def test_config_requires_seed():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({})


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"seed": 1, "generator": {"nodes": 3}})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"seed": 1, "plots": {}})


def test_config_digest_ignores_out_dir():
    a = RunConfig.from_dict({"seed": 1, "paths": {"out": "x"}})
    b = RunConfig.from_dict({"seed": 1, "paths": {"out": "y"}})
    c = RunConfig.from_dict({"seed": 2})
    assert a.digest() == b.digest() != c.digest()


def test_config_roundtrip(tmp_path):
    cfg = RunConfig.load("calibration")
    cfg.save(tmp_path / "c.json")
    assert RunConfig.load(tmp_path / "c.json") == cfg
    assert preset_path("calibration").exists()
    with pytest.raises(ConfigError):
        preset_path("nope")


def test_missing_input_file_named(tmp_path):
    cfg = RunConfig.from_dict({"seed": 1, "paths": {"graph": str(tmp_path / "absent.tsv")}})
    with pytest.raises(ConfigError, match="absent.tsv"):
        cfg.validate_inputs("graph")


def test_generate_stats_and_determinism(runner, tmp_path):
    for name in ("a", "b"):
        res = runner.invoke(main, ["generate", "--seed", "4", "--nodes", "300", "--out", str(tmp_path / name)])
        assert res.exit_code == 0, res.output
    stats = (tmp_path / "a" / "stats.tsv").read_text()
    social = [line for line in stats.splitlines() if line.startswith("social")][0]
    assert social.split("\t")[1] == "300"
    assert "seed=4" in stats
    for f in ("graph.tsv", "profiles.tsv", "stats.tsv", "degree_ccdf.png"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_generate_infeasible(runner, tmp_path):
    res = runner.invoke(main, ["generate", "--seed", "1", "--nodes", "5", "--degree", "10", "--out", str(tmp_path)])
    assert res.exit_code != 0
    assert "infeasible" in res.output


def test_generate_unwritable_out(runner, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    res = runner.invoke(main, ["generate", "--seed", "1", "--nodes", "50", "--out", str(blocker / "sub")])
    assert res.exit_code != 0


def test_missing_seed(runner, tmp_path):
    res = runner.invoke(main, ["generate", "--out", str(tmp_path)])
    assert res.exit_code != 0 and "seed" in res.output


def test_analyze_ccdf_on_cycle(runner, tmp_path, tri):
    res = runner.invoke(main, ["analyze", "--seed", "0", "--graph", str(tri), "--ccdf", "in-degree",
                               "--out", str(tmp_path / "o"), "--no-figures"])
    assert res.exit_code == 0, res.output
    rows = [line for line in (tmp_path / "o" / "ccdf_in-degree.tsv").read_text().splitlines()
            if not line.startswith("#")]
    assert rows == ["1\t1.0"]


def test_analyze_timeline_without_labels(runner, tmp_path, tri):
    msgs = tmp_path / "m.tsv"
    msgs.write_text("0\t1\t2\t-\thello\n")
    res = runner.invoke(main, ["analyze", "--seed", "0", "--graph", str(tri), "--messages", str(msgs),
                               "--timeline", "--window", "50", "--out", str(tmp_path / "o")])
    assert res.exit_code != 0
    assert "--labels" in res.output
    res = runner.invoke(main, ["analyze", "--seed", "0", "--graph", str(tri), "--messages", str(msgs),
                               "--labels", str(tmp_path / "gone.tsv"), "--timeline", "--out", str(tmp_path / "o")])
    assert res.exit_code != 0 and "gone.tsv" in res.output


def test_analyze_timeline_and_keyword(runner, tmp_path, tri):
    msgs = tmp_path / "m.tsv"
    msgs.write_text("".join(f"{t}\t1\t2\t-\tghostbot\n" for t in range(4)))
    labels = tmp_path / "l.tsv"
    labels.write_text("0\tpositive\n1\tpositive\n2\tnegative\n")
    res = runner.invoke(main, ["analyze", "--seed", "0", "--graph", str(tri), "--messages", str(msgs),
                               "--labels", str(labels), "--timeline", "--window", "2",
                               "--keyword-subgraph", "ghostbot", "--out", str(tmp_path / "o")])
    assert res.exit_code == 0, res.output
    timeline = (tmp_path / "o" / "timeline.tsv").read_text()
    assert "unlabeled=1" in timeline
    assert "0\t1.0\t0.0\t0.0\t2" in timeline
    assert "1\t2\tcomm\t4" in (tmp_path / "o" / "keyword_ghostbot.tsv").read_text()


def test_analyze_intra_inter(runner, tmp_path):
    from botlab.corpus import save_factions
    from botlab.graph import save_edgelist
    from botlab.polarization import planted_faction_graph

    g, labels = planted_faction_graph(seed=3)
    save_edgelist(g, tmp_path / "g.tsv")
    save_factions(labels, tmp_path / "f.tsv")
    res = runner.invoke(main, ["analyze", "--seed", "0", "--graph", str(tmp_path / "g.tsv"),
                               "--factions", str(tmp_path / "f.tsv"), "--intra-inter", "--null-runs", "50",
                               "--out", str(tmp_path / "o"), "--no-figures"])
    assert res.exit_code == 0, res.output
    text = (tmp_path / "o" / "polarization.tsv").read_text()
    assert "# layer\tintra\tinter\trand_intra\trand_inter\tfccv" in text
    row = [line for line in text.splitlines() if line.startswith("social")][0].split("\t")
    intra, inter, r_intra, r_inter = map(float, row[1:5])
    assert abs(intra - 0.74) < 0.05 and abs(r_intra - 0.512) < 0.03 and row[5] == "-"


def test_analyze_needs_a_flag(runner, tmp_path, tri):
    res = runner.invoke(main, ["analyze", "--seed", "0", "--graph", str(tri), "--out", str(tmp_path)])
    assert res.exit_code != 0


def test_analyze_pagerank_hits_percentile(runner, tmp_path, tri):
    res = runner.invoke(main, ["analyze", "--seed", "0", "--graph", str(tri), "--pagerank", "--hits",
                               "--percentile", "1", "--out", str(tmp_path / "o"), "--no-figures"])
    assert res.exit_code == 0, res.output
    for f in ("pagerank_social.tsv", "hubs_social.tsv", "authorities_social.tsv", "percentiles.tsv"):
        assert (tmp_path / "o" / f).exists()


def test_stage_handoff_and_recommend(runner, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"seed": 5, **SMALL}))
    gen, prb, trn, cmp = (str(tmp_path / d) for d in ("gen", "probe", "train", "camp"))

    def ok(*args):
        res = runner.invoke(main, [*args, "--config", str(cfg), "--no-figures"])
        assert res.exit_code == 0, res.output
        return res

    ok("generate", "--later", "--out", gen)
    ok("probe", "--graph", f"{gen}/graph_later.tsv", "--profiles", f"{gen}/profiles.tsv", "--out", prb)
    ok("train", "--graph", f"{gen}/graph.tsv", "--later-graph", f"{gen}/graph_later.tsv",
       "--profiles", f"{gen}/profiles.tsv", "--out", trn)
    ok("campaign", "--graph", f"{prb}/graph_probed.tsv", "--profiles", f"{gen}/profiles.tsv",
       "--events", f"{prb}/probe_events.tsv", "--model", f"{trn}/model.json", "--out", cmp)
    rows = [line.split("\t") for line in (tmp_path / "camp" / "campaign_summary.tsv").read_text().splitlines()
            if not line.startswith("#")]
    assert rows and all(int(acc) <= int(sent) for _, sent, acc in rows)
    res = ok("recommend", "--graph", f"{gen}/graph.tsv", "--profiles", f"{gen}/profiles.tsv",
             "--model", f"{trn}/model.json", "--user", "1", "--user", "2", "--k", "2")
    for line in res.output.splitlines():
        user, suggestion, conf = line.split("\t")
        assert user in ("1", "2") and float(conf) > 0.5


def test_pipeline_command(runner, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(SMALL))
    res = runner.invoke(main, ["pipeline", "--seed", "9", "--config", str(cfg), "--out", str(tmp_path / "run")])
    assert res.exit_code == 0, res.output
    for f in ("events.tsv", "campaign_summary.tsv", "percentiles.tsv", "shout_histogram.tsv",
              "polarization.tsv", "summary.txt", "shouts.png", "campaign.png"):
        assert (tmp_path / "run" / f).exists(), f
    assert "config_sha256=" in (tmp_path / "run" / "percentiles.tsv").read_text()


def test_pipeline_stage_error_keeps_earlier_outputs(tmp_path):
    data = {**SMALL, "classifier": {**SMALL["classifier"], "training_pairs": 3}}
    with pytest.raises(StageError) as err:
        run_pipeline(RunConfig.from_dict(data, seed=1), tmp_path / "run", figures=False)
    assert err.value.stage == "train"
    assert (tmp_path / "run" / "graph.tsv").exists() and (tmp_path / "run" / "stats.tsv").exists()
    assert not (tmp_path / "run" / "events.tsv").exists()


def test_pipeline_stage_error_exit_code(runner, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({**SMALL, "classifier": {"training_pairs": 3}}))
    res = runner.invoke(main, ["pipeline", "--seed", "1", "--config", str(cfg), "--out", str(tmp_path / "r")])
    assert res.exit_code != 0 and "train" in res.output
