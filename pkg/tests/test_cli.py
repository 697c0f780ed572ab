import pandas as pd
import pytest

from directed_share.classifier import dumps, loads
from directed_share.cli import run

SMALL = ["--set", "n_pairs=20"]
FAST = ["--set", "datasets=2", "--set", "folds=3"]


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    assert run(["synth", "--seed", "7", *SMALL, "--out", str(out)]) == 0
    return out


def _read(path):
    return path.read_text(encoding="utf-8")


def test_synth_writes_study_and_truth(data_dir):
    for name in ("likes.csv", "ratings.csv", "shares.csv", "sessions.csv", "items.csv"):
        assert (data_dir / name).is_file()
    assert (data_dir / "truth" / "groundtruth.csv").is_file()
    assert (data_dir / "resolved-config.txt").is_file()
    assert (data_dir / "run.log").is_file()


def test_synth_is_deterministic(data_dir, tmp_path):
    assert run(["synth", "--seed", "7", *SMALL, "--out", str(tmp_path)]) == 0
    for name in ("likes.csv", "ratings.csv", "shares.csv", "sessions.csv"):
        assert _read(tmp_path / name) == _read(data_dir / name)


def test_resolved_config_replays_run(data_dir, tmp_path):
    cfg = data_dir / "resolved-config.txt"
    text = _read(cfg)
    assert "command=synth\n" in text and "seed=7\n" in text and "n_pairs=20\n" in text
    assert run(["synth", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    assert _read(tmp_path / "ratings.csv") == _read(data_dir / "ratings.csv")


def test_ingest_summary(data_dir, tmp_path):
    assert run(["ingest", "--data", str(data_dir), "--out", str(tmp_path)]) == 0
    summary = dict(
        line.split("=", 1) for line in _read(tmp_path / "summary.txt").splitlines()
    )
    assert summary["participants"] == "40"
    assert summary["shares"] == str(round(2.66 * 40))
    assert summary["ratings"] == str(round(8.18 * 40))
    assert (tmp_path / "study" / "ratings.csv").is_file()


def test_featurize_evaluate_ablate(data_dir, tmp_path, capsys):
    feats = tmp_path / "feat"
    assert run(["featurize", "--data", str(data_dir), "--out", str(feats)]) == 0
    features = feats / "features.csv"
    df = pd.read_csv(features)
    assert len(df) > 0 and set(df["label"]) == {0, 1}

    capsys.readouterr()
    ev = tmp_path / "eval"
    assert run(["evaluate", "--features", str(features), *FAST, "--out", str(ev)]) == 0
    printed = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert set(printed) == {"precision", "recall", "accuracy"}
    assert 0.0 <= float(printed["accuracy"]) <= 1.0
    assert len(pd.read_csv(ev / "folds.csv")) == 2 * 3

    ab = tmp_path / "ablate"
    assert run(["ablate", "--features", str(features), *FAST, "--out", str(ab)]) == 0
    assert len(pd.read_csv(ab / "ablation.csv")) == 4

    tr = tmp_path / "train"
    assert run(["train", "--data", str(data_dir), "--out", str(tr)]) == 0
    text = _read(tr / "tree.txt")
    assert text.strip() and text.endswith("\n") and not text.endswith("\n\n")
    assert dumps(loads(text)) == text


def test_evaluate_is_deterministic(data_dir, tmp_path):
    for name in ("a", "b"):
        args = ["evaluate", "--data", str(data_dir), "--seed", "3", *FAST]
        jobs = "2" if name == "b" else "1"
        assert run([*args, "--jobs", jobs, "--out", str(tmp_path / name)]) == 0
    assert _read(tmp_path / "a" / "folds.csv") == _read(tmp_path / "b" / "folds.csv")


def test_recommend(data_dir, tmp_path):
    argv = [
        "recommend",
        "--likes",
        str(data_dir / "likes.csv"),
        "--friends",
        str(data_dir / "friends.csv"),
        "--out",
        str(tmp_path),
    ]
    assert run(argv) == 0
    df = pd.read_csv(tmp_path / "recommendations.csv")
    assert list(df.columns) == ["user_id", "rank", "item_id", "score"]
    assert df.groupby("user_id")["rank"].max().max() <= 10
    assert (df["score"] > 0).all()


def test_recommend_single_user(data_dir, tmp_path):
    argv = [
        "recommend",
        "--likes",
        str(data_dir / "likes.csv"),
        "--friends",
        str(data_dir / "friends.csv"),
        "--user",
        "p0000",
        "--k",
        "20",
        "--n",
        "10",
        "--out",
        str(tmp_path / "one"),
    ]
    assert run(argv) == 0
    df = pd.read_csv(tmp_path / "one" / "recommendations.csv")
    assert list(df.columns) == ["item_id", "score"]
    assert 0 < len(df) <= 10
    assert (df["score"] > 0).all()
    assert df["score"].is_monotonic_decreasing
    resolved = _read(tmp_path / "one" / "resolved-config.txt")
    assert "user=p0000\n" in resolved and "k=20\n" in resolved and "n=10\n" in resolved

    argv[argv.index("--n") + 1] = "3"
    argv[-1] = str(tmp_path / "three")
    assert run(argv) == 0
    assert len(pd.read_csv(tmp_path / "three" / "recommendations.csv")) <= 3

    argv[argv.index("--user") + 1] = "nobody"
    argv[-1] = str(tmp_path / "nobody")
    assert run(argv) == 1


def test_stats_analyze(data_dir, tmp_path):
    argv = ["stats", "analyze", "--data", str(data_dir), "--set", "lmm=false"]
    assert run([*argv, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "sender_ratings.csv").is_file()
    assert (tmp_path / "promiscuity_correlation.csv").is_file()
    assert not (tmp_path / "lmm_recipient.csv").exists()


def test_stats_ttest_prints(capsys):
    argv = ["stats", "ttest", "--summary", "301,4.18,0.95", "665,3.70,1.11"]
    assert run(argv) == 0
    values = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert values["variant"] == "welch"
    assert float(values["t"]) == pytest.approx(6.98, abs=0.15)
    assert round(float(values["cohens_d"]), 1) == 0.5


def test_stats_ttest_pooled(capsys):
    assert run(["stats", "ttest", "--pooled", "--summary", "10,1,1", "12,0,1"]) == 0
    values = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert values["variant"] == "pooled"
    assert float(values["df"]) == 20.0


def test_simulate_independent_cascade(tmp_path, capsys):
    graph = tmp_path / "graph.csv"
    graph.write_text("src,dst\na,b\nb,c\nc,d\n", encoding="utf-8")
    seeds = tmp_path / "seeds.csv"
    seeds.write_text("user_id,item_id\na,x\n", encoding="utf-8")
    out = tmp_path / "out"
    argv = ["simulate", "--graph", str(graph), "--seeds", str(seeds), "--set", "model=ic"]
    assert run([*argv, "--set", "ic_p=1.0", "--out", str(out)]) == 0
    printed = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert printed["adoptions"] == "4"
    assert (out / "timeseries.csv").is_file()
    assert (out / "summary.csv").is_file()


@pytest.mark.parametrize(
    "argv",
    [
        ["synth"],
        ["evaluate", "--out", "x"],
        ["recommend", "--likes", "l.csv", "--out", "x"],
        ["simulate", "--graph", "g.csv", "--out", "x"],
        ["stats"],
        ["frobnicate"],
        ["synth", "--jobs", "0", "--out", "x"],
    ],
)
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(argv) == 2


def test_missing_features_file(tmp_path, capsys):
    missing = tmp_path / "nope.csv"
    assert run(["train", "--features", str(missing), "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert "error:" in err and "file not found" in err


def test_bad_parameters(tmp_path, capsys):
    assert run(["synth", "--set", "n_pairs", "--out", str(tmp_path)]) == 1
    assert run(["synth", "--set", "rho=0.5", "--out", str(tmp_path)]) == 1
    assert "rho" in capsys.readouterr().err
