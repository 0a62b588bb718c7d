import csv

import pytest

from friendsuggest.cli import run_command
from friendsuggest.config import DEFAULTS, ConfigError, RunConfig, parse_cohorts, read_config_file

SMALL = ["--n-users", "600", "--n-communities", "6", "--seed", "7"]
PROTOCOL = ["--set", "cohorts=a:2:6:25,b:7:*:25", "--mu", "1", "--min-new", "1", "--threads", "1"]


@pytest.fixture(scope="module")
def data(tmp_path_factory):
    d = tmp_path_factory.mktemp("data")
    assert run_command(["generate", "--out", str(d), *SMALL]) == 0
    return d


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestUsage:
    def test_no_arguments(self, capsys):
        assert run_command([]) == 1
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag(self, data):
        assert run_command(["suggest", "--data", str(data), "--user", "1", "--bogus"]) == 1

    def test_unknown_subcommand(self):
        assert run_command(["frobnicate"]) == 1

    def test_unknown_set_key(self, data):
        assert run_command(["suggest", "--data", str(data), "--user", "1", "--set", "gamma=3"]) == 1

    def test_invalid_generate_value(self, tmp_path):
        assert run_command(["generate", "--out", str(tmp_path), "--p-in", "2.0"]) == 1


class TestDataErrors:
    def test_malformed_edges(self, tmp_path, capsys):
        (tmp_path / "edges.tsv").write_text("1\t2\t5\n3\tfour\t6\n")
        assert run_command(["validate", "--data", str(tmp_path)]) == 2
        assert ":2" in capsys.readouterr().err

    def test_missing_directory(self, tmp_path):
        assert run_command(["validate", "--data", str(tmp_path / "nope")]) == 2

    def test_unknown_user(self, data):
        assert run_command(["suggest", "--data", str(data), "--user", "999999"]) == 2

    def test_unknown_config_key_in_file(self, data, tmp_path):
        conf = tmp_path / "c.conf"
        conf.write_text("mu = 1\nlambda = 3\n")
        assert run_command(["suggest", "--data", str(data), "--user", "1", "--config", str(conf)]) == 2

    def test_no_boundary(self, tmp_path):
        (tmp_path / "edges.tsv").write_text("1\t2\t5\n")
        assert run_command(["benchmark", "--data", str(tmp_path), "--out", str(tmp_path / "r.csv")]) == 2


def test_validate_generated(data, capsys):
    assert run_command(["validate", "--data", str(data)]) == 0
    assert "violations\t0" in capsys.readouterr().out


def test_suggest_rows(data, capsys):
    assert run_command(["suggest", "--data", str(data), "--user", "17", "--approach", "proposed", "--top", "10", "--mu", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert 0 < len(lines) <= 10
    for rank, line in enumerate(lines, 1):
        target, r, cand, score = line.split("\t")
        assert (int(target), int(r)) == (17, rank)
        assert len(score.split(".")[1]) == 6


@pytest.mark.parametrize("approach", ["current", "adamic_adar", "common_neighbors", "plain_rwr"])
def test_suggest_baselines(data, tmp_path, approach):
    out = tmp_path / "s.tsv"
    argv = ["suggest", "--data", str(data), "--user", "3", "--user", "1", "--approach", approach, "--mu", "1", "--out", str(out)]
    assert run_command(argv) == 0
    targets = [int(line.split("\t")[0]) for line in out.read_text().splitlines()]
    assert targets == sorted(targets) and set(targets) <= {1, 3}


@pytest.fixture(scope="module")
def report(data, tmp_path_factory):
    out = tmp_path_factory.mktemp("rep") / "report.csv"
    assert run_command(["benchmark", "--data", str(data), "--out", str(out), *PROTOCOL]) == 0
    return out


def test_benchmark_report(report):
    rows = _rows(report)
    assert rows[0] == ["cohort", "approach", "k", "precision"]
    split = rows.index(["cohort", "approach", "mean_auc", "users_evaluated"])
    precision = rows[1:split]
    groups = {}
    for cohort, approach, k, p in precision:
        groups.setdefault((cohort, approach), []).append(int(k))
        assert 0.0 <= float(p) <= 1.0
    assert len(groups) == 2 * 5
    assert all(ks == list(range(1, 101)) for ks in groups.values())
    summary = rows[split + 1:]
    assert len(summary) == 10
    assert all(int(users) == 25 for *_, users in summary)


def test_benchmark_deterministic(data, report, tmp_path):
    again = tmp_path / "again.csv"
    assert run_command(["benchmark", "--data", str(data), "--out", str(again), *PROTOCOL]) == 0
    assert again.read_bytes() == report.read_bytes()


def test_sweep(data, tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    argv = ["sweep", "--data", str(data), "--out", str(out), "--cohort", "b", *PROTOCOL]
    assert run_command(argv) == 0
    rows = _rows(out)
    assert rows[0] == ["w_friends", "w_schools", "w_groups", "mean_p10"]
    assert ["0.50", "0.30", "0.20"] in [r[:3] for r in rows[1:]]
    assert capsys.readouterr().out.startswith("best\t")
    assert run_command(["sweep", "--data", str(data), "--out", str(out), "--cohort", "zzz", *PROTOCOL]) == 1


class TestConfig:
    def test_defaults(self):
        cfg = RunConfig()
        params = cfg.suggestion_params()
        assert tuple(params.feature_weights) == (0.5, 0.3, 0.2, 0.0, 0.0)
        assert (params.w_direct, params.w_indirect, params.L, params.mu) == (0.4, 0.6, 10000, 5)
        assert (params.rwr.alpha, params.rwr.epsilon, params.rwr.max_iters) == (0.4, 1e-4, 50)
        assert cfg.current_params().t == (1.7, 1.5, 1.4, 1.1)
        assert [s.name for s in cfg.cohort_specs()] == ["T20", "T50", "T100"]

    def test_precedence(self, tmp_path):
        conf = tmp_path / "c.conf"
        conf.write_text("# comment\nmu = 3\nalpha = 0.2  # trailing\n")
        cfg = RunConfig.layered({"mu": "2", "seed": "4"}, read_config_file(conf), {"mu": "9"})
        params = cfg.suggestion_params()
        assert params.mu == 9 and params.rwr.alpha == 0.2 and cfg.seed == 4

    def test_cli_flag_beats_file(self, data, tmp_path, capsys):
        conf = tmp_path / "c.conf"
        conf.write_text("mu = 1000\n")
        assert run_command(["suggest", "--data", str(data), "--user", "17", "--config", str(conf)]) == 0
        assert capsys.readouterr().out == ""
        assert run_command(["suggest", "--data", str(data), "--user", "17", "--config", str(conf), "--mu", "1"]) == 0
        assert capsys.readouterr().out != ""

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="frobs"):
            RunConfig({"frobs": "1"})

    def test_bad_line(self, tmp_path):
        conf = tmp_path / "c.conf"
        conf.write_text("mu = 1\njust words\n")
        with pytest.raises(ConfigError, match=":2"):
            read_config_file(conf)

    def test_infinite_L(self):
        assert RunConfig({"L": "inf"}).suggestion_params().L is None

    def test_cohort_parsing(self):
        assert parse_cohorts("x:1:2:3, y:4:*:5") == [("x", 1, 2, 3), ("y", 4, None, 5)]
        with pytest.raises(ConfigError):
            parse_cohorts("x:1:2")
        with pytest.raises(ConfigError):
            parse_cohorts("x:1:2:0")

    def test_bad_values(self):
        with pytest.raises(ConfigError):
            RunConfig({"alpha": "abc"}).suggestion_params()
        with pytest.raises(ConfigError):
            RunConfig({"alpha": "1.5"}).suggestion_params()
        with pytest.raises(ConfigError):
            RunConfig({"t1": "0.5"}).current_params()
        with pytest.raises(ConfigError):
            RunConfig({"approaches": "proposed,oracle"}).approaches

    def test_every_default_key_is_parsed(self):
        cfg = RunConfig()
        assert set(DEFAULTS) >= {"w_friends", "e34", "cohorts", "seed", "boundary"}
        cfg.suggestion_params(), cfg.current_params(), cfg.cohort_specs(), cfg.approaches
