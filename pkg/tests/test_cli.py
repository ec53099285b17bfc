import hashlib
import subprocess
import sys

import numpy as np
import pytest

from enginearch import emit, pipeline
from enginearch.cli import run

from conftest import lift_engine, write_tree
from oracles import brute_heatmap


def digest(tree):
    h = hashlib.sha256()
    for p in sorted(tree.rglob("*")):
        if p.is_file():
            h.update(str(p.relative_to(tree)).encode() + b"\0" + p.read_bytes())
    return h.hexdigest()


def test_scan_fixture_engine_counts(corpus_copy, capsys):
    assert run(["--config", str(corpus_copy / "corpus.ini"), "scan", "alpha"]) == 0
    out = capsys.readouterr().out
    assert out == ("alpha: files=34 includes=62 edges=51 first_pass=45 second_pass=7 "
                   "ambiguous=1 unresolved=10\n")
    produced = sorted(p.name for p in (corpus_copy / "out").iterdir())
    assert produced == ["alpha-includes-amb.csv", "alpha-includes-unr.csv", "alpha-includes.dot"]


def test_scan_empty_repo(tmp_path, capsys):
    (tmp_path / "empty").mkdir()
    assert run(["--out", str(tmp_path / "o"), "--repo", f"e={tmp_path / 'empty'}", "scan"]) == 0
    assert "files=0 includes=0 edges=0" in capsys.readouterr().out
    assert (tmp_path / "o" / "e-includes.dot").read_text() == "digraph G {\n}\n"
    assert (tmp_path / "o" / "e-includes-unr.csv").read_text() == "including_file,directive,reason\n"


def test_scan_missing_root(tmp_path, capsys):
    assert run(["--out", str(tmp_path), "--repo", f"e={tmp_path / 'nope'}", "scan"]) == 2
    assert "does not exist" in capsys.readouterr().err


def test_scan_ignores_missing_mapping(tmp_path):
    write_tree(tmp_path / "r", {"a.cpp": '#include "a.h"\n', "a.h": ""})
    argv = ["--out", str(tmp_path / "o"), "--repo", f"e={tmp_path / 'r'}", "--mapping", f"e={tmp_path / 'no.csv'}"]
    assert run(argv + ["scan"]) == 0
    assert run(argv + ["analyse"]) == 2


def test_analyse_without_mapping(tmp_path, capsys):
    write_tree(tmp_path / "r", {"a.cpp": ""})
    assert run(["--out", str(tmp_path / "o"), "--repo", f"e={tmp_path / 'r'}", "analyse"]) == 2
    assert "no mapping file" in capsys.readouterr().err


def test_analyse_bad_mapping(tmp_path, capsys):
    write_tree(tmp_path, {"r/a.cpp": "", "m.csv": "folder,subsystem\n.,NOPE\n"})
    argv = ["--out", str(tmp_path / "o"), "--repo", f"e={tmp_path / 'r'}", "--mapping", f"e={tmp_path / 'm.csv'}"]
    assert run(argv + ["analyse"]) == 2
    assert "unknown subsystem code" in capsys.readouterr().err


def test_analyse_mapping_covers_nothing(tmp_path, capsys, caplog):
    write_tree(tmp_path, {"r/a.cpp": '#include "a.h"\n', "r/a.h": "", "m.csv": "folder,subsystem\nelsewhere,COR\n"})
    argv = ["--out", str(tmp_path / "o"), "--repo", f"e={tmp_path / 'r'}", "--mapping", f"e={tmp_path / 'm.csv'}"]
    assert run(argv + ["analyse"]) == 0
    assert "covers none" in caplog.text
    assert (tmp_path / "o" / "e-subsystems.dot").read_text() == "digraph G {\n}\n"
    assert (tmp_path / "o" / "e-metrics.csv").read_text() == "subsystem,in_degree,out_degree,betweenness\n"


def test_analyse_alpha_metrics(corpus_copy):
    assert run(["--config", str(corpus_copy / "corpus.ini"), "analyse", "alpha"]) == 0
    rows = (corpus_copy / "out" / "alpha-metrics.csv").read_text().splitlines()
    assert rows == [
        "subsystem,in_degree,out_degree,betweenness",
        "AUD,2,1,0.000000",
        "COR,7,0,0.000000",
        "FES,0,2,0.000000",
        "GMP,1,4,1.500000",
        "LLR,3,3,4.500000",
        "PHY,1,1,0.000000",
        "PLA,1,1,0.000000",
        "EDI,0,3,0.000000",
    ]


def test_include_unassigned_flag(corpus_copy):
    cfg = str(corpus_copy / "corpus.ini")
    assert run(["--config", cfg, "--include-unassigned", "analyse", "beta"]) == 0
    assert "UNASSIGNED" in (corpus_copy / "out" / "beta-subsystems.dot").read_text()
    assert run(["--config", cfg, "analyse", "beta"]) == 0
    assert "UNASSIGNED" not in (corpus_copy / "out" / "beta-subsystems.dot").read_text()


def test_unknown_repo_name(corpus_copy, capsys):
    assert run(["--config", str(corpus_copy / "corpus.ini"), "analyse", "delta"]) == 2
    assert "unknown repository 'delta'" in capsys.readouterr().err


def test_no_repos_configured(tmp_path):
    assert run(["--out", str(tmp_path), "scan"]) == 2


def test_aggregate_before_analyse(corpus_copy, capsys):
    assert run(["--config", str(corpus_copy / "corpus.ini"), "aggregate"]) == 2
    assert "no analysed engines" in capsys.readouterr().err


def test_aggregate_equals_recount(corpus_copy, corpus_config, capsys):
    cfg = str(corpus_copy / "corpus.ini")
    assert run(["--config", cfg, "analyse"]) == 0
    assert run(["--config", cfg, "aggregate"]) == 0
    out = capsys.readouterr().out
    assert "engines: alpha beta gamma\n" in out
    counts = emit.read_heatmap_csv((corpus_copy / "out" / "corpus-heatmap.csv").read_text())
    graphs = [lift_engine(spec) for spec in corpus_config.repos]
    assert np.array_equal(counts, brute_heatmap(graphs))


def test_single_engine_heatmap_is_presence(corpus_copy, corpus_config):
    cfg = str(corpus_copy / "corpus.ini")
    assert run(["--config", cfg, "analyse", "gamma"]) == 0
    assert run(["--config", cfg, "--pair-threshold", "1", "aggregate"]) == 0
    counts = emit.read_heatmap_csv((corpus_copy / "out" / "corpus-heatmap.csv").read_text())
    assert set(np.unique(counts)) <= {0, 1}
    assert np.array_equal(counts, brute_heatmap([lift_engine(corpus_config.repo("gamma"))]))


def test_rerun_is_byte_identical_for_any_jobs(corpus_copy):
    cfg = str(corpus_copy / "corpus.ini")
    digests = []
    for jobs in ("1", "3", "1"):
        assert run(["--config", cfg, "--jobs", jobs, "all"]) == 0
        digests.append(digest(corpus_copy / "out"))
    assert len(set(digests)) == 1


def test_options_override_config(corpus_copy, capsys):
    cfg = str(corpus_copy / "corpus.ini")
    assert run(["--config", cfg, "--pair-threshold", "3", "--inner-core-size", "2", "all"]) == 0
    out = capsys.readouterr().out
    assert "frequent pairs: 1\n" in out
    assert len(out.split("inner core: ")[1].split("\n")[0].split()) == 2


def test_bad_option_value(corpus_copy):
    assert run(["--config", str(corpus_copy / "corpus.ini"), "--pair-threshold", "0", "all"]) == 2
    assert run(["--repo", "missing-equals", "scan"]) == 2


def test_internal_error_exit_code(corpus_copy, monkeypatch, capsys):
    def boom(*a, **k):
        raise RuntimeError("kaboom")

    monkeypatch.setattr(pipeline, "run_scan", boom)
    assert run(["--config", str(corpus_copy / "corpus.ini"), "scan"]) == 1
    assert "internal error: kaboom" in capsys.readouterr().err


def test_suggest_mapping(corpus_copy, tmp_path, capsys):
    cfg = str(corpus_copy / "corpus.ini")
    assert run(["--config", cfg, "suggest-mapping", "alpha"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# advisory")
    assert "src/audio,AUD\n" in out
    assert run(["--config", cfg, "suggest-mapping", "alpha", "-o", str(tmp_path / "s.csv")]) == 0
    assert (tmp_path / "s.csv").read_text() == out


def test_console_script_exit_codes(tmp_path):
    exe = [sys.executable, "-m", "enginearch.cli"]
    ok = subprocess.run(exe + ["--help"], capture_output=True, text=True)
    assert ok.returncode == 0 and "suggest-mapping" in ok.stdout
    bad = subprocess.run(exe + ["--repo", f"x={tmp_path / 'none'}", "scan"], capture_output=True, text=True)
    assert bad.returncode == 2
