"""End-to-end CLI tests covering every subcommand."""

import csv
from pathlib import Path

import pytest

from corpusgen import planted_corpus
from govgram.cli import main
from govgram.report import read_jsonl, write_jsonl

FIXTURES = Path(__file__).parent / "fixtures"

DOC_V1 = "# Governance\n\nMaintainers merge patches after review.\n"
DOC_V2 = (
    "# Governance\n\nMaintainers merge patches after review. "
    "The steering committee must approve breaking changes.\n"
)


def run_cli(*argv) -> int:
    return main(list(argv))


# ------------------------------------------------------------ ingest


def test_ingest_command(tmp_path, repo_builder, capsys):
    repo = repo_builder("alpha")
    repo.commit("GOVERNANCE.md", DOC_V1, "2019-02-01T10:00:00 +0000")
    repo.commit("GOVERNANCE.md", DOC_V2, "2021-04-05T10:00:00 +0000")
    listing = tmp_path / "repos.txt"
    listing.write_text(f"{repo.root}\n", encoding="utf-8")
    out = tmp_path / "corpus.jsonl"

    assert run_cli("ingest", "--repos", str(listing), "--out", str(out)) == 0
    records = read_jsonl(out)
    assert len(records) == 1
    assert records[0]["repo_id"] == "alpha"
    assert records[0]["status"] == "paired"
    assert records[0]["across_day"] is True


def test_ingest_with_repo_ids_and_patterns(tmp_path, repo_builder):
    repo = repo_builder("beta")
    repo.commit("RULES.md", DOC_V1, "2019-02-01T10:00:00 +0000")
    repo.commit("RULES.md", DOC_V2, "2021-04-05T10:00:00 +0000")
    listing = tmp_path / "repos.txt"
    listing.write_text(f"custom-id\t{repo.root}\n", encoding="utf-8")
    patterns = tmp_path / "patterns.tsv"
    patterns.write_text("rules-md\t^rules\\.md$\n", encoding="utf-8")
    out = tmp_path / "corpus.jsonl"

    assert run_cli(
        "ingest", "--repos", str(listing), "--out", str(out), "--patterns", str(patterns)
    ) == 0
    records = read_jsonl(out)
    assert records[0]["repo_id"] == "custom-id"
    assert records[0]["status"] == "paired"


# ------------------------------------------------------------ stage chain


@pytest.fixture()
def small_corpus(tmp_path):
    records, _ = planted_corpus(6)
    path = tmp_path / "corpus.jsonl"
    write_jsonl(path, records)
    return path


def test_stagewise_chain_matches_run(tmp_path, small_corpus):
    sentences = tmp_path / "sentences.jsonl"
    statements = tmp_path / "statements.jsonl"
    labeled = tmp_path / "labeled.jsonl"
    metrics = tmp_path / "metrics.csv"
    results = tmp_path / "results"

    assert run_cli("normalize", "--in", str(small_corpus), "--out", str(sentences)) == 0
    assert run_cli("parse", "--in", str(sentences), "--out", str(statements)) == 0
    assert run_cli("label", "--in", str(statements), "--out", str(labeled)) == 0
    assert (
        run_cli(
            "metrics", "--in", str(labeled), "--out", str(metrics),
            "--seed", "17", "--rarefaction-draws", "50",
        )
        == 0
    )
    assert (
        run_cli(
            "infer", "--metrics", str(metrics), "--labeled", str(labeled),
            "--out-dir", str(results), "--B", "300", "--alpha", "0.05", "--seed", "17",
        )
        == 0
    )

    run_dir = tmp_path / "run"
    config = tmp_path / "run.toml"
    config.write_text("seed = 17\nB = 300\nrarefaction_draws = 50\n", encoding="utf-8")
    assert run_cli("run", "--config", str(config), "--corpus", str(small_corpus), "--out", str(run_dir)) == 0

    assert (run_dir / "metrics.csv").read_bytes() == metrics.read_bytes()
    assert (run_dir / "summary_counts.csv").read_bytes() == (results / "summary_counts.csv").read_bytes()
    assert (run_dir / "manifest.json").exists()


def test_across_day_only_flag_changes_n(tmp_path):
    from corpusgen import screens_corpus

    records, expect = screens_corpus()
    corpus = tmp_path / "corpus.jsonl"
    write_jsonl(corpus, records)
    sentences, statements, labeled = (tmp_path / n for n in ("s.jsonl", "st.jsonl", "l.jsonl"))
    run_cli("normalize", "--in", str(corpus), "--out", str(sentences))
    run_cli("parse", "--in", str(statements.with_name("s.jsonl")), "--out", str(statements))
    run_cli("label", "--in", str(statements), "--out", str(labeled))

    all_csv = tmp_path / "all.csv"
    across_csv = tmp_path / "across.csv"
    run_cli("metrics", "--in", str(labeled), "--out", str(all_csv), "--rarefaction-draws", "50")
    run_cli(
        "metrics", "--in", str(labeled), "--out", str(across_csv),
        "--rarefaction-draws", "50", "--across-day-only",
    )
    n_all = len(all_csv.read_text().splitlines()) - 1
    n_across = len(across_csv.read_text().splitlines()) - 1
    assert n_all == expect["n_pairs"] * 4
    assert n_across == expect["n_across_day"] * 4


def test_normalize_entropy_flag(tmp_path, small_corpus):
    sentences, statements, labeled = (tmp_path / n for n in ("s.jsonl", "st.jsonl", "l.jsonl"))
    run_cli("normalize", "--in", str(small_corpus), "--out", str(sentences))
    run_cli("parse", "--in", str(sentences), "--out", str(statements))
    run_cli("label", "--in", str(statements), "--out", str(labeled))
    plain = tmp_path / "plain.csv"
    normed = tmp_path / "normed.csv"
    run_cli("metrics", "--in", str(labeled), "--out", str(plain), "--rarefaction-draws", "50")
    run_cli(
        "metrics", "--in", str(labeled), "--out", str(normed),
        "--rarefaction-draws", "50", "--normalize-entropy",
    )
    with open(plain) as f:
        plain_rows = {(r["repo_id"], r["feature"]): r for r in csv.DictReader(f)}
    with open(normed) as f:
        normed_rows = {(r["repo_id"], r["feature"]): r for r in csv.DictReader(f)}
    # actions have 3 initial categories, so normalization divides by log2(3)
    key = ("repo000", "actions")
    assert float(normed_rows[key]["H_initial"]) <= 1.0
    assert float(plain_rows[key]["H_initial"]) > float(normed_rows[key]["H_initial"])


# ------------------------------------------------------------ reliability


def test_reliability_command_on_shipped_fixture(capsys):
    rc = run_cli(
        "reliability", "--sample", "50",
        "--coders", str(FIXTURES / "coder_a.tsv"), str(FIXTURES / "coder_b.tsv"),
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "n=50" in out
    kappa = float(out.split("cohen_kappa=")[1])
    agreement = float(out.split("percent_agreement=")[1].split()[0])
    assert agreement >= 0.8
    assert kappa >= 0.8


def test_reliability_sample_truncates(tmp_path, capsys):
    a = tmp_path / "a.tsv"
    b = tmp_path / "b.tsv"
    a.write_text("".join(f"{i}\tx\n" for i in range(30)), encoding="utf-8")
    b.write_text("".join(f"{i}\tx\n" for i in range(30)), encoding="utf-8")
    assert run_cli("reliability", "--sample", "10", "--coders", str(a), str(b)) == 0
    assert "n=10" in capsys.readouterr().out


# ------------------------------------------------------------ failures


def test_missing_input_file_exits_nonzero(tmp_path, capsys):
    rc = run_cli("normalize", "--in", str(tmp_path / "nope.jsonl"), "--out", str(tmp_path / "o"))
    assert rc != 0
    assert "error" in capsys.readouterr().err


def test_unreadable_repo_reported(tmp_path, capsys):
    listing = tmp_path / "repos.txt"
    listing.write_text("/definitely/not/a/repo\n", encoding="utf-8")
    rc = run_cli("ingest", "--repos", str(listing), "--out", str(tmp_path / "c.jsonl"))
    assert rc != 0
    assert "/definitely/not/a/repo" in capsys.readouterr().err  # error names the repo


def test_console_script_installed():
    import shutil

    assert shutil.which("govgram") is not None
