"""govgram command line interface.

Subcommands mirror the pipeline stages (ingest, normalize, parse,
label, metrics, infer), plus `run` for the whole pipeline and
`reliability` for double-coding agreement.  Every stage reads and
writes JSON Lines or CSV so any step can be rerun in isolation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus_ingest, report, taxonomy
from .report import RunConfig


def _cmd_ingest(args) -> int:
    patterns = None
    if args.patterns:
        patterns = corpus_ingest.load_patterns_file(args.patterns)
    repos = []
    for line in Path(args.repos).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" in line:
            repo_id, _, path = line.partition("\t")
            repos.append((repo_id.strip(), path.strip()))
        else:
            repos.append((None, line))
    records = []
    for repo_id, path in repos:
        records.append(corpus_ingest.ingest_repository(path, repo_id=repo_id, patterns=patterns))
    records.sort(key=lambda r: r["repo_id"])
    n = report.write_jsonl(args.out, records)
    print(f"ingested {n} repositories -> {args.out}")
    return 0


def _cmd_normalize(args) -> int:
    corpus = report.read_jsonl(args.infile)
    snapshots = report.stage_normalize(corpus)
    n = report.write_jsonl(args.out, snapshots)
    print(f"normalized {n} snapshots -> {args.out}")
    return 0


def _cmd_parse(args) -> int:
    snapshots = report.read_jsonl(args.infile)
    statements = report.stage_parse(snapshots, args.lexicon)
    n = report.write_jsonl(args.out, statements)
    print(f"parsed {n} statements -> {args.out}")
    return 0


def _cmd_label(args) -> int:
    statements = report.read_jsonl(args.infile)
    labeled = report.stage_label(statements, args.lexicon)
    n = report.write_jsonl(args.out, labeled)
    coverage = report.coverage_telemetry(labeled)
    shown = ", ".join(
        f"{k} {v:.3f}" if v is not None else f"{k} n/a" for k, v in coverage.items()
    )
    print(f"labeled {n} statements -> {args.out} (category coverage: {shown})")
    return 0


def _cmd_metrics(args) -> int:
    labeled = report.read_jsonl(args.infile)
    config = RunConfig(
        seed=args.seed,
        rarefaction_draws=args.rarefaction_draws,
        across_day_only=args.across_day_only,
        tau=args.tau,
        rarefaction_cap=args.rarefaction_cap,
        min_labeled=args.min_labeled,
    )
    rows = report.stage_metrics(labeled, config)
    if args.normalize_entropy:
        rows = [_normalized_entropy_row(r, labeled, config) for r in rows]
    report.write_metrics_csv(args.out, rows)
    print(f"wrote {len(rows)} metric rows -> {args.out}")
    return 0


def _normalized_entropy_row(row, labeled, config):
    """Exploratory variant: H fields divided by log2(support size)."""
    from dataclasses import replace

    from .metrics import CategoryDistribution, normalized_entropy
    from .report import FEATURE_LABEL_KEYS

    if not row.eligible_h:
        return row
    key = FEATURE_LABEL_KEYS[row.feature]
    labels = {"initial": [], "latest": []}
    for record in labeled:
        repo_id, snapshot, _ = record["sentence_ref"]
        if repo_id == row.repo_id and record.get(key) is not None:
            labels[snapshot].append(record[key])
    h_i = normalized_entropy(CategoryDistribution.from_labels(row.feature, labels["initial"]))
    h_l = normalized_entropy(CategoryDistribution.from_labels(row.feature, labels["latest"]))
    return replace(row, h_initial=h_i, h_latest=h_l, delta_h=h_l - h_i)


def _cmd_infer(args) -> int:
    rows = report.read_metrics_csv(args.metrics)
    labeled = report.read_jsonl(args.labeled)
    config = RunConfig(seed=args.seed, B=args.B, alpha=args.alpha)
    written = report.stage_infer(rows, labeled, config, args.out_dir)
    written.update(report.emit_figure_data(labeled, config, args.out_dir))
    print(f"wrote {len(written)} tables -> {args.out_dir}")
    return 0


def _cmd_run(args) -> int:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    try:
        manifest = report.run_pipeline(config, args.corpus, args.out)
    except report.PipelineError as exc:
        print(f"pipeline failed in stage {exc.stage} at {exc.record_ref!r}: {exc}", file=sys.stderr)
        return 2
    stages = manifest["stages"]
    print(
        "pipeline complete:"
        f" {stages['paired_repositories']} paired repositories,"
        f" {stages['statements']} statements,"
        f" {stages['metric_rows']} metric rows -> {args.out}"
    )
    return 0


def _read_coder_file(path: str) -> dict[str, str]:
    labels = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        item, _, label = line.partition("\t")
        labels[item.strip()] = label.strip()
    return labels


def _cmd_reliability(args) -> int:
    coder_a, coder_b = (_read_coder_file(p) for p in args.coders)
    common = sorted(set(coder_a) & set(coder_b))
    if args.sample:
        common = common[: args.sample]
    if not common:
        print("no common items between coder files", file=sys.stderr)
        return 2
    a = [coder_a[i] for i in common]
    b = [coder_b[i] for i in common]
    pa = taxonomy.percent_agreement(a, b)
    kappa = taxonomy.cohens_kappa(a, b)
    print(f"n={len(common)} percent_agreement={pa:.4f} cohen_kappa={kappa:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="govgram",
        description="Institutional-statement mining and drift metrics for governance documents",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="pair governance snapshots from local git clones")
    p.add_argument("--repos", required=True, help="file listing repository paths (optionally repo_id<TAB>path)")
    p.add_argument("--out", required=True)
    p.add_argument("--patterns", help="file of pattern_id<TAB>regex lines replacing the default set")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("normalize", help="clean markup and segment sentences")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("parse", help="extract institutional statements")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lexicon", help="directory holding roles.tsv/actions.tsv/verbs.txt")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("label", help="assign taxonomy categories")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lexicon")
    p.set_defaults(func=_cmd_label)

    p = sub.add_parser("metrics", help="per-repository entropy/JSD/count metrics")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=17)
    p.add_argument("--rarefaction-draws", type=int, default=200)
    p.add_argument("--rarefaction-cap", type=int, default=100)
    p.add_argument("--tau", type=int, default=2)
    p.add_argument("--min-labeled", type=int, default=5)
    p.add_argument("--across-day-only", action="store_true")
    p.add_argument("--normalize-entropy", action="store_true", help="exploratory: divide H by log2(support)")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("infer", help="bootstrap corpus-level summaries")
    p.add_argument("--metrics", required=True)
    p.add_argument("--labeled", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--B", type=int, default=10_000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=17)
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("run", help="full pipeline with manifest")
    p.add_argument("--config", help="flat key = value file mirroring RunConfig fields")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("reliability", help="double-coding percent agreement and Cohen's kappa")
    p.add_argument("--sample", type=int, default=None)
    p.add_argument("--coders", nargs=2, required=True, metavar=("A", "B"))
    p.set_defaults(func=_cmd_reliability)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (corpus_ingest.IngestError, report.PipelineError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
