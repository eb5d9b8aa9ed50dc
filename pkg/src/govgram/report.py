"""Pipeline orchestration, summary tables, and figure-ready data files.

Runs corpus records through normalize, parse, label, metrics, and
inference, writing every intermediate as JSON Lines and every result
table as CSV.  A manifest records the configuration, lexicon checksums,
per-stage record counts, and output checksums, so two runs with the
same inputs and seed are byte-identical and any number in the tables
can be traced back to ``labeled.jsonl``.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import ig_parser, metrics as metrics_mod, taxonomy
from .inference import (
    COUNTS_COLUMNS,
    ENTROPY_COLUMNS,
    delta_share_table,
    summarize_feature,
)
from .metrics import FEATURES, RepoMetrics, compute_repo_metrics, count_k
from .normalize import normalize_markup, resolve_pronouns, segment

METRICS_CSV_HEADER = (
    "repo_id,feature,H_initial,H_latest,delta_H,K_initial,K_latest,delta_K,"
    "rarefied_delta_K,jsd,eligible_H,eligible_K,n_initial,n_latest"
)
COUNTS_FEATURES = ("roles", "actions", "deontics")

FEATURE_CATEGORIES = {
    "roles": taxonomy.ROLE_CATEGORIES,
    "actions": taxonomy.ACTION_CATEGORIES,
    "deontics": taxonomy.DEONTIC_STRENGTHS,
    "deontics_binary": taxonomy.DEONTIC_POLARITIES,
}
FEATURE_LABEL_KEYS = {
    "roles": "role_category",
    "actions": "action_category",
    "deontics": "deontic_strength",
    "deontics_binary": "deontic_polarity",
}


class PipelineError(RuntimeError):
    def __init__(self, stage: str, record_ref: object, cause: Exception):
        super().__init__(f"stage {stage} failed at record {record_ref!r}: {cause}")
        self.stage = stage
        self.record_ref = record_ref


@dataclass
class RunConfig:
    """Pipeline constants; defaults are the reporting defaults."""

    seed: int = 17
    B: int = 10_000
    alpha: float = 0.05
    tau: int = 2
    rarefaction_draws: int = 200
    rarefaction_cap: int = 100
    across_day_only: bool = False
    lexicon_dir: str | None = None
    min_labeled: int = 5

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        for name in ("B", "tau", "rarefaction_draws", "rarefaction_cap", "min_labeled"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        """Read a flat key = value config file mirroring the field names."""
        values: dict[str, object] = {}
        known = {f.name: f.type for f in fields(cls)}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, raw = line.partition("=")
            key, raw = key.strip(), raw.strip().strip("\"'")
            if key not in known:
                raise ValueError(f"{path}: unknown config key {key!r}")
            if key in ("alpha",):
                values[key] = float(raw)
            elif key in ("across_day_only",):
                values[key] = raw.lower() in ("true", "1", "yes")
            elif key in ("lexicon_dir",):
                values[key] = raw or None
            else:
                values[key] = int(raw)
        return cls(**values)


# --------------------------------------------------------------- jsonl io


def read_jsonl(path: str | Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def write_jsonl(path: str | Path, records) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
            n += 1
    return n


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# --------------------------------------------------------------- stages


def stage_normalize(corpus_records: list[dict]) -> list[dict]:
    """Per-snapshot sentence records for every paired repository."""
    role_lexicon = taxonomy.load_role_lexicon()
    out = []
    for record in sorted(corpus_records, key=lambda r: r["repo_id"]):
        if record.get("status") != "paired":
            continue
        for snapshot in ("initial", "latest"):
            ref = (record["repo_id"], snapshot)
            try:
                doc = normalize_markup(
                    record[snapshot]["text"], repo_id=record["repo_id"], snapshot=snapshot
                )
                doc = resolve_pronouns(segment(doc), role_lexicon)
            except Exception as exc:  # pragma: no cover - defensive
                raise PipelineError("normalize", ref, exc) from exc
            out.append(
                {
                    "repo_id": record["repo_id"],
                    "snapshot": snapshot,
                    "section_count": doc.section_count,
                    "sentences": [
                        {
                            "text": s.text,
                            "block": s.block_index,
                            "span": list(s.char_span),
                            "substitutions": [
                                {
                                    "span": list(sub.span),
                                    "original": sub.original,
                                    "replacement": sub.replacement,
                                }
                                for sub in s.pronoun_substitutions
                            ],
                        }
                        for s in doc.sentences
                    ],
                    "across_day": record.get("across_day", True),
                }
            )
    return out


def stage_parse(snapshot_records: list[dict], lexicon_dir: str | None = None) -> list[dict]:
    """One statement record per simple institutional statement."""
    role_lexicon = taxonomy.load_role_lexicon(lexicon_dir)
    verbs = taxonomy.load_verb_set(lexicon_dir)
    out = []
    for record in snapshot_records:
        for index, sentence in enumerate(record["sentences"]):
            ref = (record["repo_id"], record["snapshot"], index)
            try:
                statements = ig_parser.parse_sentence(
                    sentence["text"], role_lexicon, verbs, sentence_ref=ref
                )
            except Exception as exc:
                raise PipelineError("parse", ref, exc) from exc
            for st in statements:
                deontic = None
                if st.deontic is not None:
                    deontic = {
                        "surface": st.deontic.surface,
                        "strength": st.deontic.strength,
                        "polarity": st.deontic.polarity,
                    }
                out.append(
                    {
                        "sentence_ref": list(ref),
                        "sentence_text": sentence["text"],
                        "role": st.role_text,
                        "role_span": list(st.role_span) if st.role_span else None,
                        "deontic": deontic,
                        "action": st.action_lemma,
                        "action_span": list(st.action_span) if st.action_span else None,
                        "object": st.object_text,
                        "across_day": record.get("across_day", True),
                    }
                )
    return out


def stage_label(statement_records: list[dict], lexicon_dir: str | None = None) -> list[dict]:
    """Attach taxonomy categories; closed-set membership is asserted."""
    role_lexicon = taxonomy.load_role_lexicon(lexicon_dir)
    action_lexicon = taxonomy.load_action_lexicon(lexicon_dir)
    out = []
    for record in statement_records:
        ref = tuple(record["sentence_ref"])
        try:
            role_cat = (
                taxonomy.normalize_role(record["role"], role_lexicon) if record["role"] else None
            )
            action_cat = (
                taxonomy.categorize_action(
                    record["action"], record.get("sentence_text", ""), action_lexicon
                )
                if record["action"]
                else None
            )
            deontic = record.get("deontic")
            strength = deontic["strength"] if deontic else None
            polarity = deontic["polarity"] if deontic else None
            for value, closed in (
                (role_cat, taxonomy.ROLE_CATEGORIES),
                (action_cat, taxonomy.ACTION_CATEGORIES),
                (strength, taxonomy.DEONTIC_STRENGTHS),
                (polarity, taxonomy.DEONTIC_POLARITIES),
            ):
                if value is not None and value not in closed:
                    raise taxonomy.LexiconError(f"{value!r} outside its closed category set")
        except Exception as exc:
            raise PipelineError("label", ref, exc) from exc
        labeled = dict(record)
        labeled.update(
            {
                "role_category": role_cat,
                "action_category": action_cat,
                "deontic_strength": strength,
                "deontic_polarity": polarity,
            }
        )
        out.append(labeled)
    return out


def coverage_telemetry(labeled_records: list[dict]) -> dict[str, float | None]:
    """Fraction of component-bearing statements that received a category."""
    out: dict[str, float | None] = {}
    for component, category_key in (("role", "role_category"), ("action", "action_category")):
        bearing = [r for r in labeled_records if r.get(component)]
        if not bearing:
            out[component + "s"] = None
            continue
        covered = sum(1 for r in bearing if r.get(category_key) is not None)
        out[component + "s"] = covered / len(bearing)
    return out


def _labels_by_repo(labeled_records: list[dict], feature: str) -> dict[str, dict[str, list[str]]]:
    key = FEATURE_LABEL_KEYS[feature]
    grouped: dict[str, dict[str, list[str]]] = {}
    for record in labeled_records:
        repo_id, snapshot, _ = record["sentence_ref"]
        label = record.get(key)
        slot = grouped.setdefault(repo_id, {"initial": [], "latest": []})
        if label is not None:
            slot[snapshot].append(label)
    return grouped


def _filter_across_day(labeled_records: list[dict]) -> list[dict]:
    return [r for r in labeled_records if r.get("across_day", True)]


def stage_metrics(labeled_records: list[dict], config: RunConfig) -> list[RepoMetrics]:
    """Per-repository metric rows for every feature, screens applied."""
    if config.across_day_only:
        labeled_records = _filter_across_day(labeled_records)
    rows: list[RepoMetrics] = []
    for feature in FEATURES:
        grouped = _labels_by_repo(labeled_records, feature)
        for repo_id in sorted(grouped):
            labels = grouped[repo_id]
            try:
                rows.append(
                    compute_repo_metrics(
                        repo_id,
                        labels["initial"],
                        labels["latest"],
                        feature,
                        tau=config.tau,
                        min_labeled=config.min_labeled,
                        rarefaction_draws=config.rarefaction_draws,
                        rarefaction_cap=config.rarefaction_cap,
                        seed=config.seed,
                    )
                )
            except Exception as exc:  # pragma: no cover - defensive
                raise PipelineError("metrics", (repo_id, feature), exc) from exc
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_metrics_csv(path: str | Path, rows: list[RepoMetrics]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(METRICS_CSV_HEADER + "\n")
        writer = csv.writer(f)
        for m in sorted(rows, key=lambda r: (r.feature, r.repo_id)):
            writer.writerow(
                [
                    m.repo_id,
                    m.feature,
                    _fmt(m.h_initial),
                    _fmt(m.h_latest),
                    _fmt(m.delta_h),
                    m.k_initial,
                    m.k_latest,
                    m.delta_k,
                    _fmt(m.rarefied_delta_k),
                    _fmt(m.jsd),
                    _fmt(m.eligible_h),
                    _fmt(m.eligible_k),
                    m.n_initial,
                    m.n_latest,
                ]
            )


def read_metrics_csv(path: str | Path) -> list[RepoMetrics]:
    rows = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        for rec in reader:
            rows.append(
                RepoMetrics(
                    repo_id=rec["repo_id"],
                    feature=rec["feature"],
                    h_initial=float(rec["H_initial"]) if rec["H_initial"] else None,
                    h_latest=float(rec["H_latest"]) if rec["H_latest"] else None,
                    delta_h=float(rec["delta_H"]) if rec["delta_H"] else None,
                    k_initial=int(rec["K_initial"]),
                    k_latest=int(rec["K_latest"]),
                    delta_k=int(rec["delta_K"]),
                    rarefied_delta_k=float(rec["rarefied_delta_K"]) if rec["rarefied_delta_K"] else None,
                    jsd=float(rec["jsd"]) if rec["jsd"] else None,
                    eligible_h=rec["eligible_H"] == "true",
                    eligible_k=rec["eligible_K"] == "true",
                    n_initial=int(rec["n_initial"]),
                    n_latest=int(rec["n_latest"]),
                )
            )
    return rows


def stage_infer(
    metrics_rows: list[RepoMetrics], labeled_records: list[dict], config: RunConfig, out_dir: str | Path
) -> dict[str, str]:
    """Summary tables and share-delta tables; returns written filenames."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, str] = {}

    counts_rows = []
    entropy_rows = []
    for feature in FEATURES:
        counts_row, entropy_row = summarize_feature(
            metrics_rows, feature, B=config.B, alpha=config.alpha, seed=config.seed
        )
        if feature in COUNTS_FEATURES:
            counts_rows.append(counts_row)
        entropy_rows.append(entropy_row)

    def write_table(name: str, header, rows) -> None:
        path = out / name
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=list(header))
            writer.writeheader()
            writer.writerows(rows)
        written[name] = _sha256(path)

    write_table("summary_counts.csv", COUNTS_COLUMNS, counts_rows)
    write_table("summary_entropy.csv", ENTROPY_COLUMNS, entropy_rows)

    if config.across_day_only:
        labeled_records = _filter_across_day(labeled_records)
    for feature in FEATURES:
        grouped = _labels_by_repo(labeled_records, feature)
        pairs_by_repo = {}
        for repo_id, labels in grouped.items():
            if labels["initial"] and labels["latest"]:
                dist_i = metrics_mod.CategoryDistribution.from_labels(feature, labels["initial"])
                dist_l = metrics_mod.CategoryDistribution.from_labels(feature, labels["latest"])
                pairs_by_repo[repo_id] = (dist_i.proportions, dist_l.proportions)
        rows = []
        if pairs_by_repo:
            shares = delta_share_table(
                feature,
                pairs_by_repo,
                FEATURE_CATEGORIES[feature],
                B=config.B,
                alpha=config.alpha,
                seed=config.seed,
            )
            for s in shares:
                rows.append(
                    {
                        "category": s.category,
                        "initial_pct": repr(s.initial_share_pct),
                        "latest_pct": repr(s.latest_share_pct),
                        "delta_pp": repr(s.delta_pp),
                        "ci_low": repr(s.ci.ci_low),
                        "ci_high": repr(s.ci.ci_high),
                    }
                )
        write_table(
            f"share_deltas_{feature}.csv",
            ("category", "initial_pct", "latest_pct", "delta_pp", "ci_low", "ci_high"),
            rows,
        )
    return written


def emit_figure_data(labeled_records: list[dict], config: RunConfig, out_dir: str | Path) -> dict[str, str]:
    """Share and violin CSVs mirroring the result figures.

    Share files report pooled mention percentages per snapshot; violin
    files carry per-repository K values for both snapshots.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, str] = {}
    share_names = {
        "roles": "role_shares.csv",
        "actions": "action_shares.csv",
        "deontics": "deontic_shares.csv",
        "deontics_binary": "deontic_binary_shares.csv",
    }
    for feature in FEATURES:
        key = FEATURE_LABEL_KEYS[feature]
        pooled = {"initial": {}, "latest": {}}
        for record in labeled_records:
            label = record.get(key)
            if label is None:
                continue
            _, snapshot, _ = record["sentence_ref"]
            pooled[snapshot][label] = pooled[snapshot].get(label, 0) + 1
        totals = {snap: sum(counts.values()) for snap, counts in pooled.items()}
        path = out / share_names[feature]
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["category", "initial_pct", "latest_pct"])
            if any(totals.values()):
                for category in FEATURE_CATEGORIES[feature]:
                    row = [category]
                    for snap in ("initial", "latest"):
                        total = totals[snap]
                        pct = 100.0 * pooled[snap].get(category, 0) / total if total else 0.0
                        row.append(repr(pct))
                    writer.writerow(row)
        written[share_names[feature]] = _sha256(path)

        grouped = _labels_by_repo(labeled_records, feature)
        violin = out / f"violin_{feature}.csv"
        with open(violin, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["repo_id", "snapshot", "K"])
            for repo_id in sorted(grouped):
                for snap in ("initial", "latest"):
                    dist = metrics_mod.CategoryDistribution.from_labels(
                        feature, grouped[repo_id][snap]
                    )
                    writer.writerow([repo_id, snap, count_k(dist, config.tau)])
        written[f"violin_{feature}.csv"] = _sha256(violin)
    return written


# --------------------------------------------------------------- pipeline


def _lexicon_checksums(lexicon_dir: str | None) -> dict[str, str]:
    names = ("roles.tsv", "actions.tsv", "verbs.txt")
    out = {}
    for name in names:
        if lexicon_dir:
            path = Path(lexicon_dir) / name
        else:
            from importlib import resources

            path = Path(str(resources.files("govgram").joinpath("lexicons", name)))
        out[name] = _sha256(path)
    return out


def run_pipeline(config: RunConfig, corpus_path: str | Path, out_dir: str | Path) -> dict:
    """Execute normalize, parse, label, metrics, infer, and emit.

    Returns the manifest (also written as ``manifest.json``).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    corpus_records = read_jsonl(corpus_path)
    snapshots = stage_normalize(corpus_records)
    n_sentences = write_jsonl(out / "sentences.jsonl", snapshots)

    statements = stage_parse(snapshots, config.lexicon_dir)
    n_statements = write_jsonl(out / "statements.jsonl", statements)

    labeled = stage_label(statements, config.lexicon_dir)
    n_labeled = write_jsonl(out / "labeled.jsonl", labeled)

    metrics_rows = stage_metrics(labeled, config)
    write_metrics_csv(out / "metrics.csv", metrics_rows)

    written: dict[str, str] = {}
    if metrics_rows:
        written = stage_infer(metrics_rows, labeled, config, out)
        written.update(emit_figure_data(labeled, config, out))
    for name in ("sentences.jsonl", "statements.jsonl", "labeled.jsonl", "metrics.csv"):
        written[name] = _sha256(out / name)

    manifest = {
        "config": asdict(config),
        "lexicons": _lexicon_checksums(config.lexicon_dir),
        "stages": {
            "corpus_records": len(corpus_records),
            "paired_repositories": sum(1 for r in corpus_records if r.get("status") == "paired"),
            "snapshots": n_sentences,
            "statements": n_statements,
            "labeled": n_labeled,
            "metric_rows": len(metrics_rows),
        },
        "coverage": coverage_telemetry(labeled),
        "outputs": dict(sorted(written.items())),
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return manifest
