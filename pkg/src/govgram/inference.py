"""Corpus-level aggregation with equal-weight repository bootstrap.

Every estimand is a plain mean over repositories.  Uncertainty comes
from a percentile bootstrap that resamples repositories (never
statements) with replacement: B replicate means are formed and the
(alpha/2, 1-alpha/2) nearest-rank quantiles bound the interval.
Replicates are generated from a seeded stream, so every reported
interval is exactly reproducible from (values, B, alpha, seed).
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .metrics import RepoMetrics

DEFAULT_B = 10_000
DEFAULT_ALPHA = 0.05

COUNTS_COLUMNS = (
    "feature",
    "n",
    "initial_K",
    "latest_K",
    "delta_K_mean",
    "delta_K_ci",
    "rarefied_delta_K_mean",
    "rarefied_delta_K_ci",
)
ENTROPY_COLUMNS = (
    "feature",
    "n",
    "initial_H",
    "latest_H",
    "delta_H_mean",
    "delta_H_ci",
    "jsd_mean",
    "jsd_ci",
)

INSUFFICIENT_N = "insufficient-n"


class InferenceError(ValueError):
    """Raised on empty inputs or categories outside the closed set."""


@dataclass(frozen=True)
class BootstrapResult:
    estimand: str
    n_repos: int
    mean: float
    ci_low: float
    ci_high: float
    B: int
    alpha: float
    seed: int


@dataclass(frozen=True)
class ShareDelta:
    feature: str
    category: str
    initial_share_pct: float
    latest_share_pct: float
    delta_pp: float
    ci: BootstrapResult


def derive_seed(seed: int, estimand: str) -> int:
    """Stable per-estimand seed so intervals do not depend on call order."""
    ss = np.random.SeedSequence(entropy=(seed, zlib.crc32(estimand.encode("utf-8"))))
    return int(ss.generate_state(1)[0])


def _nearest_rank(sorted_values: np.ndarray, q: float) -> float:
    """Nearest-rank quantile: the ceil(q*B)-th smallest replicate."""
    b = len(sorted_values)
    rank = max(1, min(b, int(np.ceil(q * b))))
    return float(sorted_values[rank - 1])


def bootstrap_mean(
    values: Sequence[float],
    B: int = DEFAULT_B,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
    estimand: str = "mean",
) -> BootstrapResult:
    """Equal-weight mean with a percentile bootstrap confidence interval.

    Each of the B replicates resamples len(values) repositories with
    replacement and records the replicate mean; the interval is the
    nearest-rank (alpha/2, 1-alpha/2) quantile pair of those means.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise InferenceError(f"no values to bootstrap for {estimand}")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    n = arr.size
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=(B, n))
    replicates = np.sort(arr[idx].mean(axis=1))
    return BootstrapResult(
        estimand=estimand,
        n_repos=int(n),
        mean=float(arr.mean()),
        ci_low=_nearest_rank(replicates, alpha / 2),
        ci_high=_nearest_rank(replicates, 1 - alpha / 2),
        B=B,
        alpha=alpha,
        seed=seed,
    )


def delta_share(
    pairs: Sequence[tuple[Mapping[str, float], Mapping[str, float]]],
    category: str,
    feature: str = "",
    categories: Sequence[str] | None = None,
    B: int = DEFAULT_B,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
) -> ShareDelta:
    """Repository-paired change in one category's share, percentage points.

    ``pairs`` holds (initial_proportions, latest_proportions) per
    repository; only repositories with both snapshots non-empty for the
    feature belong here.  Shares are equal-weight means of per-repo
    proportions times 100.
    """
    if categories is not None and category not in categories:
        raise InferenceError(f"category {category!r} outside the {feature} category set")
    if not pairs:
        raise InferenceError("delta_share requires at least one repository")
    initial = np.array([p.get(category, 0.0) for p, _ in pairs]) * 100.0
    latest = np.array([q.get(category, 0.0) for _, q in pairs]) * 100.0
    deltas = latest - initial
    ci = bootstrap_mean(
        deltas,
        B=B,
        alpha=alpha,
        seed=derive_seed(seed, f"{feature}/share/{category}"),
        estimand=f"{feature}/share/{category}",
    )
    return ShareDelta(
        feature=feature,
        category=category,
        initial_share_pct=float(initial.mean()),
        latest_share_pct=float(latest.mean()),
        delta_pp=float(deltas.mean()),
        ci=ci,
    )


def delta_share_table(
    feature: str,
    pairs_by_repo: Mapping[str, tuple[Mapping[str, float], Mapping[str, float]]],
    categories: Sequence[str],
    B: int = DEFAULT_B,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
) -> list[ShareDelta]:
    """One ShareDelta per category of the closed set, largest |dpp| first.

    Repositories are sorted by id before resampling, so the result does
    not depend on input order.
    """
    pairs = [pairs_by_repo[r] for r in sorted(pairs_by_repo)]
    rows = [
        delta_share(pairs, cat, feature=feature, categories=categories, B=B, alpha=alpha, seed=seed)
        for cat in categories
    ]
    rows.sort(key=lambda row: (-abs(row.delta_pp), row.category))
    return rows


def _ci_cell(result: BootstrapResult | None) -> str:
    if result is None:
        return INSUFFICIENT_N
    return f"[{result.ci_low!r}, {result.ci_high!r}]"


def _mean_or_blank(values: list[float]) -> str:
    return repr(float(np.mean(values))) if values else ""


def summarize_feature(
    metrics: Sequence[RepoMetrics],
    feature: str,
    B: int = DEFAULT_B,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
) -> tuple[dict[str, str], dict[str, str]]:
    """Counts-table row and entropy-table row for one feature.

    Screens are pairwise: the counts row uses repositories eligible for
    K, the entropy row those eligible for H.  With fewer than 2 eligible
    repositories the CI cells carry the insufficient-n marker.
    """
    rows = sorted((m for m in metrics if m.feature == feature), key=lambda m: m.repo_id)

    k_rows = [m for m in rows if m.eligible_k]
    delta_k = [float(m.delta_k) for m in k_rows]
    rarefied = [m.rarefied_delta_k for m in k_rows if m.rarefied_delta_k is not None]

    def boot(values: list[float], name: str) -> BootstrapResult | None:
        if len(values) < 2:
            return None
        return bootstrap_mean(
            values, B=B, alpha=alpha, seed=derive_seed(seed, name), estimand=name
        )

    counts_row = {
        "feature": feature,
        "n": str(len(k_rows)),
        "initial_K": _mean_or_blank([float(m.k_initial) for m in k_rows]),
        "latest_K": _mean_or_blank([float(m.k_latest) for m in k_rows]),
        "delta_K_mean": _mean_or_blank(delta_k),
        "delta_K_ci": _ci_cell(boot(delta_k, f"{feature}/delta_K")),
        "rarefied_delta_K_mean": _mean_or_blank(rarefied),
        "rarefied_delta_K_ci": _ci_cell(boot(rarefied, f"{feature}/rarefied_delta_K")),
    }

    h_rows = [m for m in rows if m.eligible_h]
    delta_h = [m.delta_h for m in h_rows]
    jsd_vals = [m.jsd for m in h_rows]
    entropy_row = {
        "feature": feature,
        "n": str(len(h_rows)),
        "initial_H": _mean_or_blank([m.h_initial for m in h_rows]),
        "latest_H": _mean_or_blank([m.h_latest for m in h_rows]),
        "delta_H_mean": _mean_or_blank(delta_h),
        "delta_H_ci": _ci_cell(boot(delta_h, f"{feature}/delta_H")),
        "jsd_mean": _mean_or_blank(jsd_vals),
        "jsd_ci": _ci_cell(boot(jsd_vals, f"{feature}/jsd")),
    }
    return counts_row, entropy_row
