"""Distributional metrics over categorical statement labels.

Each governance snapshot is reduced to a distribution over a closed
category set (roles, actions, deontic strengths, or the binary
enabling/restricting split).  This module computes, per repository:

* Shannon entropy H in bits and the paired change dH = H_latest - H_initial
* Jensen-Shannon divergence (bits, base 2) between the two snapshots
* the thresholded category count K (categories with >= tau statements)
  and its paired change dK
* a rarefied dK that equalizes snapshot sizes by repeatedly subsampling
  n = min(N_initial, N_latest, cap) statements from each side without
  replacement and averaging the paired count differences

Entropy and JSD are only defined for snapshots with at least
``min_labeled`` statements (default 5); callers screen via the
eligibility flags on :class:`RepoMetrics`.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

FEATURES = ("roles", "actions", "deontics", "deontics_binary")

DEFAULT_TAU = 2
DEFAULT_MIN_LABELED = 5
DEFAULT_RAREFACTION_DRAWS = 200
DEFAULT_RAREFACTION_CAP = 100


class UndefinedMetricError(ValueError):
    """Raised when a metric is requested for an empty distribution."""


@dataclass(frozen=True)
class CategoryDistribution:
    """Counts and proportions over a closed category set for one snapshot."""

    feature: str
    counts: Mapping[str, int]
    n_labeled: int

    @classmethod
    def from_labels(cls, feature: str, labels: Iterable[str]) -> "CategoryDistribution":
        counts: dict[str, int] = {}
        for label in labels:
            counts[label] = counts.get(label, 0) + 1
        return cls(feature=feature, counts=counts, n_labeled=sum(counts.values()))

    @property
    def proportions(self) -> dict[str, float]:
        if self.n_labeled == 0:
            return {}
        return {k: c / self.n_labeled for k, c in self.counts.items()}


@dataclass(frozen=True)
class RepoMetrics:
    """Per-repository paired metrics for one feature."""

    repo_id: str
    feature: str
    h_initial: float | None
    h_latest: float | None
    delta_h: float | None
    k_initial: int
    k_latest: int
    delta_k: int
    rarefied_delta_k: float | None
    jsd: float | None
    eligible_h: bool
    eligible_k: bool
    n_initial: int
    n_latest: int


def entropy(dist: CategoryDistribution) -> float:
    """Shannon entropy in bits, with 0*log2(0) taken as 0."""
    if dist.n_labeled == 0:
        raise UndefinedMetricError(f"entropy undefined for empty {dist.feature} distribution")
    n = dist.n_labeled
    return -sum((c / n) * math.log2(c / n) for c in dist.counts.values() if c > 0)


def normalized_entropy(dist: CategoryDistribution) -> float:
    """Entropy divided by log2 of the nonzero-category support size.

    Exploratory variant only; the reported metric is plain bits.
    """
    support = sum(1 for c in dist.counts.values() if c > 0)
    if support <= 1:
        return 0.0
    return entropy(dist) / math.log2(support)


def jsd(p: CategoryDistribution, q: CategoryDistribution) -> float:
    """Jensen-Shannon divergence in bits between two aligned distributions.

    Categories are aligned by id over the union of both supports; missing
    categories carry probability 0 and contribute nothing to their own
    KL term.  Symmetric and bounded in [0, 1] bits.
    """
    if p.n_labeled == 0 or q.n_labeled == 0:
        raise UndefinedMetricError("jsd undefined when either distribution is empty")
    keys = sorted(set(p.counts) | set(q.counts))
    pp = p.proportions
    qp = q.proportions
    total = 0.0
    for k in keys:
        a = pp.get(k, 0.0)
        b = qp.get(k, 0.0)
        m = 0.5 * (a + b)
        if a > 0:
            total += 0.5 * a * math.log2(a / m)
        if b > 0:
            total += 0.5 * b * math.log2(b / m)
    # clamp the tiny negative residue float arithmetic can leave at p == q
    return max(total, 0.0)


def count_k(dist: CategoryDistribution, tau: int = DEFAULT_TAU) -> int:
    """Number of categories present with at least ``tau`` statements."""
    return sum(1 for c in dist.counts.values() if c >= tau)


def repo_stream_seed(seed: int, repo_id: str, feature: str = "") -> np.random.SeedSequence:
    """Derive the per-repository RNG stream for rarefaction.

    crc32 keeps the derivation stable across processes and platforms, so
    rarefied values do not depend on scheduling or input order.
    """
    return np.random.SeedSequence(
        entropy=(seed, zlib.crc32(repo_id.encode("utf-8")), zlib.crc32(feature.encode("utf-8")))
    )


def rarefaction_depth(n_initial: int, n_latest: int, cap: int = DEFAULT_RAREFACTION_CAP) -> int:
    """Common subsample size: min of both snapshot sizes and the cap."""
    return min(n_initial, n_latest, cap)


def rarefied_delta_k(
    initial_statements: Sequence[str],
    latest_statements: Sequence[str],
    R: int,
    cap: int = DEFAULT_RAREFACTION_CAP,
    seed: int | np.random.SeedSequence = 0,
    tau: int = DEFAULT_TAU,
) -> float:
    """Mean paired K difference over R equal-size subsample draws.

    Draws n = min(N_initial, N_latest, cap) statements without
    replacement from each snapshot.  Both sides of a draw share one
    vector of uniform sort keys, which keeps each side's subsample
    marginally uniform while guaranteeing that identical statement lists
    produce exactly 0 for any seed.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    n_i = len(initial_statements)
    n_l = len(latest_statements)
    if n_i == 0 or n_l == 0:
        raise UndefinedMetricError("rarefied delta K undefined for an empty snapshot")
    n_r = rarefaction_depth(n_i, n_l, cap)

    labels = sorted(set(initial_statements) | set(latest_statements))
    index = {lab: i for i, lab in enumerate(labels)}
    cats_i = np.array([index[s] for s in initial_statements], dtype=np.intp)
    cats_l = np.array([index[s] for s in latest_statements], dtype=np.intp)

    rng = np.random.default_rng(seed)
    keys = rng.random((R, max(n_i, n_l)))
    idx_i = np.argsort(keys[:, :n_i], axis=1, kind="stable")[:, :n_r]
    idx_l = np.argsort(keys[:, :n_l], axis=1, kind="stable")[:, :n_r]

    n_cats = len(labels)
    total = 0
    for t in range(R):
        ci = np.bincount(cats_i[idx_i[t]], minlength=n_cats)
        cl = np.bincount(cats_l[idx_l[t]], minlength=n_cats)
        total += int((cl >= tau).sum()) - int((ci >= tau).sum())
    return total / R


def compute_repo_metrics(
    repo_id: str,
    initial_labels: Sequence[str],
    latest_labels: Sequence[str],
    feature: str,
    tau: int = DEFAULT_TAU,
    min_labeled: int = DEFAULT_MIN_LABELED,
    rarefaction_draws: int = DEFAULT_RAREFACTION_DRAWS,
    rarefaction_cap: int = DEFAULT_RAREFACTION_CAP,
    seed: int = 0,
) -> RepoMetrics:
    """Metric bundle for one repository and feature, screens applied.

    ``initial_labels``/``latest_labels`` are the category labels of the
    statements labeled for this feature in each snapshot.  Entropy and
    JSD fields are None unless both snapshots reach ``min_labeled``;
    rarefied dK is None unless both snapshots are non-empty.
    """
    dist_i = CategoryDistribution.from_labels(feature, initial_labels)
    dist_l = CategoryDistribution.from_labels(feature, latest_labels)
    n_i, n_l = dist_i.n_labeled, dist_l.n_labeled

    eligible_h = n_i >= min_labeled and n_l >= min_labeled
    eligible_k = n_i >= 1 and n_l >= 1

    h_i = h_l = d_h = j = None
    if eligible_h:
        h_i = entropy(dist_i)
        h_l = entropy(dist_l)
        d_h = h_l - h_i
        j = jsd(dist_i, dist_l)

    k_i = count_k(dist_i, tau)
    k_l = count_k(dist_l, tau)

    rare = None
    if eligible_k:
        rare = rarefied_delta_k(
            list(initial_labels),
            list(latest_labels),
            R=rarefaction_draws,
            cap=rarefaction_cap,
            seed=repo_stream_seed(seed, repo_id, feature),
            tau=tau,
        )

    return RepoMetrics(
        repo_id=repo_id,
        feature=feature,
        h_initial=h_i,
        h_latest=h_l,
        delta_h=d_h,
        k_initial=k_i,
        k_latest=k_l,
        delta_k=k_l - k_i,
        rarefied_delta_k=rare,
        jsd=j,
        eligible_h=eligible_h,
        eligible_k=eligible_k,
        n_initial=n_i,
        n_latest=n_l,
    )
