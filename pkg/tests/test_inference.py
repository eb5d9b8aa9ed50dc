"""Bootstrap and corpus-summary tests, including exact replicate oracles."""

import numpy as np
import pytest

from govgram.inference import (
    COUNTS_COLUMNS,
    ENTROPY_COLUMNS,
    INSUFFICIENT_N,
    BootstrapResult,
    InferenceError,
    bootstrap_mean,
    delta_share,
    delta_share_table,
    derive_seed,
    summarize_feature,
)
from govgram.metrics import compute_repo_metrics


def test_bootstrap_constant_input_zero_width():
    res = bootstrap_mean([3.5] * 12, B=500, seed=1)
    assert res.mean == 3.5
    assert res.ci_low == 3.5 and res.ci_high == 3.5


def test_bootstrap_two_point_exact_replicate_distribution():
    # with values {0, 1} each replicate mean is Binomial(2, .5)/2:
    # P(0)=.25, P(.5)=.5, P(1)=.25, so the 2.5th percentile is 0 and the
    # 97.5th is 1 for any large B
    res = bootstrap_mean([0.0, 1.0], B=10_000, seed=7)
    assert res.mean == 0.5
    assert res.ci_low == 0.0
    assert res.ci_high == 1.0


def test_bootstrap_reproducible_and_seed_sensitive():
    rng = np.random.default_rng(3)
    values = rng.normal(0.09, 0.3, size=200)
    a = bootstrap_mean(values, B=2000, seed=42)
    b = bootstrap_mean(values, B=2000, seed=42)
    c = bootstrap_mean(values, B=2000, seed=43)
    assert (a.ci_low, a.ci_high) == (b.ci_low, b.ci_high)
    assert (a.ci_low, a.ci_high) != (c.ci_low, c.ci_high)


def test_bootstrap_planted_mean_excludes_zero():
    rng = np.random.default_rng(11)
    values = rng.normal(0.09, 0.3, size=200)
    res = bootstrap_mean(values, B=10_000, seed=17)
    assert res.ci_low <= res.mean <= res.ci_high
    assert res.ci_low > 0.0  # planted effect of .09 at n=200 clears zero


def test_bootstrap_monotone_alpha_nesting():
    rng = np.random.default_rng(23)
    values = rng.normal(0, 1, size=60)
    wide = bootstrap_mean(values, B=4000, alpha=0.01, seed=5)
    narrow = bootstrap_mean(values, B=4000, alpha=0.05, seed=5)
    assert wide.ci_low <= narrow.ci_low
    assert wide.ci_high >= narrow.ci_high


def test_bootstrap_equal_weighting_duplication_invariance():
    values = [0.1, 0.4, 0.9, 0.2]
    base = bootstrap_mean(values, B=1000, seed=2)
    tripled = bootstrap_mean(values * 3, B=1000, seed=2)
    assert tripled.mean == pytest.approx(base.mean, abs=1e-12)
    width_base = base.ci_high - base.ci_low
    width_tripled = tripled.ci_high - tripled.ci_low
    assert width_tripled <= width_base + 1e-12


def test_bootstrap_empty_is_an_error():
    with pytest.raises(InferenceError):
        bootstrap_mean([], B=100, seed=0)


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(17, "roles/delta_K") == derive_seed(17, "roles/delta_K")
    assert derive_seed(17, "roles/delta_K") != derive_seed(17, "actions/delta_K")
    assert derive_seed(17, "roles/delta_K") != derive_seed(18, "roles/delta_K")


# ---------------------------------------------------------------- delta share


def test_delta_share_no_change():
    pairs = [({"a": 0.5, "b": 0.5}, {"a": 0.5, "b": 0.5})] * 6
    row = delta_share(pairs, "a", feature="roles", B=400, seed=9)
    assert row.delta_pp == 0.0
    assert row.ci.ci_low == 0.0 and row.ci.ci_high == 0.0
    assert row.initial_share_pct == 50.0


def test_delta_share_symmetric_cancellation():
    pairs = [({"a": 0.5}, {"a": 1.0}), ({"a": 0.5}, {"a": 0.0})]
    row = delta_share(pairs, "a", feature="roles", B=4000, seed=9)
    assert row.delta_pp == 0.0
    assert row.ci.ci_low == -50.0 and row.ci.ci_high == 50.0


def test_delta_share_planted_shift_recovered():
    # 200 repos, category share moves from 10% to 11.15% on average
    rng = np.random.default_rng(31)
    pairs = []
    for _ in range(200):
        noise = rng.normal(0, 0.002)
        pairs.append(({"cat": 0.10}, {"cat": 0.10 + 0.0115 + noise}))
    row = delta_share(pairs, "cat", feature="roles", B=4000, seed=13)
    assert row.delta_pp == pytest.approx(1.15, abs=0.05)


def test_delta_share_unknown_category_is_an_error():
    with pytest.raises(InferenceError):
        delta_share([({}, {})], "zz", feature="roles", categories=("a", "b"))


def test_delta_share_table_sums_to_zero_and_sorted():
    rng = np.random.default_rng(41)
    cats = ("a", "b", "c")
    pairs_by_repo = {}
    for r in range(25):
        pi = rng.dirichlet(np.ones(3))
        pl = rng.dirichlet(np.ones(3))
        pairs_by_repo[f"repo{r:02d}"] = (dict(zip(cats, pi)), dict(zip(cats, pl)))
    rows = delta_share_table("roles", pairs_by_repo, cats, B=500, seed=3)
    assert sum(r.delta_pp for r in rows) == pytest.approx(0.0, abs=1e-6)
    assert sum(r.initial_share_pct for r in rows) == pytest.approx(100.0, abs=1e-6)
    assert sum(r.latest_share_pct for r in rows) == pytest.approx(100.0, abs=1e-6)
    magnitudes = [abs(r.delta_pp) for r in rows]
    assert magnitudes == sorted(magnitudes, reverse=True)


def test_delta_share_table_input_order_independence():
    cats = ("a", "b")
    pairs = {
        "r2": ({"a": 0.4, "b": 0.6}, {"a": 0.5, "b": 0.5}),
        "r1": ({"a": 0.7, "b": 0.3}, {"a": 0.6, "b": 0.4}),
    }
    reordered = {k: pairs[k] for k in ("r1", "r2")}
    rows_a = delta_share_table("roles", pairs, cats, B=300, seed=8)
    rows_b = delta_share_table("roles", reordered, cats, B=300, seed=8)
    assert rows_a == rows_b


# ---------------------------------------------------------------- summaries


def _toy_metrics(n_repos=8, seed=0):
    rng = np.random.default_rng(seed)
    rows = []
    for r in range(n_repos):
        initial = [f"c{i}" for i in rng.integers(0, 4, size=10)]
        latest = [f"c{i}" for i in rng.integers(0, 5, size=12)]
        rows.append(compute_repo_metrics(f"repo{r:02d}", initial, latest, "roles", seed=17))
    return rows


def test_summarize_feature_column_structure():
    counts_row, entropy_row = summarize_feature(_toy_metrics(), "roles", B=300, seed=17)
    assert tuple(counts_row.keys()) == COUNTS_COLUMNS
    assert tuple(entropy_row.keys()) == ENTROPY_COLUMNS
    assert counts_row["feature"] == "roles"
    assert counts_row["n"] == "8"


def test_summarize_feature_insufficient_n_marker():
    rows = _toy_metrics(n_repos=1)
    counts_row, entropy_row = summarize_feature(rows, "roles", B=300, seed=17)
    assert counts_row["delta_K_ci"] == INSUFFICIENT_N
    assert entropy_row["jsd_ci"] == INSUFFICIENT_N
    assert counts_row["delta_K_mean"] != ""  # point estimate still reported


def test_summarize_feature_order_independence():
    rows = _toy_metrics()
    a = summarize_feature(rows, "roles", B=300, seed=17)
    b = summarize_feature(list(reversed(rows)), "roles", B=300, seed=17)
    assert a == b


def test_bootstrap_result_reproducible_from_fields():
    values = [0.2, 0.5, 0.9, 0.1, 0.3]
    res = bootstrap_mean(values, B=777, alpha=0.1, seed=123, estimand="x")
    again = bootstrap_mean(values, B=res.B, alpha=res.alpha, seed=res.seed, estimand="x")
    assert isinstance(res, BootstrapResult)
    assert (res.ci_low, res.ci_high, res.mean) == (again.ci_low, again.ci_high, again.mean)
