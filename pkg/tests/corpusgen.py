"""Synthetic corpus generators with planted, exactly-known effects.

Documents are built from sentence templates the parser extracts with
full reliability, so the per-repository category counts (and therefore
the planted mean effects) are known by construction.  The planted-truth
corpus targets a mean action-count change of +0.6 and a mean role
entropy change of +0.09.
"""

import math

ROLE_SURFACE = {"maintainers": "Maintainers", "contributors": "Contributors"}
ACTION_VERB = {
    "choice": "merge",
    "authority": "approve",
    "information": "document",
    "position": "appoint",
}
OBJECTS = (
    "the pending patches",
    "new proposals",
    "the release notes",
    "the review queue",
    "incoming reports",
    "the quarterly plan",
    "open nominations",
    "the security fixes",
    "stale branches",
)
MODAL_CYCLE = ("must", "may", "should")

# statement plans: (role sequence, action sequence)
INITIAL_PLAN = (
    ["maintainers"] * 6 + ["contributors"] * 2,
    ["choice"] * 3 + ["authority"] * 3 + ["information"] * 2,
)
LATEST_PLANS = {
    # 9 statements, extra action category: dK = +1, roles 6/3: dH = +0.10702
    "grow-both": (
        ["maintainers"] * 6 + ["contributors"] * 3,
        ["choice"] * 3 + ["authority"] * 2 + ["information"] * 2 + ["position"] * 2,
    ),
    # 9 statements, same action categories: dK = 0, dH = +0.10702
    "grow-entropy": (
        ["maintainers"] * 6 + ["contributors"] * 3,
        ["choice"] * 4 + ["authority"] * 3 + ["information"] * 2,
    ),
    # unchanged: dK = 0, dH = 0
    "static": INITIAL_PLAN,
}


def entropy_of(counts):
    n = sum(counts)
    return -sum(c / n * math.log2(c / n) for c in counts if c)


def statements_text(roles, actions):
    """Render one sentence per (role, action) pair into paragraphs."""
    sentences = []
    for i, (role, action) in enumerate(zip(roles, actions)):
        modal = MODAL_CYCLE[i % len(MODAL_CYCLE)]
        obj = OBJECTS[i % len(OBJECTS)]
        sentences.append(f"{ROLE_SURFACE[role]} {modal} {ACTION_VERB[action]} {obj}.")
    paragraphs = [" ".join(sentences[i : i + 4]) for i in range(0, len(sentences), 4)]
    return "# Governance\n\n## Decision process\n\n" + "\n\n".join(paragraphs) + "\n"


def corpus_record(repo_id, initial_text, latest_text, across_day=True):
    gap = 522 if across_day else 0
    return {
        "repo_id": repo_id,
        "status": "paired",
        "initial": {"commit": "c0", "time": "2019-01-15T10:00:00Z", "text": initial_text},
        "latest": {
            "commit": "c1",
            "time": "2020-06-20T10:00:00Z" if across_day else "2019-01-15T18:00:00Z",
            "text": latest_text,
        },
        "gap_days": gap,
        "across_day": across_day,
        "n_commits": 2,
    }


def planted_corpus(n_repos=250):
    """250-repository corpus with planted action dK and role dH effects.

    Returns (records, truth) where truth holds the exact planted means
    computed from the generator's own statement plans.
    """
    n_grow_both = int(round(n_repos * 0.6))  # action dK = +1 on 60%
    # entropy grows on repos [0, n_entropy); 210/250 tuned so the mean
    # per-repo role dH lands within 2e-4 of +0.09
    n_entropy = int(round(n_repos * 0.84))

    records = []
    delta_k_sum = 0
    delta_h_sum = 0.0
    h_init = entropy_of([6, 2])
    for r in range(n_repos):
        if r < n_grow_both:
            plan = "grow-both"
        elif r < n_entropy:
            plan = "grow-entropy"
        else:
            plan = "static"
        latest = LATEST_PLANS[plan]
        if plan == "grow-both":
            delta_k_sum += 1
        role_counts = [latest[0].count("maintainers"), latest[0].count("contributors")]
        delta_h_sum += entropy_of(role_counts) - h_init
        records.append(
            corpus_record(
                f"repo{r:03d}",
                statements_text(*INITIAL_PLAN),
                statements_text(*latest),
            )
        )
    truth = {
        "delta_k_actions_mean": delta_k_sum / n_repos,
        "delta_h_roles_mean": delta_h_sum / n_repos,
        "target_delta_k": 0.6,
        "target_delta_h": 0.09,
        "n_repos": n_repos,
    }
    return records, truth


def screens_corpus():
    """Small corpus exercising the eligibility screens and day filters.

    Returns (records, expectations): two across-day repos with >= 5
    labeled statements, one within-day repo, and one repo below the
    five-statement screen on its initial side.
    """
    rich_initial = statements_text(*INITIAL_PLAN)
    rich_latest = statements_text(*LATEST_PLANS["grow-both"])
    thin = statements_text(["maintainers"] * 4, ["choice"] * 4)

    records = [
        corpus_record("across-a", rich_initial, rich_latest, across_day=True),
        corpus_record("across-b", rich_initial, rich_latest, across_day=True),
        corpus_record("within-c", rich_initial, rich_latest, across_day=False),
        corpus_record("thin-d", thin, rich_latest, across_day=True),
    ]
    expectations = {
        "n_pairs": 4,
        "n_across_day": 3,
        "h_eligible_repos": {"across-a", "across-b", "within-c"},
        "below_screen": "thin-d",
    }
    return records, expectations
