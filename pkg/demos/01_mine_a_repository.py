"""Mine the governance history of a git repository.

Builds a throwaway repository with three dated versions of a
GOVERNANCE.md file, then discovers the file, recovers its version
history, and pairs the earliest and latest valid snapshots.
"""

import os
import subprocess
import tempfile
from pathlib import Path

from govgram import discover_governance_files, pair_snapshots, recover_history
from govgram.corpus_ingest import pair_record

ENV = {
    **os.environ,
    "GIT_AUTHOR_NAME": "Demo",
    "GIT_AUTHOR_EMAIL": "demo@example.org",
    "GIT_COMMITTER_NAME": "Demo",
    "GIT_COMMITTER_EMAIL": "demo@example.org",
}

VERSIONS = [
    ("2014-03-26T10:00:00 +0000", ""),  # the 0-byte default: not a constitution yet
    (
        "2016-08-01T09:00:00 +0000",
        "# Governance\n\nThe founder decides everything.\n",
    ),
    (
        "2022-05-18T15:00:00 +0000",
        "# Governance\n\nMaintainers review and merge patches. "
        "The steering committee must approve breaking changes. "
        "Contributors may propose amendments.\n",
    ),
]


def git(repo, *args, date=None):
    env = dict(ENV)
    if date:
        env["GIT_AUTHOR_DATE"] = env["GIT_COMMITTER_DATE"] = date
    subprocess.run(["git", "-C", str(repo), *args], check=True, env=env, capture_output=True)


with tempfile.TemporaryDirectory() as tmp:
    repo = Path(tmp) / "demo-project"
    repo.mkdir()
    git(repo, "init", "-q")
    for date, text in VERSIONS:
        (repo / "GOVERNANCE.md").write_text(text, encoding="utf-8")
        git(repo, "add", "GOVERNANCE.md")
        git(repo, "commit", "-q", "-m", "update governance", "--allow-empty", date=date)

    refs = discover_governance_files(repo)
    print("discovered:", [(r.path, r.filename_pattern) for r in refs])

    history = recover_history(repo, refs[0])
    for entry in history:
        print(f"  {entry.commit_time:%Y-%m-%d}  valid={entry.valid}  {len(entry.text):4d} bytes")

    pair = pair_snapshots(history, repo_id="demo-project")
    print(f"\npaired: gap_days={pair.gap_days} across_day={pair.across_day}")
    print("initial text:", pair.initial_text.splitlines()[2])
    print("latest text:", pair.latest_text.splitlines()[2][:60], "...")

    record = pair_record(pair)
    print("\ncorpus record keys:", sorted(record))
