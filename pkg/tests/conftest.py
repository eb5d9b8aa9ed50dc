"""Shared fixtures: scratch git repositories with controlled commit dates."""

import subprocess
from pathlib import Path

import pytest

GIT_ENV = {
    "GIT_AUTHOR_NAME": "Fixture Author",
    "GIT_AUTHOR_EMAIL": "fixture@example.org",
    "GIT_COMMITTER_NAME": "Fixture Author",
    "GIT_COMMITTER_EMAIL": "fixture@example.org",
}


def git(repo: Path, *args: str, date: str | None = None) -> str:
    import os

    env = dict(os.environ)
    env.update(GIT_ENV)
    if date is not None:
        env["GIT_AUTHOR_DATE"] = date
        env["GIT_COMMITTER_DATE"] = date
    proc = subprocess.run(
        ["git", "-C", str(repo), *args], capture_output=True, text=True, env=env, check=True
    )
    return proc.stdout


class RepoBuilder:
    """Builds a scratch git repository with precisely dated commits."""

    def __init__(self, root: Path):
        self.root = root
        root.mkdir(parents=True, exist_ok=True)
        git(root, "init", "-q")

    def commit(self, filename: str, content: str | bytes, date: str, message: str = "update") -> str:
        path = self.root / filename
        path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(content, bytes):
            path.write_bytes(content)
        else:
            path.write_text(content, encoding="utf-8")
        git(self.root, "add", filename)
        git(self.root, "commit", "-q", "-m", message, "--allow-empty", date=date)
        return git(self.root, "rev-parse", "HEAD").strip()

    def write_untracked(self, filename: str, content: str) -> None:
        (self.root / filename).write_text(content, encoding="utf-8")


@pytest.fixture
def repo_builder(tmp_path):
    def build(name: str = "repo") -> RepoBuilder:
        return RepoBuilder(tmp_path / name)

    return build
