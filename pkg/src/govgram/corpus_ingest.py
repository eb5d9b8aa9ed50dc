"""Governance-file discovery, history recovery, and snapshot pairing.

Works against local git clones (working trees or bare repositories)
through the ``git`` binary.  Only root-level files matching the
governance filename patterns are considered.  For each repository the
earliest and latest valid versions of its governance view are paired;
repositories with fewer than two valid snapshots become exclusion
records instead.  A snapshot is valid when it is non-empty and still
contains at least one sentence after markup stripping.
"""

from __future__ import annotations

import logging
import re
import subprocess
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .normalize import is_valid_snapshot_text

log = logging.getLogger(__name__)

# (pattern id, regex); the whole set is replaceable via a patterns file
DEFAULT_PATTERNS: tuple[tuple[str, str], ...] = (
    ("governance-md", r"^governance([._-].*)?\.md$"),
    ("governance-markdown", r"^governance([._-].*)?\.markdown$"),
    ("governance-rst", r"^governance([._-].*)?\.rst$"),
    ("governance-txt", r"^governance([._-].*)?\.txt$"),
    ("governance", r"^governance$"),
)

STATUS_PAIRED = "paired"
STATUS_SINGLE = "single-snapshot"
STATUS_NONE = "no-valid-snapshot"


class IngestError(RuntimeError):
    """Raised when a repository cannot be read."""


@dataclass(frozen=True)
class GovernanceFileRef:
    repo_id: str
    path: str
    filename_pattern: str


@dataclass(frozen=True)
class HistoryEntry:
    commit_id: str
    commit_time: datetime  # UTC
    text: str
    valid: bool  # False for zero-byte contents
    path: str = ""


@dataclass(frozen=True)
class SnapshotPair:
    repo_id: str
    initial_text: str
    latest_text: str
    initial_commit: str
    latest_commit: str
    initial_commit_time: datetime
    latest_commit_time: datetime
    gap_days: int
    across_day: bool
    n_governance_commits: int


@dataclass(frozen=True)
class ExclusionRecord:
    repo_id: str
    reason: str  # single-snapshot | no-valid-snapshot
    n_governance_commits: int
    initial: HistoryEntry | None = None


def compile_patterns(patterns=None) -> list[tuple[str, re.Pattern]]:
    pairs = patterns if patterns is not None else DEFAULT_PATTERNS
    return [(pid, re.compile(rx, re.IGNORECASE)) for pid, rx in pairs]


def load_patterns_file(path: str | Path) -> list[tuple[str, str]]:
    """Pattern file: ``pattern_id<TAB>regex`` per line, ``#`` comments."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pid, _, rx = line.partition("\t")
        if not rx:
            raise IngestError(f"{path}: expected pattern_id<TAB>regex, got {line!r}")
        out.append((pid.strip(), rx.strip()))
    return out


def _git(repo_root: str | Path, *args: str) -> bytes:
    try:
        proc = subprocess.run(
            ["git", "-C", str(repo_root), *args], capture_output=True, check=False
        )
    except FileNotFoundError as exc:
        raise IngestError("git binary not found on PATH") from exc
    if proc.returncode != 0:
        raise subprocess.CalledProcessError(proc.returncode, proc.args, proc.stdout, proc.stderr)
    return proc.stdout


def _is_bare(repo_root: str | Path) -> bool:
    return _git(repo_root, "rev-parse", "--is-bare-repository").strip() == b"true"


def discover_governance_files(
    repo_root: str | Path, repo_id: str | None = None, patterns=None
) -> list[GovernanceFileRef]:
    """Root-level governance files of a repository, lexicographic order.

    Working trees are scanned on the filesystem (so untracked files
    appear); bare repositories fall back to the HEAD tree.
    """
    root = Path(repo_root)
    rid = repo_id if repo_id is not None else root.name
    compiled = compile_patterns(patterns)
    try:
        if not root.exists():
            raise IngestError(f"repository {rid}: path {root} does not exist")
        if _is_bare(root):
            listing = _git(root, "ls-tree", "--name-only", "HEAD").decode("utf-8", "replace")
            names = [n for n in listing.splitlines() if n]
        else:
            names = [p.name for p in root.iterdir() if p.is_file()]
    except (OSError, subprocess.CalledProcessError) as exc:
        raise IngestError(f"repository {rid} is unreadable: {exc}") from exc

    refs = []
    seen = set()
    for name in names:
        if name in seen:
            continue
        for pid, rx in compiled:
            if rx.match(name):
                refs.append(GovernanceFileRef(repo_id=rid, path=name, filename_pattern=pid))
                seen.add(name)
                break
    return sorted(refs, key=lambda r: r.path)


def recover_history(repo_root: str | Path, ref: GovernanceFileRef) -> list[HistoryEntry]:
    """All versions of the file, one per modifying commit, time-ascending.

    Zero-byte versions stay in the list flagged invalid; unreadable
    objects (including deletions) are skipped with a warning.
    """
    try:
        raw = _git(repo_root, "log", "--format=%H %ct", "--reverse", "--", ref.path)
    except subprocess.CalledProcessError as exc:
        log.warning("repository %s: git log failed for %s: %s", ref.repo_id, ref.path, exc)
        return []
    entries: list[HistoryEntry] = []
    for line in raw.decode("utf-8", "replace").splitlines():
        if not line.strip():
            continue
        commit_id, _, ts = line.partition(" ")
        when = datetime.fromtimestamp(int(ts), tz=timezone.utc)
        try:
            blob = _git(repo_root, "show", f"{commit_id}:{ref.path}")
        except subprocess.CalledProcessError:
            log.warning(
                "repository %s: commit %s has no readable %s, skipped",
                ref.repo_id, commit_id[:12], ref.path,
            )
            continue
        text = blob.decode("utf-8", "replace")
        entries.append(
            HistoryEntry(
                commit_id=commit_id,
                commit_time=when,
                text=text,
                valid=len(blob) > 0,
                path=ref.path,
            )
        )
    entries.sort(key=lambda e: e.commit_time)
    return entries


def compose_view(files: list[tuple[str, str]]) -> str:
    """Concatenate files byte-wise by path, dropping repeated paragraphs.

    Paragraphs that duplicate an earlier paragraph after whitespace
    normalization are removed, so shared boilerplate appears once.
    """
    seen: set[str] = set()
    kept: list[str] = []
    for _, text in sorted(files, key=lambda item: item[0]):
        for paragraph in re.split(r"\n\s*\n", text):
            if not paragraph.strip():
                continue
            key = " ".join(paragraph.split())
            if key in seen:
                continue
            seen.add(key)
            kept.append(paragraph.strip("\n"))
    return "\n\n".join(kept)


def _merge_composite(histories: list[list[HistoryEntry]]) -> list[HistoryEntry]:
    """Per-commit composite views across several governance files."""
    events: dict[str, datetime] = {}
    for history in histories:
        for entry in history:
            events.setdefault(entry.commit_id, entry.commit_time)
    merged = []
    for commit_id, when in sorted(events.items(), key=lambda kv: (kv[1], kv[0])):
        files = []
        for history in histories:
            state = None
            for entry in history:
                if entry.commit_time <= when:
                    state = entry
                else:
                    break
            if state is not None and state.text:
                files.append((state.path, state.text))
        text = compose_view(files)
        merged.append(
            HistoryEntry(
                commit_id=commit_id,
                commit_time=when,
                text=text,
                valid=len(text) > 0,
                path="<composite>",
            )
        )
    return merged


def pair_snapshots(
    history: list[HistoryEntry],
    composite_inputs: list[list[HistoryEntry]] | None = None,
    repo_id: str = "",
) -> SnapshotPair | ExclusionRecord:
    """Pair the earliest and latest valid snapshots of one repository.

    gap_days is the UTC calendar-day difference; pairs require two
    distinct commits with valid text, otherwise an exclusion record is
    returned (single-snapshot pairs keep their one snapshot for
    descriptive use).
    """
    if composite_inputs:
        history = _merge_composite([history, *composite_inputs])

    n_commits = len(history)
    valid = [e for e in history if e.valid and is_valid_snapshot_text(e.text)]
    if not valid:
        return ExclusionRecord(repo_id=repo_id, reason=STATUS_NONE, n_governance_commits=n_commits)
    initial, latest = valid[0], valid[-1]
    if initial.commit_id == latest.commit_id:
        return ExclusionRecord(
            repo_id=repo_id, reason=STATUS_SINGLE, n_governance_commits=n_commits, initial=initial
        )
    gap_days = (latest.commit_time.date() - initial.commit_time.date()).days
    return SnapshotPair(
        repo_id=repo_id,
        initial_text=initial.text,
        latest_text=latest.text,
        initial_commit=initial.commit_id,
        latest_commit=latest.commit_id,
        initial_commit_time=initial.commit_time,
        latest_commit_time=latest.commit_time,
        gap_days=gap_days,
        across_day=gap_days > 0,
        n_governance_commits=n_commits,
    )


def _rfc3339(when: datetime) -> str:
    return when.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def pair_record(result: SnapshotPair | ExclusionRecord) -> dict:
    """JSONL corpus record for a pairing result."""
    if isinstance(result, SnapshotPair):
        return {
            "repo_id": result.repo_id,
            "status": STATUS_PAIRED,
            "initial": {
                "commit": result.initial_commit,
                "time": _rfc3339(result.initial_commit_time),
                "text": result.initial_text,
            },
            "latest": {
                "commit": result.latest_commit,
                "time": _rfc3339(result.latest_commit_time),
                "text": result.latest_text,
            },
            "gap_days": result.gap_days,
            "across_day": result.across_day,
            "n_commits": result.n_governance_commits,
        }
    initial = None
    if result.initial is not None:
        initial = {
            "commit": result.initial.commit_id,
            "time": _rfc3339(result.initial.commit_time),
            "text": result.initial.text,
        }
    return {
        "repo_id": result.repo_id,
        "status": result.reason,
        "initial": initial,
        "latest": None,
        "gap_days": None,
        "across_day": None,
        "n_commits": result.n_governance_commits,
    }


def ingest_repository(
    repo_root: str | Path, repo_id: str | None = None, patterns=None
) -> dict:
    """Discover, recover, pair, and serialize one repository."""
    root = Path(repo_root)
    rid = repo_id if repo_id is not None else root.name
    refs = discover_governance_files(root, repo_id=rid, patterns=patterns)
    if not refs:
        return pair_record(
            ExclusionRecord(repo_id=rid, reason=STATUS_NONE, n_governance_commits=0)
        )
    histories = [recover_history(root, ref) for ref in refs]
    histories = [h for h in histories if h]
    if not histories:
        return pair_record(
            ExclusionRecord(repo_id=rid, reason=STATUS_NONE, n_governance_commits=0)
        )
    result = pair_snapshots(histories[0], composite_inputs=histories[1:] or None, repo_id=rid)
    return pair_record(result)
