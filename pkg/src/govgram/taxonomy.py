"""Closed governance taxonomies and lexicon-driven labeling.

Twenty role categories and seven action categories form the fixed
label spaces; deontics carry a strength triple and a binary
enabling/restricting polarity.  Surface-to-category mappings live in
versioned tab-separated lexicon files shipped with the package
(``govgram/lexicons``), so the manual normalization step is
reproducible and auditable.  Matching is case-insensitive and
longest-match-first, with ties broken by file order.

Also provides the double-coding reliability measures (percent
agreement and Cohen's kappa) used to audit lexicon quality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

ROLE_CATEGORIES = (
    "all_project",
    "contributors",
    "maintainers",
    "all_community",
    "core_team",
    "technical_committee",
    "subcommittee",
    "the_project",
    "ecosystem",
    "oversight",
    "meeting_makers",
    "steering",
    "misc",
    "outside",
    "candidate",
    "project_lead",
    "reviewers",
    "chairs",
    "respected_members",
    "github",
)

ACTION_CATEGORIES = (
    "aggregation",
    "position",
    "information",
    "choice",
    "constitutive",
    "authority",
    "payoff",
)

DEONTIC_STRENGTHS = ("permissive", "advisory", "obligatory")
DEONTIC_POLARITIES = ("enabling", "restricting")

_COLLECTIVE_HEADS = frozenset(
    {
        "committee",
        "committees",
        "team",
        "teams",
        "board",
        "boards",
        "group",
        "groups",
        "community",
        "communities",
        "council",
        "councils",
        "body",
        "bodies",
        "organization",
        "foundation",
        "project",
        "membership",
        "staff",
        "everyone",
        "anyone",
        "anybody",
        "everybody",
    }
)
_NON_PLURAL_S = frozenset(
    {
        "process",
        "access",
        "status",
        "basis",
        "consensus",
        "address",
        "business",
        "progress",
        "analysis",
        "thesis",
        "this",
        "is",
        "its",
        "was",
        "has",
        "does",
        "across",
        "previous",
        "serious",
        "various",
        "unless",
        "always",
        "plus",
        "less",
    }
)
_PERSON_SUFFIXES = ("er", "ers", "or", "ors", "ian", "ians", "ist", "ists", "ee", "ees")


class LexiconError(ValueError):
    """Raised for malformed lexicon files or unknown categories."""


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    category: str
    context_rules: tuple[tuple[str, str], ...] = ()
    order: int = 0


class Lexicon:
    """Ordered surface-to-category table with longest-match lookup."""

    def __init__(self, entries: Iterable[LexiconEntry], categories: Sequence[str] | None = None):
        self.entries = list(entries)
        if categories is not None:
            bad = {e.category for e in self.entries} - set(categories)
            bad |= {
                cat for e in self.entries for _, cat in e.context_rules if cat not in categories
            }
            if bad:
                raise LexiconError(f"unknown categories in lexicon: {sorted(bad)}")
        # longest surface first; file order breaks ties
        self._ranked = sorted(self.entries, key=lambda e: (-len(e.surface), e.order))
        self._patterns = [
            (re.compile(r"\b" + re.escape(e.surface) + r"\b", re.IGNORECASE), e)
            for e in self._ranked
        ]

    @classmethod
    def from_file(cls, path: str | Path, categories: Sequence[str] | None = None) -> "Lexicon":
        """Parse ``surface<TAB>category[<TAB>keyword=category ...]`` lines."""
        entries = []
        for order, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise LexiconError(f"{path}: expected surface<TAB>category, got {line!r}")
            surface, category = parts[0].strip().lower(), parts[1].strip()
            rules = []
            for extra in parts[2:]:
                if "=" not in extra:
                    raise LexiconError(f"{path}: bad context rule {extra!r}")
                keyword, cat = extra.split("=", 1)
                rules.append((keyword.strip().lower(), cat.strip()))
            entries.append(LexiconEntry(surface, category, tuple(rules), order))
        return cls(entries, categories)

    def match(self, text: str) -> LexiconEntry | None:
        """Longest entry found anywhere in ``text`` (word-bounded)."""
        for pattern, entry in self._patterns:
            if pattern.search(text):
                return entry
        return None

    def exact(self, surface: str) -> LexiconEntry | None:
        key = surface.strip().lower()
        for entry in self._ranked:
            if entry.surface == key:
                return entry
        return None

    def rightmost_match(self, text: str) -> tuple[int, int, LexiconEntry] | None:
        """Rightmost occurrence of any entry; longest wins at equal start."""
        best: tuple[int, int, LexiconEntry] | None = None
        for pattern, entry in self._patterns:
            for m in pattern.finditer(text):
                if best is None or m.start() > best[0] or (m.start() == best[0] and m.end() > best[1]):
                    best = (m.start(), m.end(), entry)
        return best


def _default_lexicon_path(name: str) -> Path:
    return Path(str(resources.files("govgram").joinpath("lexicons", name)))


def load_role_lexicon(directory: str | Path | None = None) -> Lexicon:
    path = Path(directory, "roles.tsv") if directory else _default_lexicon_path("roles.tsv")
    return Lexicon.from_file(path, ROLE_CATEGORIES)


def load_action_lexicon(directory: str | Path | None = None) -> Lexicon:
    path = Path(directory, "actions.tsv") if directory else _default_lexicon_path("actions.tsv")
    return Lexicon.from_file(path, ACTION_CATEGORIES)


def load_verb_set(directory: str | Path | None = None) -> frozenset[str]:
    path = Path(directory, "verbs.txt") if directory else _default_lexicon_path("verbs.txt")
    verbs = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            verbs.add(line)
    return frozenset(verbs)


# --------------------------------------------------------------- agent test


def looks_like_agent(phrase: str, role_lexicon: Lexicon | None = None, sentence_initial: bool = True) -> bool:
    """Whether a subject phrase denotes a kind of agent.

    True when the phrase hits the role lexicon, its head noun is plural
    or collective or carries a person suffix, or it contains a proper
    noun that is not explained by sentence-initial capitalization.
    """
    words = re.findall(r"[A-Za-z][A-Za-z'’\-]*", phrase)
    if not words:
        return False
    if role_lexicon is not None and role_lexicon.match(phrase):
        return True
    head = words[-1].lower()
    if head in _COLLECTIVE_HEADS:
        return True
    if head.endswith("s") and head not in _NON_PLURAL_S and len(head) > 3:
        return True
    if (
        len(head) > 4
        and head.endswith(_PERSON_SUFFIXES)
        and head not in {"other", "former", "latter", "under", "over", "never", "whether", "either", "neither"}
    ):
        return True
    for i, word in enumerate(words):
        if word[0].isupper() and (i > 0 or not sentence_initial):
            return True
    return False


# --------------------------------------------------------------- labeling


def normalize_role(role_text: str, lexicon: Lexicon) -> str | None:
    """Longest-match role category; agent phrases off-lexicon go to misc."""
    entry = lexicon.match(role_text)
    if entry is not None:
        return entry.category
    if looks_like_agent(role_text, role_lexicon=None):
        return "misc"
    return None


def categorize_action(action_lemma: str, sentence_context: str, lexicon: Lexicon) -> str | None:
    """Lexicon category for a verb lemma, context keywords first."""
    entry = lexicon.exact(action_lemma)
    if entry is None:
        return None
    context = sentence_context.lower()
    for keyword, category in entry.context_rules:
        if keyword in context:
            return category
    return entry.category


def deontic_binary(deontic) -> str:
    """Project a deontic onto the enabling/restricting dichotomy."""
    return deontic.polarity


@dataclass(frozen=True)
class LabeledStatement:
    """A parsed statement plus its taxonomy category assignments."""

    statement: object
    role_category: str | None = None
    action_category: str | None = None
    deontic_strength: str | None = None
    deontic_polarity: str | None = None


def label_statement(
    statement,
    role_lexicon: Lexicon,
    action_lexicon: Lexicon,
    sentence_text: str = "",
) -> LabeledStatement:
    """Assign closed-set categories to a statement's present components.

    A category is assigned only where the matching component exists; the
    emitted categories are asserted against the closed sets.
    """
    role_cat = normalize_role(statement.role_text, role_lexicon) if statement.role_text else None
    action_cat = (
        categorize_action(statement.action_lemma, sentence_text, action_lexicon)
        if statement.action_lemma
        else None
    )
    strength = polarity = None
    if statement.deontic is not None:
        strength = statement.deontic.strength
        polarity = deontic_binary(statement.deontic)
    if role_cat is not None and role_cat not in ROLE_CATEGORIES:
        raise LexiconError(f"role category {role_cat!r} outside the closed set")
    if action_cat is not None and action_cat not in ACTION_CATEGORIES:
        raise LexiconError(f"action category {action_cat!r} outside the closed set")
    if strength is not None and strength not in DEONTIC_STRENGTHS:
        raise LexiconError(f"deontic strength {strength!r} outside the closed set")
    if polarity is not None and polarity not in DEONTIC_POLARITIES:
        raise LexiconError(f"deontic polarity {polarity!r} outside the closed set")
    return LabeledStatement(
        statement=statement,
        role_category=role_cat,
        action_category=action_cat,
        deontic_strength=strength,
        deontic_polarity=polarity,
    )


# --------------------------------------------------------------- reliability


def percent_agreement(labels_a: Sequence[str], labels_b: Sequence[str]) -> float:
    if len(labels_a) != len(labels_b):
        raise ValueError("coder label lists differ in length")
    if not labels_a:
        raise ValueError("no items to compare")
    agree = sum(1 for a, b in zip(labels_a, labels_b) if a == b)
    return agree / len(labels_a)


def cohens_kappa(labels_a: Sequence[str], labels_b: Sequence[str]) -> float:
    """Chance-corrected agreement over the observed label set."""
    if len(labels_a) != len(labels_b):
        raise ValueError("coder label lists differ in length")
    n = len(labels_a)
    if n == 0:
        raise ValueError("no items to compare")
    p_o = percent_agreement(labels_a, labels_b)
    labels = sorted(set(labels_a) | set(labels_b))
    p_e = 0.0
    for lab in labels:
        p_e += (labels_a.count(lab) / n) * (labels_b.count(lab) / n)
    if p_e >= 1.0:
        return 1.0 if p_o == 1.0 else 0.0
    return (p_o - p_e) / (1.0 - p_e)
