"""Markup normalization, sentence segmentation, and pronoun substitution.

Raw governance text (markdown, reST, or plain) is cleaned into blocks:
badges and images are removed, pipe tables become bullet lists, heading
markers are stripped after counting, and emphasis/code/link markup is
stripped with link text retained.  Blocks are then segmented into
sentences with a splitter that treats every list item as a sentence,
and subject pronouns are replaced by the nearest preceding role phrase,
with every edit recorded reversibly.

Spans are tracked at two levels: each block maps to the span of raw
text it came from (``offset_map``), and each sentence records its span
inside the normalized text (the blocks joined by blank lines).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

BLOCK_SEPARATOR = "\n\n"

_FENCE = re.compile(r"^\s*(```|~~~)")
_TABLE_ROW = re.compile(r"^\s*\|.*\|\s*$")
_TABLE_RULE_CELL = re.compile(r"^:?-{3,}:?$")
_ATX_HEADING = re.compile(r"^(#{1,6})\s+(.*?)\s*#*\s*$")
_SETEXT_UNDERLINE = re.compile(r"^(={3,}|-{3,})\s*$")
_THEMATIC_BREAK = re.compile(r"^\s*([-*_])(\s*\1){2,}\s*$")
_LIST_MARKER = re.compile(r"^(\s*)(?:[-*+]|\d+[.)])\s+")
_LIST_MARKER_ML = re.compile(r"^(\s*)(?:[-*+]|\d+[.)])\s+", re.MULTILINE)
_BLOCKQUOTE = re.compile(r"^(\s*>\s?)+")

_BADGE_LINK = re.compile(r"\[!\[[^\]]*\]\([^)]*\)\]\([^)]*\)")
_IMAGE = re.compile(r"!\[[^\]]*\]\([^)]*\)")
_HTML_IMG = re.compile(r"<img\b[^>]*/?>", re.IGNORECASE)
_HTML_TAG = re.compile(r"</?(?:a|b|i|em|strong|code|br|p|div|span|sub|sup|details|summary)\b[^>]*>", re.IGNORECASE)
_LINK = re.compile(r"\[([^\]]*)\]\([^)]*\)")
_REF_LINK = re.compile(r"\[([^\]]+)\]\[[^\]]*\]")
_AUTOLINK = re.compile(r"<(https?://[^>\s]+)>")
_BOLD = re.compile(r"\*\*(.+?)\*\*|__(.+?)__")
_ITALIC = re.compile(r"\*([^*\n]+)\*|\b_([^_\n]+)_\b")
_INLINE_CODE = re.compile(r"`([^`]*)`")

SENTENCE_BREAK = re.compile(r"([.!?])(\s+)(?=[\"'(]?[A-Z0-9])")
ABBREVIATIONS = frozenset({"e.g", "i.e", "vs", "etc", "cf", "al"})

SUBJECT_PRONOUNS = frozenset({"they", "he", "she", "it"})
_PRONOUN_AT_START = re.compile(r"^[\s\"'(]*([A-Za-z]+)")
_EXPLETIVE_IT = re.compile(
    r"^it\s*(?:'s|’s|\s+is|\s+was|\s+will\s+be|\s+would\s+be|\s+may\s+be|\s+might\s+be)\s+"
    r"(?:\w+ly\s+)?(\w+)",
    re.IGNORECASE,
)
_EXPLETIVE_ADJECTIVES = frozenset(
    {
        "important",
        "necessary",
        "possible",
        "likely",
        "unlikely",
        "clear",
        "essential",
        "critical",
        "advisable",
        "best",
        "better",
        "common",
        "customary",
        "acceptable",
        "unacceptable",
        "appropriate",
        "inappropriate",
        "mandatory",
        "optional",
        "unclear",
        "worth",
    }
)
PRONOUN_LOOKBACK_SENTENCES = 2


@dataclass(frozen=True)
class Substitution:
    """One reversible pronoun replacement inside a sentence."""

    span: tuple[int, int]  # span of the replacement in the substituted text
    original: str
    replacement: str


@dataclass
class Sentence:
    text: str
    block_index: int
    char_span: tuple[int, int]  # span of the pre-substitution text in normalized text
    pronoun_substitutions: list[Substitution] = field(default_factory=list)


@dataclass
class NormalizedDoc:
    repo_id: str
    snapshot: str
    blocks: list[str]
    sentences: list[Sentence]
    section_count: int
    offset_map: list[tuple[tuple[int, int], tuple[int, int]]]

    @property
    def normalized_text(self) -> str:
        return BLOCK_SEPARATOR.join(self.blocks)


def undo_substitutions(sentence: Sentence) -> str:
    """Reverse all recorded substitutions, restoring the segmented text."""
    text = sentence.text
    for sub in sorted(sentence.pronoun_substitutions, key=lambda s: s.span[0], reverse=True):
        start, end = sub.span
        text = text[:start] + sub.original + text[end:]
    return text


# --------------------------------------------------------------- markup


def _strip_inline(line: str) -> str:
    line = _BADGE_LINK.sub("", line)
    line = _IMAGE.sub("", line)
    line = _HTML_IMG.sub("", line)
    line = _HTML_TAG.sub("", line)
    line = _REF_LINK.sub(r"\1", line)
    line = _LINK.sub(r"\1", line)
    line = _AUTOLINK.sub(r"\1", line)
    line = _BOLD.sub(lambda m: m.group(1) or m.group(2) or "", line)
    line = _ITALIC.sub(lambda m: m.group(1) or m.group(2) or "", line)
    line = _INLINE_CODE.sub(r"\1", line)
    return line.rstrip()


def _split_table_cells(line: str) -> list[str]:
    return [c.strip() for c in line.strip().strip("|").split("|")]


def normalize_markup(raw: str, repo_id: str = "", snapshot: str = "") -> NormalizedDoc:
    """Clean raw markup into text blocks plus a heading count.

    Unrecognized markup passes through as plain text.  The result is
    stable under re-normalization of its own block text.
    """
    # lines annotated with their raw spans
    lines: list[tuple[str, int, int]] = []
    pos = 0
    for rawline in raw.splitlines(keepends=True):
        stripped = rawline.rstrip("\r\n")
        lines.append((stripped, pos, pos + len(stripped)))
        pos += len(rawline)

    section_count = 0
    out: list[tuple[str, int, int]] = []  # (text, raw_start, raw_end); "" marks a break
    in_fence = False
    i = 0
    while i < len(lines):
        text, start, end = lines[i]

        if _FENCE.match(text):
            in_fence = not in_fence
            i += 1
            continue
        if in_fence:
            out.append((text, start, end))
            i += 1
            continue

        if _TABLE_ROW.match(text):
            run = []
            while i < len(lines) and _TABLE_ROW.match(lines[i][0]):
                run.append(lines[i])
                i += 1
            rows = [(_split_table_cells(t), s, e) for t, s, e in run]
            if len(rows) >= 2 and all(_TABLE_RULE_CELL.match(c) for c in rows[1][0] if c):
                rows = rows[2:]  # drop header and rule rows
            for cells, s, e in rows:
                joined = ": ".join(c for c in cells if c)
                if joined:
                    out.append((f"- {joined}", s, e))
            continue

        m = _ATX_HEADING.match(text)
        if m:
            section_count += 1
            heading = _strip_inline(m.group(2)).strip()
            if heading:
                out.append((heading, start, end))
            i += 1
            continue

        if _SETEXT_UNDERLINE.match(text.strip()) and out and out[-1][0].strip() and not _LIST_MARKER.match(out[-1][0]):
            section_count += 1
            i += 1
            continue

        if _THEMATIC_BREAK.match(text):
            out.append(("", start, end))
            i += 1
            continue

        text = _BLOCKQUOTE.sub("", text)
        cleaned = _strip_inline(text)
        if cleaned.strip() == "" and text.strip() != "":
            # the line held only removed constructs (badge on its own line)
            i += 1
            continue
        marker = _LIST_MARKER.match(cleaned)
        if marker:
            body = cleaned[marker.end():].strip()
            cleaned = f"- {body}" if body else ""
        out.append((cleaned, start, end))
        i += 1

    blocks: list[str] = []
    offset_map: list[tuple[tuple[int, int], tuple[int, int]]] = []
    norm_pos = 0
    current: list[tuple[str, int, int]] = []

    def flush() -> None:
        nonlocal norm_pos, current
        if not current:
            return
        block_text = "\n".join(t for t, _, _ in current)
        if blocks:
            norm_pos += len(BLOCK_SEPARATOR)
        blocks.append(block_text)
        offset_map.append(
            ((norm_pos, norm_pos + len(block_text)), (current[0][1], current[-1][2]))
        )
        norm_pos += len(block_text)
        current = []

    for text, start, end in out:
        if text.strip() == "":
            flush()
        else:
            current.append((text, start, end))
    flush()

    return NormalizedDoc(
        repo_id=repo_id,
        snapshot=snapshot,
        blocks=blocks,
        sentences=[],
        section_count=section_count,
        offset_map=offset_map,
    )


# --------------------------------------------------------------- segmentation


def _split_terminal(text: str, base: int) -> list[tuple[int, int]]:
    """Spans of sentences within ``text`` split at terminal punctuation."""
    spans = []
    start = 0
    for m in SENTENCE_BREAK.finditer(text):
        word = text[: m.end(1)].rsplit(None, 1)[-1] if text[: m.end(1)].strip() else ""
        word = word.rstrip(".!?").lstrip("(\"'").lower()
        if word in ABBREVIATIONS:
            continue
        spans.append((start, m.end(1)))
        start = m.end()
    if start < len(text):
        spans.append((start, len(text)))
    trimmed = []
    for s, e in spans:
        seg = text[s:e]
        lead = len(seg) - len(seg.lstrip())
        trail = len(seg) - len(seg.rstrip())
        if seg.strip():
            trimmed.append((base + s + lead, base + e - trail))
    return trimmed


def segment(doc: NormalizedDoc) -> NormalizedDoc:
    """Populate sentences: one per list item, prose split on punctuation."""
    sentences: list[Sentence] = []
    for b, block in enumerate(doc.blocks):
        block_start = doc.offset_map[b][0][0] if b < len(doc.offset_map) else 0
        markers = list(_LIST_MARKER_ML.finditer(block))
        segments: list[tuple[int, int]] = []
        if markers:
            if markers[0].start() > 0:
                segments.append((0, markers[0].start()))
            for j, m in enumerate(markers):
                seg_end = markers[j + 1].start() if j + 1 < len(markers) else len(block)
                segments.append((m.end(), seg_end))
        else:
            segments.append((0, len(block)))
        for s, e in segments:
            for abs_s, abs_e in _split_terminal(block[s:e], block_start + s):
                rel_s, rel_e = abs_s - block_start, abs_e - block_start
                sentences.append(
                    Sentence(text=block[rel_s:rel_e], block_index=b, char_span=(abs_s, abs_e))
                )
    return replace(doc, sentences=sentences)


# --------------------------------------------------------------- pronouns


def _is_expletive_it(text: str) -> bool:
    m = _EXPLETIVE_IT.match(text)
    if not m:
        return False
    follower = m.group(1).lower()
    return follower in _EXPLETIVE_ADJECTIVES or follower.endswith("ed") or follower.endswith("en")


def _nearest_role_phrase(previous: list[Sentence], lexicon) -> str | None:
    for sent in reversed(previous[-PRONOUN_LOOKBACK_SENTENCES:]):
        match = lexicon.rightmost_match(sent.text)
        if match is not None:
            start, end, _ = match
            return sent.text[start:end]
    return None


def resolve_pronouns(doc: NormalizedDoc, role_lexicon) -> NormalizedDoc:
    """Replace sentence-initial subject pronouns with the nearest role.

    Searches backward at most two sentences inside the same block.
    Expletive "it" (copula plus adjective or participle) is never
    touched; unresolved pronouns are left as they are.  Every edit is
    recorded so it can be undone exactly.
    """
    by_block: dict[int, list[Sentence]] = {}
    resolved: list[Sentence] = []
    for sent in doc.sentences:
        prior = by_block.setdefault(sent.block_index, [])
        new_sent = sent
        m = _PRONOUN_AT_START.match(sent.text)
        if m and m.group(1).lower() in SUBJECT_PRONOUNS:
            pronoun = m.group(1)
            if not (pronoun.lower() == "it" and _is_expletive_it(sent.text)):
                antecedent = _nearest_role_phrase(prior, role_lexicon)
                if antecedent is not None:
                    if pronoun[0].isupper() and antecedent[0].islower():
                        antecedent = antecedent[0].upper() + antecedent[1:]
                    start, end = m.start(1), m.end(1)
                    new_text = sent.text[:start] + antecedent + sent.text[end:]
                    sub = Substitution(
                        span=(start, start + len(antecedent)),
                        original=pronoun,
                        replacement=antecedent,
                    )
                    new_sent = replace(
                        sent, text=new_text, pronoun_substitutions=sent.pronoun_substitutions + [sub]
                    )
        resolved.append(new_sent)
        by_block[sent.block_index].append(new_sent)
    return replace(doc, sentences=resolved)


def is_valid_snapshot_text(raw: str) -> bool:
    """A snapshot counts only if markup stripping leaves >= 1 sentence."""
    if not raw or not raw.strip():
        return False
    doc = normalize_markup(raw)
    if not doc.blocks:
        return False
    return len(segment(doc).sentences) > 0
