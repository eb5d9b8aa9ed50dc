"""Normalize governance markdown and segment it into sentences.

Shows badge removal, table-to-list conversion, heading counting,
list-aware sentence splitting, and reversible pronoun substitution.
"""

from govgram import load_role_lexicon, normalize_markup, resolve_pronouns, segment
from govgram.normalize import undo_substitutions

RAW = """\
# Project Governance

![build](https://ci.example/badge.svg)

## Roles

| Role | Duty |
|------|------|
| chair | convene meetings |
| secretary | record minutes |

Maintainers triage incoming issues. They may close duplicates
without discussion.

## Process

- submit a proposal
- gather feedback. Revise as needed.
- the steering committee votes
"""

doc = normalize_markup(RAW)
print(f"sections detected: {doc.section_count}")
print("blocks:")
for block in doc.blocks:
    print("  |", block.replace("\n", "\n  | "))

doc = segment(doc)
doc = resolve_pronouns(doc, load_role_lexicon())

print("\nsentences:")
for s in doc.sentences:
    marker = " *" if s.pronoun_substitutions else ""
    print(f"  [{s.block_index}] {s.text}{marker}")

substituted = [s for s in doc.sentences if s.pronoun_substitutions]
for s in substituted:
    sub = s.pronoun_substitutions[0]
    print(f"\nsubstitution: {sub.original!r} -> {sub.replacement!r} at {sub.span}")
    restored = undo_substitutions(s)
    original_span = doc.normalized_text[s.char_span[0] : s.char_span[1]]
    print("reversible:", restored == original_span)
