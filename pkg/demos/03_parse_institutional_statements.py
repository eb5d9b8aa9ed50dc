"""Parse sentences into institutional statements and label them.

Each sentence becomes Role / Deontic / Action / Object components with
anchor spans, then the role and action map onto the closed taxonomies
(20 role categories, 7 action categories) via the shipped lexicons.
"""

from govgram import (
    label_statement,
    load_action_lexicon,
    load_role_lexicon,
    parse_sentence,
)
from govgram.taxonomy import load_verb_set

SENTENCES = [
    "The technical committee must ratify the development roadmap.",
    "Contributors may not merge their own pull requests.",
    "Maintainers may merge small fixes and must document breaking changes.",
    "Members decide as a group on release schedules.",
    "This document describes the governance process.",
]

roles = load_role_lexicon()
actions = load_action_lexicon()
verbs = load_verb_set()

for text in SENTENCES:
    print(f"\n{text}")
    for st in parse_sentence(text, roles, verbs):
        labeled = label_statement(st, roles, actions, sentence_text=text)
        deontic = st.deontic.surface if st.deontic else "-"
        strength = st.deontic.strength if st.deontic else "-"
        print(
            f"  role={st.role_text or '-':28s} -> {labeled.role_category or '-':12s}"
            f" deontic={deontic:8s} ({strength})"
        )
        print(
            f"  action={st.action_lemma or '-':26s} -> {labeled.action_category or '-':12s}"
            f" object={st.object_text or '-'}"
        )
