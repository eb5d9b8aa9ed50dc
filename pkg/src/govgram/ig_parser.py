"""Deterministic institutional-statement parsing.

Each sentence is matched against the pattern
``[subject NP] [modal?] [verb] [object NP?]``: the subject noun phrase
is everything before the first verb group of the main clause, the
deontic is the first modal there, the action is the verb the modal
governs (or the first finite verb when no modal is present), and the
object is the noun phrase that follows.  A subject becomes a Role only
when it passes the agent test (role-lexicon hit, plural/collective or
person-suffixed head noun, or a mid-sentence proper noun).

Compound predicates ("may merge and must document") split into one
statement per verb group, sharing the subject; a bare second verb
inherits the first deontic.  Sentences that match nothing yield a
single all-absent statement, so no input is ever dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

from . import taxonomy

MODAL_STRENGTH = {
    "may": "permissive",
    "can": "permissive",
    "could": "permissive",
    "should": "advisory",
    "would": "advisory",
    "must": "obligatory",
    "shall": "obligatory",
    "will": "obligatory",
}
MODALS = frozenset(MODAL_STRENGTH)

# negated contractions expand to (modal, negated)
CONTRACTIONS = {
    "cannot": "can",
    "can't": "can",
    "won't": "will",
    "shouldn't": "should",
    "mustn't": "must",
    "shan't": "shall",
    "couldn't": "could",
    "wouldn't": "would",
}
NEGATORS = frozenset({"not", "never"})

SUBORDINATORS = frozenset(
    {"if", "when", "unless", "until", "while", "before", "after", "once", "whenever", "although", "though"}
)
DETERMINERS = frozenset(
    {
        "the", "a", "an", "this", "that", "these", "those", "all", "any", "each",
        "every", "such", "its", "their", "our", "his", "her", "your", "my",
        "some", "no", "both", "either", "neither",
    }
)
BE_FORMS = frozenset({"be", "been", "being", "is", "are", "was", "were", "am"})
HAVE_FORMS = frozenset({"have", "has", "had"})
DO_FORMS = frozenset({"do", "does", "did"})
AUXILIARIES = BE_FORMS | HAVE_FORMS | DO_FORMS
SKIPPABLE_ADVERBS = frozenset(
    {"also", "then", "first", "always", "only", "still", "already", "never", "not", "however", "therefore"}
)
# gerund-shaped nouns that must not be read as verbs
GERUND_NOUNS = frozenset(
    {
        "meeting", "meetings", "steering", "voting", "working", "standing",
        "founding", "funding", "onboarding", "wording", "understanding",
        "following", "existing", "outstanding", "governing",
    }
)
OBJECT_STOPPERS = frozenset(
    {
        "and", "or", "but", "nor", "to", "of", "by", "for", "with", "in", "on",
        "at", "from", "within", "into", "unless", "if", "when", "that", "which",
        "who", "whom", "whose", "as", "than", "per", "via", "under", "over",
        "during", "between", "about", "against", "without", "before", "after",
        "so", "because", "while", "until", "where", "through", "every", "each",
    }
)
# tokens that end a clause for the purpose of modal lookahead
CLAUSE_BOUNDARY = frozenset(
    {"and", "or", "but", "nor", "that", "which", "who", "whom", "if", "when",
     "unless", "while", "because", "until", "before", "after", "so", "then"}
)

IRREGULAR_VERBS = {
    "held": "hold", "chose": "choose", "chosen": "choose", "made": "make",
    "met": "meet", "gave": "give", "given": "give", "took": "take",
    "taken": "take", "kept": "keep", "led": "lead", "left": "leave",
    "sought": "seek", "brought": "bring", "built": "build", "sent": "send",
    "withdrew": "withdraw", "withdrawn": "withdraw", "drew": "draw",
    "drawn": "draw", "did": "do", "does": "do", "done": "do", "went": "go",
    "gone": "go", "saw": "see", "seen": "see", "won": "win", "paid": "pay",
    "said": "say", "wrote": "write", "written": "write", "found": "find",
    "upheld": "uphold", "oversaw": "oversee", "overseen": "oversee",
    "ran": "run", "became": "become", "begun": "begin", "began": "begin",
    "spoke": "speak", "spoken": "speak", "meant": "mean", "dealt": "deal",
    "felt": "feel", "got": "get", "gotten": "get", "had": "have",
    "has": "have", "was": "be", "were": "be", "been": "be", "being": "be",
    "is": "be", "are": "be", "am": "be", "stood": "stand",
    "understood": "understand", "came": "come", "knew": "know",
    "known": "know", "grew": "grow", "grown": "grow", "threw": "throw",
    "thrown": "throw", "forbade": "forbid", "forbidden": "forbid",
    "arose": "arise", "arisen": "arise", "fell": "fall", "fallen": "fall",
    "rose": "rise", "risen": "rise", "lost": "lose", "shown": "show",
    "showed": "show", "told": "tell", "thought": "think", "bound": "bind",
    "sat": "sit",
}

_TOKEN = re.compile(r"[A-Za-z][A-Za-z'’\-]*|\d+|[^\w\s]")
_DOUBLED = re.compile(r"([bcdfghklmnprstvz])\1$")


class Token(NamedTuple):
    text: str
    lower: str
    start: int
    end: int
    is_word: bool


@dataclass(frozen=True)
class DeonticType:
    """A canonicalized modal with prescriptive strength and polarity."""

    modal: str
    negated: bool
    strength: str
    polarity: str

    @property
    def surface(self) -> str:
        if not self.negated:
            return self.modal
        return "cannot" if self.modal == "can" else f"{self.modal} not"


@dataclass(frozen=True)
class InstitutionalStatement:
    sentence_ref: tuple | None
    role_text: str | None = None
    role_span: tuple[int, int] | None = None
    deontic: DeonticType | None = None
    deontic_span: tuple[int, int] | None = None
    action_lemma: str | None = None
    action_span: tuple[int, int] | None = None
    object_text: str | None = None


def tokenize(text: str) -> list[Token]:
    return [
        Token(m.group(), m.group().lower(), m.start(), m.end(), m.group()[0].isalpha())
        for m in _TOKEN.finditer(text)
    ]


def canonicalize_deontic(modal_surface: str, negated: bool) -> DeonticType | None:
    """Map a modal surface form onto the closed deontic set.

    Unknown modals yield None.  Polarity is restricting exactly when the
    modal is negated.
    """
    surface = modal_surface.strip().lower()
    if surface in CONTRACTIONS:
        surface, negated = CONTRACTIONS[surface], True
    if surface not in MODALS:
        return None
    return DeonticType(
        modal=surface,
        negated=negated,
        strength=MODAL_STRENGTH[surface],
        polarity="restricting" if negated else "enabling",
    )


@lru_cache(maxsize=1)
def _default_verbs() -> frozenset[str]:
    return taxonomy.load_verb_set()


def lemmatize_verb(surface: str, known_lemmas: frozenset[str] | None = None) -> str:
    """Strip inflectional suffixes, preferring stems from the verb inventory.

    Irregular forms come from a fixed table; unknown forms fall back to
    deterministic suffix rules and are returned unchanged when no rule
    applies.
    """
    known = known_lemmas if known_lemmas is not None else _default_verbs()
    w = surface.strip().lower()
    if w in IRREGULAR_VERBS:
        return IRREGULAR_VERBS[w]
    if w in known or len(w) < 4:
        return w

    def pick(candidates: list[str], default: str) -> str:
        for cand in candidates:
            if cand in known:
                return cand
        return default

    if w.endswith("ies"):
        return w[:-3] + "y"
    if w.endswith("ied"):
        return w[:-3] + "y"
    if w.endswith("es"):
        stem_es, stem_s = w[:-2], w[:-1]
        default = stem_es if stem_es.endswith(("s", "x", "z", "h", "o")) else stem_s
        return pick([stem_s, stem_es], default)
    if w.endswith("ed"):
        stem_d, stem_ed = w[:-1], w[:-2]
        undoubled = stem_ed[:-1] if _DOUBLED.search(stem_ed) else None
        default = undoubled or stem_ed
        return pick([cand for cand in (stem_d, stem_ed, undoubled) if cand], default)
    if w.endswith("ing") and len(w) > 5:
        stem = w[:-3]
        undoubled = stem[:-1] if _DOUBLED.search(stem) else None
        default = undoubled or stem
        return pick([cand for cand in (stem, stem + "e", undoubled) if cand], default)
    if w.endswith("s") and not w.endswith("ss"):
        return pick([w[:-1]], w[:-1])
    return w


def _is_verb_candidate(tokens: Sequence[Token], j: int, verbs: frozenset[str]) -> bool:
    tok = tokens[j]
    if not tok.is_word or tok.lower in GERUND_NOUNS:
        return False
    if j > 0 and tokens[j - 1].is_word and tokens[j - 1].lower in DETERMINERS:
        return False
    if tok.lower in AUXILIARIES or tok.lower in MODALS or tok.lower in CONTRACTIONS:
        return True
    if lemmatize_verb(tok.lower, verbs) not in verbs:
        return False
    # a plural-shaped noun directly before a base-form verb or modal is a
    # subject word ("pull requests require"), but a 3sg verb before a
    # plural object noun is not ("distributes funds")
    if tok.lower.endswith("s") and j + 1 < len(tokens):
        nxt = tokens[j + 1]
        if nxt.is_word and nxt.lower not in DETERMINERS and (
            nxt.lower in MODALS
            or (not nxt.lower.endswith("s") and lemmatize_verb(nxt.lower, verbs) in verbs)
        ):
            return False
    return True


def _main_clause_start(tokens: list[Token]) -> int:
    """Skip a leading comma-delimited subordinate clause."""
    if tokens and tokens[0].lower in SUBORDINATORS:
        for j, tok in enumerate(tokens):
            if tok.text == ",":
                return j + 1
    return 0


def _skip_adverbs(tokens: list[Token], j: int) -> int:
    while j < len(tokens) and tokens[j].is_word and (
        tokens[j].lower in SKIPPABLE_ADVERBS or (tokens[j].lower.endswith("ly") and len(tokens[j].lower) > 3)
    ):
        j += 1
    return j


def _find_verb_group(tokens: list[Token], start: int, verbs: frozenset[str]) -> int | None:
    first_verb = None
    for j in range(start, len(tokens)):
        tok = tokens[j]
        if tok.lower in MODALS or tok.lower in CONTRACTIONS:
            if first_verb is None:
                return j
            # a later modal outranks an earlier verb reading when only
            # plain NP words separate them ("the project lead can veto")
            between = tokens[first_verb:j]
            if all(t.is_word and t.lower not in CLAUSE_BOUNDARY for t in between):
                return j
            return first_verb
        if first_verb is None and _is_verb_candidate(tokens, j, verbs) and tok.lower not in NEGATORS:
            first_verb = j
    return first_verb


def _first_modal(tokens: list[Token], start: int, stop: int | None = None) -> int | None:
    stop = len(tokens) if stop is None else stop
    for j in range(start, stop):
        if tokens[j].lower in MODALS or tokens[j].lower in CONTRACTIONS:
            return j
    return None


def _strip_determiners(tokens: list[Token]) -> list[Token]:
    out = list(tokens)
    while out and out[0].lower in DETERMINERS:
        out = out[1:]
    return out


def _subject_phrase(tokens: list[Token], verb_index: int, clause_start: int) -> list[Token]:
    subject = []
    for tok in tokens[clause_start:verb_index]:
        if tok.text == ",":
            break
        if tok.is_word:
            subject.append(tok)
    return _strip_determiners(subject)


def _participle_like(tok: Token, verbs: frozenset[str]) -> bool:
    if not tok.is_word:
        return False
    if tok.lower in IRREGULAR_VERBS and tok.lower.endswith(("ed", "en", "wn", "ne", "ld")):
        return True
    return tok.lower.endswith(("ed", "en")) and lemmatize_verb(tok.lower, verbs) in verbs


def _action_token(tokens: list[Token], j: int, verbs: frozenset[str]) -> Token | None:
    """Resolve the governed verb starting at index j (aux chains included)."""
    if j >= len(tokens):
        return None
    tok = tokens[j]
    if tok.lower in BE_FORMS or tok.lower in HAVE_FORMS or tok.lower in DO_FORMS:
        k = _skip_adverbs(tokens, j + 1)
        if k < len(tokens) and tokens[k].lower in BE_FORMS:  # "must have been approved"
            k = _skip_adverbs(tokens, k + 1)
        if k < len(tokens) and (
            _participle_like(tokens[k], verbs)
            or (tok.lower in DO_FORMS and tokens[k].is_word and lemmatize_verb(tokens[k].lower, verbs) in verbs)
        ):
            return tokens[k]
        return tok
    return tok


def _object_phrase(tokens: list[Token], after: int) -> tuple[str | None, int]:
    """Head noun of the direct object after the verb; returns (head, end index)."""
    j = _skip_adverbs(tokens, after)
    collected: list[Token] = []
    while j < len(tokens):
        tok = tokens[j]
        if not tok.is_word or tok.lower in OBJECT_STOPPERS or tok.lower in MODALS:
            break
        if tok.lower.endswith("ly") and len(tok.lower) > 3:
            break
        if collected and tok.lower in DETERMINERS:
            break  # a mid-phrase determiner starts an adjunct or second NP
        collected.append(tok)
        j += 1
    collected = _strip_determiners(collected)
    if not collected:
        return None, after
    return collected[-1].text, j


def _parse_clause(
    tokens: list[Token],
    clause_start: int,
    text: str,
    subject: list[Token] | None,
    role_lexicon: taxonomy.Lexicon,
    verbs: frozenset[str],
    sentence_ref: tuple | None,
    inherited: tuple[DeonticType | None, tuple[int, int] | None],
) -> tuple[InstitutionalStatement | None, int]:
    verb_index = _find_verb_group(tokens, clause_start, verbs)
    if verb_index is None:
        return None, len(tokens)

    if subject is None:
        subject = _subject_phrase(tokens, verb_index, clause_start)

    deontic: DeonticType | None = None
    deontic_span: tuple[int, int] | None = None
    action_start = verb_index
    tok = tokens[verb_index]
    if tok.lower in MODALS or tok.lower in CONTRACTIONS:
        negated = tok.lower in CONTRACTIONS
        span_end = tok.end
        k = verb_index + 1
        if not negated and k < len(tokens) and tokens[k].lower in NEGATORS:
            negated = True
            span_end = tokens[k].end
            k += 1
        deontic = canonicalize_deontic(tok.lower, negated)
        deontic_span = (tok.start, span_end)
        action_start = _skip_adverbs(tokens, k)
    else:
        deontic, deontic_span = inherited

    action_tok = _action_token(tokens, action_start, verbs)
    action_lemma = action_span = None
    object_text = None
    next_index = action_start + 1
    if action_tok is not None and action_tok.is_word:
        action_lemma = lemmatize_verb(action_tok.lower, verbs)
        action_span = (action_tok.start, action_tok.end)
        tok_index = next(i for i, t in enumerate(tokens) if t.start == action_tok.start)
        if action_lemma == "be":
            next_index = tok_index + 1
        else:
            object_text, next_index = _object_phrase(tokens, tok_index + 1)

    role_text = role_span = None
    if subject:
        phrase = text[subject[0].start : subject[-1].end]
        sentence_initial = subject[0].start == 0
        if taxonomy.looks_like_agent(phrase, role_lexicon, sentence_initial=sentence_initial):
            role_text = phrase
            role_span = (subject[0].start, subject[-1].end)

    statement = InstitutionalStatement(
        sentence_ref=sentence_ref,
        role_text=role_text,
        role_span=role_span,
        deontic=deontic,
        deontic_span=deontic_span,
        action_lemma=action_lemma,
        action_span=action_span,
        object_text=object_text,
    )
    return statement, next_index


def parse_sentence(
    sentence,
    role_lexicon: taxonomy.Lexicon,
    verbs: frozenset[str] | None = None,
    sentence_ref: tuple | None = None,
) -> list[InstitutionalStatement]:
    """All simple institutional statements in one sentence (>= 1).

    Accepts a string or any object with a ``text`` attribute.  Compound
    predicates yield one statement per verb group, sharing the subject.
    """
    text = sentence if isinstance(sentence, str) else sentence.text
    verbs = verbs if verbs is not None else _default_verbs()
    tokens = tokenize(text)
    clause_start = _main_clause_start(tokens)

    statements: list[InstitutionalStatement] = []
    first, cursor = _parse_clause(
        tokens, clause_start, text, None, role_lexicon, verbs, sentence_ref, (None, None)
    )
    if first is None:
        return [InstitutionalStatement(sentence_ref=sentence_ref)]
    statements.append(first)

    subject_tokens = _subject_phrase(tokens, _find_verb_group(tokens, clause_start, verbs), clause_start)
    while cursor < len(tokens):
        if tokens[cursor].lower in {"and", "or"}:
            look = _skip_adverbs(tokens, cursor + 1)
            if look < len(tokens) and (
                tokens[look].lower in MODALS
                or tokens[look].lower in CONTRACTIONS
                or _is_verb_candidate(tokens, look, verbs)
            ):
                stmt, cursor = _parse_clause(
                    tokens,
                    look,
                    text,
                    subject_tokens,
                    role_lexicon,
                    verbs,
                    sentence_ref,
                    (statements[0].deontic, statements[0].deontic_span),
                )
                if stmt is not None:
                    statements.append(stmt)
                    continue
        cursor += 1
    return statements


def parse_statement(
    sentence,
    role_lexicon: taxonomy.Lexicon,
    verbs: frozenset[str] | None = None,
    sentence_ref: tuple | None = None,
) -> InstitutionalStatement:
    """The main institutional statement of a sentence (exactly one)."""
    return parse_sentence(sentence, role_lexicon, verbs, sentence_ref)[0]
