"""Markup normalization, segmentation, and pronoun substitution tests."""

import pytest

from govgram.normalize import (
    is_valid_snapshot_text,
    normalize_markup,
    resolve_pronouns,
    segment,
    undo_substitutions,
)
from govgram.taxonomy import load_role_lexicon


@pytest.fixture(scope="module")
def role_lexicon():
    return load_role_lexicon()


# ------------------------------------------------------------ markup


def test_badge_line_removed():
    doc = normalize_markup("![build](badge.svg)\n\nMaintainers merge patches.\n")
    assert doc.blocks == ["Maintainers merge patches."]


def test_linked_badge_and_html_image_removed():
    raw = "[![ci](badge.svg)](https://ci.example)\n<img src='logo.png'>\nGovernance text.\n"
    doc = normalize_markup(raw)
    assert doc.blocks == ["Governance text."]


def test_pipe_table_becomes_bullets():
    raw = "| Role | Duty |\n|---|---|\n| chair | convene |"
    doc = normalize_markup(raw)
    assert doc.blocks == ["- chair: convene"]


def test_table_without_rule_row_keeps_all_rows():
    raw = "| chair | convene |\n| member | vote |"
    doc = normalize_markup(raw)
    assert doc.blocks == ["- chair: convene\n- member: vote"]


def test_plain_text_identity():
    raw = "First paragraph here.\n\nSecond paragraph here."
    doc = normalize_markup(raw)
    assert doc.blocks == ["First paragraph here.", "Second paragraph here."]
    assert doc.section_count == 0


def test_heading_markers_counted_and_stripped():
    raw = "# Governance\n\nBody text.\n\n## Roles\n\nMore text.\n\nVoting\n------\n\nTail."
    doc = normalize_markup(raw)
    assert doc.section_count == 3
    assert "Governance" in doc.blocks[0]
    assert all("#" not in b for b in doc.blocks)


def test_emphasis_link_code_stripped_text_kept():
    raw = "The **steering committee** uses `consensus` and [the charter](charter.md)."
    doc = normalize_markup(raw)
    assert doc.blocks == ["The steering committee uses consensus and the charter."]


def test_normalize_markup_idempotent_on_blocks():
    raw = (
        "# Title\n\n![badge](x.svg)\n\n| a | b |\n|---|---|\n| c | d |\n\n"
        "Some *emphasis* and a [link](u).\n\n- item one\n- item two\n"
    )
    doc = normalize_markup(raw)
    again = normalize_markup(doc.normalized_text)
    assert again.blocks == doc.blocks


def test_offset_map_spans_are_nonempty_and_within_raw():
    raw = "# Head\n\nPara one text.\n\n- bullet item\n"
    doc = normalize_markup(raw)
    for (ns, ne), (rs, re_) in doc.offset_map:
        assert ne > ns
        assert re_ > rs
        assert raw[rs:re_].strip() != ""
        assert doc.normalized_text[ns:ne] == doc.blocks[doc.offset_map.index(((ns, ne), (rs, re_)))]


def test_section_count_range_fixture():
    # documents built with n headings must report exactly n, across the
    # observed document range of 2..25 sections
    for n in (2, 5, 25):
        raw = "\n\n".join(f"# Section {i}\n\nBody {i}." for i in range(n))
        assert normalize_markup(raw).section_count == n


# ------------------------------------------------------------ segmentation


def test_two_terminal_periods_two_sentences():
    doc = segment(normalize_markup("Maintainers review patches. Committers merge them."))
    assert [s.text for s in doc.sentences] == [
        "Maintainers review patches.",
        "Committers merge them.",
    ]


def test_bullet_without_period_is_one_sentence():
    doc = segment(normalize_markup("- submit a proposal"))
    assert [s.text for s in doc.sentences] == ["submit a proposal"]


def test_abbreviation_does_not_split():
    doc = segment(normalize_markup("Members (e.g. chairs) vote."))
    assert len(doc.sentences) == 1


def test_abbreviation_before_capital_does_not_split():
    doc = segment(normalize_markup("Projects use tools, e.g. GitHub issues, for voting."))
    assert len(doc.sentences) == 1


def test_list_item_with_terminal_punctuation_splits_further():
    doc = segment(normalize_markup("- Submit a proposal. Wait for review."))
    assert [s.text for s in doc.sentences] == ["Submit a proposal.", "Wait for review."]


def test_sentence_spans_match_normalized_text():
    raw = "# Rules\n\nMaintainers merge. Reviewers review.\n\n- vote early\n- vote often"
    doc = segment(normalize_markup(raw))
    text = doc.normalized_text
    for s in doc.sentences:
        start, end = s.char_span
        assert text[start:end] == s.text


# ------------------------------------------------------------ pronouns


def test_pronoun_resolved_to_nearest_role(role_lexicon):
    raw = "Maintainers triage issues. They may close duplicates."
    doc = resolve_pronouns(segment(normalize_markup(raw)), role_lexicon)
    second = doc.sentences[1]
    assert second.text == "Maintainers may close duplicates."
    assert len(second.pronoun_substitutions) == 1
    sub = second.pronoun_substitutions[0]
    assert sub.original == "They"
    assert sub.replacement == "Maintainers"


def test_sentence_without_pronoun_unchanged(role_lexicon):
    raw = "Reviewers check patches."
    doc = resolve_pronouns(segment(normalize_markup(raw)), role_lexicon)
    assert doc.sentences[0].text == raw
    assert doc.sentences[0].pronoun_substitutions == []


def test_expletive_it_untouched(role_lexicon):
    raw = "Reviewers respond to reports. It is expected that reviewers respond."
    doc = resolve_pronouns(segment(normalize_markup(raw)), role_lexicon)
    assert doc.sentences[1].text == "It is expected that reviewers respond."
    assert doc.sentences[1].pronoun_substitutions == []


def test_pronoun_without_antecedent_left_alone(role_lexicon):
    raw = "They may close duplicates."
    doc = resolve_pronouns(segment(normalize_markup(raw)), role_lexicon)
    assert doc.sentences[0].text == raw


def test_lookback_limited_to_two_sentences(role_lexicon):
    raw = (
        "Maintainers triage issues. One sentence passes. Another sentence passes. "
        "They may close duplicates."
    )
    doc = resolve_pronouns(segment(normalize_markup(raw)), role_lexicon)
    assert doc.sentences[-1].text.startswith("They")


def test_lookback_does_not_cross_blocks(role_lexicon):
    raw = "Maintainers triage issues.\n\nThey may close duplicates."
    doc = resolve_pronouns(segment(normalize_markup(raw)), role_lexicon)
    assert doc.sentences[1].text.startswith("They")


def test_substitution_reversibility_byte_equality(role_lexicon):
    raw = (
        "# Rules\n\nThe steering committee meets monthly. They must publish minutes. "
        "It should record attendance.\n\n- Maintainers label issues. They may assign reviewers."
    )
    base = segment(normalize_markup(raw))
    resolved = resolve_pronouns(base, role_lexicon)
    assert any(s.pronoun_substitutions for s in resolved.sentences)
    text = base.normalized_text
    for sent in resolved.sentences:
        restored = undo_substitutions(sent)
        start, end = sent.char_span
        assert restored == text[start:end]


def test_substitutions_never_overlap(role_lexicon):
    raw = "Maintainers triage issues. They may close duplicates and they may lock threads."
    doc = resolve_pronouns(segment(normalize_markup(raw)), role_lexicon)
    for sent in doc.sentences:
        spans = sorted(s.span for s in sent.pronoun_substitutions)
        for (s1, e1), (s2, _) in zip(spans, spans[1:]):
            assert e1 <= s2


def test_crlf_documents_segment_and_map(role_lexicon):
    raw = "# Rules\r\n\r\nMaintainers triage issues. They may close duplicates.\r\n"
    doc = resolve_pronouns(segment(normalize_markup(raw)), role_lexicon)
    texts = [s.text for s in doc.sentences]
    assert "Maintainers may close duplicates." in texts
    for (ns, ne), (rs, re_) in doc.offset_map:
        assert raw[rs:re_].strip() != ""


# ------------------------------------------------------------ validity


def test_snapshot_validity_rules():
    assert is_valid_snapshot_text("Maintainers merge patches.") is True
    assert is_valid_snapshot_text("") is False
    assert is_valid_snapshot_text("   \n\n  ") is False
    assert is_valid_snapshot_text("![badge](x.svg)") is False
