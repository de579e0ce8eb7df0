"""Transcript parsing, lemmatization, stop words, and corpus serialization."""

from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qualkit.corpus import (
    ParserConfig,
    SpeakerRole,
    StopWordSet,
    apply_stopwords,
    build_corpus,
    corpus_from_dict,
    corpus_to_dict,
    default_lemmatizer,
    default_stopwords,
    export_stopword_file,
    filter_interviewer,
    frequency_table,
    load_stopword_lemmas,
    parse_transcript,
    tokenize_lemmatize,
)
from qualkit.errors import EmptyTranscript, LemmatizerUnavailable

from conftest import TINY_TRANSCRIPT, build_planted_text, preprocess_text


# --------------------------------------------------------------------------
# parsing

def test_prefixes_assign_roles():
    doc = parse_transcript("I: How is work?\nR: Fine.")
    assert [t.role for t in doc.turns] == [SpeakerRole.INTERVIEWER, SpeakerRole.RESPONDENT]
    assert doc.turns[0].raw_text == "How is work?"
    assert doc.turns[1].raw_text == "Fine."


def test_long_prefixes_and_q_a():
    doc = parse_transcript("Interviewer: Hello.\nRespondent: Hi.\nQ: Next?\nA: Sure.")
    assert [t.role for t in doc.turns] == [
        SpeakerRole.INTERVIEWER, SpeakerRole.RESPONDENT,
        SpeakerRole.INTERVIEWER, SpeakerRole.RESPONDENT,
    ]


def test_unprefixed_lines_inherit_previous_role():
    doc = parse_transcript("R: First thought.\nSecond thought.\nI: And?\nStill asking.")
    assert [t.role for t in doc.turns] == [
        SpeakerRole.RESPONDENT, SpeakerRole.RESPONDENT,
        SpeakerRole.INTERVIEWER, SpeakerRole.INTERVIEWER,
    ]


def test_unprefixed_at_start_is_unknown():
    doc = parse_transcript("Some context line.\nR: Answer.")
    assert doc.turns[0].role is SpeakerRole.UNKNOWN
    assert doc.turns[1].role is SpeakerRole.RESPONDENT


def test_bare_prefix_line_switches_role_without_a_turn():
    doc = parse_transcript("R: Reply.\nQ:\nFollow-up line.")
    assert len(doc.turns) == 2
    assert doc.turns[1].raw_text == "Follow-up line."
    assert doc.turns[1].role is SpeakerRole.INTERVIEWER


def test_blank_lines_are_skipped():
    doc = parse_transcript("R: One.\n\n\nR: Two.")
    assert [t.raw_text for t in doc.turns] == ["One.", "Two."]


def test_empty_transcript_raises():
    with pytest.raises(EmptyTranscript):
        parse_transcript("")
    with pytest.raises(EmptyTranscript):
        parse_transcript("   \n  \n")


def test_custom_prefixes():
    cfg = ParserConfig(interviewer_prefixes=("INT>",), respondent_prefixes=("SUB>",))
    doc = parse_transcript("INT> Why?\nSUB> Because.", config=cfg)
    assert [t.role for t in doc.turns] == [SpeakerRole.INTERVIEWER, SpeakerRole.RESPONDENT]


def test_build_corpus_rejects_duplicate_ids():
    with pytest.raises(ValueError):
        build_corpus([("a", "R: Hi."), ("a", "R: Again.")])


def test_build_corpus_orders_documents():
    corpus = build_corpus([("first", "R: One."), ("second", "R: Two.")])
    assert [d.doc_id for d in corpus.documents] == ["first", "second"]


# --------------------------------------------------------------------------
# interviewer filtering

def test_filter_drops_interviewer_turns():
    corpus = build_corpus([("d", "I: A?\nR: B.\nI: C?\nR: D.\nR: E.")])
    filtered = filter_interviewer(corpus, keep=False)
    roles = [t.role for t in filtered.documents[0].turns]
    assert roles == [SpeakerRole.RESPONDENT] * 3
    assert [t.raw_text for t in filtered.documents[0].turns] == ["B.", "D.", "E."]


def test_filter_keep_true_is_identity():
    corpus = build_corpus([("d", "I: A?\nR: B.")])
    assert filter_interviewer(corpus, keep=True) is corpus


def test_filter_no_interviewer_is_noop():
    corpus = build_corpus([("d", "R: B.\nR: C.")])
    filtered = filter_interviewer(corpus, keep=False)
    assert [t.raw_text for t in filtered.documents[0].turns] == ["B.", "C."]


def test_filter_preserves_respondent_count():
    corpus = build_corpus([("d", TINY_TRANSCRIPT)])
    before = sum(1 for doc in corpus.documents for t in doc.turns
                 if t.role is not SpeakerRole.INTERVIEWER)
    filtered = filter_interviewer(corpus, keep=False)
    after = sum(len(doc.turns) for doc in filtered.documents)
    assert after == before


def test_filter_after_tokenize_drops_sentences_too():
    corpus = tokenize_lemmatize(build_corpus([("d", "I: One. Two.\nR: Three.")]))
    filtered = filter_interviewer(corpus, keep=False)
    assert [s.raw for s in filtered.sentences] == ["Three"]


# --------------------------------------------------------------------------
# lemmatizer

@pytest.mark.parametrize("token,lemma", [
    ("working", "work"),
    ("works", "work"),
    ("worked", "work"),
    ("work", "work"),
    ("tries", "try"),
    ("glasses", "glass"),
    ("glass", "glass"),
    ("hopped", "hop"),
    ("falling", "fall"),
    ("missing", "miss"),
    ("buzzing", "buzz"),
    ("days", "day"),
    ("gas", "gas"),
    ("probably", "probably"),
    ("supposedly", "supposedly"),
])
def test_default_lemmatizer_examples(token, lemma):
    assert default_lemmatizer(token) == lemma


def test_lemmatizer_short_stems_untouched():
    assert default_lemmatizer("bed") == "bed"
    assert default_lemmatizer("king") == "king"


# --------------------------------------------------------------------------
# tokenization

def test_tokenize_inflections_collapse():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: Working works worked.")]))
    assert corpus.sentences[0].lemmas == ("work", "work", "work")


def test_tokenize_single_word():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: Yes.")]))
    assert corpus.sentences[0].lemmas == ("yes",)


def test_tokenize_digits_drop_out():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: 2024!!!\nR: Real words.")]))
    assert corpus.sentences[0].lemmas == ()
    assert corpus.sentences[0].is_empty


def test_tokenize_splits_sentences_within_turn():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: One two. Three! Four?")]))
    sents = corpus.documents[0].sentences
    assert [s.raw for s in sents] == ["One two", "Three", "Four"]
    assert [s.sentence_index for s in sents] == [0, 1, 2]
    assert all(s.turn_index == 0 for s in sents)


def test_tokenize_lowercases():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: LOUD Quiet.")]))
    assert corpus.sentences[0].lemmas == ("loud", "quiet")


def test_external_lemmatizer_is_used():
    corpus = build_corpus([("d", "R: Alpha beta.")])
    out = tokenize_lemmatize(corpus, lemmatizer=lambda t: t.upper())
    assert out.sentences[0].lemmas == ("ALPHA", "BETA")


def test_external_lemmatizer_failure_maps_to_error():
    def broken(token):
        raise RuntimeError("model file missing")
    corpus = build_corpus([("d", "R: Alpha.")])
    with pytest.raises(LemmatizerUnavailable):
        tokenize_lemmatize(corpus, lemmatizer=broken)


# --------------------------------------------------------------------------
# stop words

def test_apply_stopwords_removes_filler():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: Probably the work is fine.")]))
    out = apply_stopwords(corpus, default_stopwords())
    assert "probably" not in out.sentences[0].lemmas
    assert "work" in out.sentences[0].lemmas


def test_apply_stopwords_empty_set_is_identity():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: Anything at all.")]))
    assert apply_stopwords(corpus, StopWordSet()) is corpus


def test_emptied_sentences_stay_but_leave_modeling():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: It is. Career plans.")]))
    out = apply_stopwords(corpus, default_stopwords())
    assert len(out.sentences) == 2
    assert out.sentences[0].is_empty
    assert [s.raw for s in out.modeled_sentences] == ["Career plans"]


def test_extra_stopwords_join_the_set():
    stops = default_stopwords(extra=["Career "])
    assert "career" in stops.union
    corpus = tokenize_lemmatize(build_corpus([("d", "R: Career plans.")]))
    out = apply_stopwords(corpus, stops)
    assert out.sentences[0].lemmas == ("plan",)


def test_interview_filler_words_are_shipped():
    stops = default_stopwords()
    for word in ("probably", "suppose", "supposedly", "think", "like", "turns"):
        assert word in stops.union


@given(st.lists(st.sampled_from(["career", "plan", "team", "budget", "travel"]),
                min_size=1, max_size=8),
       st.sets(st.sampled_from(["career", "plan", "team", "budget", "travel"])))
def test_no_modeled_lemma_is_a_stop_word(words, banned):
    corpus = tokenize_lemmatize(build_corpus([("d", "R: " + " ".join(words) + ".")]))
    out = apply_stopwords(corpus, StopWordSet(base=frozenset(banned)))
    surviving = {l for s in out.sentences for l in s.lemmas}
    assert not (surviving & banned)
    assert surviving == {w for w in words if w not in banned}


# --------------------------------------------------------------------------
# frequency table

def test_frequency_table_sorting():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: Budget budget travel.")]))
    assert frequency_table(corpus) == [("budget", 2), ("travel", 1)]


def test_frequency_table_ties_break_alphabetically():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: Zebra apple zebra apple.")]))
    assert frequency_table(corpus) == [("apple", 2), ("zebra", 2)]


def test_frequency_table_limit():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: A bee cat bee cat cat.")]))
    assert frequency_table(corpus, limit=1) == [("cat", 3)]


def test_frequency_table_empty_corpus():
    corpus = tokenize_lemmatize(build_corpus([("d", "R: 123.")]))
    assert frequency_table(corpus) == []


def test_frequency_table_matches_counter_oracle(planted4):
    expected = Counter()
    for s in planted4.sentences:
        expected.update(s.lemmas)
    table = frequency_table(planted4)
    assert dict(table) == dict(expected)
    counts = [c for _, c in table]
    assert counts == sorted(counts, reverse=True)


# --------------------------------------------------------------------------
# stop word files

def test_export_stopword_file_format(tmp_path):
    path = tmp_path / "stops.txt"
    export_stopword_file(["Beta", "alpha", " beta ", ""], path)
    assert path.read_bytes() == b"alpha\nbeta\n"


def test_export_empty_file(tmp_path):
    path = tmp_path / "stops.txt"
    export_stopword_file([], path)
    assert path.read_bytes() == b""


def test_stopword_file_round_trip_is_stable(tmp_path):
    first = tmp_path / "a.txt"
    second = tmp_path / "b.txt"
    export_stopword_file(["gamma", "Alpha", "beta"], first)
    export_stopword_file(load_stopword_lemmas(first), second)
    assert first.read_bytes() == second.read_bytes()


# --------------------------------------------------------------------------
# serialization

def test_corpus_dict_round_trip():
    corpus = preprocess_text(TINY_TRANSCRIPT)
    rebuilt = corpus_from_dict(corpus_to_dict(corpus))
    assert rebuilt == corpus
    assert corpus_to_dict(rebuilt) == corpus_to_dict(corpus)


def test_round_trip_preserves_modeled_units(planted4):
    rebuilt = corpus_from_dict(corpus_to_dict(planted4))
    assert [s.lemmas for s in rebuilt.modeled_sentences] == \
        [s.lemmas for s in planted4.modeled_sentences]


# --------------------------------------------------------------------------
# the planted corpus itself

def test_planted_corpus_shape(planted4, planted4_groups):
    units = planted4.modeled_sentences
    assert len(units) == 200
    assert all(len(u.lemmas) == 8 for u in units)
    vocab = {l for u in units for l in u.lemmas}
    assert vocab == {w for g in planted4_groups for w in g}


def test_planted_groups_are_disjoint(planted4_groups):
    seen: set[str] = set()
    for group in planted4_groups:
        assert not (seen & set(group))
        seen |= set(group)


def test_planted_sentences_stay_within_group(planted4, planted4_groups, planted4_truth):
    units = planted4.modeled_sentences
    for unit, g in zip(units, planted4_truth):
        assert set(unit.lemmas) <= set(planted4_groups[g])
