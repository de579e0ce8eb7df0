"""Co-occurrence counting and coherence metrics against enumeration oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qualkit.coherence import (
    CooccurrenceCounts,
    average_over_topics,
    c_v,
    count_documents,
    count_windows,
    npmi,
    uci,
    umass,
)
from qualkit.errors import MetricUndefined

from conftest import corpus_from_docs, corpus_from_units
from oracles import (
    enum_doc_windows,
    enum_windows,
    oracle_cv,
    oracle_npmi,
    oracle_uci,
    oracle_umass,
)


# --------------------------------------------------------------------------
# window counting

def test_sliding_windows_on_short_unit():
    counts = count_windows([["a", "b", "a"]], window=2)
    assert counts.total_windows == 2
    assert counts.count("a") == 2
    assert counts.count("b") == 2
    assert counts.pair("a", "b") == 2


def test_window_wider_than_unit_gives_one_window():
    counts = count_windows([["a", "b", "c"]], window=10)
    assert counts.total_windows == 1
    assert counts.pair("a", "c") == 1


def test_empty_units_are_skipped():
    counts = count_windows([[], ["a"], []], window=5)
    assert counts.total_windows == 1
    assert counts.count("a") == 1


def test_window_counting_matches_enumeration():
    units = [["a", "b", "c", "a", "b"], ["b", "c"], ["c", "c", "c", "d"]]
    for w in (1, 2, 3, 10):
        counts = count_windows(units, window=w)
        windows = enum_windows(units, w)
        assert counts.total_windows == len(windows)
        for word in "abcd":
            assert counts.count(word) == sum(1 for s in windows if word in s)
        for x in "abcd":
            for y in "abcd":
                if x < y:
                    expected = sum(1 for s in windows if x in s and y in s)
                    assert counts.pair(x, y) == expected


def test_pair_of_word_with_itself_is_its_count():
    counts = count_windows([["a", "b"], ["a"]], window=5)
    assert counts.pair("a", "a") == counts.count("a") == 2


def test_window_bound_validated():
    with pytest.raises(ValueError):
        count_windows([["a"]], window=0)


def test_document_counting():
    corpus = corpus_from_docs([
        [["a", "b"], ["b", "c"]],   # doc0: {a, b, c}
        [["a"]],                    # doc1: {a}
        [[]],                       # doc2: empty, dropped
    ])
    counts = count_documents(corpus)
    assert counts.total_windows == 2
    assert counts.count("a") == 2
    assert counts.count("c") == 1
    assert counts.pair("a", "c") == 1


@given(st.lists(st.lists(st.sampled_from("abcde"), max_size=6), min_size=1, max_size=8),
       st.integers(1, 4))
@settings(max_examples=40)
def test_pair_counts_bounded_by_word_counts(units, window):
    counts = count_windows(units, window=window)
    for x in "abcde":
        for y in "abcde":
            if x < y:
                assert counts.pair(x, y) <= min(counts.count(x), counts.count(y))
    assert counts.total_windows == len(enum_windows(units, window))


# --------------------------------------------------------------------------
# umass

def test_umass_two_words_always_together():
    counts = count_documents([["a", "b"]])
    assert umass(["a", "b"], counts) == pytest.approx(math.log(2.0), abs=1e-12)


def test_umass_rare_word_after_common_word():
    docs = [["w1"], ["w1"], ["w1"], ["w1"], ["w2"]]
    counts = count_documents(docs)
    assert umass(["w1", "w2"], counts) == pytest.approx(math.log(0.25), abs=1e-12)


def test_umass_is_order_sensitive():
    docs = [["a", "b"], ["a"], ["a"], ["b", "c"]]
    counts = count_documents(docs)
    assert umass(["a", "b"], counts) != umass(["b", "a"], counts)


def test_umass_single_keyword_undefined():
    counts = count_documents([["a"]])
    with pytest.raises(MetricUndefined):
        umass(["a"], counts)


def test_umass_skips_missing_words():
    counts = count_documents([["a", "b"], ["a"]])
    with_ghost = umass(["a", "b", "ghost"], counts)
    without = umass(["a", "b"], counts)
    assert with_ghost == without


def test_umass_all_pairs_missing_undefined():
    counts = count_documents([["x"]])
    with pytest.raises(MetricUndefined):
        umass(["ghost", "phantom"], counts)


def test_umass_matches_oracle(toy20):
    units, _ = toy20
    counts = count_documents([list(u) for u in units])
    keywords = ["alpha", "bravo", "chair", "delta", "ember"]
    windows = enum_doc_windows(units)
    assert umass(keywords, counts) == pytest.approx(
        oracle_umass(keywords, windows), abs=1e-9)


# --------------------------------------------------------------------------
# uci

def test_uci_perfect_cooccurrence_is_log_two():
    units = [["a", "b"], ["a", "b"], ["c"], ["c"]]
    counts = count_windows(units, window=10)
    assert uci(["a", "b"], counts) == pytest.approx(math.log(2.0), abs=1e-9)


def test_uci_independent_words_near_zero():
    units = [["a", "b"], ["a"], ["b"], ["c"]]
    counts = count_windows(units, window=10)
    assert uci(["a", "b"], counts) == pytest.approx(0.0, abs=1e-9)


def test_uci_never_cooccurring_words_are_strongly_negative():
    units = [["a"], ["b"]] * 5
    counts = count_windows(units, window=10)
    expected = math.log(1e-12 / 0.25)
    assert uci(["a", "b"], counts) == pytest.approx(expected, abs=1e-9)


def test_uci_matches_oracle(toy20):
    units, _ = toy20
    counts = count_windows(units, window=10)
    windows = enum_windows(units, 10)
    keywords = ["alpha", "bravo", "chair", "delta", "ember"]
    assert uci(keywords, counts) == pytest.approx(
        oracle_uci(keywords, windows), abs=1e-9)


# --------------------------------------------------------------------------
# npmi

def test_npmi_perfect_association_clamps_to_one():
    units = [["a", "b"], ["c"]]
    counts = count_windows(units, window=10)
    assert npmi(["a", "b"], counts) == 1.0


def test_npmi_independent_words_near_zero():
    units = [["a", "b"], ["a"], ["b"], ["c"]]
    counts = count_windows(units, window=10)
    assert abs(npmi(["a", "b"], counts)) < 1e-9


def test_npmi_disjoint_words_approach_lower_bound():
    units = [["a"], ["b"]] * 10
    counts = count_windows(units, window=10)
    value = npmi(["a", "b"], counts)
    assert -1.0 <= value < -0.9


def test_npmi_is_symmetric_in_keyword_order():
    units = [["a", "b"], ["a"], ["a"], ["b", "c"], ["c"]]
    counts = count_windows(units, window=10)
    assert npmi(["a", "b", "c"], counts) == npmi(["c", "b", "a"], counts)


def test_npmi_matches_oracle(toy20):
    units, _ = toy20
    counts = count_windows(units, window=10)
    windows = enum_windows(units, 10)
    keywords = ["alpha", "bravo", "chair", "delta", "ember"]
    assert npmi(keywords, counts) == pytest.approx(
        oracle_npmi(keywords, windows), abs=1e-9)


@given(st.lists(st.lists(st.sampled_from("abcd"), min_size=1, max_size=5),
                min_size=2, max_size=10))
@settings(max_examples=40)
def test_npmi_stays_in_bounds(units):
    counts = count_windows(units, window=2)
    present = [w for w in "abcd" if counts.count(w) > 0]
    if len(present) < 2:
        return
    value = npmi(present, counts)
    assert -1.0 <= value <= 1.0


# --------------------------------------------------------------------------
# c_v

def test_cv_identical_context_vectors_score_one():
    units = [["a", "b", "c"], ["a", "b", "c"], ["d"]]
    counts = count_windows(units, window=110)
    assert c_v(["a", "b", "c"], counts) == pytest.approx(1.0, abs=1e-9)


def test_cv_drops_absent_words():
    units = [["a", "b"], ["a", "b"], ["c"]]
    counts = count_windows(units, window=110)
    assert c_v(["a", "b", "ghost"], counts) == c_v(["a", "b"], counts)


def test_cv_too_few_attested_words_undefined():
    counts = count_windows([["a"]], window=110)
    with pytest.raises(MetricUndefined):
        c_v(["a", "ghost"], counts)


def test_cv_zero_context_vector_scores_zero():
    # hand-built counts: both words in the single window, never together,
    # so each row is [1, -1] and the summed vector cancels to zero
    counts = CooccurrenceCounts(window=1, total_windows=1,
                                word_counts={"a": 1, "b": 1}, pair_counts={})
    assert c_v(["a", "b"], counts) == 0.0


def test_cv_matches_oracle(toy20):
    units, _ = toy20
    counts = count_windows(units, window=110)
    windows = enum_windows(units, 110)
    keywords = ["alpha", "bravo", "chair", "delta", "ember"]
    assert c_v(keywords, counts) == pytest.approx(
        oracle_cv(keywords, windows), abs=1e-9)


# --------------------------------------------------------------------------
# the full toy-corpus equivalence sweep

def test_all_metrics_match_oracles_on_toy_corpus(toy20):
    units, corpus = toy20
    keyword_sets = [
        ["alpha", "bravo", "chair", "delta", "ember"],
        ["alpha", "bravo"],
        ["ember", "delta", "chair"],
        ["bravo", "alpha", "ember"],
    ]
    doc_counts = count_documents([list(u) for u in units])
    doc_windows = enum_doc_windows(units)
    uci_counts = count_windows(corpus, window=10)
    uci_windows = enum_windows(units, 10)
    cv_counts = count_windows(corpus, window=110)
    cv_windows = enum_windows(units, 110)
    for keywords in keyword_sets:
        assert umass(keywords, doc_counts) == pytest.approx(
            oracle_umass(keywords, doc_windows), abs=1e-9)
        assert uci(keywords, uci_counts) == pytest.approx(
            oracle_uci(keywords, uci_windows), abs=1e-9)
        assert npmi(keywords, uci_counts) == pytest.approx(
            oracle_npmi(keywords, uci_windows), abs=1e-9)
        assert c_v(keywords, cv_counts) == pytest.approx(
            oracle_cv(keywords, cv_windows), abs=1e-9)


# --------------------------------------------------------------------------
# per-topic averaging

def test_average_over_topics_mean():
    counts = count_windows([["a", "b"], ["a", "b"], ["c", "d"]], window=10)
    value = average_over_topics(npmi, [["a", "b"], ["c", "d"]], counts)
    assert value == pytest.approx((npmi(["a", "b"], counts)
                                   + npmi(["c", "d"], counts)) / 2)


def test_average_over_topics_skips_undefined():
    counts = count_windows([["a", "b"]], window=10)
    value = average_over_topics(npmi, [["a", "b"], ["ghost", "phantom"]], counts)
    assert value == npmi(["a", "b"], counts)


def test_average_over_topics_all_undefined():
    counts = count_windows([["a"]], window=10)
    with pytest.raises(MetricUndefined):
        average_over_topics(npmi, [["ghost", "phantom"]], counts)
