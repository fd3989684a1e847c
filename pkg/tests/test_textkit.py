from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from qreform.errors import EmptyCorpus, EmptyInput
from qreform.textkit import (
    IdfModel,
    build_idf,
    compute_features,
    tokenize,
    type_token_ratio,
)


class TestTokenize:
    def test_strips_question_mark_and_lowercases(self):
        assert tokenize("Is it going to rain tomorrow?") == [
            "is", "it", "going", "to", "rain", "tomorrow",
        ]

    def test_plain_utterance(self):
        assert tokenize("are bill pullman have a son") == [
            "are", "bill", "pullman", "have", "a", "son",
        ]

    def test_apostrophe_splits_token(self):
        assert tokenize("isn't it cold") == ["isn", "t", "it", "cold"]
        assert tokenize("what's the macros of rotisserie chicken")[:2] == ["what", "s"]

    def test_edge_punctuation_stripped_per_token(self):
        assert tokenize('"hello," she said: yes!') == ["hello", "she", "said", "yes"]

    def test_tokens_emptied_by_stripping_are_dropped(self):
        assert tokenize("what ?? now") == ["what", "now"]

    def test_empty_input_raises(self):
        with pytest.raises(EmptyInput):
            tokenize("   ")
        with pytest.raises(EmptyInput):
            tokenize("?!.")

    @given(st.text(max_size=80))
    def test_idempotent_under_rejoining(self, text):
        try:
            tokens = tokenize(text)
        except EmptyInput:
            return
        assert tokenize(" ".join(tokens)) == tokens


class TestTypeTokenRatio:
    def test_hand_counted_ratio(self):
        tokens = ["how", "do", "tiger", "how", "do", "baby", "tigers", "speak"]
        assert type_token_ratio(tokens) == pytest.approx(0.75)

    def test_single_token(self):
        assert type_token_ratio(["a"]) == 1.0

    def test_one_distinct_of_four(self):
        assert type_token_ratio(["a", "a", "a", "a"]) == 0.25

    def test_empty_raises(self):
        with pytest.raises(EmptyInput):
            type_token_ratio([])

    @given(st.lists(st.sampled_from("abcdef"), min_size=1, max_size=30))
    def test_bounds_and_distinctness(self, tokens):
        ratio = type_token_ratio(tokens)
        assert 0 < ratio <= 1
        assert (ratio == 1) == (len(set(tokens)) == len(tokens))


class TestIdf:
    def test_single_doc_token_present(self):
        idf = build_idf([["rain"]])
        assert idf.idf("rain") == pytest.approx(1.0)

    def test_three_docs_df_one(self):
        idf = build_idf([["a"], ["b"], ["c"]])
        assert idf.idf("a") == pytest.approx(math.log(4 / 2) + 1, abs=1e-12)
        assert idf.idf("a") == pytest.approx(1.6931471805599454)

    def test_unseen_token(self):
        idf = build_idf([["a"], ["b"], ["c"]])
        assert idf.idf("zzz") == pytest.approx(math.log(4 / 1) + 1, abs=1e-12)
        assert idf.idf("zzz") == pytest.approx(2.386294361119891)

    def test_empty_corpus_raises(self):
        with pytest.raises(EmptyCorpus):
            build_idf([])

    @given(st.integers(min_value=1, max_value=50), st.data())
    def test_anti_monotone_in_df(self, n_docs, data):
        df1 = data.draw(st.integers(min_value=0, max_value=n_docs - 1))
        df2 = data.draw(st.integers(min_value=df1 + 1, max_value=n_docs))
        model = IdfModel(n_docs=n_docs, doc_freq={"x": df1, "y": df2})
        assert model.idf("x") > model.idf("y")


class TestFeatures:
    def test_single_token_unit_idf(self):
        idf = build_idf([["rain"]])
        features = compute_features("rain", idf)
        assert features.token_len == 1
        assert features.ttr == 1.0
        assert features.idf_sum == pytest.approx(1.0)
        assert features.idf_mean == pytest.approx(1.0)
        assert features.tfidf_sum == pytest.approx(1.0)
        assert features.tfidf_mean == pytest.approx(1.0)

    def test_repeated_token_with_known_idf(self):
        features = compute_features("a a", _FixedIdf({"a": 2.0}))
        assert features.token_len == 2
        assert features.ttr == 0.5
        assert features.idf_sum == pytest.approx(4.0)
        assert features.idf_mean == pytest.approx(2.0)
        assert features.tfidf_sum == pytest.approx(4.0)
        assert features.tfidf_mean == pytest.approx(2.0)

    def test_char_len_counts_normalized_text(self):
        idf = build_idf([["a"]])
        features = compute_features("Hello   world!", idf)
        assert features.char_len == len("hello world")

    @given(st.lists(st.sampled_from(["rain", "sun", "wind", "snow"]), min_size=1, max_size=12))
    def test_sum_mean_identities(self, tokens):
        idf = build_idf([["rain", "sun"], ["wind"], ["sun", "snow"]])
        features = compute_features(" ".join(tokens), idf)
        assert features.idf_sum == pytest.approx(
            features.idf_mean * features.token_len, abs=1e-9
        )
        assert features.tfidf_sum == pytest.approx(
            features.tfidf_mean * features.token_len, abs=1e-9
        )
        assert features.ttr == pytest.approx(len(set(tokens)) / len(tokens), abs=1e-9)


class _FixedIdf:
    """Duck-typed IdfModel with pinned per-token values."""

    def __init__(self, values: dict, default: float = 1.0):
        self.values = values
        self.default = default

    def idf(self, token: str) -> float:
        return self.values.get(token, self.default)
