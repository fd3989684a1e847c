from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from fixture_questions import TYPED_UTTERANCES
from qreform.errors import EmptyInput
from qreform.qtypes import QuestionType
from qreform.textkit import tokenize
from qreform.typology import (
    DEFAULT_CONFIG,
    KeywordConfig,
    classify,
    classify_text,
    evaluate_classifier,
    is_verb_initial,
)


class TestClassify:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("who is the US president", QuestionType.ROOT),
            ("can cats eat onions", QuestionType.POLAR),
            ("how does depression affect the body", QuestionType.OPEN),
            ("tell me the capital of Utah", QuestionType.REQUEST),
            ("watermelon health benefits", QuestionType.OTHER),
            ("how many playable characters are in lego star wars", QuestionType.ROOT),
            ("does the grammar generates the words", QuestionType.POLAR),
        ],
    )
    def test_reference_utterances(self, text, expected):
        assert classify_text(text) == expected

    def test_bigram_beats_open(self):
        assert classify_text("how many moons does jupiter have") == QuestionType.ROOT
        assert classify_text("how moons does jupiter have") == QuestionType.OPEN

    def test_polar_beats_verb_lexicon(self):
        config = KeywordConfig(
            verb_lexicon=frozenset(DEFAULT_CONFIG.verb_lexicon | {"is"})
        )
        assert classify(["is", "this", "real"], config) == QuestionType.POLAR

    def test_empty_tokens_raise(self):
        with pytest.raises(EmptyInput):
            classify([])

    @given(st.lists(st.sampled_from(
        "what how is do tell watermelon many long the a cats find me".split()
    ), min_size=1, max_size=8))
    def test_total_and_deterministic(self, tokens):
        first = classify(tokens)
        assert first in set(QuestionType)
        assert classify(tokens) == first


class TestVerbInitial:
    def test_lexicon_hit(self):
        assert is_verb_initial(tokenize("find out some advantages for setting up a partnership"))

    def test_gerund_with_base_form(self):
        assert is_verb_initial(tokenize("unscrewing sliding window lock"))

    def test_plain_noun(self):
        assert not is_verb_initial(tokenize("watermelon health benefits"))

    def test_plural_noun_of_lexicon_verb_is_not_a_hit(self):
        # "name three polymers" is a request, but "names of winners" is not.
        assert is_verb_initial(tokenize("name three common polymers"))
        assert not is_verb_initial(tokenize("names of olympic winners of 2008"))


class TestEvaluate:
    def test_all_correct(self):
        labeled = [("who is x", QuestionType.ROOT), ("can x", QuestionType.POLAR)]
        report = evaluate_classifier(labeled)
        assert report.average == 1.0

    def test_half_correct(self):
        labeled = [("who is x", QuestionType.ROOT), ("who is y", QuestionType.POLAR)]
        report = evaluate_classifier(labeled)
        assert report.average == 0.5

    def test_reference_fixture_accuracy(self):
        report = evaluate_classifier(TYPED_UTTERANCES)
        assert report.average >= 0.95

    def test_empty_raises(self):
        with pytest.raises(EmptyInput):
            evaluate_classifier([])

    def test_per_type_grouped_by_gold(self):
        labeled = [
            ("who is x", QuestionType.ROOT),
            ("which one", QuestionType.ROOT),
            ("sports softball", QuestionType.REQUEST),  # classifier says other
        ]
        report = evaluate_classifier(labeled)
        assert report.per_type[QuestionType.ROOT] == 1.0
        assert report.per_type[QuestionType.REQUEST] == 0.0
        assert report.support[QuestionType.ROOT] == 2


class TestConfigRoundTrip:
    def test_json_round_trip_preserves_classifications(self, tmp_path):
        path = tmp_path / "keywords.json"
        DEFAULT_CONFIG.save(path)
        loaded = KeywordConfig.load(path)
        assert loaded == DEFAULT_CONFIG
        for text, _ in TYPED_UTTERANCES:
            assert classify_text(text, loaded) == classify_text(text, DEFAULT_CONFIG)

    def test_default_lists_pinned(self):
        assert DEFAULT_CONFIG.wh_unigrams == {"what", "where", "when", "which", "who", "why"}
        assert len(DEFAULT_CONFIG.how_bigrams) == 20
        assert all(b.startswith("how ") for b in DEFAULT_CONFIG.how_bigrams)
        assert DEFAULT_CONFIG.polar_keywords == {
            "do", "does", "did", "can", "was", "were", "should", "is", "isn",
            "has", "have", "are", "aren", "will",
        }

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            KeywordConfig(wh_unigrams=frozenset())
