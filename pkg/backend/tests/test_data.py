from __future__ import annotations

import pytest

from conftest import pair_row, write_pairs
from qreform_backend.data import (
    PairRecord,
    Vocab,
    parse_prefixed,
    read_pairs,
    render_prefixed,
    split_validation,
    upsample_gen,
)


class TestPrefix:
    @pytest.mark.parametrize("operator", ["REP", "ROO", "GEN"])
    def test_round_trip(self, operator):
        text = render_prefixed(operator, "who is bill pullman's son")
        assert parse_prefixed(text) == (operator, "who is bill pullman's son")

    def test_unknown_operator_rejected(self):
        with pytest.raises(ValueError):
            render_prefixed("FIX", "who is x")

    def test_unprefixed_text_rejected(self):
        with pytest.raises(ValueError):
            parse_prefixed("who is x")


class TestReadPairs:
    def test_reads_toolkit_pair_format(self, tmp_path):
        path = write_pairs(tmp_path / "pairs.ndjson", [
            pair_row("who is x", "who is the x", "REP"),
            pair_row("do cats swim", "why do cats swim", "ROO"),
        ])
        pairs = read_pairs(path)
        assert pairs[0] == PairRecord("who is x", "who is the x", "REP")
        assert pairs[1].operator == "ROO"

    def test_empty_file_is_an_error(self, tmp_path):
        path = tmp_path / "pairs.ndjson"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ValueError):
            read_pairs(path)

    def test_unknown_operator_is_an_error(self, tmp_path):
        path = write_pairs(tmp_path / "pairs.ndjson", [pair_row("a b", "c d", "REP")])
        with open(path, "a", encoding="utf-8") as fh:
            fh.write('{"source": "a", "target": "b", "operator": "FIX"}\n')
        with pytest.raises(ValueError, match="unknown operator"):
            read_pairs(path)

    def test_empty_side_is_an_error(self, tmp_path):
        path = tmp_path / "pairs.ndjson"
        path.write_text('{"source": " ", "target": "b", "operator": "REP"}\n', encoding="utf-8")
        with pytest.raises(ValueError, match="empty source or target"):
            read_pairs(path)


class TestVocab:
    def test_case_preserved_and_sorted(self):
        vocab = Vocab.from_texts(["alpha BRAVO", "charlie alpha"])
        assert vocab.tokens[:7] == ["<pad>", "<s>", "</s>", "<unk>", "REP:", "ROO:", "GEN:"]
        assert "BRAVO" in vocab.tokens and "alpha" in vocab.tokens

    def test_encode_appends_eos_and_maps_unknowns(self):
        vocab = Vocab.from_texts(["alpha bravo"])
        ids = vocab.encode("alpha zulu", max_len=8)
        assert ids[-1] == 2  # eos
        assert 3 in ids  # unk

    def test_decode_stops_at_eos_and_skips_specials(self):
        vocab = Vocab.from_texts(["alpha bravo"])
        alpha = vocab.index["alpha"]
        bravo = vocab.index["bravo"]
        assert vocab.decode([1, alpha, 0, bravo, 2, alpha]) == "alpha bravo"

    def test_encode_truncates_to_max_len(self):
        vocab = Vocab.from_texts(["a b c d e f"])
        ids = vocab.encode("a b c d e f", max_len=4)
        assert len(ids) == 4 and ids[-1] == 2

    def test_save_load_round_trip(self, tmp_path):
        vocab = Vocab.from_texts(["alpha BRAVO charlie"])
        vocab.save(tmp_path / "vocab.json")
        loaded = Vocab.load(tmp_path / "vocab.json")
        assert loaded.tokens == vocab.tokens


class TestUpsampleAndSplit:
    def test_gen_multiplied_adjacent(self):
        pairs = [
            PairRecord("a", "b", "REP"),
            PairRecord("c", "d", "GEN"),
            PairRecord("e", "f", "ROO"),
        ]
        out = upsample_gen(pairs, factor=3)
        assert [p.operator for p in out] == ["REP", "GEN", "GEN", "GEN", "ROO"]

    def test_split_is_stable_and_never_empty(self):
        pairs = [PairRecord(f"s{i}", f"t{i}", "REP") for i in range(10)]
        first = split_validation(pairs, fraction=0.2, seed=5)
        second = split_validation(pairs, fraction=0.2, seed=5)
        assert first == second
        train, val = first
        assert len(val) == 2 and len(train) == 8
        tiny_train, tiny_val = split_validation(pairs[:2], fraction=0.01, seed=5)
        assert len(tiny_val) == 1 and len(tiny_train) == 1
