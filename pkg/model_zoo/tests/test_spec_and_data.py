import json

import pytest
import torch

from translit_models.data import (
    BOS,
    EOS,
    PAD,
    UNK,
    CharVocab,
    batches,
    pad_batch,
    read_pairs,
)
from translit_models.spec import ARCH_DEFAULTS, ModelSpec


class TestSpec:
    def test_pinned_lstm_defaults(self):
        hp = ARCH_DEFAULTS["lstm_attention"]
        assert hp["layers"] == 2
        assert hp["hidden_dim"] == 256
        assert hp["embed_dim"] == 256
        assert hp["bidirectional_encoder"] is True
        assert hp["teacher_forcing_p"] == 0.5
        assert hp["lr"] == 5e-4
        assert hp["grad_clip"] == 1.0
        assert hp["dropout"] == 0.1

    def test_pinned_char_transformer_defaults(self):
        hp = ARCH_DEFAULTS["char_transformer"]
        assert (hp["layers"], hp["embed_dim"], hp["heads"], hp["hidden_dim"]) == (4, 256, 8, 1024)
        assert hp["max_len"] == 5000

    def test_pinned_g2p_defaults(self):
        hp = ARCH_DEFAULTS["g2p_transformer"]
        assert hp["max_len"] == 512
        assert hp["label_smoothing"] == 0.1
        assert hp["weight_decay"] == 1e-4
        assert hp["uniform_init_range"] == 0.1

    def test_pinned_lora_defaults(self):
        hp = ARCH_DEFAULTS["mt5_small_lora"]
        assert hp["lora_rank"] == 8
        assert hp["lora_alpha"] == 32
        assert hp["lora_dropout"] == 0.05
        assert tuple(hp["lora_targets"]) == ("q", "k", "v", "o")

    def test_unknown_arch_rejected(self):
        with pytest.raises(ValueError):
            ModelSpec(arch="rnn_gru")

    def test_unknown_hyperparameter_rejected(self):
        with pytest.raises(ValueError):
            ModelSpec(arch="g2p_transformer", hyperparameters={"warmup": 10})

    def test_overrides_apply(self):
        spec = ModelSpec(arch="g2p_transformer", hyperparameters={"epochs": 3})
        assert spec.resolved()["epochs"] == 3
        assert spec.resolved()["layers"] == 4


class TestVocab:
    def test_build_and_round_trip(self):
        vocab = CharVocab.build(["абв", "вга"])
        assert len(vocab) == 4 + 4
        ids = vocab.encode("ваг")
        assert ids[0] == BOS and ids[-1] == EOS
        assert vocab.decode(ids[1:]) == "ваг"

    def test_unknown_maps_to_unk_and_is_dropped_on_decode(self):
        vocab = CharVocab.build(["аб"])
        ids = vocab.encode("аxб")
        assert UNK in ids
        assert vocab.decode(ids[1:]) == "аб"

    def test_truncation(self):
        vocab = CharVocab.build(["абвгд"])
        ids = vocab.encode("абвгд" * 10, max_len=8)
        assert len(ids) == 8
        assert ids[-1] == EOS

    def test_serialization(self):
        vocab = CharVocab.build(["салом"])
        clone = CharVocab.from_dict(json.loads(json.dumps(vocab.to_dict())))
        assert clone.chars == vocab.chars

    def test_specials_required(self):
        with pytest.raises(ValueError):
            CharVocab.from_dict({"chars": ["а", "б"]})


class TestBatching:
    def test_pad_batch_shapes(self):
        out = pad_batch([[1, 2, 3], [1]])
        assert out.shape == (2, 3)
        assert out[1, 1] == PAD

    def test_batches_cover_all_pairs(self):
        pairs = [(f"а{i}", f"б{i}") for i in range(10)]
        vocab = CharVocab.build([s for s, _ in pairs] + [t for _, t in pairs])
        seen = 0
        for src, tgt in batches(pairs, vocab, vocab, batch_size=4, max_len=16):
            assert src.dtype == torch.long
            assert src.size(0) == tgt.size(0)
            seen += src.size(0)
        assert seen == 10


class TestReadPairs:
    def test_direction_swap(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            json.dumps({"tajik": "дар", "farsi": "در", "category": "x"}) + "\n",
            encoding="utf-8",
        )
        assert read_pairs(path, "tj2fa") == [("дар", "در")]
        assert read_pairs(path, "fa2tj") == [("در", "дар")]

    def test_bad_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text("{\n", encoding="utf-8")
        with pytest.raises(ValueError, match="bad.jsonl:1"):
            read_pairs(path, "tj2fa")

    def test_bad_direction(self, tmp_path):
        with pytest.raises(ValueError):
            read_pairs(tmp_path / "x.jsonl", "en2fr")
