"""Wrapper plumbing exercised on tiny randomly initialized models.

Real fine-tuning needs downloadable weights, which this environment does
not have; these tests cover LoRA injection and the train/predict loops
on a local T5 configuration with the byte tokenizer.
"""

import json

import pytest
import torch

transformers = pytest.importorskip("transformers")

from translit_models.pretrained import (
    LoRALinear,
    apply_lora,
    predict_pretrained,
    train_pretrained,
)
from translit_models.spec import ModelSpec

from conftest import make_cipher_corpus


def tiny_t5():
    tokenizer = transformers.ByT5Tokenizer()
    config = transformers.T5Config(
        vocab_size=384,
        d_model=32,
        d_kv=8,
        d_ff=37,
        num_layers=2,
        num_heads=4,
        decoder_start_token_id=0,
    )
    torch.manual_seed(0)
    return transformers.T5ForConditionalGeneration(config), tokenizer


class TestLora:
    def test_wraps_qkvo_and_freezes_base(self):
        model, _ = tiny_t5()
        n_params = sum(p.numel() for p in model.parameters())
        wrapped = apply_lora(model, rank=8, alpha=32, dropout=0.05)
        # 2 encoder self-attn + 2 decoder self-attn + 2 cross-attn blocks
        assert wrapped == 6 * 4
        trainable = [(n, p) for n, p in model.named_parameters() if p.requires_grad]
        assert trainable
        assert all("lora_" in n for n, _ in trainable)
        assert sum(p.numel() for _, p in trainable) < n_params * 0.5

    def test_lora_shapes_and_forward(self):
        base = torch.nn.Linear(16, 24)
        lora = LoRALinear(base, rank=8, alpha=32, dropout=0.0)
        assert lora.lora_a.shape == (8, 16)
        assert lora.lora_b.shape == (24, 8)
        x = torch.randn(5, 16)
        # B starts at zero, so the wrapped layer initially equals the base
        assert torch.allclose(lora(x), base(x), atol=1e-6)

    def test_no_targets_found(self):
        with pytest.raises(ValueError):
            apply_lora(torch.nn.Linear(4, 4))


class TestPretrainedLoop:
    def test_train_and_predict_tiny(self, tmp_path):
        train_file = tmp_path / "train.jsonl"
        valid_file = tmp_path / "valid.jsonl"
        make_cipher_corpus(train_file, 12, seed=5, min_len=3, max_len=5)
        make_cipher_corpus(valid_file, 4, seed=6, min_len=3, max_len=5)
        spec = ModelSpec(
            arch="mt5_small_lora",
            hyperparameters={"epochs": 1, "batch_size": 4, "max_len": 32},
        )
        model, tokenizer = tiny_t5()
        apply_lora(model, 8, 32, 0.0)
        log = train_pretrained(
            spec, train_file, valid_file, "tj2fa", seed=1,
            out_dir=tmp_path / "out", model_and_tokenizer=(model, tokenizer),
        )
        assert len(log["epochs"]) == 1
        assert (tmp_path / "out" / "train_log.json").exists()

        infile = tmp_path / "in.txt"
        infile.write_text("абв\nгде\n", encoding="utf-8")
        outfile = tmp_path / "hyp.txt"
        n = predict_pretrained(model, tokenizer, infile, outfile, max_len=16, batch_size=2)
        assert n == 2
        assert len(outfile.read_text(encoding="utf-8").splitlines()) == 2
