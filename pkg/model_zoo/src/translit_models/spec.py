"""Model specifications and their pinned default hyperparameters."""

from __future__ import annotations

from dataclasses import dataclass, field

FROM_SCRATCH_ARCHS = ("lstm_attention", "char_transformer", "g2p_transformer")
PRETRAINED_ARCHS = ("byt5_small", "mt5_small_lora", "mbart_large")
ARCHS = FROM_SCRATCH_ARCHS + PRETRAINED_ARCHS

# Defaults are contractual: tests assert them, downstream runs rely on them.
_COMMON_SCRATCH = {
    "embed_dim": 256,
    "dropout": 0.1,
    "lr": 5e-4,
    "batch_size": 64,
    "epochs": 20,
    "grad_clip": None,
    "weight_decay": 0.0,
    "label_smoothing": 0.0,
}

ARCH_DEFAULTS: dict[str, dict] = {
    "lstm_attention": {
        **_COMMON_SCRATCH,
        "layers": 2,
        "hidden_dim": 256,
        "bidirectional_encoder": True,
        "teacher_forcing_p": 0.5,
        "grad_clip": 1.0,
        "max_len": 512,
    },
    "char_transformer": {
        **_COMMON_SCRATCH,
        "layers": 4,
        "heads": 8,
        "hidden_dim": 1024,
        "max_len": 5000,
        "cosine_schedule": True,
    },
    "g2p_transformer": {
        **_COMMON_SCRATCH,
        "layers": 4,
        "heads": 8,
        "hidden_dim": 1024,
        "max_len": 512,
        "cosine_schedule": True,
        "label_smoothing": 0.1,
        "weight_decay": 1e-4,
        "uniform_init_range": 0.1,
    },
    "byt5_small": {
        "model_name": "google/byt5-small",
        "lr": 3e-4,
        "epochs": 2,
        "batch_size": 8,
        "max_len": 512,
    },
    "mt5_small_lora": {
        "model_name": "google/mt5-small",
        "lr": 3e-4,
        "epochs": 2,
        "batch_size": 8,
        "max_len": 512,
        "lora_rank": 8,
        "lora_alpha": 32,
        "lora_dropout": 0.05,
        "lora_targets": ("q", "k", "v", "o"),
    },
    "mbart_large": {
        "model_name": "facebook/mbart-large-50-many-to-many-mmt",
        "lr": 3e-4,
        "epochs": 2,
        "batch_size": 8,
        "max_len": 512,
        "src_lang": {"tj2fa": "tg_Cyrl", "fa2tj": "fa_IR"},
        "tgt_lang": {"tj2fa": "fa_IR", "fa2tj": "tg_Cyrl"},
    },
}


@dataclass(frozen=True)
class ModelSpec:
    arch: str
    hyperparameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.arch not in ARCHS:
            raise ValueError(f"unknown architecture {self.arch!r} (choose from {ARCHS})")
        unknown = set(self.hyperparameters) - set(ARCH_DEFAULTS[self.arch])
        if unknown:
            raise ValueError(f"unknown hyperparameters for {self.arch}: {sorted(unknown)}")

    def resolved(self) -> dict:
        merged = dict(ARCH_DEFAULTS[self.arch])
        merged.update(self.hyperparameters)
        return merged

    def to_dict(self) -> dict:
        return {"arch": self.arch, "hyperparameters": dict(self.hyperparameters)}

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelSpec":
        return cls(arch=doc["arch"], hyperparameters=dict(doc.get("hyperparameters", {})))
