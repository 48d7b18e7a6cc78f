"""Trainable transliteration models speaking the benchmark adapter protocol."""

__version__ = "0.1.0"

from .data import CharVocab, read_pairs
from .predict import predict
from .spec import ARCH_DEFAULTS, ARCHS, FROM_SCRATCH_ARCHS, ModelSpec
from .train import TrainingDiverged, build_model, train

__all__ = [
    "ARCHS",
    "ARCH_DEFAULTS",
    "CharVocab",
    "FROM_SCRATCH_ARCHS",
    "ModelSpec",
    "TrainingDiverged",
    "build_model",
    "predict",
    "read_pairs",
    "train",
]
