"""Six binary classifiers behind one score-in-[0,1] interface."""

from __future__ import annotations

from ..dataset import LabeledDataset
from ..errors import InvalidInputError
from .base import ScoringModel, TrainConfig
from .cosine import CosineTemplateModel, build_cosine_template
from .forest import ForestModel, train_random_forest
from .io import load_model, save_model
from .mlp import MlpModel, train_mlp
from .perceptron import PerceptronModel, train_perceptron
from .svm import LinearSvmModel, RbfSvmModel, train_linear_svm, train_rbf_svm

TRAINERS = {
    "perceptron": train_perceptron,
    "linsvm": train_linear_svm,
    "rbfsvm": train_rbf_svm,
    "rndf": train_random_forest,
    "mlp": train_mlp,
    "cosine": build_cosine_template,
}

ALGORITHMS = tuple(TRAINERS)


def train(algorithm: str, data: LabeledDataset, config: TrainConfig = TrainConfig()):
    try:
        trainer = TRAINERS[algorithm]
    except KeyError:
        raise InvalidInputError(
            f"unknown classifier {algorithm!r}; choose from {', '.join(ALGORITHMS)}"
        ) from None
    return trainer(data, config)


__all__ = [
    "ALGORITHMS",
    "TRAINERS",
    "CosineTemplateModel",
    "ForestModel",
    "LinearSvmModel",
    "MlpModel",
    "PerceptronModel",
    "RbfSvmModel",
    "ScoringModel",
    "TrainConfig",
    "build_cosine_template",
    "load_model",
    "save_model",
    "train",
    "train_linear_svm",
    "train_mlp",
    "train_perceptron",
    "train_random_forest",
    "train_rbf_svm",
]
