"""Template matcher: cosine similarity against the mean positive vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import LabeledDataset
from ..errors import InvalidInputError
from .base import ScoringModel, TrainConfig


@dataclass(frozen=True)
class CosineTemplateModel(ScoringModel):
    template: np.ndarray

    algorithm = "cosine"

    @property
    def feature_count(self) -> int:
        return self.template.shape[0]

    def _score_matrix(self, x: np.ndarray) -> np.ndarray:
        # score = (cos + 1) / 2 in [0,1]; the all-zero probe has no
        # direction and scores 0 (hard reject).
        norms = np.linalg.norm(x, axis=1)
        tnorm = np.linalg.norm(self.template)
        out = np.zeros(x.shape[0])
        ok = norms > 0.0
        cos = (x[ok] @ self.template) / (norms[ok] * tnorm)
        out[ok] = 0.5 * (np.clip(cos, -1.0, 1.0) + 1.0)
        return out


def build_cosine_template(
    train: LabeledDataset, config: TrainConfig = TrainConfig()
) -> CosineTemplateModel:
    """Average the positive training vectors; negatives are ignored."""
    pos = train.features[train.labels > 0]
    if pos.shape[0] == 0:
        raise InvalidInputError("template needs at least one positive sample")
    template = pos.mean(axis=0)
    if not np.linalg.norm(template) > 0.0:
        raise InvalidInputError("positive samples average to the zero vector")
    return CosineTemplateModel(template=template)
