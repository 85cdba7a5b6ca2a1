"""Model serialization: one .npz per model, self-describing, bit-exact.

Layout: a ``format_version`` tag, an ``algorithm`` tag, then one entry
per model field. Floats round-trip exactly (npz stores raw float64), so
reloaded models score identically.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from .base import ScoringModel
from .cosine import CosineTemplateModel
from .forest import ForestModel
from .mlp import MlpModel
from .perceptron import PerceptronModel
from .svm import LinearSvmModel, RbfSvmModel

FORMAT_VERSION = 1

# algorithm tag -> (class, field -> caster applied on load)
_SCHEMAS = {
    "perceptron": (
        PerceptronModel,
        {"weights": None, "bias": float, "converged": bool, "updates": int,
         "epochs_run": int},
    ),
    "linsvm": (LinearSvmModel, {"weights": None, "bias": float, "converged": bool}),
    "rbfsvm": (
        RbfSvmModel,
        {"support_vectors": None, "dual_coef": None, "bias": float, "gamma": float,
         "converged": bool},
    ),
    "rndf": (
        ForestModel,
        {"features": None, "thresholds": None, "lefts": None, "rights": None,
         "votes": None, "roots": None, "n_features": int},
    ),
    "mlp": (MlpModel, {"w1": None, "b1": None, "w2": None, "b2": None, "w3": None,
                       "b3": None}),
    "cosine": (CosineTemplateModel, {"template": None}),
}


def save_model(model: ScoringModel, path) -> None:
    tag = model.algorithm
    if tag not in _SCHEMAS:
        raise InvalidInputError(f"unknown algorithm tag {tag!r}")
    _, fields = _SCHEMAS[tag]
    payload = {name: getattr(model, name) for name in fields}
    np.savez(path, format_version=FORMAT_VERSION, algorithm=tag, **payload)


def load_model(path) -> ScoringModel:
    with np.load(path, allow_pickle=False) as data:
        version = int(data["format_version"])
        if version != FORMAT_VERSION:
            raise InvalidInputError(f"unsupported model format version {version}")
        tag = str(data["algorithm"])
        if tag not in _SCHEMAS:
            raise InvalidInputError(f"unknown algorithm tag {tag!r} in {path}")
        cls, fields = _SCHEMAS[tag]
        kwargs = {}
        for name, cast in fields.items():
            value = data[name]
            kwargs[name] = cast(value) if cast is not None else value
    return cls(**kwargs)
