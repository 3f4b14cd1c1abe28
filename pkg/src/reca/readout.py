"""Linear readout layer: an L2-regularized max-margin classifier.

Training wraps scikit-learn's liblinear solver (primal, deterministic),
one-vs-rest over the output classes; the fitted weights are kept as a plain
(num_outputs, feature_width + 1) matrix with the bias in the last column.
Prediction is argmax of the linear scores with ties broken toward the
lowest class index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from sklearn.svm import LinearSVC


@dataclass(frozen=True)
class TrainingSet:
    """Feature rows with integer class labels 0..k-1 (k >= 2, all present)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        feats = np.asarray(self.features)
        labels = np.asarray(self.labels)
        if feats.ndim != 2 or feats.shape[0] < 1:
            raise ValueError("features must be a non-empty 2-D array")
        if labels.shape != (feats.shape[0],):
            raise ValueError("need exactly one label per feature row")
        if not np.issubdtype(labels.dtype, np.integer):
            raise ValueError("labels must be integers")
        present = np.unique(labels)
        if present.size < 2:
            raise ValueError("training data must contain at least 2 classes")
        if present[0] != 0 or present[-1] != present.size - 1:
            raise ValueError("labels must be exactly the classes 0..k-1")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)

    @property
    def num_classes(self) -> int:
        return int(self.labels.max()) + 1

    @property
    def feature_width(self) -> int:
        return int(self.features.shape[1])


@dataclass(frozen=True)
class ReadoutModel:
    """Trained linear weights; bias is the last column of ``weights``."""

    weights: np.ndarray
    regularization: float

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] < 2 or w.shape[1] < 2:
            raise ValueError("weights must be (num_outputs >= 2, width + 1)")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def num_outputs(self) -> int:
        return int(self.weights.shape[0])

    @property
    def feature_width(self) -> int:
        return int(self.weights.shape[1]) - 1

    def to_json(self) -> str:
        return json.dumps(
            {
                "num_outputs": self.num_outputs,
                "feature_width": self.feature_width,
                "regularization": self.regularization,
                "weights": self.weights.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ReadoutModel":
        doc = json.loads(text)
        model = cls(
            weights=np.asarray(doc["weights"], dtype=np.float64),
            regularization=float(doc["regularization"]),
        )
        if (
            model.num_outputs != doc["num_outputs"]
            or model.feature_width != doc["feature_width"]
        ):
            raise ValueError("weight shape disagrees with the declared dimensions")
        return model


def train(data: TrainingSet, regularization: float = 1.0) -> ReadoutModel:
    """Fit the one-vs-rest linear readout.

    ``regularization`` is the SVM C parameter (larger = weaker
    regularization). Deterministic: identical data and C give bit-identical
    weights.
    """
    if not regularization > 0:
        raise ValueError("regularization must be positive")
    X = np.asarray(data.features, dtype=np.float64)
    y = np.asarray(data.labels)
    clf = LinearSVC(C=regularization, dual=False)
    clf.fit(X, y)
    k = data.num_classes
    width = data.feature_width
    weights = np.empty((k, width + 1), dtype=np.float64)
    if k == 2:
        # liblinear fits a single separator for binary problems; expand it
        # so that argmax over the two rows reproduces its sign rule.
        weights[1, :width] = clf.coef_[0]
        weights[1, width] = clf.intercept_[0]
        weights[0] = -weights[1]
    else:
        weights[:, :width] = clf.coef_
        weights[:, width] = clf.intercept_
    return ReadoutModel(weights=weights, regularization=float(regularization))


def decision_scores(model: ReadoutModel, features: np.ndarray) -> np.ndarray:
    feats = np.asarray(features, dtype=np.float64)
    if feats.shape[-1] != model.feature_width:
        raise ValueError(
            f"feature width {feats.shape[-1]} does not match model "
            f"({model.feature_width})"
        )
    return feats @ model.weights[:, :-1].T + model.weights[:, -1]


def predict(model: ReadoutModel, feature) -> int:
    """Class index with the highest score; ties go to the lowest index."""
    feature = np.asarray(feature)
    if feature.ndim != 1:
        raise ValueError("predict takes a single feature vector")
    return int(np.argmax(decision_scores(model, feature)))


def predict_batch(model: ReadoutModel, features) -> np.ndarray:
    """Row-wise ``predict`` over a (n, feature_width) matrix."""
    feats = np.asarray(features)
    if feats.ndim != 2:
        raise ValueError("predict_batch takes a 2-D feature matrix")
    return np.argmax(decision_scores(model, feats), axis=1)
