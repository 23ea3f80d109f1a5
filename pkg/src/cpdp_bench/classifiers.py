"""Built-in defect classifiers behind a uniform train/score interface.

Three kinds ship: Gaussian Naive Bayes, k-nearest-neighbour voting (k=3),
and Random Forest (1000 trees, fixed construction seed 42). NB and RF wrap
scikit-learn estimators configured to the benchmark's fixed parameters; KNN
scoring is computed in-package on the distance kernels so that exact
distance ties contribute fractionally (the score is then invariant under
any reordering of the training set).

Scores are defect probabilities in [0, 1]; the classification threshold is
0.5, with ties classified defective. ``register_classifier`` is the
extension point for additional kinds. Reference configurations for plug-ins
mirroring the wider benchmark family: NNET hidden-layer-sizes=(30, 30, 30),
SVM kernel="linear", XGB library defaults.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from sklearn.ensemble import RandomForestClassifier
from sklearn.naive_bayes import GaussianNB

from . import kernels
from .data import Dataset
from .errors import SchemaError, SingleClassError


class ModelKind(str, Enum):
    NB = "nb"
    KNN = "knn"
    RF = "rf"


@dataclass(frozen=True)
class ModelParams:
    """Fixed model configuration.

    nb_var_smoothing is relative to the largest per-feature variance (the
    GaussianNB convention); rf_seed defaults to the benchmark's pinned
    forest construction seed.
    """

    nb_var_smoothing: float = 1e-9
    knn_neighbors: int = 3
    rf_trees: int = 1000
    rf_seed: int = 42

    def __post_init__(self):
        if self.knn_neighbors < 1:
            raise ValueError("knn_neighbors must be >= 1")
        if self.rf_trees < 1:
            raise ValueError("rf_trees must be >= 1")
        if self.nb_var_smoothing < 0:
            raise ValueError("nb_var_smoothing must be nonnegative")


@dataclass(frozen=True)
class TrainedModel:
    kind: str
    schema: tuple
    scorer: object  # callable (n, p) float matrix -> scores in [0, 1]


def _as_xy(data):
    return data.features, data.labels.astype(np.int64)


def _train_nb(data, params):
    x, y = _as_xy(data)
    model = GaussianNB(var_smoothing=params.nb_var_smoothing).fit(x, y)
    positive = int(np.flatnonzero(model.classes_ == 1)[0])

    def score(features):
        return model.predict_proba(features)[:, positive]

    return score


def _train_knn(data, params):
    x, y = _as_xy(data)
    k = min(params.knn_neighbors, len(x))

    def score(features):
        d = kernels.pairwise_sq_dists(features, x)
        d_sorted = np.sort(d, axis=1)
        boundary = d_sorted[:, k - 1][:, None]
        closer = d < boundary
        tied = d == boundary
        n_closer = closer.sum(axis=1)
        n_tied = tied.sum(axis=1)
        votes = (closer * y).sum(axis=1) + (
            (k - n_closer) / n_tied * (tied * y).sum(axis=1)
        )
        return votes / k

    return score


def _train_rf(data, params):
    x, y = _as_xy(data)
    model = RandomForestClassifier(
        n_estimators=params.rf_trees,
        criterion="gini",
        max_features="sqrt",
        min_samples_split=2,
        bootstrap=True,
        random_state=params.rf_seed,
        n_jobs=1,
    ).fit(x, y)

    def score(features):
        # fraction of trees voting defective (hard per-tree votes)
        votes = np.zeros(len(features), dtype=np.float64)
        for tree in model.estimators_:
            votes += tree.predict(features)
        return votes / len(model.estimators_)

    return score


_TRAINERS = {
    ModelKind.NB.value: _train_nb,
    ModelKind.KNN.value: _train_knn,
    ModelKind.RF.value: _train_rf,
}


def register_classifier(name, trainer):
    """Register an external model kind.

    ``trainer(data, params)`` must return a callable mapping a feature
    matrix to defect scores in [0, 1].
    """
    key = str(name).strip().lower()
    if key in _TRAINERS:
        raise ValueError(f"model kind {key!r} already registered")
    _TRAINERS[key] = trainer


def available_models():
    return sorted(_TRAINERS)


def parse_model(name):
    key = str(name.value if isinstance(name, ModelKind) else name).strip().lower()
    if key not in _TRAINERS:
        raise ValueError(
            f"unknown model kind {name!r} (available: {', '.join(available_models())})"
        )
    return key


def train(kind, data, params=ModelParams()):
    """Fit one model kind on a training dataset.

    Deterministic given (kind, data, params). Raises SingleClassError when
    the training data holds only one class.
    """
    key = parse_model(kind)
    if data.labels.all() or not data.labels.any():
        raise SingleClassError(
            f"training data for {key} contains a single class "
            f"({data.n_defective} defective of {len(data)})"
        )
    scorer = _TRAINERS[key](data, params)
    return TrainedModel(kind=key, schema=data.schema, scorer=scorer)


def predict_scores(model, instances):
    """Defect scores in [0, 1] for a Dataset or feature matrix."""
    if isinstance(instances, Dataset):
        if instances.schema != model.schema:
            raise SchemaError(
                f"schema mismatch: model trained on {model.schema}, "
                f"got {instances.schema}"
            )
        features = instances.features
    else:
        features = np.asarray(instances, dtype=np.float64)
        if features.ndim != 2 or features.shape[1] != len(model.schema):
            raise SchemaError(
                f"feature matrix width {features.shape[-1]} does not match "
                f"training schema of {len(model.schema)} columns"
            )
    return model.scorer(features)


def predict_labels(model, instances):
    """Binary prediction: defective iff score >= 0.5."""
    return predict_scores(model, instances) >= 0.5
