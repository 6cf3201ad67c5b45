"""Binary text classifiers: multinomial naive Bayes, logistic regression,
and a linear SVM.

Naive Bayes is fit in closed form from Laplace-smoothed term masses. The two
linear models share one SGD loop over sparse inputs with L2 regularization
applied through a lazily maintained global scale, so each update touches only
the nonzero coordinates of the current instance. The learning rate decays as

    eta_t = eta0 / (1 + eta0 * lambda * t)

which makes the accumulated shrink factor telescope to 1 / (1 + eta0*lambda*T)
after T updates; the scale can never collapse to zero in finite time.

Labels are the dataset's "positive"/"negative" strings; scores are signed,
and a score of exactly zero predicts negative.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .corpus import NEGATIVE, POSITIVE
from .seeding import derive_seed
from .vectorizer import SparseVector

MODEL_SCHEMA_VERSION = 1


class Algorithm(str, Enum):
    NB = "nb"
    LR = "lr"
    SVM = "svm"


@dataclass(frozen=True)
class TrainConfig:
    algorithm: Algorithm = Algorithm.LR
    l2_lambda: float = 1e-4
    epochs: int = 20
    learning_rate: float = 0.1
    nb_alpha: float = 1.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        # All rates strictly positive: the decay schedule divides by
        # 1 + eta0*lambda*t and NB smoothing must keep likelihoods finite.
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.l2_lambda <= 0:
            raise ValueError("l2_lambda must be positive")
        if self.nb_alpha <= 0:
            raise ValueError("nb_alpha must be positive")


def _signs(labels: Sequence[str]) -> np.ndarray:
    y = np.empty(len(labels))
    for i, label in enumerate(labels):
        if label == POSITIVE:
            y[i] = 1.0
        elif label == NEGATIVE:
            y[i] = -1.0
        else:
            raise ValueError(f"unknown label {label!r}")
    if len(labels) == 0 or abs(y.sum()) == len(labels):
        raise ValueError("training data must contain both classes")
    return y


# ---------------------------------------------------------------------------
# Naive Bayes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NaiveBayesModel:
    """Multinomial NB over term-mass vectors. score() is the positive-minus-
    negative joint log likelihood, so the decision threshold is zero."""

    log_prior: tuple[float, float]  # (positive, negative)
    log_cond_pos: tuple[float, ...]
    log_cond_neg: tuple[float, ...]
    alpha: float

    @property
    def dim(self) -> int:
        return len(self.log_cond_pos)

    def score(self, vector: SparseVector) -> float:
        if vector.dim != self.dim:
            raise ValueError("vector dimension does not match model")
        s = self.log_prior[0] - self.log_prior[1]
        for i, v in zip(vector.indices, vector.values):
            s += v * (self.log_cond_pos[i] - self.log_cond_neg[i])
        return s

    def predict(self, vector: SparseVector) -> str:
        return POSITIVE if self.score(vector) > 0.0 else NEGATIVE

    def predict_all(self, vectors: Sequence[SparseVector]) -> list[str]:
        return [self.predict(v) for v in vectors]


def train_nb(
    vectors: Sequence[SparseVector], labels: Sequence[str], config: TrainConfig
) -> NaiveBayesModel:
    """Closed-form multinomial NB fit.

    The conditional term masses are whatever the vectors carry; the intended
    input is raw counts, under which this is textbook Laplace-smoothed NB.
    """
    y = _signs(labels)
    if not vectors:
        raise ValueError("no training vectors")
    dim = vectors[0].dim
    mass = {1.0: np.zeros(dim), -1.0: np.zeros(dim)}
    n_by_class = {1.0: 0, -1.0: 0}
    for vec, sign in zip(vectors, y):
        if vec.dim != dim:
            raise ValueError("inconsistent vector dimensions")
        n_by_class[sign] += 1
        if vec.indices:
            np.add.at(mass[sign], list(vec.indices), vec.values)
    alpha = config.nb_alpha
    n = len(vectors)
    log_prior = (
        math.log(n_by_class[1.0] / n),
        math.log(n_by_class[-1.0] / n),
    )
    cond = {}
    for sign in (1.0, -1.0):
        total = mass[sign].sum()
        cond[sign] = np.log(mass[sign] + alpha) - math.log(total + alpha * dim)
    return NaiveBayesModel(
        log_prior=log_prior,
        log_cond_pos=tuple(cond[1.0]),
        log_cond_neg=tuple(cond[-1.0]),
        alpha=alpha,
    )


# ---------------------------------------------------------------------------
# Linear models (logistic regression, linear SVM)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearModel:
    """Dense weight vector plus unregularized bias."""

    weights: tuple[float, ...]
    bias: float
    algorithm: Algorithm

    @property
    def dim(self) -> int:
        return len(self.weights)

    def score(self, vector: SparseVector) -> float:
        if vector.dim != self.dim:
            raise ValueError("vector dimension does not match model")
        s = self.bias
        for i, v in zip(vector.indices, vector.values):
            s += v * self.weights[i]
        return s

    def predict(self, vector: SparseVector) -> str:
        return POSITIVE if self.score(vector) > 0.0 else NEGATIVE

    def predict_all(self, vectors: Sequence[SparseVector]) -> list[str]:
        return [self.predict(v) for v in vectors]


def _stable_sigmoid_neg(m: float) -> float:
    """sigma(-m) computed without overflow for any finite m."""
    if m >= 0:
        e = math.exp(-m)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(m))


def logistic_loss_and_grad(
    weights: np.ndarray,
    bias: float,
    vector: SparseVector,
    label: str,
    l2_lambda: float,
) -> tuple[float, np.ndarray, float]:
    """Per-instance regularized logistic loss and its exact gradient.

    loss = log(1 + exp(-y z)) + lambda/2 ||w||^2 with z = w.x + b. The SGD
    step in train_linear is one plain gradient descent step on this function.
    """
    y = 1.0 if label == POSITIVE else -1.0
    z = bias
    for i, v in zip(vector.indices, vector.values):
        z += v * weights[i]
    m = y * z
    if m > 0:
        loss = math.log1p(math.exp(-m))
    else:
        loss = -m + math.log1p(math.exp(m))
    loss += 0.5 * l2_lambda * float(np.dot(weights, weights))
    coef = -y * _stable_sigmoid_neg(m)
    grad_w = l2_lambda * weights.copy()
    if vector.indices:
        idx = list(vector.indices)
        grad_w[idx] += coef * np.asarray(vector.values)
    return loss, grad_w, coef


def train_linear(
    vectors: Sequence[SparseVector], labels: Sequence[str], config: TrainConfig
) -> LinearModel:
    """SGD for logistic or hinge loss with lazily scaled L2 shrinkage.

    The weight vector is represented as scale * direction; regularization
    multiplies the scale, the data term updates only the instance's nonzero
    coordinates. After every epoch the parameters are checked for NaN/Inf so
    a diverging run fails loudly, naming the epoch.
    """
    if config.algorithm not in (Algorithm.LR, Algorithm.SVM):
        raise ValueError(f"train_linear got algorithm {config.algorithm.value!r}")
    y = _signs(labels)
    if not vectors:
        raise ValueError("no training vectors")
    dim = vectors[0].dim
    pre = []
    for vec in vectors:
        if vec.dim != dim:
            raise ValueError("inconsistent vector dimensions")
        pre.append((np.asarray(vec.indices, dtype=np.intp), np.asarray(vec.values)))

    hinge = config.algorithm is Algorithm.SVM
    eta0, lam = config.learning_rate, config.l2_lambda
    direction = np.zeros(dim)
    scale = 1.0
    bias = 0.0
    t = 0
    order = list(range(len(vectors)))
    rng = random.Random(derive_seed(config.seed, "sgd", config.algorithm.value))
    for epoch in range(config.epochs):
        rng.shuffle(order)
        for i in order:
            t += 1
            eta = eta0 / (1.0 + eta0 * lam * t)
            idx, vals = pre[i]
            z = bias + scale * float(np.dot(direction[idx], vals)) if idx.size else bias
            sign = y[i]
            if hinge:
                step = sign if sign * z < 1.0 else 0.0
            else:
                step = sign * _stable_sigmoid_neg(sign * z)
            scale *= 1.0 - eta * lam
            if step != 0.0:
                if idx.size:
                    direction[idx] += (eta * step / scale) * vals
                bias += eta * step
        if not (math.isfinite(scale) and math.isfinite(bias) and np.isfinite(direction).all()):
            raise ValueError(
                f"{config.algorithm.value} training diverged: non-finite "
                f"parameters after epoch {epoch + 1}"
            )
    weights = scale * direction
    return LinearModel(weights=tuple(float(w) for w in weights), bias=bias,
                       algorithm=config.algorithm)


# ---------------------------------------------------------------------------
# Dispatch and persistence
# ---------------------------------------------------------------------------

ClassifierModel = NaiveBayesModel | LinearModel


def train(
    vectors: Sequence[SparseVector], labels: Sequence[str], config: TrainConfig
) -> ClassifierModel:
    """Train the configured classifier. Representation-agnostic: callers pass
    count vectors for NB and tf-idf vectors for the linear models."""
    if config.algorithm is Algorithm.NB:
        return train_nb(vectors, labels, config)
    return train_linear(vectors, labels, config)


def model_to_dict(model: ClassifierModel, vectorizer_hash: str = "") -> dict:
    if isinstance(model, NaiveBayesModel):
        return {
            "version": MODEL_SCHEMA_VERSION,
            "algorithm": Algorithm.NB.value,
            "vectorizer_hash": vectorizer_hash,
            "alpha": model.alpha,
            "log_prior": list(model.log_prior),
            "log_cond_pos": list(model.log_cond_pos),
            "log_cond_neg": list(model.log_cond_neg),
        }
    return {
        "version": MODEL_SCHEMA_VERSION,
        "algorithm": model.algorithm.value,
        "vectorizer_hash": vectorizer_hash,
        "weights": list(model.weights),
        "bias": model.bias,
    }


def model_from_dict(obj: dict) -> tuple[ClassifierModel, str]:
    """Returns (model, vectorizer_hash recorded at save time)."""
    if obj.get("version") != MODEL_SCHEMA_VERSION:
        raise ValueError(f"unsupported model schema version: {obj.get('version')!r}")
    algorithm = Algorithm(obj["algorithm"])
    vhash = str(obj.get("vectorizer_hash", ""))
    if algorithm is Algorithm.NB:
        model: ClassifierModel = NaiveBayesModel(
            log_prior=(float(obj["log_prior"][0]), float(obj["log_prior"][1])),
            log_cond_pos=tuple(float(v) for v in obj["log_cond_pos"]),
            log_cond_neg=tuple(float(v) for v in obj["log_cond_neg"]),
            alpha=float(obj["alpha"]),
        )
    else:
        model = LinearModel(
            weights=tuple(float(w) for w in obj["weights"]),
            bias=float(obj["bias"]),
            algorithm=algorithm,
        )
    return model, vhash


def save_model(model: ClassifierModel, path: str, vectorizer_hash: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model, vectorizer_hash), fh, sort_keys=True)
        fh.write("\n")


def load_model(path: str) -> tuple[ClassifierModel, str]:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    return model_from_dict(obj)
