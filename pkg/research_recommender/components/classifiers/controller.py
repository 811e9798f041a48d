import numpy as np

from research_recommender.components.classifiers.gbt import ensemble_raw_score, train_gbt
from research_recommender.components.classifiers.logreg import sigmoid, train_logreg
from research_recommender.components.classifiers.schemas import (
    ConstantParams,
    EnsembleParams,
    Hyperparams,
    LinearParams,
    TrainedModel,
)
from research_recommender.components.classifiers.svm import train_svm
from research_recommender.components.features.controller import examples_matrix, fit_standardizer
from research_recommender.components.features.schemas import FeatureVector, LabeledExample
from research_recommender.core.enums import BaselineMode, Method, ModelKind
from research_recommender.core.exceptions import EmptyInputException, FeatureMismatchException
from research_recommender.core.log import logger


def train_constant(examples: list[LabeledExample], mode: BaselineMode) -> TrainedModel:
    """Constant classifier; majority_class breaks ties toward 0"""
    X, y, names = examples_matrix(examples)
    if mode == BaselineMode.ALWAYS_POSITIVE:
        predicted = 1
    else:
        predicted = int(y.sum() > len(y) - y.sum())

    return TrainedModel(
        kind=ModelKind.CONSTANT,
        feature_names=names,
        standardizer=fit_standardizer(examples),
        params=ConstantParams(mode=mode, predicted_class=predicted, value=float(predicted)),
    )


class ClassifiersController:
    def __init__(
        self,
        hyper: Hyperparams | None = None,
        baseline_mode: BaselineMode = BaselineMode.MAJORITY_CLASS,
        passthrough: tuple[str, ...] = (),
    ):
        self.hyper = hyper or Hyperparams()
        self.baseline_mode = baseline_mode
        self.passthrough = passthrough

    def train(self, method: Method, examples: list[LabeledExample], metadata: dict[str, str] | None = None) -> TrainedModel:
        if not examples:
            raise EmptyInputException("cannot train on zero examples")

        if method == Method.BASELINE:
            model = train_constant(examples, self.baseline_mode)
            return model.model_copy(update={"metadata": dict(metadata or {})})

        standardizer = fit_standardizer(examples, passthrough=self.passthrough)
        X, y, names = examples_matrix(examples)
        Z = standardizer.transform(X)

        if method == Method.LOGREG:
            kind = ModelKind.LOGREG
            params, history = train_logreg(Z, y, self.hyper.logreg)
        elif method == Method.GBT:
            kind = ModelKind.GBT
            params, history = train_gbt(Z, y, self.hyper.gbt)
        elif method == Method.SVM:
            kind = ModelKind.SVM
            params, history = train_svm(Z, y, self.hyper.svm)
        else:
            raise ValueError(f"Unsupported method: {method}")

        logger.info(
            f"Trained {kind.value} on {len(y)} examples ({int(y.sum())} positive), "
            f"final loss {history[-1]:.6f} after {len(history) - 1} step(s)"
        )
        return TrainedModel(
            kind=kind,
            feature_names=names,
            standardizer=standardizer,
            params=params,
            loss_history=history,
            metadata=dict(metadata or {}),
        )


def score_matrix(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    """Scores for raw (unstandardized) feature rows in model.feature_names order"""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != len(model.feature_names):
        raise FeatureMismatchException(
            f"model expects {len(model.feature_names)} feature column(s), got shape {X.shape}"
        )
    params = model.params

    if isinstance(params, ConstantParams):
        return np.full(len(X), params.value)

    Z = model.standardizer.transform(X)
    if isinstance(params, LinearParams):
        margin = Z @ np.asarray(params.weights) + params.bias
        return margin if model.kind == ModelKind.SVM else sigmoid(margin)
    if isinstance(params, EnsembleParams):
        return sigmoid(ensemble_raw_score(params, Z))

    raise ValueError(f"Unsupported model parameters: {type(params).__name__}")


def check_features(model: TrainedModel, names: tuple[str, ...]):
    if tuple(names) != tuple(model.feature_names):
        raise FeatureMismatchException(f"model expects {list(model.feature_names)}, got {list(names)}")


def score(model: TrainedModel, vector: FeatureVector) -> float:
    check_features(model, vector.names)
    return float(score_matrix(model, vector.as_array())[0])


def default_threshold(model: TrainedModel) -> float:
    return 0.0 if model.kind == ModelKind.SVM else 0.5


def predict(model: TrainedModel, vector: FeatureVector, threshold: float | None = None) -> int:
    """1 iff the score is strictly above the threshold"""
    threshold = default_threshold(model) if threshold is None else threshold
    return int(score(model, vector) > threshold)


def predict_matrix(model: TrainedModel, X: np.ndarray, threshold: float | None = None) -> np.ndarray:
    threshold = default_threshold(model) if threshold is None else threshold
    return (score_matrix(model, X) > threshold).astype(int)
