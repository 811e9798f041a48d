import math

import numpy as np

from research_recommender.components.classifiers.schemas import LinearParams, SVMHyper
from research_recommender.core.exceptions import NumericalFailureException
from research_recommender.core.utils import seeded_rng


def hinge_objective(params: np.ndarray, X_aug: np.ndarray, signs: np.ndarray, l2: float) -> float:
    margins = signs * (X_aug @ params)
    return float(np.maximum(0.0, 1.0 - margins).mean() + 0.5 * l2 * params @ params)


def train_svm(X: np.ndarray, y: np.ndarray, hyper: SVMHyper) -> tuple[LinearParams, list[float]]:
    """Primal hinge loss with Pegasos steps 1/(l2 t); the bias rides along as a constant feature"""
    X_aug = np.hstack([X, np.ones((len(X), 1))])
    signs = np.where(y > 0.5, 1.0, -1.0)
    params = np.zeros(X_aug.shape[1])
    radius = 1.0 / math.sqrt(hyper.l2)
    rng = seeded_rng(hyper.seed)

    history = [hinge_objective(params, X_aug, signs, hyper.l2)]
    step = 0
    for _ in range(hyper.epochs):
        for i in rng.permutation(len(X_aug)):
            step += 1
            eta = 1.0 / (hyper.l2 * step)
            violated = signs[i] * (X_aug[i] @ params) < 1.0

            params *= 1.0 - eta * hyper.l2
            if violated:
                params += eta * signs[i] * X_aug[i]

            if hyper.project:
                norm = math.sqrt(params @ params)
                if norm > radius:
                    params *= radius / norm

        if not np.all(np.isfinite(params)):
            raise NumericalFailureException("svm weights became non-finite")
        history.append(hinge_objective(params, X_aug, signs, hyper.l2))

    return LinearParams(weights=[float(w) for w in params[:-1]], bias=float(params[-1])), history
