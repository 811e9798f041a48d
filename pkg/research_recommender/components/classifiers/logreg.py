import numpy as np

from research_recommender.components.classifiers.schemas import LinearParams, LogRegHyper
from research_recommender.core.exceptions import NumericalFailureException
from research_recommender.core.log import logger


P_MIN, P_MAX = 1e-6, 1.0 - 1e-6


def sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z, dtype=float)))


def log_loss(y: np.ndarray, p: np.ndarray) -> float:
    p = np.clip(p, P_MIN, P_MAX)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def logreg_loss_and_gradient(
    params: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray]:
    """Mean log-loss + (l2/2)||w||^2; params are the weights followed by the bias, which is not penalised"""
    weights, bias = params[:-1], params[-1]
    p = sigmoid(X @ weights + bias)

    loss = log_loss(y, p) + 0.5 * l2 * float(weights @ weights)

    residual = (p - y) / len(y)
    gradient = np.empty_like(params, dtype=float)
    gradient[:-1] = X.T @ residual + l2 * weights
    gradient[-1] = residual.sum()
    return loss, gradient


def train_logreg(X: np.ndarray, y: np.ndarray, hyper: LogRegHyper) -> tuple[LinearParams, list[float]]:
    """Fixed-step full-batch gradient descent from zero; a step that raises the loss ends training"""
    params = np.zeros(X.shape[1] + 1)
    loss, gradient = logreg_loss_and_gradient(params, X, y, hyper.l2)
    history = [loss]

    for iteration in range(hyper.max_iters):
        candidate = params - hyper.learning_rate * gradient
        candidate_loss, candidate_gradient = logreg_loss_and_gradient(candidate, X, y, hyper.l2)

        if not np.isfinite(candidate_loss) or not np.all(np.isfinite(candidate)):
            raise NumericalFailureException(
                f"logistic regression diverged at iteration {iteration}; lower the learning rate"
            )

        if candidate_loss > loss:
            logger.warning(f"Logistic regression loss rose at iteration {iteration}; stopping")
            break

        improvement = loss - candidate_loss
        params, loss, gradient = candidate, candidate_loss, candidate_gradient
        history.append(loss)

        if improvement < hyper.tol:
            break

    return LinearParams(weights=[float(w) for w in params[:-1]], bias=float(params[-1])), history
