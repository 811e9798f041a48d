import numpy as np

from research_recommender.components.classifiers.logreg import P_MAX, P_MIN, log_loss, sigmoid
from research_recommender.components.classifiers.schemas import EnsembleParams, GBTHyper, Tree
from research_recommender.core.log import logger


class TreeBuilder:
    """Greedy variance-reduction regression tree with Newton leaf values for logistic loss"""

    def __init__(self, X: np.ndarray, residual: np.ndarray, hessian: np.ndarray, max_depth: int, min_leaf: int):
        self.X = X
        self.residual = residual
        self.hessian = hessian
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.tree = Tree(feature=[], threshold=[], left=[], right=[], value=[])

    def build(self) -> Tree:
        self._grow(np.arange(len(self.residual)), depth=0)
        return self.tree

    def _add_node(self) -> int:
        for column in (self.tree.feature, self.tree.left, self.tree.right):
            column.append(-1)
        self.tree.threshold.append(0.0)
        self.tree.value.append(0.0)
        return len(self.tree.feature) - 1

    def _grow(self, rows: np.ndarray, depth: int) -> int:
        node = self._add_node()
        split = None
        if depth < self.max_depth and len(rows) >= 2 * self.min_leaf and np.ptp(self.residual[rows]) > 0.0:
            split = self._best_split(rows)

        if split is None:
            denominator = max(float(self.hessian[rows].sum()), 1e-12)
            self.tree.value[node] = float(self.residual[rows].sum()) / denominator
            return node

        feature, threshold = split
        goes_left = self.X[rows, feature] <= threshold
        self.tree.feature[node] = feature
        self.tree.threshold[node] = threshold
        self.tree.left[node] = self._grow(rows[goes_left], depth + 1)
        self.tree.right[node] = self._grow(rows[~goes_left], depth + 1)
        return node

    def _best_split(self, rows: np.ndarray) -> tuple[int, float] | None:
        """Candidates are midpoints between consecutive distinct values; ties keep the lowest (feature, threshold)"""
        residual = self.residual[rows]
        n = len(rows)
        total = residual.sum()
        sizes = np.arange(1, n)

        best_gain, best = -np.inf, None
        for feature in range(self.X.shape[1]):
            values = self.X[rows, feature]
            order = np.argsort(values, kind="stable")
            values, ordered = values[order], residual[order]

            left_sum = np.cumsum(ordered)[:-1]
            right_sum = total - left_sum
            gain = left_sum**2 / sizes + right_sum**2 / (n - sizes) - total**2 / n

            valid = (values[1:] > values[:-1]) & (sizes >= self.min_leaf) & (n - sizes >= self.min_leaf)
            if not valid.any():
                continue
            gain = np.where(valid, gain, -np.inf)
            position = int(np.argmax(gain))

            if gain[position] > best_gain:
                lower, upper = values[position], values[position + 1]
                threshold = 0.5 * (lower + upper)
                if threshold >= upper:
                    threshold = lower
                best_gain, best = gain[position], (feature, float(threshold))

        return best


def predict_tree(tree: Tree, X: np.ndarray) -> np.ndarray:
    feature = np.asarray(tree.feature)
    threshold = np.asarray(tree.threshold)
    left, right = np.asarray(tree.left), np.asarray(tree.right)
    value = np.asarray(tree.value)

    node = np.zeros(len(X), dtype=int)
    while True:
        inner = feature[node] >= 0
        if not inner.any():
            return value[node]
        rows = np.flatnonzero(inner)
        at = node[rows]
        goes_left = X[rows, feature[at]] <= threshold[at]
        node[rows] = np.where(goes_left, left[at], right[at])


def ensemble_raw_score(params: EnsembleParams, X: np.ndarray) -> np.ndarray:
    score = np.full(len(X), params.initial_log_odds)
    for tree in params.trees:
        score += params.learning_rate * predict_tree(tree, X)
    return score


def train_gbt(X: np.ndarray, y: np.ndarray, hyper: GBTHyper) -> tuple[EnsembleParams, list[float]]:
    """Gradient boosting on logistic loss, starting from the clipped base-rate log-odds"""
    base_rate = float(np.clip(y.mean(), P_MIN, P_MAX))
    initial = float(np.log(base_rate / (1.0 - base_rate)))
    params = EnsembleParams(initial_log_odds=initial, learning_rate=hyper.learning_rate, trees=[])

    score = np.full(len(y), initial)
    history = [log_loss(y, sigmoid(score))]

    if np.all(y == y[0]):
        logger.info("All training labels are equal; the ensemble is the initial log-odds only")
        return params, history

    for _ in range(hyper.n_trees):
        p = np.clip(sigmoid(score), P_MIN, P_MAX)
        tree = TreeBuilder(X, y - p, p * (1.0 - p), hyper.max_depth, hyper.min_leaf).build()
        params.trees.append(tree)
        score += hyper.learning_rate * predict_tree(tree, X)
        history.append(log_loss(y, sigmoid(score)))

    return params, history
