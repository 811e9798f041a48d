import math
from typing import Iterable, Sequence

import numpy as np

from research_recommender.components.classifiers.controller import check_features, score_matrix
from research_recommender.components.classifiers.schemas import TrainedModel
from research_recommender.components.evaluation.schemas import ClassificationReport, RankedList, RankingReport
from research_recommender.components.features.controller import FeaturesController
from research_recommender.components.features.schemas import FeatureSetId, SplitView
from research_recommender.core.exceptions import EmptyInputException
from research_recommender.core.log import logger
from research_recommender.core.utils import seeded_rng


def classification_metrics(labels: Sequence[int], predictions: Sequence[int]) -> ClassificationReport:
    labels = np.asarray(labels, dtype=int)
    predictions = np.asarray(predictions, dtype=int)
    if labels.size == 0:
        raise EmptyInputException("no labels to evaluate")
    if labels.shape != predictions.shape:
        raise ValueError("labels and predictions differ in length")
    if not np.isin(labels, (0, 1)).all() or not np.isin(predictions, (0, 1)).all():
        raise ValueError("labels and predictions must be 0 or 1")

    tp = int(((labels == 1) & (predictions == 1)).sum())
    fp = int(((labels == 0) & (predictions == 1)).sum())
    tn = int(((labels == 0) & (predictions == 0)).sum())
    fn = int(((labels == 1) & (predictions == 0)).sum())

    precision = tp / (tp + fp) if tp + fp else None
    recall = tp / (tp + fn) if tp + fn else None
    p, r = precision or 0.0, recall or 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0

    return ClassificationReport(
        accuracy=(tp + tn) / labels.size,
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
    )


def ranked_from_scores(student_id: str, opportunity_ids: Sequence[str], scores: Sequence[float], k: int | None = None) -> RankedList:
    order = sorted(range(len(opportunity_ids)), key=lambda i: (-float(scores[i]), opportunity_ids[i]))
    if k is not None:
        order = order[:k]
    return RankedList(
        student_id=student_id,
        items=tuple((opportunity_ids[i], float(scores[i])) for i in order),
    )


def rank_candidates(
    model: TrainedModel,
    student_id: str,
    candidates: Iterable[str],
    view: SplitView,
    feature_set: FeatureSetId,
    features: FeaturesController,
    k: int | None = None,
) -> RankedList:
    """Scores every candidate with the pair features and keeps the top k"""
    opportunity_ids = sorted(set(candidates))
    if not opportunity_ids:
        raise EmptyInputException(f"no candidate opportunities for student {student_id}")
    check_features(model, feature_set.names)

    X = features.task2_matrix(student_id, opportunity_ids, view, feature_set)
    return ranked_from_scores(student_id, opportunity_ids, score_matrix(model, X), k)


def average_precision(ranked: RankedList, relevant: Iterable[str], k: int) -> float:
    """AP@k with denominator min(|relevant|, k)"""
    relevant = set(relevant)
    if not relevant:
        raise EmptyInputException(f"student {ranked.student_id} has no relevant opportunities")
    if k < 1:
        raise ValueError("k must be at least 1")

    hits, total = 0, 0.0
    for position, opportunity_id in enumerate(ranked.opportunity_ids[:k], start=1):
        if opportunity_id in relevant:
            hits += 1
            total += hits / position
    return total / min(len(relevant), k)


def map_at_k(per_student: Sequence[tuple[RankedList, set[str]]], k: int) -> float:
    if not per_student:
        raise EmptyInputException("no students to average over")
    return math.fsum(average_precision(ranked, relevant, k) for ranked, relevant in per_student) / len(per_student)


def random_ranker(
    candidates: Iterable[str], seed: int, k: int | None = None, student_id: str = "", stream: tuple[int, ...] = ()
) -> RankedList:
    """Seeded uniform shuffle of the sorted candidates; scores 1 - i/n keep the order explicit"""
    opportunity_ids = sorted(set(candidates))
    n = len(opportunity_ids)
    permutation = seeded_rng(seed, *stream).permutation(n)
    if k is not None:
        permutation = permutation[:k]
    return RankedList(
        student_id=student_id,
        items=tuple((opportunity_ids[j], 1.0 - i / n) for i, j in enumerate(permutation)),
    )


def ranking_report(per_student: dict[str, tuple[RankedList, set[str]]], k_grid: Sequence[int]) -> RankingReport:
    """MAP per k over students with at least one relevant item; the rest are counted as skipped"""
    evaluated = {student_id: pair for student_id, pair in sorted(per_student.items()) if pair[1]}
    skipped = len(per_student) - len(evaluated)
    if skipped:
        logger.warning(f"{skipped} student(s) have no relevant test opportunities and are left out of MAP")
    if not evaluated:
        raise EmptyInputException("no student has a relevant test opportunity")

    average_precisions = {
        k: {student_id: average_precision(ranked, relevant, k) for student_id, (ranked, relevant) in evaluated.items()}
        for k in k_grid
    }
    return RankingReport(
        map_at_k={k: math.fsum(values.values()) / len(values) for k, values in average_precisions.items()},
        average_precisions=average_precisions,
        n_evaluated_students=len(evaluated),
        n_skipped_students=skipped,
    )
