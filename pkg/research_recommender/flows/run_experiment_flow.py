from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel

from research_recommender.components.classifiers.controller import check_features, predict_matrix, score_matrix
from research_recommender.components.classifiers.crud import TrainedModelCRUD
from research_recommender.components.classifiers.schemas import TrainedModel
from research_recommender.components.domain.schemas import Dataset
from research_recommender.components.evaluation.controller import (
    classification_metrics,
    random_ranker,
    ranked_from_scores,
    ranking_report,
)
from research_recommender.components.evaluation.schemas import ClassificationReport, RankedList
from research_recommender.components.features.controller import examples_matrix
from research_recommender.components.features.schemas import FeatureSetId
from research_recommender.core.enums import FeatureLevel, Method, Phase, Task
from research_recommender.core.exceptions import EmptyInputException
from research_recommender.core.log import logger
from research_recommender.core.utils import write_manifest
from research_recommender.flows.schemas import RunConfig, model_file_name
from research_recommender.flows.train_models_flow import TrainModelsFlow


TASK1_COLUMNS = [
    "group", "method", "variant", "feature_set", "accuracy", "precision", "recall", "f1", "tp", "fp", "tn", "fn",
]  # fmt: skip
TASK2_COLUMNS = ["group", "method", "feature_set", "k", "map", "baseline_map", "ratio", "n_students"]


class ExperimentReport(BaseModel):
    task1: list[dict] = []
    task2: list[dict] = []
    summary: dict = {}

    def task1_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.task1, columns=TASK1_COLUMNS)

    def task2_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.task2, columns=TASK2_COLUMNS)


class RunExperimentFlow:
    """
    Task 1: methods with the deepest feature set, then a feature ablation with
    the best learned method. Task 2: MAP@k per method, then a feature ablation
    with the configured ablation method, each against the seeded random ranker.
    Metrics are averaged over the configured seeds.
    """

    def __init__(self, config: RunConfig, dataset: Dataset, dataset_digest: str = ""):
        self.config = config
        self.trainer = TrainModelsFlow(config, dataset, dataset_digest)
        self.full_level = max(config.feature_sets, key=lambda level: level.depth)

        # Cache fields
        self._candidates: list[str] | None = None
        self._relevant: dict[str, set[str]] | None = None
        self._pair_matrices: dict[str, np.ndarray] = {}
        self._baseline_map: dict[int, dict[int, float]] = {}

    def model(self, task: Task, method: Method, level: FeatureLevel, seed: int) -> TrainedModel:
        if self.config.train_on_the_fly:
            return self.trainer.train(task, method, level, seed)
        path = self.config.models_path / model_file_name(task, method, level)
        model = TrainedModelCRUD(path).load()
        check_features(model, FeatureSetId(task=task, level=level).names)

        metadata = model.metadata
        if metadata.get("cutoff") not in (None, str(self.trainer.cutoff)):
            logger.warning(f"{path} was trained with cutoff {metadata['cutoff']}, this run uses {self.trainer.cutoff}")
        digest = self.trainer.dataset_digest
        if digest and metadata.get("dataset_digest") not in (None, "", digest):
            logger.warning(f"{path} was trained on another dataset (digest {metadata['dataset_digest'][:12]})")
        return model

    # Task 1

    def evaluate_task1(self, method: Method, level: FeatureLevel, seed: int) -> ClassificationReport:
        model = self.model(Task.APPLICANT, method, level, seed)
        X, y, _ = examples_matrix(self.trainer.examples(Task.APPLICANT, Phase.TEST, level, seed))
        return classification_metrics(y.astype(int), predict_matrix(model, X))

    def task1_row(self, group: str, method: Method, level: FeatureLevel) -> dict:
        reports = [self.evaluate_task1(method, level, seed) for seed in self.config.seeds]
        precisions = [r.precision for r in reports if r.precision is not None]
        recalls = [r.recall for r in reports if r.recall is not None]
        return {
            "group": group,
            "method": method.value,
            "variant": self.config.baseline_mode.value if method == Method.BASELINE else "",
            "feature_set": FeatureSetId(task=Task.APPLICANT, level=level).label,
            "accuracy": float(np.mean([r.accuracy for r in reports])),
            "precision": float(np.mean(precisions)) if precisions else None,
            "recall": float(np.mean(recalls)) if recalls else None,
            "f1": float(np.mean([r.f1 for r in reports])),
            "tp": sum(r.tp for r in reports),
            "fp": sum(r.fp for r in reports),
            "tn": sum(r.tn for r in reports),
            "fn": sum(r.fn for r in reports),
        }

    def run_task1(self) -> list[dict]:
        config = self.config
        rows = [self.task1_row("methods", method, self.full_level) for method in config.methods]

        ablation_method = config.task1_ablation_method
        if ablation_method is None:
            learned = [row for row in rows if row["method"] != Method.BASELINE.value]
            if not learned:
                logger.info("No learned method configured; skipping the task-1 feature ablation")
                return rows
            ablation_method = Method(max(learned, key=lambda row: row["f1"])["method"])

        logger.info(f"Task-1 feature ablation with {ablation_method.value}")
        rows += [self.task1_row("features", ablation_method, level) for level in config.feature_sets]
        return rows

    # Task 2

    def candidates(self) -> list[str]:
        if self._candidates is None:
            self._candidates = sorted(o.opportunity_id for o in self.trainer.test_view.candidate_opportunities())
            if not self._candidates:
                raise EmptyInputException(f"no opportunity is posted at or after {self.trainer.cutoff}")
        return self._candidates

    def relevant(self) -> dict[str, set[str]]:
        """Test applicants mapped to the applied opportunities that are ranking candidates"""
        if self._relevant is None:
            candidates = set(self.candidates())
            relevant: dict[str, set[str]] = {}
            for application in self.trainer.test_view.applications():
                relevant.setdefault(application.student_id, set())
                if application.opportunity_id in candidates:
                    relevant[application.student_id].add(application.opportunity_id)
            self._relevant = dict(sorted(relevant.items()))
        return self._relevant

    def pair_matrix(self, student_id: str) -> np.ndarray:
        """Full pair features against every candidate; test pairs share the cutoff horizon"""
        if student_id not in self._pair_matrices:
            feature_set = FeatureSetId(task=Task.OPPORTUNITY, level=FeatureLevel.BASE_PLUS_PLUS)
            self._pair_matrices[student_id] = self.trainer.features.task2_matrix(
                student_id, self.candidates(), self.trainer.test_view, feature_set
            )
        return self._pair_matrices[student_id]

    def rankings(self, model: TrainedModel, level: FeatureLevel, k: int) -> dict[str, tuple[RankedList, set[str]]]:
        candidates = self.candidates()
        return {
            student_id: (
                ranked_from_scores(
                    student_id, candidates, score_matrix(model, self.pair_matrix(student_id)[:, : level.depth]), k
                ),
                relevant,
            )
            for student_id, relevant in self.relevant().items()
        }

    def baseline_map(self, seed: int) -> dict[int, float]:
        if seed not in self._baseline_map:
            k_max = max(self.config.k_grid)
            per_student = {
                student_id: (
                    random_ranker(self.candidates(), seed, k_max, student_id=student_id, stream=(position,)),
                    relevant,
                )
                for position, (student_id, relevant) in enumerate(self.relevant().items())
            }
            self._baseline_map[seed] = ranking_report(per_student, self.config.k_grid).map_at_k
        return self._baseline_map[seed]

    def task2_rows(self, group: str, method: Method, level: FeatureLevel) -> list[dict]:
        config = self.config
        k_max = max(config.k_grid)
        maps, baselines = [], []
        n_students = 0
        for seed in config.seeds:
            model = self.model(Task.OPPORTUNITY, method, level, seed)
            report = ranking_report(self.rankings(model, level, k_max), config.k_grid)
            maps.append(report.map_at_k)
            baselines.append(self.baseline_map(seed))
            n_students = report.n_evaluated_students

        rows = []
        for k in config.k_grid:
            value = float(np.mean([m[k] for m in maps]))
            baseline = float(np.mean([b[k] for b in baselines]))
            rows.append(
                {
                    "group": group,
                    "method": method.value,
                    "feature_set": FeatureSetId(task=Task.OPPORTUNITY, level=level).label,
                    "k": k,
                    "map": value,
                    "baseline_map": baseline,
                    "ratio": value / baseline if baseline > 0 else None,
                    "n_students": n_students,
                }
            )
        return rows

    def run_task2(self) -> list[dict]:
        config = self.config
        rows = []
        for method in config.methods:
            rows += self.task2_rows("methods", method, self.full_level)

        logger.info(f"Task-2 feature ablation with {config.task2_ablation_method.value}")
        for level in config.feature_sets:
            rows += self.task2_rows("features", config.task2_ablation_method, level)
        return rows

    def best_ratios(self, rows: list[dict]) -> dict:
        """Best method's MAP ratio to the random ranker at k=20 and at the largest k"""
        method_rows = [row for row in rows if row["group"] == "methods"]
        if not method_rows:
            return {}
        reference_k = 20 if 20 in self.config.k_grid else max(self.config.k_grid)
        best = max(
            (row for row in method_rows if row["k"] == reference_k),
            key=lambda row: row["map"],
        )
        at_largest = next(
            row for row in method_rows if row["method"] == best["method"] and row["k"] == max(self.config.k_grid)
        )
        return {
            "best_method": best["method"],
            f"ratio_at_k{reference_k}": best["ratio"],
            f"ratio_at_k{at_largest['k']}": at_largest["ratio"],
        }

    def run(self) -> ExperimentReport:
        report = ExperimentReport()
        if Task.APPLICANT in self.config.tasks:
            report.task1 = self.run_task1()
        if Task.OPPORTUNITY in self.config.tasks:
            report.task2 = self.run_task2()
            report.summary = {
                **self.best_ratios(report.task2),
                "n_candidates": len(self.candidates()),
                "n_ranked_students": sum(1 for relevant in self.relevant().values() if relevant),
                "n_skipped_students": sum(1 for relevant in self.relevant().values() if not relevant),
            }
        return report


def run_experiment(dataset: Dataset, config: RunConfig, dataset_digest: str = "") -> ExperimentReport:
    """Runs the sweep and writes task1_report.csv, task2_map.csv and manifest.json under config.out"""
    flow = RunExperimentFlow(config, dataset, dataset_digest)
    report = flow.run()

    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    outputs = []
    if report.task1:
        report.task1_frame().to_csv(out / "task1_report.csv", index=False, lineterminator="\n", na_rep="")
        outputs.append("task1_report.csv")
    if report.task2:
        report.task2_frame().to_csv(out / "task2_map.csv", index=False, lineterminator="\n", na_rep="")
        outputs.append("task2_map.csv")
    if config.dump_vocabulary:
        flow.trainer.text_ctx.vocabulary_frame().to_csv(out / "vocabulary.csv", index=False, lineterminator="\n")
        outputs.append("vocabulary.csv")
    if config.dump_examples:
        outputs += [str(path.relative_to(out)) for path in flow.trainer.dump_examples(out / "examples")]

    write_manifest(
        out,
        "eval",
        config.model_dump(mode="json"),
        config.seeds,
        dataset_digest,
        outputs,
        summary=report.summary,
    )
    logger.info(f"Wrote {', '.join(outputs)} to {out}")
    return report
