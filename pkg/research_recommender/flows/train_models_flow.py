from pathlib import Path

from research_recommender import __version__
from research_recommender.components.classifiers.controller import ClassifiersController
from research_recommender.components.classifiers.crud import TrainedModelCRUD
from research_recommender.components.classifiers.schemas import TrainedModel
from research_recommender.components.domain.schemas import Dataset
from research_recommender.components.features.controller import FeaturesController, examples_frame, temporal_split
from research_recommender.components.features.schemas import FeatureSetId, LabeledExample, SplitView
from research_recommender.components.text.controller import TextContext, load_stopwords
from research_recommender.core.enums import FeatureLevel, Method, Phase, Task
from research_recommender.core.log import logger
from research_recommender.flows.schemas import RunConfig, model_file_name


class TrainModelsFlow:
    """Temporal split, text context and example building shared by train and eval runs"""

    def __init__(self, config: RunConfig, dataset: Dataset, dataset_digest: str = ""):
        self.config = config
        self.dataset = dataset
        self.dataset_digest = dataset_digest
        self.cutoff = config.cutoff_term

        self.train_view, self.test_view = temporal_split(dataset, self.cutoff, config.label_window_terms)
        self.stopwords = load_stopwords(config.stopwords)
        self.text_ctx = TextContext.build(dataset, self.cutoff, min_df=config.min_df, stopwords=self.stopwords)
        self.features = FeaturesController(dataset, self.text_ctx, had_teacher_any_term=config.had_teacher_any_term)

        # Cache fields
        self._examples: dict[tuple, list[LabeledExample]] = {}

    def view(self, phase: Phase) -> SplitView:
        return self.train_view if phase == Phase.TRAIN else self.test_view

    def examples(self, task: Task, phase: Phase, level: FeatureLevel, seed: int) -> list[LabeledExample]:
        # Task-1 examples do not sample, so the seed is not part of their key
        key = (task, phase, level, seed if task == Task.OPPORTUNITY else None)
        if key not in self._examples:
            if task == Task.APPLICANT:
                self._examples[key] = self.features.build_task1_examples(self.view(phase), level)
            else:
                self._examples[key] = self.features.build_task2_examples(
                    self.view(phase), level, neg_ratio=self.config.neg_ratio, seed=seed
                )
        return self._examples[key]

    def classifiers(self, seed: int) -> ClassifiersController:
        hyper = self.config.hyper
        hyper = hyper.model_copy(update={"svm": hyper.svm.model_copy(update={"seed": seed})})
        return ClassifiersController(
            hyper=hyper,
            baseline_mode=self.config.baseline_mode,
            passthrough=tuple(self.config.passthrough_features),
        )

    def train(self, task: Task, method: Method, level: FeatureLevel, seed: int) -> TrainedModel:
        feature_set = FeatureSetId(task=task, level=level)
        metadata = {
            "task": str(task.value),
            "method": method.value,
            "feature_set": feature_set.label,
            "cutoff": str(self.cutoff),
            "seed": str(seed),
            "dataset_digest": self.dataset_digest,
            "min_df": str(self.config.min_df),
            "stopwords": " ".join(sorted(self.stopwords)),
            "had_teacher_any_term": str(self.config.had_teacher_any_term).lower(),
            "tool_version": __version__,
        }
        examples = self.examples(task, Phase.TRAIN, level, seed)
        return self.classifiers(seed).train(method, examples, metadata=metadata)

    def train_all(self) -> list[Path]:
        """Writes one model per (task, method, feature set), trained with the first seed"""
        config = self.config
        seed = config.seeds[0]
        if len(config.seeds) > 1:
            logger.info(f"Training saves models for seed {seed} only; eval runs every seed")

        written = []
        for task in config.tasks:
            for method in config.methods:
                for level in config.feature_sets:
                    model = self.train(task, method, level, seed)
                    path = config.models_path / model_file_name(task, method, level)
                    TrainedModelCRUD(path).save(model)
                    written.append(path)
        return written

    def dump_examples(self, directory: Path) -> list[Path]:
        directory.mkdir(parents=True, exist_ok=True)
        seed = self.config.seeds[0]
        written = []
        for task in self.config.tasks:
            for phase in Phase:
                for level in self.config.feature_sets:
                    path = directory / f"task{task.value}_{phase.value}_{level.value}.csv"
                    examples_frame(self.examples(task, phase, level, seed)).to_csv(
                        path, index=False, lineterminator="\n"
                    )
                    written.append(path)
        return written
