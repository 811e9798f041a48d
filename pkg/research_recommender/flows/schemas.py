from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError, field_validator

from research_recommender.components.classifiers.schemas import Hyperparams
from research_recommender.components.domain.schemas import Term
from research_recommender.core.config import (
    DEFAULT_CUTOFF,
    DEFAULT_K_GRID,
    DEFAULT_LABEL_WINDOW_TERMS,
    DEFAULT_MIN_DF,
    DEFAULT_NEG_RATIO,
    DEFAULT_SEED,
)
from research_recommender.core.enums import BaselineMode, FeatureLevel, Method, Task
from research_recommender.core.exceptions import ConfigException
from research_recommender.core.utils import read_config_data


class RunConfig(BaseModel):
    """Everything a train or eval run depends on; the manifest stores it resolved"""

    model_config = ConfigDict(extra="forbid")

    dataset: str | None = None
    cutoff: str = DEFAULT_CUTOFF
    tasks: list[Task] = Field(default_factory=lambda: [Task.APPLICANT, Task.OPPORTUNITY])
    feature_sets: list[FeatureLevel] = Field(default_factory=FeatureLevel.all_levels)
    methods: list[Method] = Field(default_factory=Method.all_methods)
    hyper: Hyperparams = Field(default_factory=Hyperparams)
    k_grid: list[PositiveInt] = Field(default_factory=lambda: list(DEFAULT_K_GRID))
    neg_ratio: PositiveFloat = DEFAULT_NEG_RATIO
    seeds: list[int] = Field(default_factory=lambda: [DEFAULT_SEED])
    out: str = "runs/latest"
    models_dir: str | None = None

    baseline_mode: BaselineMode = BaselineMode.MAJORITY_CLASS
    label_window_terms: PositiveInt = DEFAULT_LABEL_WINDOW_TERMS
    min_df: PositiveInt = DEFAULT_MIN_DF
    stopwords: str | None = None
    had_teacher_any_term: bool = False
    passthrough_features: list[str] = Field(default_factory=list)

    task1_ablation_method: Method | None = None
    task2_ablation_method: Method = Method.LOGREG
    train_on_the_fly: bool = True
    dump_examples: bool = False
    dump_vocabulary: bool = False

    @field_validator("cutoff")
    @classmethod
    def parseable_cutoff(cls, value: str) -> str:
        return str(Term.parse(value))

    @field_validator("tasks", "feature_sets", "methods", "k_grid", "seeds")
    @classmethod
    def non_empty(cls, value: list) -> list:
        if not value:
            raise ValueError("must list at least one entry")
        return list(dict.fromkeys(value))

    @field_validator("k_grid")
    @classmethod
    def ascending(cls, value: list[int]) -> list[int]:
        return sorted(value)

    @property
    def cutoff_term(self) -> Term:
        return Term.parse(self.cutoff)

    @property
    def models_path(self) -> Path:
        return Path(self.models_dir) if self.models_dir else Path(self.out) / "models"

    @classmethod
    def from_file(cls, path: str | Path | None, **overrides) -> "RunConfig":
        """File values, then CLI overrides (None means not given), validated together"""
        data = read_config_data(path) if path else {}
        data.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigException(f"{path or 'command line'}: {e}")


def model_file_name(task: Task, method: Method, level: FeatureLevel) -> str:
    return f"task{task.value}_{method.value}_{level.value}.model"
