from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt

from research_recommender.components.features.schemas import Standardizer
from research_recommender.core.enums import BaselineMode, ModelKind


class LogRegHyper(BaseModel):
    model_config = ConfigDict(extra="forbid")

    learning_rate: PositiveFloat = 0.1
    l2: float = Field(default=1e-4, ge=0.0)
    max_iters: PositiveInt = 500
    tol: float = Field(default=1e-8, ge=0.0)


class GBTHyper(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_trees: int = Field(default=100, ge=0)
    max_depth: int = Field(default=3, ge=0)
    learning_rate: PositiveFloat = 0.1
    min_leaf: PositiveInt = 5


class SVMHyper(BaseModel):
    model_config = ConfigDict(extra="forbid")

    l2: PositiveFloat = 1e-4
    epochs: PositiveInt = 20
    seed: int = 0
    project: bool = True


class Hyperparams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    logreg: LogRegHyper = Field(default_factory=LogRegHyper)
    gbt: GBTHyper = Field(default_factory=GBTHyper)
    svm: SVMHyper = Field(default_factory=SVMHyper)


class ConstantParams(BaseModel):
    kind: Literal["constant"] = "constant"
    mode: BaselineMode
    predicted_class: int
    value: float


class LinearParams(BaseModel):
    kind: Literal["linear"] = "linear"
    weights: list[float]
    bias: float


class Tree(BaseModel):
    """Flat node arrays; a node with feature -1 is a leaf holding value"""

    feature: list[int]
    threshold: list[float]
    left: list[int]
    right: list[int]
    value: list[float]


class EnsembleParams(BaseModel):
    kind: Literal["ensemble"] = "ensemble"
    initial_log_odds: float
    learning_rate: float
    trees: list[Tree]


ModelParams = Annotated[ConstantParams | LinearParams | EnsembleParams, Field(discriminator="kind")]


class TrainedModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ModelKind
    feature_names: tuple[str, ...]
    standardizer: Standardizer
    params: ModelParams
    loss_history: list[float] = []
    metadata: dict[str, str] = {}
