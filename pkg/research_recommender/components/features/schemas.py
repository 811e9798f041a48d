import math

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from research_recommender.components.domain.schemas import Dataset, Term
from research_recommender.core.enums import FeatureLevel, Phase, Task


TASK1_FEATURES = ("semesters_enrolled", "credits_approved", "prior_application", "gpa")
TASK2_FEATURES = ("content_sim", "had_teacher", "dept_frac")


class FeatureSetId(BaseModel):
    model_config = ConfigDict(frozen=True)

    task: Task
    level: FeatureLevel

    @property
    def names(self) -> tuple[str, ...]:
        if self.task == Task.APPLICANT:
            return TASK1_FEATURES[: self.level.depth + 1]
        return TASK2_FEATURES[: self.level.depth]

    @property
    def label(self) -> str:
        """Human name of the set, e.g. base+ht+dept"""
        extras = ("prior", "gpa") if self.task == Task.APPLICANT else ("ht", "dept")
        return "+".join(("base",) + extras[: self.level.depth - 1])


class FeatureVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    names: tuple[str, ...]
    values: tuple[float, ...]

    @model_validator(mode="after")
    def finite(self) -> "FeatureVector":
        if len(self.names) != len(self.values):
            raise ValueError("one value per feature name")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("feature values must be finite")
        return self

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


class LabeledExample(BaseModel):
    model_config = ConfigDict(frozen=True)

    features: FeatureVector
    label: int
    key: tuple[str, ...]

    @model_validator(mode="after")
    def binary_label(self) -> "LabeledExample":
        if self.label not in (0, 1):
            raise ValueError("label must be 0 or 1")
        return self


class SplitView(BaseModel):
    """One side of the temporal split over a shared Dataset"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dataset: Dataset
    cutoff: Term
    phase: Phase
    label_window_terms: int = 2

    @property
    def applicant_horizon(self) -> Term:
        """History for Task-1 predictors ends strictly before this term"""
        if self.phase == Phase.TEST:
            return self.cutoff
        return self.cutoff.shift(-self.label_window_terms)

    def in_window(self, term: Term) -> bool:
        before = term.ordinal < self.cutoff.ordinal
        return before if self.phase == Phase.TRAIN else not before

    def in_label_window(self, term: Term) -> bool:
        """Task-1 labelling window; the train side is anchored at applicant_horizon"""
        if self.phase == Phase.TEST:
            return self.in_window(term)
        return self.applicant_horizon.ordinal <= term.ordinal < self.cutoff.ordinal

    def applications(self):
        return [a for a in self.dataset.applications if self.in_window(a.term)]

    def candidate_opportunities(self):
        return [o for o in self.dataset.opportunities if self.in_window(o.posted_term)]

    def pair_horizon(self, posted_term: Term) -> Term:
        """History for Task-2 predictors ends strictly before min(cutoff, posted)"""
        return posted_term if posted_term.ordinal < self.cutoff.ordinal else self.cutoff


class Standardizer(BaseModel):
    model_config = ConfigDict(frozen=True)

    names: tuple[str, ...]
    means: tuple[float, ...]
    stds: tuple[float, ...]
    passthrough: tuple[str, ...] = ()

    def transform(self, matrix: np.ndarray) -> np.ndarray:
        matrix = np.asarray(matrix, dtype=float)
        means = np.asarray(self.means)
        stds = np.asarray(self.stds)
        safe = np.where(stds > 0.0, stds, 1.0)
        out = np.where(stds > 0.0, (matrix - means) / safe, 0.0)
        for j, name in enumerate(self.names):
            if name in self.passthrough:
                out[..., j] = matrix[..., j]
        return out
