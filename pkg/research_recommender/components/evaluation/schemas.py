from pydantic import BaseModel, ConfigDict, Field, model_validator


class ClassificationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    accuracy: float
    precision: float | None
    recall: float | None
    f1: float
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


class RankedList(BaseModel):
    """Opportunities ordered by descending score, ties by ascending opportunity_id"""

    model_config = ConfigDict(frozen=True)

    student_id: str
    items: tuple[tuple[str, float], ...]

    @model_validator(mode="after")
    def ordered(self) -> "RankedList":
        ids = [opportunity_id for opportunity_id, _ in self.items]
        if len(set(ids)) != len(ids):
            raise ValueError("ranked list has duplicate opportunities")
        for (id_a, score_a), (id_b, score_b) in zip(self.items, self.items[1:]):
            if score_a < score_b or (score_a == score_b and id_a > id_b):
                raise ValueError("ranked list is not ordered by (-score, opportunity_id)")
        return self

    @property
    def opportunity_ids(self) -> list[str]:
        return [opportunity_id for opportunity_id, _ in self.items]

    def __len__(self) -> int:
        return len(self.items)


class RankingReport(BaseModel):
    map_at_k: dict[int, float]
    average_precisions: dict[int, dict[str, float]] = Field(default_factory=dict)
    n_evaluated_students: int
    n_skipped_students: int = 0
