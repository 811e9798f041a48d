from pydantic import BaseModel, Field

from research_recommender.components.domain.schemas import GpaScale


class SchemaConfig(BaseModel):
    gpa_scale: GpaScale = Field(default_factory=GpaScale)


class ValidationIssue(BaseModel):
    file: str
    line: int
    message: str

    def __str__(self):
        return f"{self.file}:{self.line}: {self.message}"


class ValidationReport(BaseModel):
    errors: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []

    @property
    def ok(self) -> bool:
        return not self.errors


class DatasetSummary(BaseModel):
    n_students: int
    n_opportunities: int
    n_applications: int
    n_applicants: int
    n_accepted: int
    acceptance_rate: float | None
    applicant_rate: float | None
