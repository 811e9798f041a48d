from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError, field_validator

from research_recommender.components.domain.schemas import Term
from research_recommender.core.config import DEFAULT_SEED
from research_recommender.core.exceptions import ConfigException
from research_recommender.core.utils import read_config_data


class SignalWeights(BaseModel):
    """Weights of the planted application signal"""

    model_config = ConfigDict(extra="forbid")

    w_content: float = Field(default=2.0, description="pair: standardized topic overlap of approved courses")
    w_ht: float = Field(default=1.5, description="pair: 1 if a teacher of an approved course posted it")
    w_dept: float = Field(default=0.75, description="pair: standardized share of approved courses in its department")
    w_prior: float = Field(default=4.0, description="student: 1 if they applied in an earlier term")
    w_semesters: float = Field(default=0.5, description="student: standardized semesters enrolled")
    w_credits: float = Field(default=0.5, description="student: standardized approved credits")
    w_gpa: float = Field(default=0.75, description="student: standardized gpa")


class GenConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_students: PositiveInt = Field(default=5000, description="students, admitted across and before the term range")
    n_courses: PositiveInt = Field(default=300, description="courses, each with one dominant topic")
    n_faculty: PositiveInt = Field(default=150, description="faculty, faculty f belongs to department f mod n_departments")
    n_departments: PositiveInt = Field(default=10, description="departments, topic t belongs to department t mod n_departments")
    n_opportunities: PositiveInt = Field(default=1000, description="opportunities, posted round-robin over the terms")
    n_topics: PositiveInt = Field(default=20, description="latent topics")
    vocab_per_topic: PositiveInt = Field(default=40, description="words drawn for each topic")
    n_noise_words: int = Field(default=200, ge=0, description="topic-free words that only appear as noise")
    course_length: PositiveInt = Field(default=60, description="tokens per course description")
    abstract_length: PositiveInt = Field(default=80, description="tokens per opportunity abstract")
    dominant_topic_share: float = Field(
        default=0.8, ge=0.0, le=1.0, description="share of document tokens from the dominant topic, the rest uniform"
    )
    preference_concentration: float = Field(
        default=0.3, gt=0.0, description="symmetric Dirichlet parameter of student topic preferences"
    )
    terms_range: tuple[str, str] = Field(default=("2012.1", "2016.2"), description="first and last simulated term")
    admission_lead_terms: int = Field(default=8, ge=0, description="how many terms before the range admissions start")
    max_study_terms: PositiveInt = Field(default=12, description="terms a student stays enrolled after admission")
    courses_per_term: PositiveInt = Field(default=5, description="enrollments per student and term")
    approval_rate: float = Field(default=0.9, gt=0.0, lt=1.0, description="approval probability at the mean gpa")
    gpa_mean: float = Field(default=5.0, description="mean of the clipped normal gpa")
    gpa_sd: float = Field(default=0.7, gt=0.0, description="spread of the clipped normal gpa")
    applicant_base_rate: float = Field(
        default=0.103, gt=0.0, lt=1.0, description="target share of students who apply at least once"
    )
    second_application_rate: float = Field(
        default=0.3, ge=0.0, le=1.0, description="chance an applying student picks a second opportunity that term"
    )
    acceptance_rate: float = Field(default=0.814, ge=0.0, le=1.0, description="chance an application is accepted")
    signal_weights: SignalWeights = Field(default_factory=SignalWeights, description="planted signal weights")
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64, description="root seed of every random stream")

    @field_validator("terms_range")
    @classmethod
    def parseable_terms(cls, value: tuple[str, str]) -> tuple[str, str]:
        for text in value:
            Term.parse(text)
        return value

    @property
    def first_term(self) -> Term:
        return Term.parse(self.terms_range[0])

    @property
    def last_term(self) -> Term:
        return Term.parse(self.terms_range[1])

    @classmethod
    def from_file(cls, path: str | Path) -> "GenConfig":
        data = read_config_data(path)
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigException(f"{path}: {e}")
