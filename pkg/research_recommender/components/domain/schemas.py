from collections import defaultdict
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, PrivateAttr, field_validator, model_validator

from research_recommender.core.config import GPA_MAX, GPA_MIN


class Term(BaseModel):
    """Half-year academic term, totally ordered by (year, half)"""

    model_config = ConfigDict(frozen=True)

    year: int
    half: Literal[1, 2]

    @property
    def ordinal(self) -> int:
        return self.year * 2 + (self.half - 1)

    @classmethod
    def from_ordinal(cls, ordinal: int) -> "Term":
        return cls(year=ordinal // 2, half=ordinal % 2 + 1)

    @classmethod
    def parse(cls, text: str) -> "Term":
        """Parse the CLI form YEAR.HALF, e.g. 2014.1"""
        year, _, half = str(text).strip().partition(".")
        return cls(year=int(year), half=int(half))

    def shift(self, terms: int) -> "Term":
        return Term.from_ordinal(self.ordinal + terms)

    def __str__(self):
        return f"{self.year}.{self.half}"

    def __lt__(self, other: "Term") -> bool:
        return self.ordinal < other.ordinal

    def __le__(self, other: "Term") -> bool:
        return self.ordinal <= other.ordinal

    def __gt__(self, other: "Term") -> bool:
        return self.ordinal > other.ordinal

    def __ge__(self, other: "Term") -> bool:
        return self.ordinal >= other.ordinal


def term_before(a: Term, b: Term) -> bool:
    return a.ordinal < b.ordinal


class Record(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class StudentRecord(Record):
    student_id: str
    admission_term: Term
    gpa: float


class Course(Record):
    course_id: str
    title: str
    description: str
    department_id: str
    credits: PositiveInt

    @field_validator("description")
    @classmethod
    def description_not_blank(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("description is empty")
        return value


class Enrollment(Record):
    student_id: str
    course_id: str
    term: Term
    approved: bool


class TeachingRecord(Record):
    faculty_id: str
    course_id: str
    term: Term


class Faculty(Record):
    faculty_id: str
    department_id: str


class Opportunity(Record):
    opportunity_id: str
    abstract_text: str
    faculty_id: str
    posted_term: Term

    @field_validator("abstract_text")
    @classmethod
    def abstract_not_blank(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("abstract is empty")
        return value


class Application(Record):
    student_id: str
    opportunity_id: str
    term: Term
    accepted: bool


class GpaScale(Record):
    gpa_min: float = GPA_MIN
    gpa_max: float = GPA_MAX

    @model_validator(mode="after")
    def ordered(self) -> "GpaScale":
        if not self.gpa_min < self.gpa_max:
            raise ValueError("gpa_min must be below gpa_max")
        return self


# (collection, position, message)
IntegrityIssue = tuple[str, int, str]


class DatasetIndex:
    """Lookup tables over a Dataset, built once on first use"""

    def __init__(self, dataset: "Dataset"):
        self.students = {s.student_id: s for s in dataset.students}
        self.courses = {c.course_id: c for c in dataset.courses}
        self.faculty = {f.faculty_id: f for f in dataset.faculty}
        self.opportunities = {o.opportunity_id: o for o in dataset.opportunities}

        self.enrollments_by_student: dict[str, list[Enrollment]] = defaultdict(list)
        for enrollment in dataset.enrollments:
            self.enrollments_by_student[enrollment.student_id].append(enrollment)

        self.applications_by_student: dict[str, list[Application]] = defaultdict(list)
        for application in dataset.applications:
            self.applications_by_student[application.student_id].append(application)

        # (course_id, term ordinal) -> faculty teaching it
        self.teachers: dict[tuple[str, int], set[str]] = defaultdict(set)
        for record in dataset.teaching:
            self.teachers[(record.course_id, record.term.ordinal)].add(record.faculty_id)


class Dataset(Record):
    """Immutable snapshot of every record the two tasks consume"""

    students: tuple[StudentRecord, ...] = ()
    courses: tuple[Course, ...] = ()
    enrollments: tuple[Enrollment, ...] = ()
    teaching: tuple[TeachingRecord, ...] = ()
    faculty: tuple[Faculty, ...] = ()
    opportunities: tuple[Opportunity, ...] = ()
    applications: tuple[Application, ...] = ()
    gpa_scale: GpaScale = Field(default_factory=GpaScale)

    _index: DatasetIndex | None = PrivateAttr(default=None)

    @model_validator(mode="after")
    def referentially_intact(self) -> "Dataset":
        issues = self.integrity_issues()
        if issues:
            lines = [f"{collection}[{position}]: {message}" for collection, position, message in issues[:20]]
            raise ValueError(f"{len(issues)} integrity issue(s): " + "; ".join(lines))
        return self

    @property
    def index(self) -> DatasetIndex:
        if self._index is None:
            self._index = DatasetIndex(self)
        return self._index

    def integrity_issues(self) -> list[IntegrityIssue]:
        issues: list[IntegrityIssue] = []

        def unique(collection: str, keys: list):
            seen = set()
            for position, key in enumerate(keys):
                if key in seen:
                    issues.append((collection, position, f"duplicate key {key}"))
                seen.add(key)
            return seen

        student_ids = unique("students", [s.student_id for s in self.students])
        course_ids = unique("courses", [c.course_id for c in self.courses])
        faculty_ids = unique("faculty", [f.faculty_id for f in self.faculty])
        opportunity_ids = unique("opportunities", [o.opportunity_id for o in self.opportunities])
        unique("enrollments", [(e.student_id, e.course_id, e.term.ordinal) for e in self.enrollments])
        unique("teaching", [(t.faculty_id, t.course_id, t.term.ordinal) for t in self.teaching])
        unique("applications", [(a.student_id, a.opportunity_id) for a in self.applications])

        def resolve(collection: str, position: int, name: str, value: str, known: set):
            if value not in known:
                issues.append((collection, position, f"unknown {name} {value}"))

        for position, student in enumerate(self.students):
            if not self.gpa_scale.gpa_min <= student.gpa <= self.gpa_scale.gpa_max:
                issues.append(
                    (
                        "students",
                        position,
                        f"gpa {student.gpa} outside [{self.gpa_scale.gpa_min}, {self.gpa_scale.gpa_max}]",
                    )
                )

        for position, enrollment in enumerate(self.enrollments):
            resolve("enrollments", position, "student_id", enrollment.student_id, student_ids)
            resolve("enrollments", position, "course_id", enrollment.course_id, course_ids)

        for position, record in enumerate(self.teaching):
            resolve("teaching", position, "faculty_id", record.faculty_id, faculty_ids)
            resolve("teaching", position, "course_id", record.course_id, course_ids)

        posted = {o.opportunity_id: o.posted_term for o in self.opportunities}
        for position, opportunity in enumerate(self.opportunities):
            resolve("opportunities", position, "faculty_id", opportunity.faculty_id, faculty_ids)

        for position, application in enumerate(self.applications):
            resolve("applications", position, "student_id", application.student_id, student_ids)
            resolve("applications", position, "opportunity_id", application.opportunity_id, opportunity_ids)
            posted_term = posted.get(application.opportunity_id)
            if posted_term is not None and term_before(application.term, posted_term):
                issues.append(
                    (
                        "applications",
                        position,
                        f"application term {application.term} precedes posting {posted_term}",
                    )
                )

        return issues

    def with_records(self, **collections) -> "Dataset":
        """Validated copy with some collections replaced"""
        fields = {name: getattr(self, name) for name in type(self).model_fields}
        fields.update({name: tuple(records) for name, records in collections.items()})
        return Dataset(**fields)

    def term_range(self) -> tuple[Term, Term] | None:
        terms = [e.term for e in self.enrollments]
        terms += [t.term for t in self.teaching]
        terms += [o.posted_term for o in self.opportunities]
        terms += [a.term for a in self.applications]
        if not terms:
            return None
        return min(terms), max(terms)

    def student(self, student_id: str) -> StudentRecord | None:
        return self.index.students.get(student_id)

    def opportunity(self, opportunity_id: str) -> Opportunity | None:
        return self.index.opportunities.get(opportunity_id)
