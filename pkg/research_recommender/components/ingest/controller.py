import csv
from pathlib import Path
from typing import Any, Callable, Sequence

import pandas as pd
from pandas.errors import EmptyDataError, ParserError
from pydantic import ValidationError

from research_recommender.components.domain.schemas import (
    Application,
    Course,
    Dataset,
    Enrollment,
    Faculty,
    Opportunity,
    StudentRecord,
    TeachingRecord,
    Term,
)
from research_recommender.components.ingest.crud import MALFORMED_MARKER, TABLES, DatasetFilesCRUD
from research_recommender.components.ingest.schemas import (
    DatasetSummary,
    SchemaConfig,
    ValidationIssue,
    ValidationReport,
)
from research_recommender.core.exceptions import DatasetValidationException
from research_recommender.core.log import logger
from research_recommender.core.utils import directory_digest


COLLECTION_FILES = {
    "students": "students.csv",
    "courses": "courses.csv",
    "enrollments": "enrollments.csv",
    "teaching": "teaching.csv",
    "faculty": "faculty.csv",
    "opportunities": "opportunities.csv",
    "applications": "applications.csv",
}


def _flag(value: str) -> bool:
    if value not in ("0", "1"):
        raise ValueError(f"expected 0 or 1, got {value!r}")
    return value == "1"


def _term(year: str, half: str) -> Term:
    return Term(year=int(year), half=int(half))


ROW_PARSERS: dict[str, Callable[[dict[str, str]], Any]] = {
    "students.csv": lambda r: StudentRecord(
        student_id=r["student_id"],
        admission_term=_term(r["admission_year"], r["admission_half"]),
        gpa=float(r["gpa"]),
    ),
    "courses.csv": lambda r: Course(
        course_id=r["course_id"],
        title=r["title"],
        description=r["description"],
        department_id=r["department_id"],
        credits=int(r["credits"]),
    ),
    "enrollments.csv": lambda r: Enrollment(
        student_id=r["student_id"],
        course_id=r["course_id"],
        term=_term(r["year"], r["half"]),
        approved=_flag(r["approved"]),
    ),
    "teaching.csv": lambda r: TeachingRecord(
        faculty_id=r["faculty_id"],
        course_id=r["course_id"],
        term=_term(r["year"], r["half"]),
    ),
    "faculty.csv": lambda r: Faculty(faculty_id=r["faculty_id"], department_id=r["department_id"]),
    "opportunities.csv": lambda r: Opportunity(
        opportunity_id=r["opportunity_id"],
        abstract_text=r["abstract"],
        faculty_id=r["faculty_id"],
        posted_term=_term(r["posted_year"], r["posted_half"]),
    ),
    "applications.csv": lambda r: Application(
        student_id=r["student_id"],
        opportunity_id=r["opportunity_id"],
        term=_term(r["year"], r["half"]),
        accepted=_flag(r["accepted"]),
    ),
}


def _error_text(error: Exception) -> str:
    if isinstance(error, ValidationError):
        return "; ".join(
            f"{'.'.join(str(part) for part in item['loc']) or 'row'}: {item['msg']}" for item in error.errors()
        )
    return str(error)


class IngestController:
    def __init__(self, schema_config: SchemaConfig | None = None):
        self.schema_config = schema_config or SchemaConfig()

    def load_dataset(self, directory: str | Path) -> Dataset | ValidationReport:
        """Load all tables; any error makes the whole load fail with a full report"""
        crud = DatasetFilesCRUD(directory)
        report = ValidationReport()

        for file_name in crud.missing_files():
            report.errors.append(ValidationIssue(file=file_name, line=0, message="missing file"))
        if report.errors:
            return report

        records: dict[str, list] = {}
        lines: dict[str, list[int]] = {}
        for file_name in TABLES:
            records[file_name], lines[file_name] = self._parse_table(crud, file_name, report)

        candidate = Dataset.model_construct(
            **{collection: tuple(records[file_name]) for collection, file_name in COLLECTION_FILES.items()},
            gpa_scale=self.schema_config.gpa_scale,
        )
        for collection, position, message in candidate.integrity_issues():
            file_name = COLLECTION_FILES[collection]
            report.errors.append(ValidationIssue(file=file_name, line=lines[file_name][position], message=message))

        self._collect_warnings(candidate, lines, report)

        for warning in report.warnings:
            logger.warning(str(warning))

        if report.errors:
            logger.error(f"Dataset at {directory} failed validation with {len(report.errors)} error(s)")
            return report

        dataset = Dataset(
            **{collection: tuple(records[file_name]) for collection, file_name in COLLECTION_FILES.items()},
            gpa_scale=self.schema_config.gpa_scale,
        )
        logger.info(
            f"Loaded dataset from {directory}: {len(dataset.students)} students, "
            f"{len(dataset.opportunities)} opportunities, {len(dataset.applications)} applications"
        )
        return dataset

    def load_dataset_or_raise(self, directory: str | Path) -> Dataset:
        result = self.load_dataset(directory)
        if isinstance(result, ValidationReport):
            raise DatasetValidationException(result)
        return result

    def _parse_table(
        self, crud: DatasetFilesCRUD, file_name: str, report: ValidationReport
    ) -> tuple[list, list[int]]:
        header = TABLES[file_name]

        try:
            frame = crud.read_table(file_name)
            record_lines = crud.record_lines(file_name)
        except EmptyDataError:
            report.errors.append(ValidationIssue(file=file_name, line=1, message="empty file, header expected"))
            return [], []
        except (ParserError, UnicodeDecodeError, csv.Error) as e:
            report.errors.append(ValidationIssue(file=file_name, line=0, message=f"unreadable csv: {e}"))
            return [], []

        if list(frame.columns) != header:
            report.errors.append(
                ValidationIssue(
                    file=file_name,
                    line=1,
                    message=f"header {list(frame.columns)} does not match {header}",
                )
            )
            return [], []

        parsed, parsed_lines = [], []
        parser = ROW_PARSERS[file_name]

        for position, row in enumerate(frame.itertuples(index=False, name=None)):
            line = record_lines[position] if position < len(record_lines) else position + 2
            first = row[0] if row else ""
            if isinstance(first, str) and first.startswith(MALFORMED_MARKER):
                found = first[len(MALFORMED_MARKER) :]
                report.errors.append(
                    ValidationIssue(
                        file=file_name,
                        line=line,
                        message=f"malformed row: expected {len(header)} fields, got {found}",
                    )
                )
                continue

            missing = [name for name, value in zip(header, row) if not isinstance(value, str)]
            if missing:
                report.errors.append(
                    ValidationIssue(file=file_name, line=line, message=f"malformed row: missing {missing}")
                )
                continue

            try:
                parsed.append(parser(dict(zip(header, row))))
                parsed_lines.append(line)
            except (ValueError, ValidationError) as e:
                report.errors.append(ValidationIssue(file=file_name, line=line, message=_error_text(e)))

        return parsed, parsed_lines

    def _collect_warnings(self, candidate: Dataset, lines: dict[str, list[int]], report: ValidationReport):
        taught = {record.course_id for record in candidate.teaching}
        for position, course in enumerate(candidate.courses):
            if course.course_id not in taught:
                report.warnings.append(
                    ValidationIssue(
                        file="courses.csv",
                        line=lines["courses.csv"][position],
                        message=f"course {course.course_id} has no teaching records",
                    )
                )

        admitted = {s.student_id: s.admission_term for s in candidate.students}
        for position, enrollment in enumerate(candidate.enrollments):
            admission = admitted.get(enrollment.student_id)
            if admission is not None and enrollment.term < admission:
                report.warnings.append(
                    ValidationIssue(
                        file="enrollments.csv",
                        line=lines["enrollments.csv"][position],
                        message=f"enrollment in {enrollment.term} precedes admission {admission}",
                    )
                )

    def write_dataset(self, dataset: Dataset, directory: str | Path):
        DatasetFilesCRUD(directory).write(dataset)


def summarize(
    dataset: Dataset,
    applications: Sequence[Application] | None = None,
    opportunities: Sequence[Opportunity] | None = None,
) -> DatasetSummary:
    """Counts over the whole dataset, or over the given applications and opportunities of one period"""
    applications = dataset.applications if applications is None else applications
    opportunities = dataset.opportunities if opportunities is None else opportunities

    n_students = len(dataset.students)
    n_applications = len(applications)
    n_accepted = sum(1 for application in applications if application.accepted)
    n_applicants = len({application.student_id for application in applications})

    return DatasetSummary(
        n_students=n_students,
        n_opportunities=len(opportunities),
        n_applications=n_applications,
        n_applicants=n_applicants,
        n_accepted=n_accepted,
        acceptance_rate=n_accepted / n_applications if n_applications else None,
        applicant_rate=n_applicants / n_students if n_students else None,
    )


def summary_frame(summaries: dict[str, DatasetSummary]) -> pd.DataFrame:
    return pd.DataFrame([{"scope": scope, **summary.model_dump()} for scope, summary in summaries.items()])


def dataset_digest(directory: str | Path) -> str:
    return directory_digest(directory, list(TABLES))
