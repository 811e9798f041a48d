import csv
from pathlib import Path

import pandas as pd

from research_recommender.components.domain.schemas import Dataset
from research_recommender.core.log import logger
from research_recommender.core.utils import format_float


TABLES: dict[str, list[str]] = {
    "students.csv": ["student_id", "admission_year", "admission_half", "gpa"],
    "courses.csv": ["course_id", "title", "description", "department_id", "credits"],
    "enrollments.csv": ["student_id", "course_id", "year", "half", "approved"],
    "teaching.csv": ["faculty_id", "course_id", "year", "half"],
    "faculty.csv": ["faculty_id", "department_id"],
    "opportunities.csv": ["opportunity_id", "abstract", "faculty_id", "posted_year", "posted_half"],
    "applications.csv": ["student_id", "opportunity_id", "year", "half", "accepted"],
}

# First cell of a row that had more fields than the header
MALFORMED_MARKER = "\x00malformed:"


class DatasetFilesCRUD:
    """Reads and writes the CSV tables of one dataset directory"""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def path(self, file_name: str) -> Path:
        return self.directory / file_name

    def missing_files(self) -> list[str]:
        return [name for name in TABLES if not self.path(name).is_file()]

    def read_table(self, file_name: str) -> pd.DataFrame:
        width = len(TABLES[file_name])

        def keep_malformed(fields: list[str]) -> list[str]:
            return [f"{MALFORMED_MARKER}{len(fields)}"] + [""] * (width - 1)

        return pd.read_csv(
            self.path(file_name),
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            encoding="utf-8",
            engine="python",
            on_bad_lines=keep_malformed,
        )

    def record_lines(self, file_name: str) -> list[int]:
        """Starting line of each data row, skipping the blank lines pandas drops"""
        starts = []
        with self.path(file_name).open(encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            end = 0
            for record in reader:
                start, end = end + 1, reader.line_num
                if len(record) > 1 or (record and record[0].strip()):
                    starts.append(start)
        return starts[1:]

    def write(self, dataset: Dataset):
        self.directory.mkdir(parents=True, exist_ok=True)

        rows = {
            "students.csv": [
                [s.student_id, s.admission_term.year, s.admission_term.half, format_float(s.gpa)]
                for s in dataset.students
            ],
            "courses.csv": [
                [c.course_id, c.title, c.description, c.department_id, c.credits] for c in dataset.courses
            ],
            "enrollments.csv": [
                [e.student_id, e.course_id, e.term.year, e.term.half, int(e.approved)] for e in dataset.enrollments
            ],
            "teaching.csv": [[t.faculty_id, t.course_id, t.term.year, t.term.half] for t in dataset.teaching],
            "faculty.csv": [[f.faculty_id, f.department_id] for f in dataset.faculty],
            "opportunities.csv": [
                [o.opportunity_id, o.abstract_text, o.faculty_id, o.posted_term.year, o.posted_term.half]
                for o in dataset.opportunities
            ],
            "applications.csv": [
                [a.student_id, a.opportunity_id, a.term.year, a.term.half, int(a.accepted)]
                for a in dataset.applications
            ],
        }

        for file_name, header in TABLES.items():
            frame = pd.DataFrame(rows[file_name], columns=header, dtype=str)
            frame.to_csv(self.path(file_name), index=False, encoding="utf-8", lineterminator="\n")

        logger.info(f"Wrote {len(TABLES)} tables to {self.directory}")
