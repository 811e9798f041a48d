import pytest

from research_recommender.components.domain.schemas import Term
from research_recommender.components.features.controller import temporal_split
from research_recommender.components.ingest.controller import (
    COLLECTION_FILES,
    IngestController,
    dataset_digest,
    summarize,
    summary_frame,
)
from research_recommender.components.ingest.crud import TABLES
from research_recommender.components.ingest.schemas import ValidationReport
from research_recommender.core.exceptions import DatasetValidationException


def test_write_then_load_gives_the_same_dataset(tiny_dataset, tiny_dir):
    loaded = IngestController().load_dataset(tiny_dir)
    assert not isinstance(loaded, ValidationReport)
    for collection in COLLECTION_FILES:
        assert getattr(loaded, collection) == getattr(tiny_dataset, collection)


def test_generated_dataset_survives_write_and_load(small_generated, small_dir):
    loaded = IngestController().load_dataset(small_dir)
    assert not isinstance(loaded, ValidationReport)
    for collection in COLLECTION_FILES:
        assert getattr(loaded, collection) == getattr(small_generated, collection)


def test_written_tables_have_the_documented_headers(tiny_dir):
    for file_name, header in TABLES.items():
        first_line = (tiny_dir / file_name).read_text(encoding="utf-8").splitlines()[0]
        assert first_line.split(",") == header


def test_missing_file_is_reported(tiny_dir):
    (tiny_dir / "faculty.csv").unlink()
    report = IngestController().load_dataset(tiny_dir)
    assert isinstance(report, ValidationReport)
    assert [str(issue) for issue in report.errors] == ["faculty.csv:0: missing file"]


def test_bad_value_is_reported_with_file_and_line(tiny_dir):
    path = tiny_dir / "applications.csv"
    lines = path.read_text(encoding="utf-8").splitlines()
    lines[2] = lines[2].rsplit(",", 1)[0] + ",yes"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    report = IngestController().load_dataset(tiny_dir)
    assert isinstance(report, ValidationReport)
    assert len(report.errors) == 1
    assert report.errors[0].file == "applications.csv"
    assert report.errors[0].line == 3


def test_line_numbers_follow_quoted_newlines_and_blank_lines(tiny_dir):
    (tiny_dir / "courses.csv").write_text(
        "course_id,title,description,department_id,credits\n"
        'C1,Neural,"neural networks\nlearning algorithms",D1,10\n'
        "\n"
        "C2,Databases,databases query optimization algorithms,D1,5\n"
        "C3,Biology,cell biology genetics,D2,ten\n",
        encoding="utf-8",
    )

    report = IngestController().load_dataset(tiny_dir)
    assert isinstance(report, ValidationReport)
    assert [issue.line for issue in report.errors if issue.file == "courses.csv"] == [6]


def test_extra_field_is_a_malformed_row(tiny_dir):
    path = tiny_dir / "faculty.csv"
    path.write_text(path.read_text(encoding="utf-8") + "F3,D1,extra\n", encoding="utf-8")

    report = IngestController().load_dataset(tiny_dir)
    assert isinstance(report, ValidationReport)
    assert report.errors[0].line == 4
    assert "malformed row" in report.errors[0].message


def test_wrong_header_is_reported(tiny_dir):
    path = tiny_dir / "students.csv"
    lines = path.read_text(encoding="utf-8").splitlines()
    lines[0] = "id,admission_year,admission_half,gpa"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    report = IngestController().load_dataset(tiny_dir)
    assert isinstance(report, ValidationReport)
    assert report.errors[0].file == "students.csv"
    assert report.errors[0].line == 1


def test_dangling_reference_points_at_its_line(tiny_dir):
    path = tiny_dir / "enrollments.csv"
    path.write_text(path.read_text(encoding="utf-8") + "S9,C1,2013,1,1\n", encoding="utf-8")

    report = IngestController().load_dataset(tiny_dir)
    assert isinstance(report, ValidationReport)
    assert [(issue.line, issue.message) for issue in report.errors] == [(8, "unknown student_id S9")]


def test_duplicate_application_row_is_an_error(tiny_dir):
    path = tiny_dir / "applications.csv"
    path.write_text(path.read_text(encoding="utf-8") + "S1,O1,2013,2,0\n", encoding="utf-8")

    report = IngestController().load_dataset(tiny_dir)
    assert isinstance(report, ValidationReport)
    assert "duplicate key" in report.errors[0].message


def test_course_without_teaching_is_only_a_warning(tiny_dir):
    path = tiny_dir / "courses.csv"
    path.write_text(path.read_text(encoding="utf-8") + "C4,Extra,lonely seminar,D2,5\n", encoding="utf-8")

    loaded = IngestController().load_dataset(tiny_dir)
    assert not isinstance(loaded, ValidationReport)
    assert len(loaded.courses) == 4


def test_load_or_raise_carries_the_report(tiny_dir):
    (tiny_dir / "students.csv").write_text("", encoding="utf-8")
    with pytest.raises(DatasetValidationException) as info:
        IngestController().load_dataset_or_raise(tiny_dir)
    assert info.value.exit_code == 1
    assert info.value.report.errors[0].file == "students.csv"


def test_digest_changes_with_content(tiny_dir):
    before = dataset_digest(tiny_dir)
    assert before == dataset_digest(tiny_dir)
    path = tiny_dir / "faculty.csv"
    path.write_text(path.read_text(encoding="utf-8") + "F3,D1\n", encoding="utf-8")
    assert dataset_digest(tiny_dir) != before


def test_summarize_counts(tiny_dataset):
    summary = summarize(tiny_dataset)
    assert summary.n_students == 3
    assert summary.n_opportunities == 4
    assert summary.n_applications == 4
    assert summary.n_applicants == 3
    assert summary.n_accepted == 3
    assert summary.acceptance_rate == pytest.approx(0.75)
    assert summary.applicant_rate == pytest.approx(1.0)


def test_summarize_per_period(tiny_dataset):
    train, test = temporal_split(tiny_dataset, Term(year=2014, half=1))
    before = summarize(tiny_dataset, train.applications(), train.candidate_opportunities())
    after = summarize(tiny_dataset, test.applications(), test.candidate_opportunities())

    assert (before.n_applications, before.n_applicants, before.n_opportunities) == (2, 2, 2)
    assert (after.n_applications, after.n_applicants, after.n_opportunities) == (2, 2, 2)
    assert before.acceptance_rate == pytest.approx(0.5)
    assert after.acceptance_rate == pytest.approx(1.0)


def test_summary_of_an_empty_period_has_no_rates(tiny_dataset):
    summary = summarize(tiny_dataset, applications=[], opportunities=[])
    assert summary.acceptance_rate is None
    assert summary.applicant_rate == 0.0


def test_summary_frame_has_one_row_per_scope(tiny_dataset):
    frame = summary_frame({"all": summarize(tiny_dataset)})
    assert list(frame["scope"]) == ["all"]
    assert frame.loc[0, "n_applications"] == 4

