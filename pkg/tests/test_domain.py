import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from research_recommender.components.domain.schemas import (
    Application,
    Course,
    Dataset,
    Enrollment,
    Term,
    term_before,
)


def t(year, half):
    return Term(year=year, half=half)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (t(2013, 2), t(2014, 1), True),
        (t(2014, 1), t(2014, 1), False),
        (t(2015, 1), t(2014, 2), False),
    ],
)
def test_term_before(a, b, expected):
    assert term_before(a, b) is expected


def test_term_before_is_a_strict_total_order():
    terms = [t(year, half) for year in range(2011, 2016) for half in (1, 2)]
    for a, b in itertools.product(terms, repeat=2):
        assert [term_before(a, b), term_before(b, a), a == b].count(True) == 1


def test_term_parse_and_shift():
    assert Term.parse("2014.1") == t(2014, 1)
    assert str(t(2013, 2)) == "2013.2"
    assert t(2014, 1).shift(-2) == t(2013, 1)
    assert t(2013, 2).shift(1) == t(2014, 1)


def test_term_rejects_a_third_half():
    with pytest.raises(ValidationError):
        Term(year=2014, half=3)


def test_course_description_must_not_be_blank():
    with pytest.raises(ValidationError):
        Course(course_id="C", title="t", description="   ", department_id="D", credits=5)
    with pytest.raises(ValidationError):
        Course(course_id="C", title="t", description="x", department_id="D", credits=0)


def test_tiny_dataset_is_intact(tiny_dataset):
    assert tiny_dataset.integrity_issues() == []
    assert tiny_dataset.term_range() == (t(2013, 1), t(2014, 2))
    assert tiny_dataset.student("S2").gpa == 4.0
    assert tiny_dataset.opportunity("missing") is None


def test_dataset_rejects_gpa_outside_the_scale(tiny_dataset):
    student = tiny_dataset.students[0].model_copy(update={"gpa": 7.5})
    with pytest.raises(ValidationError, match="gpa 7.5 outside"):
        tiny_dataset.with_records(students=(student,) + tiny_dataset.students[1:])


def test_dataset_rejects_duplicate_application(tiny_dataset):
    duplicate = tiny_dataset.applications[0].model_copy(update={"accepted": False})
    with pytest.raises(ValidationError, match="duplicate key"):
        tiny_dataset.with_records(applications=tiny_dataset.applications + (duplicate,))


def test_dataset_rejects_application_before_posting(tiny_dataset):
    early = Application(student_id="S2", opportunity_id="O3", term=t(2013, 2), accepted=False)
    with pytest.raises(ValidationError, match="precedes posting"):
        tiny_dataset.with_records(applications=tiny_dataset.applications + (early,))


def test_random_id_corruption_is_always_detected(tiny_dataset):
    rng = np.random.default_rng(11)
    for _ in range(50):
        position = int(rng.integers(len(tiny_dataset.enrollments)))
        field = ["student_id", "course_id"][int(rng.integers(2))]
        enrollments = list(tiny_dataset.enrollments)
        enrollments[position] = enrollments[position].model_copy(update={field: f"ghost{int(rng.integers(1000))}"})
        with pytest.raises(ValidationError, match="unknown"):
            tiny_dataset.with_records(enrollments=enrollments)


def test_records_are_immutable(tiny_dataset):
    with pytest.raises(ValidationError):
        tiny_dataset.students[0].gpa = 1.0
    with pytest.raises(ValidationError):
        tiny_dataset.students = ()


def test_enrollment_uniqueness_is_per_term(tiny_dataset):
    retake = Enrollment(student_id="S1", course_id="C3", term=t(2013, 2), approved=True)
    assert tiny_dataset.with_records(enrollments=tiny_dataset.enrollments + (retake,))
