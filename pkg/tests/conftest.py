import pytest

from research_recommender.components.datagen.controller import generate
from research_recommender.components.datagen.schemas import GenConfig
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
from research_recommender.components.features.controller import FeaturesController
from research_recommender.components.ingest.controller import IngestController
from research_recommender.components.text.controller import TextContext


CUTOFF = Term(year=2014, half=1)


def term(text: str) -> Term:
    return Term.parse(text)


@pytest.fixture
def tiny_dataset() -> Dataset:
    """
    Three students, three courses, four opportunities around a 2014.1 cutoff.

    S1 passed C1 (D1, taught by F1) and C2 (D1), failed C3, and applied to O1
    before the cutoff and O3 after it. S2 passed C3 (D2) and C1 (taught by F1)
    and applied to O2 before the cutoff. S3 passed C2 only and applied to O4
    after the cutoff.
    """
    return Dataset(
        students=(
            StudentRecord(student_id="S1", admission_term=term("2012.1"), gpa=5.5),
            StudentRecord(student_id="S2", admission_term=term("2012.2"), gpa=4.0),
            StudentRecord(student_id="S3", admission_term=term("2013.1"), gpa=6.0),
        ),
        courses=(
            Course(course_id="C1", title="Neural", description="neural networks learning algorithms", department_id="D1", credits=10),
            Course(course_id="C2", title="Databases", description="databases query optimization algorithms", department_id="D1", credits=5),
            Course(course_id="C3", title="Biology", description="cell biology genetics", department_id="D2", credits=10),
        ),
        enrollments=(
            Enrollment(student_id="S1", course_id="C1", term=term("2013.1"), approved=True),
            Enrollment(student_id="S1", course_id="C3", term=term("2013.1"), approved=False),
            Enrollment(student_id="S1", course_id="C2", term=term("2013.2"), approved=True),
            Enrollment(student_id="S2", course_id="C3", term=term("2013.1"), approved=True),
            Enrollment(student_id="S2", course_id="C1", term=term("2013.2"), approved=True),
            Enrollment(student_id="S3", course_id="C2", term=term("2013.1"), approved=True),
        ),
        teaching=(
            TeachingRecord(faculty_id="F1", course_id="C1", term=term("2013.1")),
            TeachingRecord(faculty_id="F1", course_id="C2", term=term("2013.1")),
            TeachingRecord(faculty_id="F1", course_id="C1", term=term("2013.2")),
            TeachingRecord(faculty_id="F2", course_id="C3", term=term("2013.1")),
            TeachingRecord(faculty_id="F2", course_id="C3", term=term("2013.2")),
        ),
        faculty=(
            Faculty(faculty_id="F1", department_id="D1"),
            Faculty(faculty_id="F2", department_id="D2"),
        ),
        opportunities=(
            Opportunity(opportunity_id="O1", abstract_text="neural learning networks research", faculty_id="F1", posted_term=term("2013.1")),
            Opportunity(opportunity_id="O2", abstract_text="genetics cell research", faculty_id="F2", posted_term=term("2013.2")),
            Opportunity(opportunity_id="O3", abstract_text="query optimization algorithms databases", faculty_id="F1", posted_term=term("2014.1")),
            Opportunity(opportunity_id="O4", abstract_text="biology genetics lab", faculty_id="F2", posted_term=term("2014.1")),
        ),
        applications=(
            Application(student_id="S1", opportunity_id="O1", term=term("2013.1"), accepted=True),
            Application(student_id="S2", opportunity_id="O2", term=term("2013.2"), accepted=False),
            Application(student_id="S1", opportunity_id="O3", term=term("2014.1"), accepted=True),
            Application(student_id="S3", opportunity_id="O4", term=term("2014.2"), accepted=True),
        ),
    )  # fmt: skip


@pytest.fixture
def tiny_features(tiny_dataset) -> FeaturesController:
    return FeaturesController(tiny_dataset, TextContext.build(tiny_dataset, CUTOFF, min_df=2))


@pytest.fixture
def tiny_dir(tiny_dataset, tmp_path):
    directory = tmp_path / "tiny"
    IngestController().write_dataset(tiny_dataset, directory)
    return directory


SMALL_CONFIG = GenConfig(
    n_students=300,
    n_courses=30,
    n_faculty=10,
    n_departments=5,
    n_opportunities=80,
    n_topics=10,
    vocab_per_topic=15,
    n_noise_words=40,
    course_length=30,
    abstract_length=40,
    courses_per_term=3,
    applicant_base_rate=0.3,
    seed=7,
)


@pytest.fixture(scope="session")
def small_generated() -> Dataset:
    return generate(SMALL_CONFIG)


@pytest.fixture(scope="session")
def small_dir(small_generated, tmp_path_factory):
    directory = tmp_path_factory.mktemp("small")
    IngestController().write_dataset(small_generated, directory)
    return directory
