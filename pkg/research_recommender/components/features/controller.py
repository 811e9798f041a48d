import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
import pandas as pd

from research_recommender.components.domain.schemas import Dataset, Term
from research_recommender.components.features.schemas import (
    FeatureSetId,
    FeatureVector,
    LabeledExample,
    SplitView,
    Standardizer,
)
from research_recommender.components.text.controller import TextContext
from research_recommender.components.text.schemas import SparseVector
from research_recommender.core.enums import FeatureLevel, Phase, Task
from research_recommender.core.exceptions import EmptyInputException, UnknownEntityException
from research_recommender.core.log import logger
from research_recommender.core.utils import seeded_rng


def temporal_split(dataset: Dataset, cutoff: Term, label_window_terms: int = 2) -> tuple[SplitView, SplitView]:
    term_range = dataset.term_range()
    if term_range and not term_range[0] < cutoff <= term_range[1]:
        logger.warning(f"Cutoff {cutoff} is outside the data range {term_range[0]}..{term_range[1]}")

    train = SplitView(dataset=dataset, cutoff=cutoff, phase=Phase.TRAIN, label_window_terms=label_window_terms)
    test = SplitView(dataset=dataset, cutoff=cutoff, phase=Phase.TEST, label_window_terms=label_window_terms)
    return train, test


# Profiles are keyed by (student, horizon term)
MAX_CACHED_PROFILES = 100_000


@dataclass
class StudentProfile:
    """A student's record strictly before one horizon term"""

    approved_courses: list[str]
    taught_by: set[str]
    departments: Counter
    vector: SparseVector


class FeaturesController:
    def __init__(
        self,
        dataset: Dataset,
        text_ctx: TextContext,
        had_teacher_any_term: bool = False,
        max_cached_profiles: int = MAX_CACHED_PROFILES,
    ):
        self.dataset = dataset
        self.text_ctx = text_ctx
        self.had_teacher_any_term = had_teacher_any_term

        index = dataset.index
        self._courses = index.courses
        self._faculty_department = {f.faculty_id: f.department_id for f in dataset.faculty}
        self._teachers = index.teachers

        self._any_term_teachers: dict[str, list[tuple[int, str]]] = {}
        for record in dataset.teaching:
            self._any_term_teachers.setdefault(record.course_id, []).append((record.term.ordinal, record.faculty_id))

        self._profiles: dict[tuple[str, int], StudentProfile] = {}
        if max_cached_profiles < 1:
            raise ValueError("max_cached_profiles must be at least 1")
        self.max_cached_profiles = max_cached_profiles

    def _require_student(self, student_id: str):
        student = self.dataset.student(student_id)
        if student is None:
            raise UnknownEntityException(f"student {student_id}")
        return student

    def _require_opportunity(self, opportunity_id: str):
        opportunity = self.dataset.opportunity(opportunity_id)
        if opportunity is None:
            raise UnknownEntityException(f"opportunity {opportunity_id}")
        return opportunity

    def task1_values(self, student_id: str, horizon: Term) -> list[float]:
        """[semesters_enrolled, credits_approved, prior_application, gpa] from history before horizon"""
        student = self._require_student(student_id)
        index = self.dataset.index

        terms = set()
        credits = 0
        for enrollment in index.enrollments_by_student.get(student_id, ()):
            if enrollment.term.ordinal < horizon.ordinal:
                terms.add(enrollment.term.ordinal)
                if enrollment.approved:
                    credits += self._courses[enrollment.course_id].credits

        prior = any(a.term.ordinal < horizon.ordinal for a in index.applications_by_student.get(student_id, ()))
        return [float(len(terms)), float(credits), float(prior), float(student.gpa)]

    def task1_features(self, student_id: str, view: SplitView, feature_set: FeatureSetId) -> FeatureVector:
        names = feature_set.names
        values = self.task1_values(student_id, view.applicant_horizon)
        return FeatureVector(names=names, values=tuple(values[: len(names)]))

    def profile(self, student_id: str, horizon: Term) -> StudentProfile:
        key = (student_id, horizon.ordinal)
        if key in self._profiles:
            return self._profiles[key]

        approved: list[str] = []
        taught_by: set[str] = set()
        for enrollment in self.dataset.index.enrollments_by_student.get(student_id, ()):
            if not enrollment.approved or enrollment.term.ordinal >= horizon.ordinal:
                continue
            approved.append(enrollment.course_id)
            if self.had_teacher_any_term:
                taught_by |= {
                    faculty_id
                    for ordinal, faculty_id in self._any_term_teachers.get(enrollment.course_id, ())
                    if ordinal < horizon.ordinal
                }
            else:
                taught_by |= self._teachers.get((enrollment.course_id, enrollment.term.ordinal), set())

        distinct = sorted(set(approved))
        profile = StudentProfile(
            approved_courses=distinct,
            taught_by=taught_by,
            departments=Counter(self._courses[course_id].department_id for course_id in distinct),
            vector=self.text_ctx.student_vector(distinct),
        )
        if len(self._profiles) >= self.max_cached_profiles:
            # oldest first
            del self._profiles[next(iter(self._profiles))]
        self._profiles[key] = profile
        return profile

    @property
    def cached_profiles(self) -> int:
        return len(self._profiles)

    def task2_matrix(
        self, student_id: str, opportunity_ids: list[str], view: SplitView, feature_set: FeatureSetId
    ) -> np.ndarray:
        """Rows of [content_sim, had_teacher, dept_frac] (truncated to the set) per opportunity"""
        self._require_student(student_id)
        opportunities = [self._require_opportunity(opportunity_id) for opportunity_id in opportunity_ids]

        matrix = np.zeros((len(opportunities), 3))
        by_horizon: dict[int, list[int]] = {}
        for row, opportunity in enumerate(opportunities):
            by_horizon.setdefault(view.pair_horizon(opportunity.posted_term).ordinal, []).append(row)

        for ordinal, rows in sorted(by_horizon.items()):
            profile = self.profile(student_id, Term.from_ordinal(ordinal))
            n_approved = len(profile.approved_courses)

            matrix[rows, 0] = self.text_ctx.similarities(
                profile.vector, [opportunities[row].opportunity_id for row in rows]
            )
            for row in rows:
                faculty_id = opportunities[row].faculty_id
                matrix[row, 1] = 1.0 if faculty_id in profile.taught_by else 0.0
                if n_approved:
                    department = self._faculty_department[faculty_id]
                    matrix[row, 2] = profile.departments[department] / n_approved

        return matrix[:, : len(feature_set.names)]

    def task2_features(
        self, student_id: str, opportunity_id: str, view: SplitView, feature_set: FeatureSetId
    ) -> FeatureVector:
        values = self.task2_matrix(student_id, [opportunity_id], view, feature_set)[0]
        return FeatureVector(names=feature_set.names, values=tuple(float(v) for v in values))

    def build_task1_examples(self, view: SplitView, level: FeatureLevel) -> list[LabeledExample]:
        """One example per student, label 1 iff they applied inside the labelling window"""
        feature_set = FeatureSetId(task=Task.APPLICANT, level=level)
        applied = {a.student_id for a in self.dataset.applications if view.in_label_window(a.term)}

        examples = [
            LabeledExample(
                features=self.task1_features(student.student_id, view, feature_set),
                label=int(student.student_id in applied),
                key=(student.student_id,),
            )
            for student in sorted(self.dataset.students, key=lambda s: s.student_id)
        ]
        logger.info(
            f"Built {len(examples)} task-1 {view.phase.value} examples ({len(applied)} positive) for {feature_set.label}"
        )
        return examples

    def build_task2_examples(
        self, view: SplitView, level: FeatureLevel, neg_ratio: float = 1.0, seed: int = 0
    ) -> list[LabeledExample]:
        """Every applied pair in the window plus seeded uniformly sampled non-applied pairs"""
        if neg_ratio <= 0:
            raise ValueError("neg_ratio must be positive")

        feature_set = FeatureSetId(task=Task.OPPORTUNITY, level=level)
        positives = sorted({(a.student_id, a.opportunity_id) for a in view.applications()})
        positive_set = set(positives)

        applicants = sorted({student_id for student_id, _ in positives})
        opportunities = sorted(o.opportunity_id for o in view.candidate_opportunities())
        candidates = [
            (student_id, opportunity_id)
            for student_id in applicants
            for opportunity_id in opportunities
            if (student_id, opportunity_id) not in positive_set
        ]

        wanted = math.ceil(neg_ratio * len(positives))
        if wanted > len(candidates):
            logger.warning(
                f"Only {len(candidates)} non-applied pairs available for {wanted} negatives; using all of them"
            )
            negatives = candidates
        else:
            chosen = seeded_rng(seed).choice(len(candidates), size=wanted, replace=False)
            negatives = [candidates[i] for i in sorted(chosen)]

        labeled = sorted([(pair, 1) for pair in positives] + [(pair, 0) for pair in negatives])

        by_student: dict[str, list[str]] = {}
        for (student_id, opportunity_id), _ in labeled:
            by_student.setdefault(student_id, []).append(opportunity_id)
        rows = {
            student_id: dict(zip(opportunity_ids, self.task2_matrix(student_id, opportunity_ids, view, feature_set)))
            for student_id, opportunity_ids in by_student.items()
        }

        examples = [
            LabeledExample(
                features=FeatureVector(
                    names=feature_set.names,
                    values=tuple(float(v) for v in rows[student_id][opportunity_id]),
                ),
                label=label,
                key=(student_id, opportunity_id),
            )
            for (student_id, opportunity_id), label in labeled
        ]
        logger.info(
            f"Built {len(examples)} task-2 {view.phase.value} examples "
            f"({len(positives)} positive, {len(negatives)} negative) for {feature_set.label}"
        )
        return examples


def examples_matrix(examples: list[LabeledExample]) -> tuple[np.ndarray, np.ndarray, tuple[str, ...]]:
    if not examples:
        raise EmptyInputException("no examples")
    names = examples[0].features.names
    X = np.array([example.features.values for example in examples], dtype=float).reshape(len(examples), len(names))
    y = np.array([example.label for example in examples], dtype=float)
    return X, y, names


def fit_standardizer(examples: list[LabeledExample], passthrough: tuple[str, ...] = ()) -> Standardizer:
    """Population mean and std per feature; near-constant columns get std 0"""
    X, _, names = examples_matrix(examples)
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    stds = np.where(stds <= 1e-12 * np.maximum(1.0, np.abs(means)), 0.0, stds)
    return Standardizer(
        names=names,
        means=tuple(float(m) for m in means),
        stds=tuple(float(s) for s in stds),
        passthrough=tuple(name for name in names if name in passthrough),
    )


def apply_standardizer(standardizer: Standardizer, vector: FeatureVector) -> FeatureVector:
    values = standardizer.transform(vector.as_array())
    return FeatureVector(names=vector.names, values=tuple(float(v) for v in values))


def examples_frame(examples: list[LabeledExample]) -> pd.DataFrame:
    """Key columns, named features and label, for external inspection"""
    if not examples:
        return pd.DataFrame()
    key_names = ["student_id", "opportunity_id"][: len(examples[0].key)]
    return pd.DataFrame(
        [
            {
                **dict(zip(key_names, example.key)),
                **dict(zip(example.features.names, example.features.values)),
                "label": example.label,
            }
            for example in examples
        ]
    )
