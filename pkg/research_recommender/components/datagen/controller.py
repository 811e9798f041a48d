import numpy as np

from research_recommender.components.classifiers.logreg import sigmoid
from research_recommender.components.datagen.schemas import GenConfig, SignalWeights
from research_recommender.components.domain.schemas import (
    Application,
    Course,
    Dataset,
    Enrollment,
    Faculty,
    GpaScale,
    Opportunity,
    StudentRecord,
    TeachingRecord,
    Term,
)
from research_recommender.core.exceptions import InfeasibleConfigException
from research_recommender.core.log import logger
from research_recommender.core.utils import seeded_rng


# Prefix-free, so fixed-length syllable strings never collide
SYLLABLES = (
    "ka", "lo", "mi", "ne", "ru", "ta", "vi", "so", "de", "pa",
    "xo", "li", "mu", "ber", "gan", "tor", "fel", "quin", "dor", "sil",
)  # fmt: skip

CREDIT_CHOICES = (5, 10, 15)

# Independent random streams, one per generation stage
WORDS, STUDENTS, ENROLLMENTS, TEACHING, OPPORTUNITIES, APPLY, CHOOSE, ACCEPT = range(8)


def make_word(index: int, syllables: int) -> str:
    parts = []
    for _ in range(syllables):
        index, digit = divmod(index, len(SYLLABLES))
        parts.append(SYLLABLES[digit])
    return "".join(reversed(parts))


def make_ids(prefix: str, n: int) -> list[str]:
    width = max(4, len(str(n)))
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def zscore(values: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
    """Standardize with mean and population std over the masked entries; constant input maps to 0"""
    sample = values if mask is None else values[mask]
    if sample.size == 0:
        return np.zeros_like(values, dtype=float)
    std = sample.std()
    if std <= 0.0:
        return np.zeros_like(values, dtype=float)
    return (values - sample.mean()) / std


def logit(p: np.ndarray | float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return np.log(p / (1.0 - p))


class DatasetGenerator:
    """
    Simulates students taking courses term by term and applying to the
    opportunities posted each term. Every random draw comes from a
    numpy PCG64 stream seeded with SeedSequence([seed, stage]).
    """

    def __init__(self, config: GenConfig):
        self.config = config
        self.weights = config.signal_weights
        self.first = config.first_term.ordinal
        self.last = config.last_term.ordinal
        self.n_terms = self.last - self.first + 1
        self.gpa_scale = GpaScale()
        self._terms: dict[int, Term] = {}

    def term(self, ordinal: int) -> Term:
        if ordinal not in self._terms:
            self._terms[ordinal] = Term.from_ordinal(ordinal)
        return self._terms[ordinal]

    def run(self) -> Dataset:
        config = self.config
        logger.info(
            f"Generating {config.n_students} students, {config.n_courses} courses and "
            f"{config.n_opportunities} opportunities over {config.terms_range[0]}..{config.terms_range[1]} "
            f"(seed {config.seed})"
        )

        self._build_vocabulary()
        self._build_catalog()
        self._build_students()
        self._simulate_enrollments()
        self._simulate_applications()

        dataset = self._assemble()
        logger.info(
            f"Generated {len(dataset.enrollments)} enrollments and {len(dataset.applications)} applications "
            f"from {len({a.student_id for a in dataset.applications})} applicants"
        )
        return dataset

    # Step 1: words and documents

    def _build_vocabulary(self):
        config = self.config
        self.n_words = config.n_topics * config.vocab_per_topic + config.n_noise_words
        syllables = 3
        while len(SYLLABLES) ** syllables < self.n_words:
            syllables += 1
        self.words = [make_word(i, syllables) for i in range(self.n_words)]
        self.word_rng = seeded_rng(config.seed, WORDS)

    def _document(self, topic: int, length: int) -> str:
        config = self.config
        rng = self.word_rng
        n_dominant = int(rng.binomial(length, config.dominant_topic_share))
        start = topic * config.vocab_per_topic
        tokens = np.concatenate(
            [
                rng.integers(start, start + config.vocab_per_topic, size=n_dominant),
                rng.integers(0, self.n_words, size=length - n_dominant),
            ]
        )
        return " ".join(self.words[i] for i in rng.permutation(tokens))

    # Step 2: departments, courses, faculty, teaching, opportunities

    def _build_catalog(self):
        config = self.config
        n_departments = config.n_departments

        self.department_ids = make_ids("D", n_departments)
        self.course_ids = make_ids("C", config.n_courses)
        self.faculty_ids = make_ids("F", config.n_faculty)
        self.opportunity_ids = make_ids("O", config.n_opportunities)

        self.course_topic = np.arange(config.n_courses) % config.n_topics
        self.course_department = self.course_topic % n_departments
        self.course_credits = np.asarray(CREDIT_CHOICES)[
            seeded_rng(config.seed, TEACHING, 0).integers(len(CREDIT_CHOICES), size=config.n_courses)
        ]
        self.course_titles = [
            " ".join(
                self.words[t * config.vocab_per_topic + j].title()
                for j in self.word_rng.choice(config.vocab_per_topic, size=2, replace=False)
            )
            for t in self.course_topic
        ]
        self.course_descriptions = [self._document(int(t), config.course_length) for t in self.course_topic]

        rng = seeded_rng(config.seed, TEACHING, 1)
        self.faculty_department = np.arange(config.n_faculty) % n_departments
        topics_of = [np.flatnonzero(np.arange(config.n_topics) % n_departments == d) for d in range(n_departments)]
        self.faculty_topic = np.array([rng.choice(topics_of[d]) for d in self.faculty_department], dtype=int)

        # teacher[c, i]: faculty index teaching course c in the i-th term of the range
        faculty_of = [np.flatnonzero(self.faculty_department == d) for d in range(n_departments)]
        self.teacher = np.empty((config.n_courses, self.n_terms), dtype=int)
        for c in range(config.n_courses):
            pool = faculty_of[self.course_department[c]]
            self.teacher[c] = pool[rng.integers(len(pool), size=self.n_terms)]

        rng = seeded_rng(config.seed, OPPORTUNITIES)
        self.opportunity_faculty = rng.integers(config.n_faculty, size=config.n_opportunities)
        self.opportunity_topic = self.faculty_topic[self.opportunity_faculty]
        self.opportunity_department = self.faculty_department[self.opportunity_faculty]
        self.opportunity_term = np.arange(config.n_opportunities) % self.n_terms
        self.opportunity_abstracts = [self._document(int(t), config.abstract_length) for t in self.opportunity_topic]

    # Step 3: students

    def _build_students(self):
        config = self.config
        rng = seeded_rng(config.seed, STUDENTS)
        n = config.n_students

        self.student_ids = make_ids("S", n)
        self.admission = rng.integers(self.first - config.admission_lead_terms, self.last + 1, size=n)
        gpa = rng.normal(config.gpa_mean, config.gpa_sd, size=n)
        self.gpa = np.round(np.clip(gpa, self.gpa_scale.gpa_min, self.gpa_scale.gpa_max), 2)
        self.preferences = rng.dirichlet(np.full(config.n_topics, config.preference_concentration), size=n)

        ordinals = self.first + np.arange(self.n_terms)
        self.active = (ordinals[None, :] >= self.admission[:, None]) & (
            ordinals[None, :] < self.admission[:, None] + config.max_study_terms
        )

    # Step 4: enrollments, with the running history the application model reads

    def _simulate_enrollments(self):
        config = self.config
        rng = seeded_rng(config.seed, ENROLLMENTS)
        n, n_courses = config.n_students, config.n_courses
        per_term = min(config.courses_per_term, n_courses)

        approval = sigmoid(logit(config.approval_rate) + (self.gpa - config.gpa_mean) / config.gpa_sd)
        affinity = self.preferences[:, self.course_topic]

        approved = np.zeros((n, n_courses), dtype=bool)
        topic_counts = np.zeros((n, config.n_topics), dtype=np.int32)
        department_counts = np.zeros((n, config.n_departments), dtype=np.int32)
        taught = np.zeros((n, config.n_faculty), dtype=bool)
        semesters = np.zeros(n)
        credits = np.zeros(n)

        self.semesters_before = np.zeros((n, self.n_terms))
        self.credits_before = np.zeros((n, self.n_terms))
        self.topic_counts_before, self.department_counts_before, self.taught_before = [], [], []
        self.enrollment_rows: list[tuple[int, int, int, bool]] = []

        for i in range(self.n_terms):
            self.semesters_before[:, i] = semesters
            self.credits_before[:, i] = credits
            self.topic_counts_before.append(topic_counts.copy())
            self.department_counts_before.append(department_counts.copy())
            self.taught_before.append(taught.copy())

            rows = np.flatnonzero(self.active[:, i])
            if rows.size == 0:
                continue

            # Gumbel top-k: weighted sampling without replacement, skipping approved courses
            with np.errstate(divide="ignore"):
                keys = np.log(np.where(approved[rows], 0.0, affinity[rows]))
            keys = keys + rng.gumbel(size=keys.shape)
            chosen = np.sort(np.argpartition(-keys, per_term - 1, axis=1)[:, :per_term], axis=1)
            passed = rng.random(chosen.shape) < approval[rows, None]

            enrolled = np.zeros(len(rows), dtype=bool)
            for r, s in enumerate(rows):
                for c, ok in zip(chosen[r], passed[r]):
                    if not np.isfinite(keys[r, c]):
                        continue
                    enrolled[r] = True
                    self.enrollment_rows.append((int(s), int(c), i, bool(ok)))
                    if ok:
                        approved[s, c] = True
                        topic_counts[s, self.course_topic[c]] += 1
                        department_counts[s, self.course_department[c]] += 1
                        taught[s, self.teacher[c, i]] = True
                        credits[s] += self.course_credits[c]
            semesters[rows[enrolled]] += 1

    # Step 5: applications

    def _simulate_applications(self):
        decisions = self._decide_applicants()
        self.application_rows = self._choose_opportunities(decisions)

    def _decide_applicants(self) -> np.ndarray:
        """
        Student s applies in term i with probability
        sigmoid(logit(r_s) + delta + w_prior*prior + w_semesters*z(semesters) + w_credits*z(credits) + w_gpa*z(gpa)),
        r_s spreading the base rate over the student's terms and delta calibrated by bisection.
        """
        config = self.config
        weights = self.weights
        rng = seeded_rng(config.seed, APPLY)

        has_openings = np.bincount(self.opportunity_term, minlength=self.n_terms) > 0
        eligible = self.active & has_openings[None, :]

        terms_active = np.maximum(self.active.sum(axis=1), 1)
        per_term_rate = 1.0 - (1.0 - config.applicant_base_rate) ** (1.0 / terms_active)

        gpa = np.repeat(self.gpa[:, None], self.n_terms, axis=1)
        static = (
            logit(per_term_rate)[:, None]
            + weights.w_semesters * zscore(self.semesters_before, self.active)
            + weights.w_credits * zscore(self.credits_before, self.active)
            + weights.w_gpa * zscore(gpa, self.active)
        )
        uniforms = rng.random(static.shape)

        def simulate(delta: float) -> np.ndarray:
            prior = np.zeros(config.n_students, dtype=bool)
            decisions = np.zeros_like(eligible)
            for i in range(self.n_terms):
                p = sigmoid(static[:, i] + delta + weights.w_prior * prior)
                decisions[:, i] = eligible[:, i] & (uniforms[:, i] < p)
                prior |= decisions[:, i]
            return decisions

        def rate(delta: float) -> float:
            return float(simulate(delta).any(axis=1).mean())

        low, high = -30.0, 30.0
        for _ in range(60):
            middle = 0.5 * (low + high)
            if rate(middle) < config.applicant_base_rate:
                low = middle
            else:
                high = middle
        delta = min((low, high), key=lambda d: abs(rate(d) - config.applicant_base_rate))

        decisions = simulate(delta)
        achieved = float(decisions.any(axis=1).mean())
        logger.info(f"Applicant rate {achieved:.4f} (target {config.applicant_base_rate}), intercept shift {delta:.4f}")
        if abs(achieved - config.applicant_base_rate) > 0.05:
            logger.warning("Applicant rate is more than 0.05 off target; check the term range and study length")
        return decisions

    def _choose_opportunities(self, decisions: np.ndarray) -> list[tuple[int, int, int]]:
        """
        Multinomial-logit choice among the term's opportunities with utility
        w_content*z(topic overlap) + w_ht*had_teacher + w_dept*z(department share).
        """
        config = self.config
        weights = self.weights
        rng = seeded_rng(config.seed, CHOOSE)

        blocks = []
        for i in range(self.n_terms):
            applicants = np.flatnonzero(decisions[:, i])
            openings = np.flatnonzero(self.opportunity_term == i)
            if applicants.size == 0 or openings.size == 0:
                continue

            n_approved = np.maximum(self.department_counts_before[i][applicants].sum(axis=1), 1)[:, None]
            overlap = self.topic_counts_before[i][np.ix_(applicants, self.opportunity_topic[openings])] / n_approved
            share = (
                self.department_counts_before[i][np.ix_(applicants, self.opportunity_department[openings])] / n_approved
            )
            had_teacher = self.taught_before[i][np.ix_(applicants, self.opportunity_faculty[openings])]
            blocks.append((i, applicants, openings, overlap, had_teacher.astype(float), share))

        if not blocks:
            return []

        all_overlap = np.concatenate([block[3].ravel() for block in blocks])
        all_share = np.concatenate([block[5].ravel() for block in blocks])
        overlap_mean, overlap_std = all_overlap.mean(), all_overlap.std()
        share_mean, share_std = all_share.mean(), all_share.std()

        def standardized(values: np.ndarray, mean: float, std: float) -> np.ndarray:
            return (values - mean) / std if std > 0.0 else np.zeros_like(values)

        rows = []
        for i, applicants, openings, overlap, had_teacher, share in blocks:
            utility = (
                weights.w_content * standardized(overlap, overlap_mean, overlap_std)
                + weights.w_ht * had_teacher
                + weights.w_dept * standardized(share, share_mean, share_std)
            )
            # Gumbel-max: the top two perturbed utilities are softmax draws without replacement
            order = np.argsort(-(utility + rng.gumbel(size=utility.shape)), axis=1, kind="stable")
            second = rng.random(len(applicants)) < config.second_application_rate
            for r, s in enumerate(applicants):
                rows.append((int(s), int(openings[order[r, 0]]), i))
                if second[r] and len(openings) > 1:
                    rows.append((int(s), int(openings[order[r, 1]]), i))
        return rows

    # Step 6: records

    def _assemble(self) -> Dataset:
        config = self.config
        accepted = seeded_rng(config.seed, ACCEPT).random(len(self.application_rows)) < config.acceptance_rate

        students = tuple(
            StudentRecord(
                student_id=self.student_ids[s],
                admission_term=self.term(int(self.admission[s])),
                gpa=float(self.gpa[s]),
            )
            for s in range(config.n_students)
        )
        courses = tuple(
            Course(
                course_id=self.course_ids[c],
                title=self.course_titles[c],
                description=self.course_descriptions[c],
                department_id=self.department_ids[self.course_department[c]],
                credits=int(self.course_credits[c]),
            )
            for c in range(config.n_courses)
        )
        faculty = tuple(
            Faculty(faculty_id=self.faculty_ids[f], department_id=self.department_ids[self.faculty_department[f]])
            for f in range(config.n_faculty)
        )
        teaching = tuple(
            TeachingRecord(
                faculty_id=self.faculty_ids[self.teacher[c, i]],
                course_id=self.course_ids[c],
                term=self.term(self.first + i),
            )
            for i in range(self.n_terms)
            for c in range(config.n_courses)
        )
        opportunities = tuple(
            Opportunity(
                opportunity_id=self.opportunity_ids[o],
                abstract_text=self.opportunity_abstracts[o],
                faculty_id=self.faculty_ids[self.opportunity_faculty[o]],
                posted_term=self.term(self.first + int(self.opportunity_term[o])),
            )
            for o in range(config.n_opportunities)
        )
        enrollments = tuple(
            Enrollment(
                student_id=self.student_ids[s],
                course_id=self.course_ids[c],
                term=self.term(self.first + i),
                approved=ok,
            )
            for s, c, i, ok in self.enrollment_rows
        )
        applications = tuple(
            Application(
                student_id=self.student_ids[s],
                opportunity_id=self.opportunity_ids[o],
                term=self.term(self.first + i),
                accepted=bool(ok),
            )
            for (s, o, i), ok in zip(self.application_rows, accepted)
        )

        return Dataset(
            students=students,
            courses=courses,
            enrollments=enrollments,
            teaching=teaching,
            faculty=faculty,
            opportunities=opportunities,
            applications=applications,
            gpa_scale=self.gpa_scale,
        )


def generate(config: GenConfig) -> Dataset:
    if config.first_term > config.last_term:
        raise InfeasibleConfigException(f"terms_range {config.terms_range[0]}..{config.terms_range[1]} holds no term")
    if config.n_faculty < config.n_departments:
        raise InfeasibleConfigException("every department needs a faculty member: n_faculty < n_departments")
    if config.n_topics < config.n_departments:
        raise InfeasibleConfigException("every department needs a topic: n_topics < n_departments")

    return DatasetGenerator(config).run()


def describe_generative_model() -> str:
    lines = [
        "Synthetic academic records with planted application signal.",
        "",
        "Randomness: numpy PCG64 bit generators, one stream per stage, each seeded with",
        "SeedSequence([seed, stage]) for stages words, students, enrollments, teaching,",
        "opportunities, apply, choose and accept.",
        "",
        "Topics and text: topic t belongs to department t mod n_departments and owns",
        "vocab_per_topic words; n_noise_words further words belong to no topic. A course",
        "(topic c mod n_topics) or opportunity (its faculty member's topic) is a bag of",
        "words, dominant_topic_share of them from its topic and the rest uniform over",
        "every word.",
        "",
        "Students: admitted uniformly between admission_lead_terms before the first term",
        "and the last term, enrolled for max_study_terms terms, gpa from a normal clipped",
        "to the gpa scale, topic preferences from a symmetric Dirichlet. Each enrolled",
        "term they take courses_per_term courses weighted by preference (never one they",
        "already passed); a course is approved with probability",
        "sigmoid(logit(approval_rate) + (gpa - gpa_mean) / gpa_sd).",
        "",
        "Applications, stage one (does student s apply in term t):",
        "  P = sigmoid(logit(r_s) + delta + w_prior*prior + w_semesters*z(semesters)",
        "              + w_credits*z(credits) + w_gpa*z(gpa))",
        "  r_s = 1 - (1 - applicant_base_rate)^(1 / terms_enrolled_s); delta is found by",
        "  bisection so the share of students applying at least once matches",
        "  applicant_base_rate. History counts only terms before t.",
        "",
        "Applications, stage two (which opportunity among those posted in t):",
        "  P(o) proportional to exp(w_content*z(topic_overlap) + w_ht*had_teacher",
        "                           + w_dept*z(department_share))",
        "  with a second distinct pick with probability second_application_rate.",
        "  Each application is accepted with probability acceptance_rate.",
        "",
        "Configuration fields:",
    ]

    def describe(model: type, prefix: str = ""):
        for name, field in model.model_fields.items():
            if name == "signal_weights":
                lines.append(f"  {prefix}{name}: {field.description}")
                describe(SignalWeights, prefix=f"{name}.")
                continue
            default = field.get_default(call_default_factory=True)
            lines.append(f"  {prefix}{name} = {default!r}: {field.description}")

    describe(GenConfig)
    return "\n".join(lines) + "\n"

