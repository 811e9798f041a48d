import math
import re
from collections import Counter
from pathlib import Path
from typing import Iterable

import numpy as np
import pandas as pd

from research_recommender.components.domain.schemas import Dataset, Term, term_before
from research_recommender.components.text.schemas import SparseVector, Vocabulary
from research_recommender.core.exceptions import EmptyInputException
from research_recommender.core.log import logger


# letters and digits; underscore is a separator too
TOKEN_PATTERN = re.compile(r"[^\W_]+")


def tokenize(text: str) -> list[str]:
    return TOKEN_PATTERN.findall(text.lower())


def build_vocabulary(
    documents: Iterable[list[str]], min_df: int = 2, stopwords: frozenset[str] = frozenset()
) -> Vocabulary:
    if min_df < 1:
        raise ValueError("min_df must be at least 1")

    document_frequency: Counter = Counter()
    n_documents = 0
    for tokens in documents:
        n_documents += 1
        document_frequency.update(set(tokens))

    if n_documents == 0:
        raise EmptyInputException("cannot build a vocabulary from an empty corpus")

    kept = sorted(term for term, df in document_frequency.items() if df >= min_df and term not in stopwords)

    return Vocabulary(
        index={term: i for i, term in enumerate(kept)},
        document_frequency=tuple(document_frequency[term] for term in kept),
        n_documents=n_documents,
    )


def tfidf_vector(tokens: list[str], vocabulary: Vocabulary) -> SparseVector:
    counts = Counter(vocabulary.index[token] for token in tokens if token in vocabulary.index)
    return SparseVector.from_pairs({i: count * vocabulary.idf(i) for i, count in counts.items()})


def cosine(a: SparseVector, b: SparseVector) -> float:
    norm_a, norm_b = a.norm, b.norm
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0

    _, ia, ib = np.intersect1d(
        np.asarray(a.indices, dtype=np.int64),
        np.asarray(b.indices, dtype=np.int64),
        assume_unique=True,
        return_indices=True,
    )
    wa, wb = np.asarray(a.weights), np.asarray(b.weights)
    dot = math.fsum(float(x) * float(y) for x, y in zip(wa[ia], wb[ib]))
    return dot / (norm_a * norm_b)


def load_stopwords(path: str | Path | None) -> frozenset[str]:
    if not path:
        return frozenset()
    return frozenset(token for line in Path(path).read_text(encoding="utf-8").splitlines() for token in tokenize(line))


class TextContext:
    """Frozen vocabulary plus precomputed vectors for courses and opportunities"""

    def __init__(self, vocabulary: Vocabulary, course_tokens: dict[str, list[str]], opportunity_tokens: dict[str, list[str]]):
        self.vocabulary = vocabulary
        self.course_tokens = course_tokens
        self.opportunity_vectors = {
            opportunity_id: tfidf_vector(tokens, vocabulary) for opportunity_id, tokens in opportunity_tokens.items()
        }

        self.opportunity_rows = {opportunity_id: row for row, opportunity_id in enumerate(self.opportunity_vectors)}
        self.opportunity_matrix = np.vstack(
            [self.unit_dense(vector) for vector in self.opportunity_vectors.values()]
            or [np.zeros(len(vocabulary))]
        )

    @classmethod
    def build(
        cls, dataset: Dataset, cutoff: Term, min_df: int = 2, stopwords: frozenset[str] = frozenset()
    ) -> "TextContext":
        """Fit the vocabulary on course descriptions and pre-cutoff opportunity abstracts only"""
        course_tokens = {course.course_id: tokenize(course.description) for course in dataset.courses}
        opportunity_tokens = {o.opportunity_id: tokenize(o.abstract_text) for o in dataset.opportunities}

        training_documents = list(course_tokens.values()) + [
            opportunity_tokens[o.opportunity_id] for o in dataset.opportunities if term_before(o.posted_term, cutoff)
        ]
        vocabulary = build_vocabulary(training_documents, min_df=min_df, stopwords=stopwords)

        logger.info(
            f"Fitted vocabulary of {len(vocabulary)} terms on {vocabulary.n_documents} documents before {cutoff}"
        )
        return cls(vocabulary, course_tokens, opportunity_tokens)

    def unit_dense(self, vector: SparseVector) -> np.ndarray:
        dense = np.zeros(len(self.vocabulary))
        norm = vector.norm
        if norm > 0.0:
            dense[list(vector.indices)] = np.asarray(vector.weights) / norm
        return dense

    def student_vector(self, approved_course_ids: Iterable[str]) -> SparseVector:
        """One vector for the concatenation of every approved course description"""
        tokens = [token for course_id in approved_course_ids for token in self.course_tokens[course_id]]
        return tfidf_vector(tokens, self.vocabulary)

    def similarities(self, student_vector: SparseVector, opportunity_ids: list[str]) -> np.ndarray:
        rows = [self.opportunity_rows[opportunity_id] for opportunity_id in opportunity_ids]
        return self.opportunity_matrix[rows] @ self.unit_dense(student_vector)

    def vocabulary_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"term": term, "index": index, "df": self.vocabulary.document_frequency[index]}
                for term, index in sorted(self.vocabulary.index.items(), key=lambda item: item[1])
            ],
            columns=["term", "index", "df"],
        )
