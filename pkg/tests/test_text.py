import math

import numpy as np
import pytest

from research_recommender.components.domain.schemas import Term
from research_recommender.components.text.controller import (
    TextContext,
    build_vocabulary,
    cosine,
    load_stopwords,
    tfidf_vector,
    tokenize,
)
from research_recommender.components.text.schemas import SparseVector, Vocabulary
from research_recommender.core.exceptions import EmptyInputException


CUTOFF = Term(year=2014, half=1)


@pytest.mark.parametrize(
    "text, tokens",
    [
        ("Machine Learning, 2014!", ["machine", "learning", "2014"]),
        ("", []),
        ("Optimización-convexa", ["optimización", "convexa"]),
        ("snake_case words", ["snake", "case", "words"]),
    ],
)
def test_tokenize(text, tokens):
    assert tokenize(text) == tokens


@pytest.mark.parametrize("text", ["Deep  Learning: theory & practice", "Álgebra lineal, 2do semestre", ""])
def test_tokenize_is_idempotent(text):
    assert tokenize(" ".join(tokenize(text))) == tokenize(text)


def test_vocabulary_counts_documents_not_occurrences():
    vocabulary = build_vocabulary([["a", "a", "b"], ["a", "c"], ["a", "b"]], min_df=2)
    assert vocabulary.index == {"a": 0, "b": 1}
    assert vocabulary.document_frequency == (3, 2)
    assert vocabulary.n_documents == 3


def test_vocabulary_drops_stopwords():
    vocabulary = build_vocabulary([["the", "cell"], ["the", "cell"]], min_df=1, stopwords=frozenset({"the"}))
    assert list(vocabulary.index) == ["cell"]


def test_vocabulary_rejects_empty_corpus_and_bad_min_df():
    with pytest.raises(EmptyInputException):
        build_vocabulary([], min_df=1)
    with pytest.raises(ValueError):
        build_vocabulary([["a"]], min_df=0)


def test_tfidf_weights():
    vocabulary = Vocabulary(index={"a": 0, "b": 1}, document_frequency=(1, 2), n_documents=3)
    vector = tfidf_vector(["a", "a", "b", "unknown"], vocabulary)
    assert vector.indices == (0, 1)
    assert vector.weights[0] == pytest.approx(2 * (math.log(4 / 2) + 1))
    assert vector.weights[1] == pytest.approx(math.log(4 / 3) + 1)
    assert vector.weights[0] == pytest.approx(3.386, abs=1e-3)
    assert vector.weights[1] == pytest.approx(1.288, abs=1e-3)


def test_tfidf_idf_floor_and_out_of_vocabulary():
    vocabulary = Vocabulary(index={"a": 0}, document_frequency=(4,), n_documents=4)
    assert tfidf_vector(["a"], vocabulary).weights == (1.0,)
    assert tfidf_vector(["x", "y"], vocabulary) == SparseVector()


def test_cosine_examples():
    a = SparseVector(indices=(0, 1), weights=(1.0, 1.0))
    b = SparseVector(indices=(0, 2), weights=(1.0, 1.0))
    assert cosine(a, b) == pytest.approx(0.5)
    assert cosine(a, a) == pytest.approx(1.0, abs=1e-12)
    assert cosine(a, SparseVector(indices=(5,), weights=(3.0,))) == 0.0
    assert cosine(a, SparseVector()) == 0.0


def test_cosine_properties():
    rng = np.random.default_rng(3)
    for _ in range(100):
        vectors = []
        for _ in range(2):
            indices = np.sort(rng.choice(30, size=int(rng.integers(1, 10)), replace=False))
            weights = rng.uniform(0.1, 5.0, size=len(indices))
            vectors.append(SparseVector(indices=tuple(int(i) for i in indices), weights=tuple(float(w) for w in weights)))
        a, b = vectors
        assert cosine(a, b) == cosine(b, a)
        assert 0.0 <= cosine(a, b) <= 1.0 + 1e-12
        assert cosine(a.scaled(float(rng.uniform(0.01, 100.0))), b) == pytest.approx(cosine(a, b), abs=1e-12)


def test_sparse_vector_rejects_unsorted_or_zero_weights():
    with pytest.raises(ValueError):
        SparseVector(indices=(2, 1), weights=(1.0, 1.0))
    with pytest.raises(ValueError):
        SparseVector(indices=(1,), weights=(0.0,))


def test_context_fits_only_training_documents(tiny_dataset):
    ctx = TextContext.build(tiny_dataset, CUTOFF, min_df=2)
    # three course descriptions plus O1 and O2; O3 and O4 are posted at the cutoff
    assert ctx.vocabulary.n_documents == 5
    assert list(ctx.vocabulary.index) == ["algorithms", "cell", "genetics", "learning", "networks", "neural", "research"]
    assert ctx.vocabulary_frame()["df"].tolist() == [2, 2, 2, 2, 2, 2, 2]


def test_student_vector_concatenates_descriptions(tiny_dataset):
    ctx = TextContext.build(tiny_dataset, CUTOFF, min_df=2)
    vector = ctx.student_vector(["C1", "C2"])
    algorithms = ctx.vocabulary.index["algorithms"]
    position = vector.indices.index(algorithms)
    assert vector.weights[position] == pytest.approx(2 * ctx.vocabulary.idf(algorithms))


def test_similarities_match_cosine(tiny_dataset):
    ctx = TextContext.build(tiny_dataset, CUTOFF, min_df=2)
    student = ctx.student_vector(["C1"])
    sims = ctx.similarities(student, ["O1", "O2", "O3"])
    for value, opportunity_id in zip(sims, ["O1", "O2", "O3"]):
        assert value == pytest.approx(cosine(student, ctx.opportunity_vectors[opportunity_id]), abs=1e-12)
    assert sims[1] == 0.0


def test_load_stopwords(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("The\nand, of\n", encoding="utf-8")
    assert load_stopwords(path) == frozenset({"the", "and", "of"})
    assert load_stopwords(None) == frozenset()
